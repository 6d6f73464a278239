#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace isospectra {

// Base of every library error.  exit_code() is the CLI status the error maps to:
// 2 invalid input, 3 degenerate zeros, 4 numerical non-convergence.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const { return 2; }
    virtual const char* kind() const { return "Error"; }
};

#define ISOSPECTRA_ERROR(Name, Code)                                   \
    class Name : public Error {                                        \
    public:                                                            \
        explicit Name(const std::string& what) : Error(what) {}        \
        int exit_code() const override { return Code; }                \
        const char* kind() const override { return #Name; }            \
    };

ISOSPECTRA_ERROR(NonConvergence, 4)
ISOSPECTRA_ERROR(BasisIllConditioned, 4)
ISOSPECTRA_ERROR(DegenerateInput, 2)
ISOSPECTRA_ERROR(CardinalityMismatch, 2)
ISOSPECTRA_ERROR(InvalidParameters, 2)
ISOSPECTRA_ERROR(SingularSample, 2)
ISOSPECTRA_ERROR(SingularA, 2)
ISOSPECTRA_ERROR(RepeatedZeros, 3)
ISOSPECTRA_ERROR(BranchPoint, 3)
ISOSPECTRA_ERROR(SingularDenominator, 3)
ISOSPECTRA_ERROR(Collision, 3)
ISOSPECTRA_ERROR(DivideByZeroVariable, 3)

#undef ISOSPECTRA_ERROR

/// Short form of a number for error messages.
inline std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace isospectra
