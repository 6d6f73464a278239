#pragma once

#include <random>

#include "doctest.h"
#include "isospectra/numeric_core.hpp"
#include "isospectra/report.hpp"

namespace testutil {

using isospectra::cplx;
using isospectra::CVec;

inline double uniform(std::mt19937_64& rng, double a, double b) { return a + (b - a) * isospectra::unit_uniform(rng); }

inline cplx random_point(std::mt19937_64& rng, double rmin, double rmax) {
    const double r = uniform(rng, rmin, rmax);
    return std::polar(r, uniform(rng, 0.0, 6.283185307179586));
}

inline void check_coeffs(const CVec& got, const CVec& want, double tol = 1e-12) {
    REQUIRE(got.size() == want.size());
    for (std::size_t k = 0; k < want.size(); ++k) {
        INFO("coefficient " << k);
        CHECK(std::abs(got[k] - want[k]) <= tol);
    }
}

}  // namespace testutil
