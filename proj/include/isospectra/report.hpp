#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "json.hpp"

#include "isospectra/families.hpp"
#include "isospectra/numeric_core.hpp"

namespace isospectra {

using json = nlohmann::json;

struct Tolerances {
    double spectral = 1e-6;
    double trace = 1e-8;
    double det = 1e-8;
    double identity = 1e-8;  // identity, equilibrium and defining-equation residuals
    double deviation = 1e-6; // evolve: ODE vs algebraic solution
};

/// A report plus the process status it implies (0 pass, 1 verification failure).
struct CommandResult {
    json report;
    int exit_code = 0;
};

json to_json(cplx z);
json to_json(const CVec& v);
json to_json(const CMat& M);
json spec_to_json(const FamilySpec& spec);

/// {"family", "N", "alphas": [[re,im]...], "betas", "q": [re,im] | null}.
/// Real numbers are accepted wherever [re,im] is.  Throws InvalidParameters.
FamilySpec spec_from_json(const json& j);

CommandResult cmd_zeros(const FamilySpec& spec);
CommandResult cmd_matrix(const FamilySpec& spec, const Tolerances& tol = {});
CommandResult cmd_verify(const FamilySpec& spec, const Tolerances& tol = {});

struct EvolveOptions {
    double t1 = 0.5;
    int steps = 2000;
    double perturb = 1e-3;  // each component moves by perturb * (u + i v), u, v uniform in [-1, 1]
    std::uint64_t seed = 1;
    int samples = 20;
};
CommandResult cmd_evolve(const FamilySpec& spec, const EvolveOptions& opts = {}, const Tolerances& tol = {});

struct SweepOptions {
    Family family = Family::GHyp;
    int draws = 20;
    std::uint64_t seed = 1;
    int nmax = 8;
};
/// Runs cmd_verify on `draws` safe-box specs.  GHyp cycles through (p,q) = (1,1),
/// (2,1), (2,2), (3,2) and GBasicHyp through (r,s) = (1,1), (2,1), (2,2) by draw index;
/// N cycles through 2..nmax.
CommandResult cmd_sweep(const SweepOptions& opts, const Tolerances& tol = {});

/// Uniform in [0, 1) from the top 53 bits; independent of the standard library's distributions.
double unit_uniform(std::mt19937_64& rng);

/// Safe-box draw: alpha-type in [0.5, 3], beta-type in [1.5, 4], q in [1.3, 2.5].
FamilySpec random_spec(Family family, int n_alphas, int n_betas, int N, std::mt19937_64& rng);

/// Ten sample points for defining-equation checks, fixed by `seed`.
CVec sample_points(std::uint64_t seed);

/// {"error": {"kind", "message"}} for a failed command.
json error_report(const std::string& kind, const std::string& message);

/// Serialized form written to stdout.
std::string dump(const json& j);

}  // namespace isospectra
