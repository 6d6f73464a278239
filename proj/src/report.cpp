#include "isospectra/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "isospectra/dynamics.hpp"
#include "isospectra/errors.hpp"
#include "isospectra/iso_matrices.hpp"

namespace isospectra {

namespace {

cplx parse_complex(const json& j, const std::string& what) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw InvalidParameters(what + ": expected a number or [re, im]");
}

CVec parse_list(const json& j, const std::string& what) {
    CVec out;
    if (j.is_null()) return out;
    if (!j.is_array()) throw InvalidParameters(what + ": expected a list");
    for (const auto& v : j) out.push_back(parse_complex(v, what));
    return out;
}

double max_abs(const CVec& v) {
    double m = 0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

bool has_dynamics(Family f) { return f != Family::Jacobi; }

json residual_or_null(double r) { return r < 0 ? json(nullptr) : json(r); }

double defining_eq_max(const FamilySpec& spec) {
    double worst = 0;
    for (const auto& x : sample_points(0x5eed)) {
        try {
            worst = std::max(worst, std::abs(defining_equation_residual(spec, x)));
        } catch (const SingularSample&) {
        }
    }
    return worst;
}

}  // namespace

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const CVec& v) {
    json out = json::array();
    for (const auto& z : v) out.push_back(to_json(z));
    return out;
}

json to_json(const CMat& M) {
    json out = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < M.cols(); ++k) row.push_back(to_json(cplx(M(i, k))));
        out.push_back(row);
    }
    return out;
}

json spec_to_json(const FamilySpec& spec) {
    json j;
    j["family"] = family_name(spec.family);
    j["N"] = spec.N;
    j["alphas"] = to_json(spec.alphas);
    j["betas"] = to_json(spec.betas);
    j["q"] = spec.q ? to_json(*spec.q) : json(nullptr);
    return j;
}

FamilySpec spec_from_json(const json& j) {
    if (!j.is_object()) throw InvalidParameters("spec must be a JSON object");
    FamilySpec s;
    if (!j.contains("family") || !j["family"].is_string()) throw InvalidParameters("spec: missing \"family\"");
    s.family = parse_family(j["family"].get<std::string>());
    if (!j.contains("N") || !j["N"].is_number_integer()) throw InvalidParameters("spec: missing integer \"N\"");
    s.N = j["N"].get<int>();
    if (j.contains("alphas")) s.alphas = parse_list(j["alphas"], "alphas");
    if (j.contains("betas")) s.betas = parse_list(j["betas"], "betas");
    if (j.contains("q") && !j["q"].is_null()) s.q = parse_complex(j["q"], "q");
    return s;
}

CommandResult cmd_zeros(const FamilySpec& spec) {
    const ZeroSet zs = compute_zeros(spec);
    CommandResult r;
    r.report["spec"] = spec_to_json(spec);
    r.report["zeros"] = to_json(zs.zeros);
    r.report["pass"] = true;
    return r;
}

CommandResult cmd_matrix(const FamilySpec& spec, const Tolerances& tol) {
    const ZeroSet zs = compute_zeros(spec);
    IsospectralMatrix m = build_matrix(spec, zs);
    check_matrix(m, {tol.spectral, tol.trace, tol.det});
    CommandResult r;
    r.report["spec"] = spec_to_json(spec);
    r.report["zeros"] = to_json(zs.zeros);
    r.report["matrix"] = to_json(m.L);
    r.report["computed_spectrum"] = to_json(m.computed.values);
    r.report["reference_spectrum"] = to_json(m.reference.values);
    r.report["residuals"] = {{"spectral", m.spectral_residual}, {"trace", m.trace_residual}, {"det", m.det_residual}};
    r.report["pass"] = m.pass;
    r.exit_code = m.pass ? 0 : 1;
    return r;
}

CommandResult cmd_verify(const FamilySpec& spec, const Tolerances& tol) {
    CommandResult r = cmd_matrix(spec, tol);
    const ZeroSet zs = compute_zeros(spec);
    const double identity = max_abs(identity_residual(spec, zs));
    const double equilibrium = has_dynamics(spec.family) ? equilibrium_residual(spec, zs) : -1.0;
    const double deq = defining_eq_max(spec);
    auto& res = r.report["residuals"];
    res["identity"] = identity;
    res["equilibrium"] = residual_or_null(equilibrium);
    res["defining_eq"] = deq;
    const bool pass = r.report["pass"].get<bool>() && identity <= tol.identity && equilibrium <= tol.identity &&
                      deq <= tol.identity;
    r.report["pass"] = pass;
    r.exit_code = pass ? 0 : 1;
    return r;
}

CommandResult cmd_evolve(const FamilySpec& spec, const EvolveOptions& opts, const Tolerances& tol) {
    if (opts.steps < 1) throw InvalidParameters("steps must be positive");
    if (!std::isfinite(opts.t1) || !std::isfinite(opts.perturb)) throw InvalidParameters("t1 and perturb must be finite");
    const ZeroSet zs = compute_zeros(spec);
    CVec z0 = state_from_zeros(spec, zs);
    std::mt19937_64 rng(opts.seed);
    for (auto& z : z0) {
        const double u = 2 * unit_uniform(rng) - 1, v = 2 * unit_uniform(rng) - 1;
        z += opts.perturb * cplx(u, v);
    }
    const TrajectoryRecord rec = evolve(spec, z0, opts.t1, opts.steps, opts.samples);
    CommandResult r;
    r.report["spec"] = spec_to_json(spec);
    r.report["t1"] = opts.t1;
    r.report["steps"] = opts.steps;
    r.report["perturb"] = opts.perturb;
    r.report["times"] = rec.times;
    json ode = json::array(), orc = json::array();
    for (const auto& v : rec.ode_zeros) ode.push_back(to_json(v));
    for (const auto& v : rec.oracle_zeros) orc.push_back(to_json(v));
    r.report["ode_zeros"] = ode;
    r.report["oracle_zeros"] = orc;
    r.report["deviation"] = rec.deviation;
    r.report["max_deviation"] = rec.max_deviation;
    const bool pass = rec.max_deviation <= tol.deviation;
    r.report["pass"] = pass;
    r.exit_code = pass ? 0 : 1;
    return r;
}

double unit_uniform(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

FamilySpec random_spec(Family family, int n_alphas, int n_betas, int N, std::mt19937_64& rng) {
    FamilySpec s;
    s.family = family;
    s.N = N;
    for (int i = 0; i < n_alphas; ++i) s.alphas.push_back(0.5 + 2.5 * unit_uniform(rng));
    for (int i = 0; i < n_betas; ++i) s.betas.push_back(1.5 + 2.5 * unit_uniform(rng));
    if (is_q_family(family)) s.q = 1.3 + 1.2 * unit_uniform(rng);
    return s;
}

CVec sample_points(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CVec out;
    for (int k = 0; k < 10; ++k) {
        const double r = 0.3 + 1.7 * unit_uniform(rng);
        const double th = 2 * M_PI * unit_uniform(rng);
        out.push_back(std::polar(r, th));
    }
    return out;
}

CommandResult cmd_sweep(const SweepOptions& opts, const Tolerances& tol) {
    if (opts.draws < 0) throw InvalidParameters("draws must be non-negative");
    if (opts.nmax < 1) throw InvalidParameters("nmax must be at least 1");
    std::vector<std::pair<int, int>> shapes;
    switch (opts.family) {
        case Family::GHyp: shapes = {{1, 1}, {2, 1}, {2, 2}, {3, 2}}; break;
        case Family::GBasicHyp: shapes = {{1, 1}, {2, 1}, {2, 2}}; break;
        case Family::Jacobi: shapes = {{2, 0}}; break;
        default: shapes = {{4, 0}}; break;
    }
    std::mt19937_64 rng(opts.seed);
    const int nmin = std::min(2, opts.nmax);
    int passed = 0;
    json draws = json::array();
    json worst = json::object();
    for (int d = 0; d < opts.draws; ++d) {
        const auto [na, nb] = shapes[d % shapes.size()];
        const int N = nmin + d % (opts.nmax - nmin + 1);
        const FamilySpec s = random_spec(opts.family, na, nb, N, rng);
        json entry = {{"index", d}, {"spec", spec_to_json(s)}};
        try {
            const CommandResult r = cmd_verify(s, tol);
            const auto& res = r.report["residuals"];
            for (const auto& [k, v] : res.items())
                if (v.is_number())
                    worst[k] = worst.contains(k) ? std::max(worst[k].get<double>(), v.get<double>()) : v.get<double>();
            entry["residuals"] = res;
            entry["pass"] = r.report["pass"];
            if (r.exit_code == 0) ++passed;
        } catch (const Error& e) {
            entry["error"] = {{"kind", e.kind()}, {"message", e.what()}};
            entry["pass"] = false;
        }
        draws.push_back(entry);
    }
    CommandResult r;
    r.report["family"] = family_name(opts.family);
    r.report["draws"] = opts.draws;
    r.report["seed"] = opts.seed;
    r.report["nmax"] = opts.nmax;
    r.report["passed"] = passed;
    r.report["failed"] = opts.draws - passed;
    r.report["worst"] = worst;
    r.report["results"] = draws;
    r.report["pass"] = passed == opts.draws;
    r.exit_code = passed == opts.draws ? 0 : 1;
    return r;
}

json error_report(const std::string& kind, const std::string& message) {
    return {{"error", {{"kind", kind}, {"message", message}}}, {"pass", false}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace isospectra
