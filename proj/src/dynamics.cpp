#include "isospectra/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "isospectra/detail/zero_systems.hpp"
#include "isospectra/kernels.hpp"

namespace isospectra {

namespace {

using kernels::I;

template <class S>
std::vector<S> rhs_dispatch(const FamilySpec& s, const std::vector<S>& st, std::vector<double>* scale) {
    switch (s.family) {
        case Family::GHyp: return detail::ghyp_rhs(st, elementary_coeffs_hyp(s.alphas, s.betas), scale);
        case Family::GBasicHyp:
            return detail::gbasic_rhs(st, detail::basic_weights(s.alphas, s.betas, *s.q, s.N), scale);
        case Family::Wilson: return detail::wilson_rhs(st, s.alphas, scale);
        case Family::Racah: return detail::racah_rhs(st, s.alphas, scale);
        case Family::AskeyWilson: return detail::aw_rhs(st, s.alphas, *s.q, scale);
        case Family::QRacah: return detail::qracah_rhs(st, s.alphas, *s.q, scale);
        case Family::Jacobi: break;
    }
    throw InvalidParameters("no zero dynamics for " + family_name(s.family) + " (use the ghyp form)");
}

void check_state(const FamilySpec& s, const CVec& st) {
    if (int(st.size()) != s.N)
        throw CardinalityMismatch("expected " + std::to_string(s.N) + " components, got " + std::to_string(st.size()));
    for (const auto& v : st)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DegenerateInput("non-finite state component");
    const bool even = s.family == Family::Wilson || s.family == Family::Racah;
    for (std::size_t n = 0; n < st.size(); ++n) {
        if (even && std::abs(st[n]) < 1e-6)
            throw DivideByZeroVariable("component " + std::to_string(n) + " too close to 0");
        for (std::size_t m = n + 1; m < st.size(); ++m) {
            if (std::abs(st[n] - st[m]) < 1e-9 || (even && std::abs(st[n] + st[m]) < 1e-9))
                throw Collision("components " + std::to_string(n) + " and " + std::to_string(m) + " collide");
        }
    }
}

bool is_even_family(Family f) { return f == Family::Wilson || f == Family::Racah; }

/// Greedy closest-pair assignment of `cand` to `prev`; with `sign_free` each
/// candidate may be used as c or -c.  Result is ordered like prev.
CVec align(const CVec& prev, const CVec& cand, bool sign_free) {
    const std::size_t N = prev.size();
    CVec out(N);
    std::vector<bool> up(N, false), uc(N, false);
    for (std::size_t step = 0; step < N; ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        cplx bv = 0;
        for (std::size_t i = 0; i < N; ++i) {
            if (up[i]) continue;
            for (std::size_t j = 0; j < N; ++j) {
                if (uc[j]) continue;
                for (double sg : {1.0, -1.0}) {
                    if (sg < 0 && !sign_free) continue;
                    double d = std::abs(prev[i] - sg * cand[j]);
                    if (d < best) {
                        best = d;
                        bi = i;
                        bj = j;
                        bv = sg * cand[j];
                    }
                }
            }
        }
        up[bi] = uc[bj] = true;
        out[bi] = bv;
    }
    return out;
}

CVec natural_from_state(const FamilySpec& s, const CVec& st) {
    CVec z(st);
    if (s.family == Family::Wilson)
        for (auto& v : z) v = v * v;
    else if (s.family == Family::Racah) {
        const cplx th = racah_theta(s);
        for (auto& v : z) v = v * v - th * th;
    }
    return z;
}

CVec state_from_natural(const FamilySpec& s, const CVec& z, const CVec& prev) {
    CVec st(z);
    if (s.family == Family::Wilson)
        for (auto& v : st) v = std::sqrt(v);
    else if (s.family == Family::Racah) {
        const cplx th = racah_theta(s);
        for (auto& v : st) v = std::sqrt(v + th * th);
    }
    return prev.empty() ? st : align(prev, st, is_even_family(s.family));
}

bool monomial_basis(Family f) { return f == Family::GHyp || f == Family::GBasicHyp; }

/// Precomputed pieces of the algebraic solution for one initial condition.
/// Basis expansion and root refinement run in extended precision: the
/// q-family bases have large coefficients and the elimination cancels.
struct Oracle {
    using WVec = std::vector<wcplx>;
    FamilySpec s;
    CSystem cs;
    std::vector<WVec> basis;  // basis[k] has degree k, monic
    WVec c0;                  // c_1..c_N
    CVec state0;

    Oracle(const FamilySpec& spec, const CVec& z0) : s(spec), cs(c_system(spec)), state0(z0) {
        const int N = s.N;
        WVec T{wcplx(1)};
        for (const auto& r : natural_from_state(s, state0)) {
            WVec next(T.size() + 1, wcplx(0));
            for (std::size_t i = 0; i < T.size(); ++i) {
                next[i + 1] += T[i];
                next[i] -= widen(r) * T[i];
            }
            T = next;
        }
        c0.assign(N, wcplx(0));
        if (monomial_basis(s.family)) {
            for (int m = 1; m <= N; ++m) c0[m - 1] = T[N - m];
            return;
        }
        for (int k = 0; k <= N; ++k) basis.push_back(basis_element(s, k));
        // Leading-term elimination: T = B_N + sum_m c_m B_{N-m}.
        WVec R = T;
        for (int i = 0; i <= N; ++i) R[i] -= basis[N][i];
        for (int m = 1; m <= N; ++m) {
            const int k = N - m;
            const wcplx c = R[k];
            c0[m - 1] = c;
            for (int i = 0; i <= k; ++i) R[i] -= c * basis[k][i];
        }
    }

    /// Basis polynomial of degree k in the natural variable, monic.
    static WVec basis_element(const FamilySpec& s, int k) {
        WVec p = build_polynomial_wide(s, k);
        p.resize(k + 1, wcplx(0));
        double mx = 0;
        for (const auto& c : p) mx = std::max(mx, std::abs(narrow(c)));
        const wcplx lead = p.back();
        if (!(std::abs(narrow(lead)) >= 1e-12 * mx))
            throw BasisIllConditioned("basis polynomial of degree " + std::to_string(k) + " has a tiny leading term");
        for (auto& c : p) c /= lead;
        return p;
    }

    WVec coefficients_at(double t) const {
        if (monomial_basis(s.family)) {
            CVec c0d;
            for (const auto& c : c0) c0d.push_back(narrow(c));
            const CVec c = solve_c(cs, c0d, t);
            WVec out;
            for (const auto& v : c) out.push_back(widen(v));
            return out;
        }
        WVec out(c0);
        for (std::size_t m = 0; m < out.size(); ++m)
            out[m] *= widen(std::exp(cs.time_factor * cs.A(Eigen::Index(m), Eigen::Index(m)) * t));
        return out;
    }

    WVec assemble(const WVec& c) const {
        const int N = s.N;
        WVec p(N + 1, wcplx(0));
        if (monomial_basis(s.family)) {
            p[N] = wcplx(1);
            for (int m = 1; m <= N; ++m) p[N - m] = c[m - 1];
        } else {
            p = basis[N];
            for (int m = 1; m <= N; ++m)
                for (int i = 0; i <= N - m; ++i) p[i] += c[m - 1] * basis[N - m][i];
        }
        return p;
    }

    CVec at(double t, const CVec& prev) const {
        if (t == 0.0) return prev.empty() ? state0 : align(prev, state0, false);
        const WVec p = assemble(coefficients_at(t));
        Polynomial pd;
        for (const auto& c : p) pd.coeffs.push_back(narrow(c));
        CVec z = poly_roots(pd).zeros;
        for (auto& v : z) v = polish_zero(p, v);
        return state_from_natural(s, z, prev);
    }
};

CVec axpy(const CVec& x, cplx a, const CVec& y) {
    CVec out(x);
    for (std::size_t i = 0; i < x.size(); ++i) out[i] += a * y[i];
    return out;
}

CVec rk4_linear(const CMat& G, const CVec& g, const CVec& c0, double t) {
    const int steps = std::max(1, int(std::ceil(std::abs(t) / 1e-4)));
    const double h = t / steps;
    Eigen::VectorXcd c = Eigen::Map<const Eigen::VectorXcd>(c0.data(), c0.size());
    const Eigen::VectorXcd gv = Eigen::Map<const Eigen::VectorXcd>(g.data(), g.size());
    auto f = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd { return G * v + gv; };
    for (int k = 0; k < steps; ++k) {
        Eigen::VectorXcd k1 = f(c), k2 = f(c + 0.5 * h * k1), k3 = f(c + 0.5 * h * k2), k4 = f(c + h * k3);
        c += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return CVec(c.data(), c.data() + c.size());
}

}  // namespace

CSystem c_system(const FamilySpec& s) {
    validate(s);
    const int N = s.N;
    CSystem cs;
    cs.A = CMat::Zero(N, N);
    cs.h.assign(N, 0.0);
    const auto& a = s.alphas;
    switch (s.family) {
        case Family::GHyp:
            // Image of z^{N-m} under the operator: m prod(beta_k - 1 + m) z^{N-m}
            // + (N - m) prod(alpha_j + m) z^{N-m-1}.
            for (int m = 1; m <= N; ++m) {
                cplx d = double(m), sub = double(N + 1 - m);
                for (const auto& b : s.betas) d *= b - 1.0 + double(m);
                for (const auto& al : a) sub *= al + double(m - 1);
                cs.A(m - 1, m - 1) = d;
                if (m > 1) cs.A(m - 1, m - 2) = sub;
                else cs.h[0] = sub;
            }
            break;
        case Family::GBasicHyp: {
            const cplx q = *s.q;
            const int sr = int(s.betas.size()) - int(a.size());
            for (int m = 1; m <= N; ++m) {
                cplx d = -std::pow(q, sr * (N - m)) * (std::pow(q, -m) - 1.0);
                for (const auto& al : a) d *= al * std::pow(q, N - m) - 1.0;
                cplx sub = std::pow(q, N - m + 1) - 1.0;
                for (const auto& b : s.betas) sub *= b * std::pow(q, N - m) - 1.0;
                cs.A(m - 1, m - 1) = d;
                if (m > 1) cs.A(m - 1, m - 2) = sub;
                else cs.h[0] = sub;
            }
            break;
        }
        case Family::Wilson:
            cs.time_factor = I;
            for (int m = 1; m <= N; ++m)
                cs.A(m - 1, m - 1) = double(m) * (2.0 * N - m + a[0] + a[1] + a[2] + a[3] - 1.0);
            break;
        case Family::Racah:
            cs.time_factor = I;
            for (int m = 1; m <= N; ++m) cs.A(m - 1, m - 1) = double(m) * (double(m) - 2.0 * N - a[0] - a[1] - 1.0);
            break;
        case Family::AskeyWilson: {
            const cplx q = *s.q;
            for (int m = 1; m <= N; ++m)
                cs.A(m - 1, m - 1) = std::pow(q, -N) * (1.0 - std::pow(q, m)) *
                                     (1.0 - a[0] * a[1] * a[2] * a[3] * std::pow(q, 2 * N - 1 - m));
            break;
        }
        case Family::QRacah: {
            const cplx q = *s.q;
            for (int m = 1; m <= N; ++m)
                cs.A(m - 1, m - 1) =
                    std::pow(q, -N) * (1.0 - std::pow(q, m)) * (1.0 - a[0] * a[1] * std::pow(q, 2 * N - m + 1));
            break;
        }
        case Family::Jacobi: throw InvalidParameters("no coefficient system for jacobi (use the ghyp form)");
    }
    return cs;
}

double max_rate(const FamilySpec& spec) {
    const CSystem cs = c_system(spec);
    double r = 0;
    for (Eigen::Index m = 0; m < cs.A.rows(); ++m) r = std::max(r, std::abs(cs.time_factor * cs.A(m, m)));
    return r;
}

CVec solve_c(const CSystem& cs, const CVec& c0, double t) {
    const int N = int(cs.A.rows());
    if (int(c0.size()) != N || int(cs.h.size()) != N) throw CardinalityMismatch("solve_c: size mismatch");
    if (!std::isfinite(t)) throw InvalidParameters("solve_c: non-finite time");
    const CMat G = cs.time_factor * cs.A;
    CVec g(N);
    bool has_h = false;
    for (int i = 0; i < N; ++i) {
        g[i] = cs.time_factor * cs.h[i];
        has_h = has_h || g[i] != 0.0;
    }
    bool diagonal = !has_h;
    for (int i = 0; i < N && diagonal; ++i)
        for (int j = 0; j < i; ++j)
            if (G(i, j) != 0.0) diagonal = false;
    if (diagonal) {
        CVec c(N);
        for (int i = 0; i < N; ++i) c[i] = c0[i] * std::exp(G(i, i) * t);
        return c;
    }
    double scale = 1, sep = std::numeric_limits<double>::infinity();
    for (int i = 0; i < N; ++i) {
        scale = std::max(scale, std::abs(G(i, i)));
        for (int j = 0; j < i; ++j) sep = std::min(sep, std::abs(G(i, i) - G(j, j)));
    }
    CVec cp(N, 0.0);
    if (has_h) {
        for (int i = 0; i < N; ++i)
            if (std::abs(G(i, i)) < 1e-14 * scale) throw SingularA("solve_c: singular coefficient matrix with h != 0");
        Eigen::VectorXcd rhs = -Eigen::Map<const Eigen::VectorXcd>(g.data(), N);
        Eigen::VectorXcd x = G.triangularView<Eigen::Lower>().solve(rhs);
        cp.assign(x.data(), x.data() + N);
    }
    if (!(sep > 1e-8 * scale)) return rk4_linear(G, g, c0, t);
    // Eigenvectors of the lower-triangular G: v_k has unit k-th entry and zeros above.
    CMat V = CMat::Zero(N, N);
    for (int k = 0; k < N; ++k) {
        V(k, k) = 1.0;
        for (int i = k + 1; i < N; ++i) {
            cplx acc = 0;
            for (int j = k; j < i; ++j) acc += G(i, j) * V(j, k);
            V(i, k) = -acc / (G(i, i) - G(k, k));
        }
    }
    Eigen::VectorXcd d(N);
    for (int i = 0; i < N; ++i) d[i] = c0[i] - cp[i];
    Eigen::VectorXcd amp = V.triangularView<Eigen::UnitLower>().solve(d);
    for (int k = 0; k < N; ++k) amp[k] *= std::exp(G(k, k) * t);
    Eigen::VectorXcd c = V * amp;
    CVec out(N);
    for (int i = 0; i < N; ++i) out[i] = cp[i] + c[i];
    return out;
}

CVec state_from_zeros(const FamilySpec& s, const ZeroSet& zs) {
    if (s.family == Family::Wilson || s.family == Family::Racah) return lift_zero_variables(s, zs).primary;
    return zs.zeros;
}

CVec nonlinear_rhs(const FamilySpec& s, const CVec& st) {
    check_state(s, st);
    return rhs_dispatch(s, st, nullptr);
}

CMat rhs_jacobian(const FamilySpec& s, const CVec& st) {
    check_state(s, st);
    using D = Dual<cplx>;
    const int N = int(st.size());
    CMat J(N, N);
    std::vector<D> x(N);
    for (int m = 0; m < N; ++m) {
        for (int l = 0; l < N; ++l) x[l] = D(st[l], l == m ? cplx(1) : cplx(0));
        const auto f = rhs_dispatch(s, x, nullptr);
        for (int n = 0; n < N; ++n) J(n, m) = f[n].d;
    }
    return J;
}

CMat rhs_jacobian_fd(const FamilySpec& s, const CVec& st, double h) {
    const int N = int(st.size());
    CMat J(N, N);
    for (int m = 0; m < N; ++m) {
        const double hm = h * std::max(1.0, std::abs(st[m]));
        CVec p(st), q(st);
        p[m] += hm;
        q[m] -= hm;
        const CVec fp = nonlinear_rhs(s, p), fq = nonlinear_rhs(s, q);
        for (int n = 0; n < N; ++n) J(n, m) = (fp[n] - fq[n]) / (2.0 * hm);
    }
    return J;
}

CVec equilibrium_components(const FamilySpec& s, const ZeroSet& zs) {
    validate(s);
    const CVec st = state_from_zeros(s, zs);
    check_state(s, st);
    std::vector<double> scale;
    CVec r = rhs_dispatch(s, st, &scale);
    for (std::size_t n = 0; n < r.size(); ++n)
        if (scale[n] > 0) r[n] /= scale[n];
    return r;
}

double equilibrium_residual(const FamilySpec& s, const ZeroSet& zs) {
    double m = 0;
    for (const auto& v : equilibrium_components(s, zs)) m = std::max(m, std::abs(v));
    return m;
}

TrajectoryRecord integrate(const FamilySpec& s, const CVec& z0, double t1, int steps, int record_every) {
    validate(s);
    if (steps < 1) throw InvalidParameters("integrate: steps must be >= 1");
    if (!std::isfinite(t1)) throw InvalidParameters("integrate: non-finite t1");
    record_every = std::max(1, record_every);
    check_state(s, z0);
    TrajectoryRecord rec;
    const double h = t1 / steps;
    CVec z = z0;
    rec.times.push_back(0.0);
    rec.ode_zeros.push_back(z);
    for (int k = 1; k <= steps; ++k) {
        const CVec k1 = nonlinear_rhs(s, z);
        const CVec k2 = nonlinear_rhs(s, axpy(z, 0.5 * h, k1));
        const CVec k3 = nonlinear_rhs(s, axpy(z, 0.5 * h, k2));
        const CVec k4 = nonlinear_rhs(s, axpy(z, h, k3));
        for (std::size_t n = 0; n < z.size(); ++n) z[n] += h / 6.0 * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
        check_state(s, z);
        if (k % record_every == 0 || k == steps) {
            rec.times.push_back(k * h);
            rec.ode_zeros.push_back(z);
        }
    }
    return rec;
}

CVec algebraic_solution(const FamilySpec& s, const CVec& z0, double t, const CVec& previous) {
    validate(s);
    check_state(s, z0);
    const Oracle o(s, z0);
    return o.at(t, previous.empty() ? z0 : previous);
}

TrajectoryRecord evolve(const FamilySpec& s, const CVec& z0, double t1, int steps, int samples) {
    const int every = std::max(1, steps / std::max(1, samples));
    TrajectoryRecord rec = integrate(s, z0, t1, steps, every);
    const Oracle o(s, z0);
    const double h = t1 / steps;
    CVec prev = z0;
    std::size_t next = 0;
    // The oracle follows every step so the continuity matching stays unambiguous.
    for (int k = 0; k <= steps && next < rec.times.size(); ++k) {
        const double t = k * h;
        prev = o.at(t, prev);
        if (std::abs(t - rec.times[next]) <= 1e-12 * std::max(1.0, std::abs(t1))) {
            rec.oracle_zeros.push_back(prev);
            const double d = multiset_match(rec.ode_zeros[next], prev);
            rec.deviation.push_back(d);
            rec.max_deviation = std::max(rec.max_deviation, d);
            ++next;
        }
    }
    return rec;
}

}  // namespace isospectra
