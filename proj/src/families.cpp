#include "isospectra/families.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "isospectra/kernels.hpp"

namespace isospectra {

namespace {

using WVec = std::vector<wcplx>;

bool finite(const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// True when v lies within tol of one of 0, -1, ..., -(n-1).
bool hits_nonpositive_integer(cplx v, int n, double tol) {
    for (int j = 0; j < n; ++j)
        if (std::abs(v + double(j)) < tol) return true;
    return false;
}

// True when some factor 1 - g q^j, j in [j0, j1), vanishes within tol.
bool q_factor_vanishes(cplx g, cplx q, int j0, int j1, double tol) {
    cplx gq = g * std::pow(q, j0);
    for (int j = j0; j < j1; ++j, gq *= q)
        if (std::abs(1.0 - gq) < tol) return true;
    return false;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw InvalidParameters(msg);
}

void check_den(const wcplx& d, const std::string& what) {
    if (std::abs(narrow(d)) < 1e-13) throw InvalidParameters("vanishing denominator in " + what);
}

WVec widen_all(const CVec& v) {
    WVec out;
    for (const auto& x : v) out.push_back(widen(x));
    return out;
}

void accumulate(WVec& acc, const WVec& p, const wcplx& t) {
    if (acc.size() < p.size()) acc.resize(p.size(), wcplx(0));
    for (std::size_t i = 0; i < p.size(); ++i) acc[i] += t * p[i];
}

WVec build_ghyp(const CVec& alphas, const CVec& betas, int k) {
    WVec c(k + 1, wcplx(0));
    wcplx t(1);
    c[k] = t;
    for (int m = 1; m <= k; ++m) {
        wcplx num = wcplx(wide_real(m - 1 - k));
        wcplx den = wcplx(wide_real(m));
        for (const auto& a : alphas) num *= widen(a) + wcplx(wide_real(m - 1));
        for (const auto& b : betas) den *= widen(b) + wcplx(wide_real(m - 1));
        check_den(den, "generalized hypergeometric sum");
        t *= num / den;
        c[k - m] = t;
    }
    return c;
}

WVec build_gbasic(const CVec& alphas, const CVec& betas, cplx qd, int k) {
    const wcplx q = widen(qd), one(1);
    const int sr = int(betas.size()) - int(alphas.size());
    WVec c(k + 1, wcplx(0));
    wcplx t(1), qm1(1);  // qm1 = q^{m-1}
    const wcplx qmk = one / ipow(q, k);
    c[0] = t;
    for (int m = 1; m <= k; ++m) {
        wcplx num = one - qmk * qm1;
        wcplx den = one - qm1 * q;
        for (const auto& a : alphas) num *= one - widen(a) * qm1;
        for (const auto& b : betas) den *= one - widen(b) * qm1;
        check_den(den, "basic hypergeometric sum");
        t *= num / den * ipow(-qm1, sr);
        c[m] = t;
        qm1 *= q;
    }
    return c;
}

WVec build_jacobi(cplx ad, cplx bd, int k) {
    const wcplx al = widen(ad), be = widen(bd), one(1), half(wide_real(0.5));
    WVec acc{wcplx(0)};
    WVec power{one};  // ((1 - x)/2)^m
    wcplx t(1);
    for (int m = 0; m <= k; ++m) {
        if (m > 0) {
            wcplx den = wcplx(wide_real(m)) * (al + wcplx(wide_real(m)));
            check_den(den, "Jacobi sum");
            t *= wcplx(wide_real(m - 1 - k)) * (wcplx(wide_real(k + m)) + al + be) / den;
            mul_linear(power, half, -half);
        }
        accumulate(acc, power, t);
    }
    wcplx pre = pochhammer(al + one, k);
    for (int j = 1; j <= k; ++j) pre /= wcplx(wide_real(j));
    for (auto& v : acc) v *= pre;
    return acc;
}

WVec build_wilson(const CVec& abcd, int k) {
    const WVec p = widen_all(abcd);
    const wcplx a = p[0], ab = p[0] + p[1], ac = p[0] + p[2], ad = p[0] + p[3];
    const wcplx al1 = p[0] + p[1] + p[2] + p[3];
    WVec acc{wcplx(0)};
    wcplx fact(1);
    for (int j = 0; j <= k; ++j) {
        if (j > 0) fact *= wcplx(wide_real(j));
        wcplx t = pochhammer(wcplx(wide_real(-k)), j) * pochhammer(wcplx(wide_real(k - 1)) + al1, j) / fact;
        wcplx jj{wide_real(j)};
        t *= pochhammer(ab + jj, k - j) * pochhammer(ac + jj, k - j) * pochhammer(ad + jj, k - j);
        accumulate(acc, wilson_pochhammer_coeffs(a, j), t);
    }
    return acc;
}

WVec build_racah(const CVec& prm, int k) {
    const WVec p = widen_all(prm);
    const wcplx al = p[0], be = p[1], ga = p[2], de = p[3], one(1);
    WVec acc{wcplx(0)};
    wcplx fact(1);
    for (int n = 0; n <= k; ++n) {
        if (n > 0) fact *= wcplx(wide_real(n));
        wcplx den = fact * pochhammer(al + one, n) * pochhammer(be + de + one, n) * pochhammer(ga + one, n);
        check_den(den, "Racah sum");
        wcplx t = pochhammer(wcplx(wide_real(-k)), n) * pochhammer(wcplx(wide_real(k + 1)) + al + be, n) / den;
        accumulate(acc, racah_lambda_coeffs(ga + de + one, n), t);
    }
    // The prefactor (alpha+1)_k (beta+delta+1)_k (gamma+1)_k / (k+alpha+beta+1)_k makes it monic.
    if (std::abs(narrow(acc.back())) < 1e-300) throw InvalidParameters("Racah sum has vanishing degree-k term");
    const wcplx lead = acc.back();
    for (auto& v : acc) v /= lead;
    return acc;
}

WVec build_aw(const CVec& abcd, cplx qd, int k) {
    const WVec p = widen_all(abcd);
    const wcplx q = widen(qd), one(1);
    const wcplx a = p[0], ab = p[0] * p[1], ac = p[0] * p[2], ad = p[0] * p[3];
    const wcplx abcd4 = p[0] * p[1] * p[2] * p[3];
    WVec acc{wcplx(0)};
    const wcplx qmk = one / ipow(q, k);
    for (int m = 0; m <= k; ++m) {
        const wcplx qm = ipow(q, m);
        wcplx den = q_pochhammer(q, q, m);
        check_den(den, "Askey-Wilson sum");
        wcplx t = qm * q_pochhammer(qmk, q, m) * q_pochhammer(abcd4 * ipow(q, k - 1), q, m) / den;
        // (ab;q)_k / (ab;q)_m = (ab q^m;q)_{k-m}, likewise for ac, ad
        t *= q_pochhammer(ab * qm, q, k - m) * q_pochhammer(ac * qm, q, k - m) * q_pochhammer(ad * qm, q, k - m);
        accumulate(acc, aw_pochhammer_coeffs(a, q, m), t);
    }
    const wcplx ak = ipow(a, k);
    for (auto& v : acc) v /= ak;
    return acc;
}

WVec build_qracah(const CVec& prm, cplx qd, int k) {
    const WVec p = widen_all(prm);
    const wcplx q = widen(qd), one(1);
    const wcplx al = p[0], be = p[1], ga = p[2], de = p[3];
    WVec acc{wcplx(0)};
    const wcplx qmk = one / ipow(q, k);
    for (int m = 0; m <= k; ++m) {
        wcplx den = q_pochhammer(q, q, m) * q_pochhammer(al * q, q, m) * q_pochhammer(be * de * q, q, m) *
                    q_pochhammer(ga * q, q, m);
        check_den(den, "q-Racah sum");
        wcplx t = ipow(q, m) * q_pochhammer(qmk, q, m) * q_pochhammer(al * be * ipow(q, k + 1), q, m) / den;
        accumulate(acc, qracah_pochhammer_coeffs(ga * de, q, m), t);
    }
    return acc;
}

Polynomial finish(const WVec& w, int k) {
    CVec c(w.size());
    double mx = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        c[i] = narrow(w[i]);
        mx = std::max(mx, std::abs(c[i]));
    }
    c.resize(k + 1, cplx(0));
    if (!(mx > 0) || c[k] == 0.0 || !finite(c[k]))
        throw InvalidParameters("degree-" + std::to_string(k) + " coefficient vanishes");
    Polynomial out;
    out.coeffs = c;
    return out;
}

// Shift expansions of the basic q-difference operator: sum_p U_p delta^p and
// sum_p V_p delta^p with U = (delta - 1) prod(beta/q delta - 1),
// V = delta^{s-r} (q^{-N} delta - 1) prod(alpha delta - 1).
struct ShiftExpansion {
    std::map<int, cplx> U, V;
};

ShiftExpansion basic_shifts(const FamilySpec& s) {
    const cplx q = *s.q;
    auto mul = [](const std::map<int, cplx>& in, cplx g) {
        std::map<int, cplx> out;
        for (const auto& [p, c] : in) {
            out[p + 1] += g * c;
            out[p] -= c;
        }
        return out;
    };
    ShiftExpansion e;
    e.U = mul({{0, 1.0}}, 1.0);
    for (const auto& b : s.betas) e.U = mul(e.U, b / q);
    e.V = mul({{int(s.betas.size()) - int(s.alphas.size()), 1.0}}, std::pow(q, -s.N));
    for (const auto& a : s.alphas) e.V = mul(e.V, a);
    return e;
}

void singular_if(bool bad, const std::string& msg) {
    if (bad) throw SingularSample(msg);
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::GHyp: return "ghyp";
        case Family::GBasicHyp: return "gbasic";
        case Family::Jacobi: return "jacobi";
        case Family::Wilson: return "wilson";
        case Family::Racah: return "racah";
        case Family::AskeyWilson: return "aw";
        case Family::QRacah: return "qracah";
    }
    return "?";
}

Family parse_family(const std::string& name) {
    std::string n = name;
    std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
    if (n == "ghyp") return Family::GHyp;
    if (n == "gbasic" || n == "gbasichyp") return Family::GBasicHyp;
    if (n == "jacobi") return Family::Jacobi;
    if (n == "wilson") return Family::Wilson;
    if (n == "racah") return Family::Racah;
    if (n == "aw" || n == "askey-wilson" || n == "askeywilson") return Family::AskeyWilson;
    if (n == "qracah" || n == "q-racah") return Family::QRacah;
    throw InvalidParameters("unknown family '" + name + "'");
}

bool is_q_family(Family f) {
    return f == Family::GBasicHyp || f == Family::AskeyWilson || f == Family::QRacah;
}

void validate(const FamilySpec& s) {
    require(s.N >= 1, "N must be >= 1");
    for (const auto& v : s.alphas) require(finite(v), "non-finite alpha parameter");
    for (const auto& v : s.betas) require(finite(v), "non-finite beta parameter");
    const bool qf = is_q_family(s.family);
    require(qf == s.q.has_value(), qf ? "base q required for " + family_name(s.family)
                                      : "base q not allowed for " + family_name(s.family));
    cplx q = s.q.value_or(cplx(0));
    if (qf) {
        require(finite(q) && std::abs(q) > 1e-12, "invalid base q");
        require(std::abs(q - 1.0) > 1e-9, "base q too close to 1");
        require(!q_factor_vanishes(q, q, 0, s.N, 1e-12), "(q;q)_m vanishes");
    }
    const int N = s.N;
    auto need = [&](std::size_t na, std::size_t nb) {
        require(s.alphas.size() == na && s.betas.size() == nb,
                family_name(s.family) + " takes " + std::to_string(na) + " alphas and " + std::to_string(nb) +
                    " betas");
    };
    switch (s.family) {
        case Family::GHyp:
            for (const auto& b : s.betas)
                require(!hits_nonpositive_integer(b, N, 1e-10), "beta parameter is a non-positive integer");
            break;
        case Family::GBasicHyp:
            for (const auto& b : s.betas) require(!q_factor_vanishes(b, q, 0, N, 1e-12), "(beta;q)_m vanishes");
            break;
        case Family::Jacobi:
            need(2, 0);
            require(!hits_nonpositive_integer(s.alphas[0] + 1.0, N, 1e-10), "alpha + 1 is a non-positive integer");
            break;
        case Family::Wilson: {
            need(4, 0);
            const auto& p = s.alphas;
            for (int i = 1; i < 4; ++i)
                require(!hits_nonpositive_integer(p[0] + p[i], N, 1e-10), "Wilson prefactor (a+b)_N-type vanishes");
            break;
        }
        case Family::Racah: {
            need(4, 0);
            const auto& p = s.alphas;
            require(!hits_nonpositive_integer(p[0] + 1.0, N, 1e-10), "alpha + 1 is a non-positive integer");
            require(!hits_nonpositive_integer(p[1] + p[3] + 1.0, N, 1e-10), "beta + delta + 1 is a non-positive integer");
            require(!hits_nonpositive_integer(p[2] + 1.0, N, 1e-10), "gamma + 1 is a non-positive integer");
            break;
        }
        case Family::AskeyWilson: {
            need(4, 0);
            const auto& p = s.alphas;
            require(std::abs(p[0]) > 1e-12, "parameter a must be nonzero");
            for (int i = 1; i < 4; ++i)
                require(!q_factor_vanishes(p[0] * p[i], q, 0, N, 1e-12), "(ab;q)_N-type prefactor vanishes");
            break;
        }
        case Family::QRacah: {
            need(4, 0);
            const auto& p = s.alphas;
            require(std::abs(p[2] * p[3]) > 1e-12, "gamma * delta must be nonzero");
            require(!q_factor_vanishes(p[0] * q, q, 0, N, 1e-12), "(alpha q;q)_m vanishes");
            require(!q_factor_vanishes(p[1] * p[3] * q, q, 0, N, 1e-12), "(beta delta q;q)_m vanishes");
            require(!q_factor_vanishes(p[2] * q, q, 0, N, 1e-12), "(gamma q;q)_m vanishes");
            break;
        }
    }
}

namespace {

WVec build_wide(const FamilySpec& s, int k) {
    switch (s.family) {
        case Family::GHyp: return build_ghyp(s.alphas, s.betas, k);
        case Family::GBasicHyp: return build_gbasic(s.alphas, s.betas, *s.q, k);
        case Family::Jacobi: return build_jacobi(s.alphas[0], s.alphas[1], k);
        case Family::Wilson: return build_wilson(s.alphas, k);
        case Family::Racah: return build_racah(s.alphas, k);
        case Family::AskeyWilson: return build_aw(s.alphas, *s.q, k);
        case Family::QRacah: return build_qracah(s.alphas, *s.q, k);
    }
    throw InvalidParameters("unknown family");
}

}  // namespace

// The double coefficients are rounded, which for clustered zeros costs many digits.
cplx polish_zero(const WVec& c, cplx z0) {
    wcplx z = widen(z0);
    for (int it = 0; it < 3; ++it) {
        wcplx p(0), dp(0);
        for (std::size_t k = c.size(); k-- > 0;) {
            dp = dp * z + p;
            p = p * z + c[k];
        }
        if (narrow(dp) == 0.0) break;
        const wcplx step = p / dp;
        const cplx sd = narrow(step);
        if (!finite(sd)) break;
        z -= step;
        if (std::abs(sd) <= 1e-30 * std::max(1.0, std::abs(z0))) break;
    }
    const cplx out = narrow(z);
    return std::abs(out - z0) <= 1e-6 * std::max(1.0, std::abs(z0)) ? out : z0;
}

WVec build_polynomial_wide(const FamilySpec& s, int k) {
    if (k == 0) return {wcplx(1)};
    return build_wide(s, k);
}

Polynomial build_polynomial_degree(const FamilySpec& s, int k) {
    if (k == 0) return Polynomial(CVec{1});
    return finish(build_wide(s, k), k);
}

Polynomial build_polynomial(const FamilySpec& spec) {
    validate(spec);
    return build_polynomial_degree(spec, spec.N);
}

Polynomial monic_basis_polynomial(const FamilySpec& spec, int k) {
    Polynomial p = build_polynomial_degree(spec, k);
    const cplx lead = p.lead();
    for (auto& v : p.coeffs) v /= lead;
    return p;
}

ZeroSet compute_zeros(const FamilySpec& spec) {
    validate(spec);
    const WVec wide = build_wide(spec, spec.N);
    ZeroSet zs = poly_roots(finish(wide, spec.N));
    for (auto& z : zs.zeros) z = polish_zero(wide, z);
    zs.min_separation = min_separation(zs.zeros);
    if (!zs.distinct)
        throw RepeatedZeros("zeros of " + family_name(spec.family) + " polynomial are not distinct (separation " +
                            short_num(zs.min_separation) + ")");
    return zs;
}

cplx racah_theta(const FamilySpec& spec) { return (spec.alphas[2] + spec.alphas[3] + 1.0) / 2.0; }

LiftedZeros lift_zero_variables(const FamilySpec& spec, const ZeroSet& zs) {
    LiftedZeros out;
    switch (spec.family) {
        case Family::Wilson:
            for (const auto& z : zs.zeros) {
                if (std::abs(z) < 1e-10) throw BranchPoint("Wilson zero at the origin");
                out.primary.push_back(std::sqrt(z));
            }
            break;
        case Family::Racah: {
            const cplx th = racah_theta(spec);
            for (const auto& z : zs.zeros) {
                if (std::abs(z + th * th) < 1e-10) throw BranchPoint("Racah zero at -theta^2");
                out.primary.push_back(std::sqrt(z + th * th));
            }
            break;
        }
        case Family::AskeyWilson:
            for (const auto& x : zs.zeros) out.primary.push_back(kernels::aw_lift(x));
            break;
        case Family::QRacah: {
            const cplx q = *spec.q;
            for (const auto& z : zs.zeros) {
                if (std::abs(z * z - 4.0 * spec.alphas[2] * spec.alphas[3] * q) < 1e-10)
                    throw BranchPoint("q-Racah zero at a square-root branch point");
                out.primary.push_back(z);
                out.plus.push_back(kernels::qracah_shift(z, +1, spec.alphas, q));
                out.minus.push_back(kernels::qracah_shift(z, -1, spec.alphas, q));
            }
            break;
        }
        default: throw InvalidParameters("no variable lift for " + family_name(spec.family));
    }
    return out;
}

cplx defining_equation_residual(const FamilySpec& spec, cplx sample) {
    return defining_equation_residual(spec, build_polynomial(spec), sample);
}

cplx defining_equation_residual(const FamilySpec& s, const Polynomial& P, cplx x) {
    validate(s);
    const int N = s.N;
    cplx res = 0;
    double scale = 0;
    // coef * P(point), where point is already in the polynomial's variable.
    auto term = [&](cplx coef, cplx point) {
        res += coef * P(point);
        scale += std::abs(coef) * P.abs_eval(point);
    };
    switch (s.family) {
        case Family::GHyp: {
            for (int k = 0; k <= P.degree(); ++k) {
                const double d = k - N;
                cplx t1 = d, t2 = double(k);
                for (const auto& b : s.betas) t1 *= b - 1.0 - d;
                for (const auto& a : s.alphas) t2 *= a - d;
                cplx v1 = t1 * P.coeffs[k] * std::pow(x, k);
                cplx v2 = k > 0 ? -t2 * P.coeffs[k] * std::pow(x, k - 1) : cplx(0);
                res += v1 + v2;
                scale += std::abs(v1) + std::abs(v2);
            }
            break;
        }
        case Family::GBasicHyp: {
            const cplx q = *s.q;
            const auto e = basic_shifts(s);
            for (const auto& [p, c] : e.U) term(c, std::pow(q, p) * x);
            for (const auto& [p, c] : e.V) term(-x * c, std::pow(q, p) * x);
            break;
        }
        case Family::Jacobi: {
            const cplx al = s.alphas[0], be = s.alphas[1];
            const cplx lam = double(N) * (double(N) + al + be + 1.0);
            for (int k = 0; k <= P.degree(); ++k) {
                cplx a = k >= 2 ? (1.0 - x * x) * double(k * (k - 1)) * std::pow(x, k - 2) : cplx(0);
                cplx b = k >= 1 ? (be - al - (al + be + 2.0) * x) * double(k) * std::pow(x, k - 1) : cplx(0);
                cplx c = lam * std::pow(x, k);
                res += P.coeffs[k] * (a + b + c);
                scale += std::abs(P.coeffs[k]) * (std::abs(a) + std::abs(b) + std::abs(c));
            }
            break;
        }
        case Family::Wilson: {
            using kernels::I;
            singular_if(std::abs(x) < 1e-3 || std::abs(x - 0.5 * I) < 1e-3 || std::abs(x + 0.5 * I) < 1e-3,
                        "Wilson sample near a pole of B");
            const cplx Bm = kernels::wilson_B(-x, s.alphas), Bp = kernels::wilson_B(x, s.alphas);
            cplx al1 = s.alphas[0] + s.alphas[1] + s.alphas[2] + s.alphas[3];
            term(Bm + Bp + double(N) * (double(N) + al1 - 1.0), x * x);
            term(-Bm, (x + I) * (x + I));
            term(-Bp, (x - I) * (x - I));
            break;
        }
        case Family::Racah: {
            singular_if(std::abs(x) < 1e-3 || std::abs(2.0 * x + 1.0) < 1e-3 || std::abs(2.0 * x - 1.0) < 1e-3,
                        "Racah sample near a pole of the coefficient");
            const cplx th = racah_theta(s);
            const cplx Dp = kernels::racah_Dt(x, s.alphas), Dm = kernels::racah_Dt(-x, s.alphas);
            const cplx lam = double(N) * (double(N) + s.alphas[0] + s.alphas[1] + 1.0);
            auto lv = [&](cplx y) { return y * y - th * th; };
            term(Dp, lv(x + 1.0));
            term(Dm, lv(x - 1.0));
            term(-Dp - Dm - lam, lv(x));
            break;
        }
        case Family::AskeyWilson: {
            const cplx q = *s.q;
            const auto& p = s.alphas;
            singular_if(std::abs(x) < 1e-3 || std::abs(x * x - 1.0) < 1e-3 || std::abs(q * x * x - 1.0) < 1e-3 ||
                            std::abs(x * x - q) < 1e-3,
                        "Askey-Wilson sample near a pole of D");
            const cplx lam = (std::pow(q, -N) - 1.0) * (1.0 - p[0] * p[1] * p[2] * p[3] * std::pow(q, N - 1));
            const cplx Dz = kernels::aw_D(x, p, q), Di = kernels::aw_D(1.0 / x, p, q);
            auto xv = [](cplx z) { return (z + 1.0 / z) / 2.0; };
            term(lam + Dz + Di, xv(x));
            term(-Dz, xv(q * x));
            term(-Di, xv(x / q));
            break;
        }
        case Family::QRacah: {
            const cplx q = *s.q;
            const auto& p = s.alphas;
            const cplx gd = p[2] * p[3];
            singular_if(std::abs(x * x - 4.0 * gd * q) < 1e-3, "q-Racah sample near the branch point");
            const cplx Z = kernels::qracah_Z(x, p, q), Z2 = Z * Z;
            singular_if(std::abs(1.0 - gd * q * Z2) < 1e-3 || std::abs(1.0 - gd * q * q * Z2) < 1e-3 ||
                            std::abs(1.0 - gd * Z2) < 1e-3,
                        "q-Racah sample near a pole of B or D");
            const cplx B = kernels::qracah_B(x, p, q), D = kernels::qracah_D(x, p, q);
            const cplx lam = (std::pow(q, -N) - 1.0) * (1.0 - p[0] * p[1] * std::pow(q, N + 1));
            term(B, kernels::qracah_shift(x, +1, p, q));
            term(D, kernels::qracah_shift(x, -1, p, q));
            term(-B - D - lam, x);
            break;
        }
    }
    return scale > 0 ? res / scale : res;
}

double q_to_one_limit_check(const FamilySpec& s, double qn) {
    if (s.family != Family::GHyp && s.family != Family::GBasicHyp)
        throw InvalidParameters("q_to_one_limit_check needs a ghyp or gbasic spec");
    if (!(std::abs(qn - 1.0) > 0 && std::abs(qn - 1.0) <= 0.01))
        throw InvalidParameters("q_to_one_limit_check needs 0 < |q - 1| <= 0.01");
    if (s.N < 0) throw InvalidParameters("N must be >= 0");
    const int N = s.N;
    const int sr = int(s.betas.size()) - int(s.alphas.size());
    const double lq = std::log(qn);
    cplx phi(1), F(1);
    double dev = 0, fmax = 1;
    for (int m = 1; m <= N; ++m) {
        const double qm1 = std::pow(qn, m - 1);
        cplx num = 1.0 - std::pow(qn, -N) * qm1, den = 1.0 - qm1 * qn;
        for (const auto& a : s.alphas) num *= 1.0 - std::exp(a * lq) * qm1;
        for (const auto& b : s.betas) den *= 1.0 - std::exp(b * lq) * qm1;
        phi *= num / den * std::pow(-qm1 * (qn - 1.0), sr);
        cplx fn = double(m - 1 - N), fd = double(m);
        for (const auto& a : s.alphas) fn *= a + double(m - 1);
        for (const auto& b : s.betas) fd *= b + double(m - 1);
        F *= fn / fd;
        dev = std::max(dev, std::abs(phi - F));
        fmax = std::max(fmax, std::abs(F));
    }
    return dev / fmax;
}

}  // namespace isospectra
