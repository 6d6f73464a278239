#include "isospectra/numeric_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace isospectra {

Polynomial::Polynomial(CVec c) : coeffs(trim(c).coeffs) {}

Polynomial trim(const CVec& c) {
    Polynomial p;
    if (c.empty()) {
        p.coeffs = {cplx(0)};
        return p;
    }
    double mx = 0;
    for (const auto& v : c) mx = std::max(mx, std::abs(v));
    std::size_t n = c.size();
    while (n > 1 && std::abs(c[n - 1]) <= 1e-14 * mx) --n;
    p.coeffs.assign(c.begin(), c.begin() + n);
    if (mx == 0) p.coeffs = {cplx(0)};
    return p;
}

cplx Polynomial::operator()(cplx z) const { return horner(coeffs, z); }

double Polynomial::abs_eval(cplx z) const {
    double az = std::abs(z), acc = 0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * az + std::abs(coeffs[k]);
    return acc;
}

Polynomial derivative(const Polynomial& p) {
    if (p.coeffs.size() <= 1) return Polynomial(CVec{0});
    CVec d(p.coeffs.size() - 1);
    for (std::size_t k = 1; k < p.coeffs.size(); ++k) d[k - 1] = double(k) * p.coeffs[k];
    Polynomial out;
    out.coeffs = d;
    return out;
}

Polynomial from_roots(const CVec& roots) {
    CVec c{1};
    for (const auto& r : roots) mul_linear(c, -r, cplx(1));
    Polynomial p;
    p.coeffs = c;
    return p;
}

Polynomial wilson_pochhammer_poly(cplx a, int k) {
    Polynomial p;
    p.coeffs = wilson_pochhammer_coeffs(a, k);
    return p;
}

Polynomial aw_pochhammer_poly(cplx a, cplx q, int m) {
    Polynomial p;
    p.coeffs = aw_pochhammer_coeffs(a, q, m);
    return p;
}

Polynomial qracah_pochhammer_poly(cplx gd, cplx q, int m) {
    Polynomial p;
    p.coeffs = qracah_pochhammer_coeffs(gd, q, m);
    return p;
}

Polynomial racah_lambda_pochhammer_poly(cplx gd1, int n) {
    Polynomial p;
    p.coeffs = racah_lambda_coeffs(gd1, n);
    return p;
}

HypCoeffs elementary_coeffs_hyp(const CVec& alphas, const CVec& betas) {
    HypCoeffs out;
    out.a = {1};
    for (const auto& al : alphas) mul_linear(out.a, al, cplx(-1));
    out.b = {0, 1};
    for (const auto& be : betas) mul_linear(out.b, be - 1.0, cplx(-1));
    return out;
}

BasicCoeffs elementary_coeffs_basic(const CVec& alphas, const CVec& betas) {
    BasicCoeffs out;
    out.a = {1};
    for (const auto& al : alphas) mul_linear(out.a, cplx(1), al);
    out.b = {1};
    for (const auto& be : betas) mul_linear(out.b, cplx(1), be);
    return out;
}

double min_separation(const CVec& z) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = i + 1; j < z.size(); ++j) m = std::min(m, std::abs(z[i] - z[j]));
    return m;
}

namespace {

struct EvalResult {
    cplx p, dp;
    double scale;
};

EvalResult eval_with_derivative(const CVec& c, cplx z) {
    cplx p = 0, dp = 0;
    double az = std::abs(z), s = 0;
    for (std::size_t k = c.size(); k-- > 0;) {
        dp = dp * z + p;
        p = p * z + c[k];
        s = s * az + std::abs(c[k]);
    }
    return {p, dp, s};
}

double scaled_residual(const CVec& c, cplx z) {
    auto e = eval_with_derivative(c, z);
    return e.scale > 0 ? std::abs(e.p) / e.scale : 0.0;
}

bool lex_less(const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

}  // namespace

ZeroSet poly_roots(const Polynomial& poly, double tol, int max_iter) {
    // Only exact zeros are stripped here: q-family polynomials legitimately span
    // more than 14 decades between their leading and largest coefficients.
    CVec c(poly.coeffs);
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
    const int n = int(c.size()) - 1;
    if (n < 1) throw DegenerateInput("poly_roots: polynomial of degree < 1");
    const cplx lead = c.back();
    for (auto& v : c) v /= lead;

    ZeroSet out;
    if (n == 1) {
        out.zeros = {-c[0]};
    } else {
        double bound = 0;
        for (int k = 1; k <= n; ++k)
            bound = std::max(bound, std::pow(std::abs(c[n - k]), 1.0 / k));
        const double radius = std::max(1.0, bound);
        CVec z(n);
        for (int k = 0; k < n; ++k)
            z[k] = std::polar(radius, 2 * std::numbers::pi * k / n + 0.42);

        const double eps = std::numeric_limits<double>::epsilon();
        for (int it = 0; it < max_iter; ++it) {
            bool done = true;
            for (int k = 0; k < n; ++k) {
                auto e = eval_with_derivative(c, z[k]);
                if (e.scale > 0 && std::abs(e.p) <= 2 * n * eps * e.scale) continue;
                cplx ratio = e.p / e.dp;
                cplx sum = 0;
                for (int j = 0; j < n; ++j)
                    if (j != k) sum += 1.0 / (z[k] - z[j]);
                cplx w = ratio / (1.0 - ratio * sum);
                if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) w = ratio;
                z[k] -= w;
                if (std::abs(w) > 4 * eps * std::max(1.0, std::abs(z[k]))) done = false;
            }
            if (done) break;
        }
        // Newton polish; a step is kept only if it lowers the scaled residual.
        for (int k = 0; k < n; ++k) {
            for (int s = 0; s < 3; ++s) {
                auto e = eval_with_derivative(c, z[k]);
                if (e.dp == 0.0) break;
                cplx cand = z[k] - e.p / e.dp;
                if (scaled_residual(c, cand) < scaled_residual(c, z[k])) z[k] = cand;
                else break;
            }
        }
        out.zeros = z;
    }
    std::sort(out.zeros.begin(), out.zeros.end(), lex_less);
    for (const auto& r : out.zeros)
        out.max_poly_residual = std::max(out.max_poly_residual, scaled_residual(c, r));
    out.min_separation = min_separation(out.zeros);
    double zscale = 1;
    for (const auto& r : out.zeros) zscale = std::max(zscale, std::abs(r));
    out.distinct = out.min_separation > 1e-8 * zscale;
    if (!(out.max_poly_residual <= tol))
        throw NonConvergence("poly_roots: scaled residual " + short_num(out.max_poly_residual) +
                             " above tolerance");
    return out;
}

Polynomial faddeev_leverrier(const CMat& A) {
    const Eigen::Index n = A.rows();
    CMat M = CMat::Zero(n, n);
    const CMat I = CMat::Identity(n, n);
    CVec c(n + 1);
    c[n] = 1;  // c[k] multiplies x^k
    cplx prev = 1;
    for (Eigen::Index k = 1; k <= n; ++k) {
        M = A * M + prev * I;
        prev = -(A * M).trace() / double(k);
        c[n - k] = prev;
    }
    Polynomial p;
    p.coeffs = c;
    return p;
}

EigenMultiset matrix_eigenvalues(const CMat& M, double tol, EigenMethod method) {
    if (M.rows() != M.cols() || M.rows() < 1)
        throw DegenerateInput("matrix_eigenvalues: need a square matrix of size >= 1");
    if (!M.allFinite()) throw DegenerateInput("matrix_eigenvalues: non-finite entries");
    EigenMultiset out;
    if (M.rows() == 1) {
        out.values = {M(0, 0)};
        return out;
    }
    if (method == EigenMethod::FaddeevLeVerrier) {
        // Characteristic polynomials of defective or clustered spectra carry
        // larger root residuals than plain polynomials; loosen accordingly.
        out.values = poly_roots(faddeev_leverrier(M), std::max(tol, 1e-10), 400).zeros;
        return out;
    }
    Eigen::ComplexEigenSolver<CMat> solver(M, false);
    if (solver.info() != Eigen::Success) throw NonConvergence("matrix_eigenvalues: Schur iteration failed");
    const auto& ev = solver.eigenvalues();
    out.values.assign(ev.data(), ev.data() + ev.size());
    std::sort(out.values.begin(), out.values.end(), lex_less);
    return out;
}

double multiset_match(const CVec& A, const CVec& B) {
    if (A.size() != B.size())
        throw CardinalityMismatch("multiset_match: sizes " + std::to_string(A.size()) + " and " +
                                  std::to_string(B.size()));
    CVec a(A), b(B);
    std::sort(a.begin(), a.end(), lex_less);
    std::sort(b.begin(), b.end(), lex_less);
    double scale = 1;
    for (const auto& v : b) scale = std::max(scale, std::abs(v));
    std::vector<bool> ua(a.size(), false), ub(b.size(), false);
    double worst = 0;
    for (std::size_t step = 0; step < a.size(); ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (ua[i]) continue;
            for (std::size_t j = 0; j < b.size(); ++j) {
                if (ub[j]) continue;
                double d = std::abs(a[i] - b[j]);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        ua[bi] = ub[bj] = true;
        worst = std::max(worst, best);
    }
    return worst / scale;
}

double multiset_match(EigenMultiset& A, const EigenMultiset& B) {
    A.match_distance = multiset_match(A.values, B.values);
    return A.match_distance;
}

}  // namespace isospectra
