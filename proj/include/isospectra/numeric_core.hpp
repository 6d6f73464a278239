#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "isospectra/errors.hpp"

namespace isospectra {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using CMat = Eigen::MatrixXcd;

// Extended precision used when building polynomials from their defining sums.
// Those sums cancel heavily for the q-families, so the terms are accumulated in
// 113-bit arithmetic and only the final coefficients are rounded to double.
#if defined(__SIZEOF_FLOAT128__)
using wide_real = __float128;
#else
using wide_real = long double;
#endif
using wcplx = std::complex<wide_real>;

inline wcplx widen(const cplx& z) { return {wide_real(z.real()), wide_real(z.imag())}; }
inline cplx narrow(const wcplx& z) { return {double(z.real()), double(z.imag())}; }

/// Dense polynomial, coefficients in ascending powers.
struct Polynomial {
    CVec coeffs;

    Polynomial() = default;
    explicit Polynomial(CVec c);

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    cplx lead() const { return coeffs.back(); }
    cplx operator()(cplx z) const;
    /// Sum of |c_k| |z|^k: the size of the rounding error made when evaluating at z.
    double abs_eval(cplx z) const;
};

/// Drop trailing coefficients with |c| <= 1e-14 max|c| (a zero polynomial keeps one 0).
Polynomial trim(const CVec& c);
Polynomial derivative(const Polynomial& p);
/// Monic polynomial with the given roots.
Polynomial from_roots(const CVec& roots);

template <class S>
std::vector<S> poly_mul(const std::vector<S>& a, const std::vector<S>& b) {
    std::vector<S> out(a.size() + b.size() - 1, S(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

/// Multiply in place by the linear factor (c0 + c1 x).
template <class S>
void mul_linear(std::vector<S>& p, const S& c0, const S& c1) {
    p.push_back(S(0));
    for (std::size_t k = p.size() - 1; k > 0; --k) p[k] = p[k] * c0 + p[k - 1] * c1;
    p[0] = p[0] * c0;
}

template <class S>
S horner(const std::vector<S>& c, const S& z) {
    S acc(0);
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
    return acc;
}

template <class S>
S ipow(S x, int k) {
    if (k < 0) return S(1) / ipow(x, -k);
    S r(1);
    while (k) {
        if (k & 1) r *= x;
        x *= x;
        k >>= 1;
    }
    return r;
}

// ---- Pochhammer family ------------------------------------------------------

template <class S>
S pochhammer(const S& a, int j) {
    S r(1);
    for (int i = 0; i < j; ++i) r *= a + S(i);
    return r;
}

template <class S>
S q_pochhammer(const S& g, const S& q, int m) {
    S r(1), gq = g;
    for (int i = 0; i < m; ++i) {
        r *= S(1) - gq;
        gq *= q;
    }
    return r;
}

/// [a;z]_k = (a^2+z)((a+1)^2+z)...((a+k-1)^2+z), in z.
template <class S>
std::vector<S> wilson_pochhammer_coeffs(const S& a, int k) {
    std::vector<S> p{S(1)};
    for (int s = 0; s < k; ++s) {
        S as = a + S(s);
        mul_linear(p, as * as, S(1));
    }
    return p;
}

/// {a;q;x}_m = prod_{k<m} (1 + a^2 q^{2k} - 2 a q^k x), in x.
template <class S>
std::vector<S> aw_pochhammer_coeffs(const S& a, const S& q, int m) {
    std::vector<S> p{S(1)};
    S aq = a;
    for (int k = 0; k < m; ++k) {
        mul_linear(p, S(1) + aq * aq, S(-2) * aq);
        aq *= q;
    }
    return p;
}

/// prod_{s<m} (1 - z q^s + gd q^{2s+1}), in z.
template <class S>
std::vector<S> qracah_pochhammer_coeffs(const S& gd, const S& q, int m) {
    std::vector<S> p{S(1)};
    S qs(1);
    for (int s = 0; s < m; ++s) {
        mul_linear(p, S(1) + gd * qs * qs * q, -qs);
        qs *= q;
    }
    return p;
}

/// [lambda]_n = (-lambda) prod_{s=1}^{n-1} (-lambda + s gd1 + s^2), in lambda.
template <class S>
std::vector<S> racah_lambda_coeffs(const S& gd1, int n) {
    std::vector<S> p{S(1)};
    for (int s = 0; s < n; ++s) {
        S ss(static_cast<double>(s));
        mul_linear(p, ss * gd1 + ss * ss, S(-1));
    }
    return p;
}

Polynomial wilson_pochhammer_poly(cplx a, int k);
Polynomial aw_pochhammer_poly(cplx a, cplx q, int m);
Polynomial qracah_pochhammer_poly(cplx gd, cplx q, int m);
Polynomial racah_lambda_pochhammer_poly(cplx gd1, int n);

/// a_0..a_p of prod(alpha_j - x) and b_0..b_{q+1} of x prod(beta_k - 1 - x); b_0 = 0.
struct HypCoeffs {
    CVec a;
    CVec b;
};
HypCoeffs elementary_coeffs_hyp(const CVec& alphas, const CVec& betas);

/// a_0..a_r of prod(1 + alpha_j x) and b_0..b_s of prod(1 + beta_k x); a_0 = b_0 = 1.
struct BasicCoeffs {
    CVec a;
    CVec b;
};
BasicCoeffs elementary_coeffs_basic(const CVec& alphas, const CVec& betas);

// ---- roots, eigenvalues, matching ------------------------------------------

struct ZeroSet {
    CVec zeros;
    double min_separation = 0.0;
    double max_poly_residual = 0.0;
    bool distinct = false;
};

/// Smallest pairwise distance (infinity for fewer than two points).
double min_separation(const CVec& z);

/// All roots by Aberth-Ehrlich iteration plus a Newton polish, sorted by (re, im).
/// max_poly_residual is max |p(r)| / sum |c_k||r|^k.
ZeroSet poly_roots(const Polynomial& p, double tol = 1e-12, int max_iter = 200);

enum class EigenMethod {
    Schur,              // Eigen's complex Schur decomposition
    FaddeevLeVerrier,   // characteristic polynomial, then poly_roots
};

struct EigenMultiset {
    CVec values;
    double match_distance = -1.0;
};

/// Monic characteristic polynomial det(x I - M) by the Faddeev-LeVerrier recursion.
Polynomial faddeev_leverrier(const CMat& M);

EigenMultiset matrix_eigenvalues(const CMat& M, double tol = 1e-12,
                                 EigenMethod method = EigenMethod::Schur);

/// Largest pair distance of a greedy bijection that repeatedly pairs the closest
/// unused elements, divided by max(1, max|B|).
double multiset_match(const CVec& A, const CVec& B);
double multiset_match(EigenMultiset& A, const EigenMultiset& B);

}  // namespace isospectra
