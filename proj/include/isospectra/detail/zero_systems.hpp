#pragma once

// Right-hand sides of the zero dynamics, templated on the scalar so the same
// code yields values (cplx) and exact Jacobian columns (Dual<cplx>).  When
// `scale` is non-null each component also gets the sum of the magnitudes of
// the terms that cancel in it.

#include <cmath>
#include <vector>

#include "isospectra/dual.hpp"
#include "isospectra/kernels.hpp"
#include "isospectra/numeric_core.hpp"

namespace isospectra::detail {

template <class S>
double mag(const S& s) {
    return std::abs(value_of(s));
}

template <class S>
using SVec = std::vector<S>;

/// f[1..J], g[0..J] of the universal recursions.
template <class S>
void fg_run(const SVec<S>& z, int J, std::vector<SVec<S>>& f, std::vector<SVec<S>>& g) {
    const std::size_t N = z.size();
    f.assign(J + 1, SVec<S>());
    g.assign(J + 1, SVec<S>());
    f[1] = z;
    g[0].assign(N, S(1.0));
    for (int j = 1; j < J; ++j) {
        f[j + 1].assign(N, S(0.0));
        for (std::size_t n = 0; n < N; ++n) {
            S acc = -f[j][n];
            for (std::size_t l = 0; l < N; ++l)
                if (l != n) acc = acc + (z[n] * f[j][l] + z[l] * f[j][n]) / (z[n] - z[l]);
            f[j + 1][n] = acc;
        }
    }
    for (int j = 1; j <= J; ++j) {
        g[j].assign(N, S(0.0));
        for (std::size_t n = 0; n < N; ++n) {
            S acc(0.0);
            for (std::size_t l = 0; l < N; ++l)
                if (l != n) acc = acc + (f[j][n] + f[j][l]) / (z[n] - z[l]);
            g[j][n] = acc;
        }
    }
}

/// Same recursions with every term replaced by its magnitude.
inline void fg_abs(const CVec& z, int J, std::vector<std::vector<double>>& F, std::vector<std::vector<double>>& G) {
    const std::size_t N = z.size();
    F.assign(J + 1, {});
    G.assign(J + 1, {});
    F[1].resize(N);
    for (std::size_t n = 0; n < N; ++n) F[1][n] = std::abs(z[n]);
    G[0].assign(N, 1.0);
    for (int j = 1; j < J; ++j) {
        F[j + 1].assign(N, 0.0);
        for (std::size_t n = 0; n < N; ++n) {
            double acc = F[j][n];
            for (std::size_t l = 0; l < N; ++l)
                if (l != n)
                    acc += (std::abs(z[n]) * F[j][l] + std::abs(z[l]) * F[j][n]) / std::abs(z[n] - z[l]);
            F[j + 1][n] = acc;
        }
    }
    for (int j = 1; j <= J; ++j) {
        G[j].assign(N, 0.0);
        for (std::size_t n = 0; n < N; ++n)
            for (std::size_t l = 0; l < N; ++l)
                if (l != n) G[j][n] += (F[j][n] + F[j][l]) / std::abs(z[n] - z[l]);
    }
}

inline int ghyp_depth(std::size_t p, std::size_t q) { return std::max<int>({int(q) + 1, int(p), 1}); }

/// sum_k b_k f_n^(k) - sum_j a_j g_n^(j).
template <class S>
SVec<S> ghyp_rhs(const SVec<S>& z, const HypCoeffs& c, std::vector<double>* scale = nullptr) {
    const int p = int(c.a.size()) - 1, q = int(c.b.size()) - 2;
    std::vector<SVec<S>> f, g;
    fg_run(z, ghyp_depth(p, q), f, g);
    SVec<S> out(z.size(), S(0.0));
    for (std::size_t n = 0; n < z.size(); ++n) {
        for (int k = 1; k <= q + 1; ++k) out[n] = out[n] + c.b[k] * f[k][n];
        for (int j = 0; j <= p; ++j) out[n] = out[n] - c.a[j] * g[j][n];
    }
    if (scale) {
        CVec zv(z.size());
        for (std::size_t n = 0; n < z.size(); ++n) zv[n] = value_of(z[n]);
        std::vector<std::vector<double>> F, G;
        fg_abs(zv, ghyp_depth(p, q), F, G);
        scale->assign(z.size(), 0.0);
        for (std::size_t n = 0; n < z.size(); ++n) {
            for (int k = 1; k <= q + 1; ++k) (*scale)[n] += std::abs(c.b[k]) * F[k][n];
            for (int j = 0; j <= p; ++j) (*scale)[n] += std::abs(c.a[j]) * G[j][n];
        }
    }
    return out;
}

/// Weighted shift sums shared by the basic zero system and its linearization:
///   B_e[F] = (q-1)^e F(1) + sum_k b_k (-1)^k q^-k [(q^{k+1}-1)^e F(k+1) - (q^k-1)^e F(k)]
///   A_e[F] = q^-N (q^{s-r+1}-1)^e F(s-r+1) - (q^{s-r}-1)^e F(s-r)
///            + sum_j a_j (-1)^j [q^-N (q^{j+s+1-r}-1)^e F(j+s+1-r) - (q^{j+s-r}-1)^e F(j+s-r)]
struct BasicWeights {
    BasicCoeffs c;
    cplx q;
    int N, r, s;

    cplx qp(int p) const { return std::pow(q, p); }
    cplx w(int p, int e) const { return e == 1 ? qp(p) - 1.0 : (qp(p) - 1.0) * (qp(p) - 1.0); }

    template <class S, class F>
    S bsum(F&& fn, int e, double* mag_acc = nullptr) const {
        S acc = w(1, e) * fn(1);
        if (mag_acc) *mag_acc += mag(acc);
        for (int k = 1; k <= s; ++k) {
            const cplx pre = c.b[k] * std::pow(-1.0, k) / qp(k);
            S t1 = pre * w(k + 1, e) * fn(k + 1), t2 = pre * w(k, e) * fn(k);
            acc = acc + t1 - t2;
            if (mag_acc) *mag_acc += mag(t1) + mag(t2);
        }
        return acc;
    }

    template <class S, class F>
    S asum(F&& fn, int e, double* mag_acc = nullptr) const {
        const cplx qN = std::pow(q, -N);
        S t1 = qN * w(s - r + 1, e) * fn(s - r + 1), t2 = w(s - r, e) * fn(s - r);
        S acc = t1 - t2;
        if (mag_acc) *mag_acc += mag(t1) + mag(t2);
        for (int j = 1; j <= r; ++j) {
            const cplx pre = c.a[j] * std::pow(-1.0, j);
            S u1 = pre * qN * w(j + s + 1 - r, e) * fn(j + s + 1 - r), u2 = pre * w(j + s - r, e) * fn(j + s - r);
            acc = acc + u1 - u2;
            if (mag_acc) *mag_acc += mag(u1) + mag(u2);
        }
        return acc;
    }
};

inline BasicWeights basic_weights(const CVec& alphas, const CVec& betas, cplx q, int N) {
    return {elementary_coeffs_basic(alphas, betas), q, N, int(alphas.size()), int(betas.size())};
}

template <class S>
SVec<S> gbasic_rhs(const SVec<S>& z, const BasicWeights& W, std::vector<double>* scale = nullptr) {
    const std::size_t N = z.size();
    SVec<S> out(N);
    if (scale) scale->assign(N, 0.0);
    const double sb = (W.s + 1) % 2 ? -1.0 : 1.0, sa = W.r % 2 ? -1.0 : 1.0;
    for (std::size_t n = 0; n < N; ++n) {
        auto f = [&](int p) {
            S acc(1.0);
            const cplx qp = W.qp(p);
            for (std::size_t l = 0; l < N; ++l)
                if (l != n) acc = acc * (qp * z[n] - z[l]) / (z[n] - z[l]);
            return acc;
        };
        double mb = 0, ma = 0;
        S b = W.bsum<S>(f, 1, scale ? &mb : nullptr);
        S a = W.asum<S>(f, 1, scale ? &ma : nullptr);
        out[n] = sb * b + sa * z[n] * a;
        if (scale) (*scale)[n] = mb + mag(z[n]) * ma;
    }
    return out;
}

template <class S>
SVec<S> wilson_rhs(const SVec<S>& x, const CVec& abcd, std::vector<double>* scale = nullptr) {
    using kernels::I;
    const std::size_t N = x.size();
    SVec<S> out(N);
    if (scale) scale->assign(N, 0.0);
    for (std::size_t n = 0; n < N; ++n) {
        auto term = [&](double sg) {
            S xn = sg * x[n];
            S acc = kernels::wilson_D(xn, abcd) / ((2.0 * I) * xn);
            for (std::size_t m = 0; m < N; ++m) {
                if (m == n) continue;
                S d = x[n] * x[n] - x[m] * x[m];
                acc = acc * (d - 1.0 - (2.0 * I) * xn) / d;
            }
            return acc;
        };
        S tp = term(1.0), tm = term(-1.0);
        S pre = (-I) / (2.0 * x[n]);
        out[n] = pre * (tp + tm);
        if (scale) (*scale)[n] = mag(pre) * (mag(tp) + mag(tm));
    }
    return out;
}

template <class S>
SVec<S> racah_rhs(const SVec<S>& y, const CVec& prm, std::vector<double>* scale = nullptr) {
    using kernels::I;
    const std::size_t N = y.size();
    SVec<S> out(N);
    if (scale) scale->assign(N, 0.0);
    for (std::size_t n = 0; n < N; ++n) {
        auto term = [&](double sg) {
            S yn = sg * y[n];
            S acc = kernels::racah_Dt(yn, prm) * (2.0 * yn + 1.0);
            for (std::size_t l = 0; l < N; ++l) {
                if (l == n) continue;
                S d = y[n] * y[n] - y[l] * y[l];
                acc = acc * (1.0 + (1.0 + 2.0 * yn) / d);
            }
            return acc;
        };
        S tp = term(1.0), tm = term(-1.0);
        S pre = (-I) / (2.0 * y[n]);
        out[n] = pre * (tp + tm);
        if (scale) (*scale)[n] = mag(pre) * (mag(tp) + mag(tm));
    }
    return out;
}

/// x-velocities of the AW system written on the lifted variables z = x + sqrt(x^2 - 1).
template <class S>
SVec<S> aw_rhs_lifted(const SVec<S>& z, const CVec& abcd, cplx q, std::vector<double>* scale = nullptr) {
    const std::size_t N = z.size();
    SVec<S> zi(N), out(N);
    for (std::size_t n = 0; n < N; ++n) zi[n] = 1.0 / z[n];
    if (scale) scale->assign(N, 0.0);
    const cplx pre = (q - 1.0) / (2.0 * std::pow(q, int(N)));
    for (std::size_t n = 0; n < N; ++n) {
        auto term = [&](const SVec<S>& w) {
            S acc = kernels::aw_G(w[n], abcd, q);
            for (std::size_t l = 0; l < N; ++l)
                if (l != n) acc = acc * kernels::aw_K(w[n], w[l], q);
            return acc;
        };
        S t1 = term(z), t2 = term(zi);
        out[n] = pre * (t1 + t2);
        if (scale) (*scale)[n] = std::abs(pre) * (mag(t1) + mag(t2));
    }
    return out;
}

template <class S>
SVec<S> aw_rhs(const SVec<S>& x, const CVec& abcd, cplx q, std::vector<double>* scale = nullptr) {
    SVec<S> z(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) z[n] = kernels::aw_lift(x[n]);
    return aw_rhs_lifted(z, abcd, q, scale);
}

template <class S>
SVec<S> qracah_rhs(const SVec<S>& z, const CVec& prm, cplx q, std::vector<double>* scale = nullptr) {
    const std::size_t N = z.size();
    SVec<S> out(N);
    if (scale) scale->assign(N, 0.0);
    for (std::size_t n = 0; n < N; ++n) {
        auto term = [&](int sg) {
            S zs = kernels::qracah_shift(z[n], sg, prm, q);
            S acc = (sg > 0 ? kernels::qracah_B(z[n], prm, q) : kernels::qracah_D(z[n], prm, q)) * (zs - z[n]);
            for (std::size_t l = 0; l < N; ++l)
                if (l != n) acc = acc * (zs - z[l]) / (z[n] - z[l]);
            return acc;
        };
        S tp = term(+1), tm = term(-1);
        out[n] = tp + tm;
        if (scale) (*scale)[n] = mag(tp) + mag(tm);
    }
    return out;
}

}  // namespace isospectra::detail
