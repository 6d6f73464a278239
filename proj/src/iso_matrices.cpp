#include "isospectra/iso_matrices.hpp"

#include <algorithm>
#include <cmath>

#include "isospectra/detail/zero_systems.hpp"
#include "isospectra/dynamics.hpp"
#include "isospectra/kernels.hpp"

namespace isospectra {

namespace {

using kernels::I;

void require_distinct(const CVec& z) {
    double sc = 1;
    for (const auto& v : z) sc = std::max(sc, std::abs(v));
    if (z.size() > 1 && min_separation(z) < 1e-8 * sc) throw RepeatedZeros("zeros are not distinct");
}

void guard(cplx v, double scale, const char* what) {
    if (!(std::abs(v) >= 1e-12 * scale)) throw SingularDenominator(std::string("vanishing denominator: ") + what);
}

FamilySpec padded(const FamilySpec& s, const BuildOptions& o) {
    if (o.pad_values.empty()) return s;
    if (s.family != Family::GHyp && s.family != Family::GBasicHyp)
        throw InvalidParameters("parameter padding applies to ghyp and gbasic only");
    FamilySpec out = s;
    for (const auto& v : o.pad_values) {
        out.alphas.push_back(v);
        out.betas.push_back(v);
    }
    validate(out);
    return out;
}

CMat ghyp_explicit(const CVec& z, cplx beta1) {
    const int N = int(z.size());
    CMat L(N, N);
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m) {
            if (n == m) {
                cplx acc = beta1;
                for (int l = 0; l < N; ++l)
                    if (l != n) acc += 2.0 * z[l] * (z[l] - 1.0) / ((z[n] - z[l]) * (z[n] - z[l]));
                L(n, n) = acc;
            } else {
                L(n, m) = -2.0 * z[n] * (z[n] - 1.0) / ((z[n] - z[m]) * (z[n] - z[m]));
            }
        }
    return L;
}

CMat ghyp_general(const CVec& z, const FamilySpec& s) {
    const HypCoeffs c = elementary_coeffs_hyp(s.alphas, s.betas);
    const int p = int(s.alphas.size()), q = int(s.betas.size());
    const FGJacobian J = fg_jacobians(z, detail::ghyp_depth(p, q));
    const int N = int(z.size());
    CMat L = CMat::Zero(N, N);
    for (int k = 1; k <= q + 1; ++k) L += c.b[k] * J.df[k];
    for (int j = 1; j <= p; ++j) L -= c.a[j] * J.dg[j];
    return L;
}

CMat jacobi_matrix(const CVec& x, cplx alpha) {
    const int N = int(x.size());
    CMat L(N, N);
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m) {
            if (n == m) {
                cplx acc = alpha + 1.0;
                for (int l = 0; l < N; ++l)
                    if (l != n) acc += (1.0 + x[l]) * (1.0 - x[n]) * (1.0 - x[n]) / ((x[n] - x[l]) * (x[n] - x[l]));
                L(n, n) = acc;
            } else {
                L(n, m) = -(1.0 + x[n]) * (1.0 - x[m]) * (1.0 - x[m]) / ((x[n] - x[m]) * (x[n] - x[m]));
            }
        }
    return L;
}

CMat gbasic_matrix(const CVec& z, const FamilySpec& s) {
    const int N = int(z.size());
    const auto W = detail::basic_weights(s.alphas, s.betas, *s.q, s.N);
    const double sgn_s = W.s % 2 ? -1.0 : 1.0, sgn_r = W.r % 2 ? -1.0 : 1.0;
    CMat L(N, N);
    for (int n = 0; n < N; ++n) {
        // f_nm(p) = prod over l != n, m of (q^p z_n - z_l)/(z_n - z_l); m = -1 excludes only n
        auto fnm = [&](int m, int p) {
            const cplx qp = W.qp(p);
            cplx acc = 1;
            for (int l = 0; l < N; ++l)
                if (l != n && l != m) acc *= (qp * z[n] - z[l]) / (z[n] - z[l]);
            return acc;
        };
        auto f = [&](int p) { return fnm(-1, p); };
        auto g = [&](int p) {
            cplx acc = 0;
            for (int k = 0; k < N; ++k)
                if (k != n) acc += fnm(k, p) * z[k] / ((z[n] - z[k]) * (z[n] - z[k]));
            return acc;
        };
        L(n, n) = sgn_s * W.bsum<cplx>(g, 2) - sgn_r * z[n] * W.asum<cplx>(g, 2) + sgn_r * W.asum<cplx>(f, 1);
        for (int m = 0; m < N; ++m) {
            if (m == n) continue;
            auto F = [&](int p) { return fnm(m, p); };
            const cplx d2 = (z[n] - z[m]) * (z[n] - z[m]);
            L(n, m) = -sgn_s * z[n] / d2 * W.bsum<cplx>(F, 2) + sgn_r * z[n] * z[n] / d2 * W.asum<cplx>(F, 2);
        }
    }
    return L;
}

CMat wilson_matrix(const CVec& x, const CVec& p) {
    const int N = int(x.size());
    CMat L(N, N);
    for (int n = 0; n < N; ++n) guard(x[n], 1.0, "x_n");
    for (int n = 0; n < N; ++n) {
        auto prod_excl = [&](cplx xn, int m) {
            cplx acc = 1;
            for (int l = 0; l < N; ++l)
                if (l != n && l != m) acc *= 1.0 - (1.0 + 2.0 * I * xn) / (x[n] * x[n] - x[l] * x[l]);
            return acc;
        };
        auto diag = [&](double sg) {
            const cplx xn = sg * x[n], D = kernels::wilson_D(xn, p), Dp = kernels::wilson_D_prime(xn, p);
            cplx v = (2.0 * D / (I * xn) + I * Dp) * prod_excl(xn, -1);
            for (int m = 0; m < N; ++m) {
                if (m == n) continue;
                const cplx d = x[n] * x[n] - x[m] * x[m];
                v += 2.0 * D * (I * xn - (x[n] * x[n] + x[m] * x[m])) / (d * d) * prod_excl(xn, m);
            }
            return v;
        };
        const cplx inv = 1.0 / (4.0 * x[n] * x[n]);
        L(n, n) = inv * (diag(1.0) + diag(-1.0));
        for (int m = 0; m < N; ++m) {
            if (m == n) continue;
            const cplx d = x[n] * x[n] - x[m] * x[m];
            guard(d, std::max(1.0, std::norm(x[n])), "x_n^2 - x_m^2");
            auto off = [&](double sg) {
                const cplx xn = sg * x[n], xm = sg * x[m];
                return 2.0 * kernels::wilson_D(xn, p) * I * xm * (1.0 + 2.0 * I * xn) / (d * d) * prod_excl(xn, m);
            };
            L(n, m) = -inv * (off(1.0) + off(-1.0));
        }
    }
    return L;
}

CMat racah_matrix(const CVec& y, const CVec& p) {
    const int N = int(y.size());
    CMat L(N, N);
    for (int n = 0; n < N; ++n) {
        guard(y[n], 1.0, "y_n");
        guard(2.0 * y[n] + 1.0, 1.0, "2 y_n + 1");
        guard(2.0 * y[n] - 1.0, 1.0, "2 y_n - 1");
    }
    auto Dt = [&](auto v) { return kernels::racah_Dt(v, p); };
    for (int n = 0; n < N; ++n) {
        auto prod_excl = [&](cplx yn, int m) {
            cplx acc = 1;
            for (int l = 0; l < N; ++l)
                if (l != n && l != m) acc *= 1.0 + (1.0 + 2.0 * yn) / (y[n] * y[n] - y[l] * y[l]);
            return acc;
        };
        auto diag = [&](double sg) {
            const cplx yn = sg * y[n], D = Dt(yn), Dp = kernels::dual_derivative(Dt, yn);
            cplx v = ((D / (yn * yn) - Dp / yn) * (1.0 + 2.0 * yn) - 2.0 * D / yn) * prod_excl(yn, -1);
            for (int m = 0; m < N; ++m) {
                if (m == n) continue;
                const cplx d = y[n] * y[n] - y[m] * y[m];
                v += 2.0 * D / yn * (1.0 + 2.0 * yn) * (y[n] * y[n] + y[m] * y[m] + yn) / (d * d) * prod_excl(yn, m);
            }
            return v;
        };
        L(n, n) = 0.5 * (diag(1.0) + diag(-1.0));
        for (int m = 0; m < N; ++m) {
            if (m == n) continue;
            const cplx d = y[n] * y[n] - y[m] * y[m];
            guard(d, std::max(1.0, std::norm(y[n])), "y_n^2 - y_m^2");
            auto off = [&](double sg) {
                const cplx yn = sg * y[n], ym = sg * y[m];
                return ym * Dt(yn) / yn * (1.0 + 2.0 * yn) * (1.0 + 2.0 * yn) * prod_excl(yn, m);
            };
            L(n, m) = -(off(1.0) + off(-1.0)) / (d * d);
        }
    }
    return L;
}

CMat aw_matrix(const CVec& zb, const CVec& p, cplx q) {
    const int N = int(zb.size());
    CVec zi(N);
    for (int n = 0; n < N; ++n) {
        guard(zb[n] * zb[n] - 1.0, 1.0, "z_n^2 - 1");
        guard(q * zb[n] * zb[n] - 1.0, 1.0, "q z_n^2 - 1");
        guard(zb[n] * zb[n] - q, 1.0, "z_n^2 - q");
        zi[n] = 1.0 / zb[n];
    }
    auto G = [&](auto v) { return kernels::aw_G(v, p, q); };
    const cplx pre = (q - 1.0) / (2.0 * std::pow(q, N));
    CMat L(N, N);
    for (int n = 0; n < N; ++n) {
        auto prodK = [&](const CVec& z) {
            cplx acc = 1;
            for (int l = 0; l < N; ++l)
                if (l != n) acc *= kernels::aw_K(z[n], z[l], q);
            return acc;
        };
        auto diag = [&](const CVec& z) {
            const cplx zn = z[n];
            cplx s = 0;
            for (int m = 0; m < N; ++m) {
                if (m == n) continue;
                const cplx zm = z[m];
                s += -q / (zm - q * zn) + q * zm / (q * zn * zm - 1.0) + 1.0 / (zm - zn) - zm / (zn * zm - 1.0);
            }
            const cplx w = 2.0 * zn * zn / (zn * zn - 1.0);
            return (w * G(zn) * s + w * kernels::dual_derivative(G, zn)) * prodK(z);
        };
        L(n, n) = pre * (diag(zb) + diag(zi));
        for (int m = 0; m < N; ++m) {
            if (m == n) continue;
            guard(zb[n] * zb[m] - 1.0, 1.0, "z_n z_m - 1");
            auto off = [&](const CVec& z) {
                const cplx zn = z[n], zm = z[m];
                return 2.0 * zm * zm / (zm * zm - 1.0) * G(zn) *
                       (1.0 / (zm - q * zn) + q * zn / (q * zn * zm - 1.0) - 1.0 / (zm - zn) - zn / (zn * zm - 1.0)) *
                       prodK(z);
            };
            L(n, m) = pre * (off(zb) + off(zi));
        }
    }
    return L;
}

CMat qracah_matrix(const CVec& z, const CVec& p, cplx q) {
    const int N = int(z.size());
    const cplx gd = p[2] * p[3];
    CMat L = CMat::Zero(N, N);
    for (int n = 0; n < N; ++n) {
        const cplx zn = z[n], Z = kernels::qracah_Z(zn, p, q), Z2 = Z * Z;
        guard(1.0 - gd * q * Z2, 1.0, "1 - gamma delta q Z^2");
        guard(1.0 - gd * q * q * Z2, 1.0, "1 - gamma delta q^2 Z^2");
        guard(1.0 - gd * Z2, 1.0, "1 - gamma delta Z^2");
        for (int sg : {+1, -1}) {
            auto F = [&](auto v) { return sg > 0 ? kernels::qracah_B(v, p, q) : kernels::qracah_D(v, p, q); };
            const cplx zs = kernels::qracah_shift(zn, sg, p, q);
            const cplx C = kernels::qracah_shift_slope(zn, sg, p, q);
            const cplx Fv = F(zn), Fp = kernels::dual_derivative(F, zn);
            cplx prod = 1, W = 0;
            for (int l = 0; l < N; ++l) {
                if (l == n) continue;
                prod *= (zs - z[l]) / (zn - z[l]);
                W += (C * (zn - z[l]) - zs + z[l]) / ((zn - z[l]) * (zs - z[l]));
            }
            L(n, n) += (Fp * (zs - zn) + Fv * (C - 1.0 + (zs - zn) * W)) * prod;
            for (int m = 0; m < N; ++m) {
                if (m == n) continue;
                cplx pm = 1;
                for (int l = 0; l < N; ++l)
                    if (l != n && l != m) pm *= (zs - z[l]) / (zn - z[l]);
                const cplx r = (zs - zn) / (zn - z[m]);
                L(n, m) += Fv * r * r * pm;
            }
        }
    }
    return L;
}

double relative(cplx a, cplx b, double fallback_scale) {
    const double den = std::abs(b) > 0 ? std::abs(b) : fallback_scale;
    return std::abs(a - b) / std::max(den, 1e-300);
}

}  // namespace

cplx sigma(const CVec& z, int n, int r, int rho) {
    require_distinct(z);
    cplx acc = 0;
    for (int l = 0; l < int(z.size()); ++l)
        if (l != n) acc += std::pow(z[l], r) / std::pow(z[n] - z[l], rho);
    return acc;
}

FGTable fg_tables(const CVec& z, int J) {
    if (J < 1) throw InvalidParameters("fg_tables: J must be >= 1");
    require_distinct(z);
    FGTable t;
    detail::fg_run(z, J, t.f, t.g);
    return t;
}

FGJacobian fg_jacobians(const CVec& z, int J) {
    if (J < 1) throw InvalidParameters("fg_jacobians: J must be >= 1");
    require_distinct(z);
    using D = Dual<cplx>;
    const int N = int(z.size());
    FGJacobian out;
    out.df.assign(J + 1, CMat::Zero(N, N));
    out.dg.assign(J + 1, CMat::Zero(N, N));
    std::vector<D> zd(N);
    std::vector<std::vector<D>> f, g;
    for (int m = 0; m < N; ++m) {
        for (int l = 0; l < N; ++l) zd[l] = D(z[l], l == m ? cplx(1) : cplx(0));
        detail::fg_run(zd, J, f, g);
        for (int j = 1; j <= J; ++j)
            for (int n = 0; n < N; ++n) out.df[j](n, m) = f[j][n].d;
        for (int j = 0; j <= J; ++j)
            for (int n = 0; n < N; ++n) out.dg[j](n, m) = g[j][n].d;
    }
    return out;
}

EigenMultiset closed_form_spectrum(const FamilySpec& s) {
    validate(s);
    EigenMultiset out;
    const int N = s.N;
    const auto& a = s.alphas;
    for (int m = 1; m <= N; ++m) {
        const double md = m;
        cplx lam;
        switch (s.family) {
            case Family::GHyp:
                lam = md;
                for (const auto& b : s.betas) lam *= b - 1.0 + md;
                break;
            case Family::GBasicHyp: {
                const cplx q = *s.q;
                const int sr = int(s.betas.size()) - int(a.size());
                lam = -std::pow(q, sr * (N - m)) * (std::pow(q, -m) - 1.0);
                for (const auto& al : a) lam *= al * std::pow(q, N - m) - 1.0;
                break;
            }
            case Family::Jacobi: lam = md * (md + a[0]); break;
            case Family::Wilson: lam = md * (2.0 * N - md + a[0] + a[1] + a[2] + a[3] - 1.0); break;
            case Family::Racah: lam = md * (md - 2.0 * N - a[0] - a[1] - 1.0); break;
            case Family::AskeyWilson: {
                const cplx q = *s.q;
                lam = std::pow(q, -N) * (1.0 - std::pow(q, m)) *
                      (1.0 - a[0] * a[1] * a[2] * a[3] * std::pow(q, 2 * N - 1 - m));
                break;
            }
            case Family::QRacah: {
                const cplx q = *s.q;
                lam = std::pow(q, -N) * (1.0 - std::pow(q, m)) * (1.0 - a[0] * a[1] * std::pow(q, 2 * N - m + 1));
                break;
            }
        }
        out.values.push_back(lam);
    }
    return out;
}

CMat matrix_from_lifted(const FamilySpec& s, const CVec& lifted) {
    switch (s.family) {
        case Family::Wilson: return wilson_matrix(lifted, s.alphas);
        case Family::Racah: return racah_matrix(lifted, s.alphas);
        case Family::AskeyWilson: return aw_matrix(lifted, s.alphas, *s.q);
        default: throw InvalidParameters("matrix_from_lifted: no lifted form for " + family_name(s.family));
    }
}

IsospectralMatrix build_matrix(const FamilySpec& spec0, const ZeroSet& zs, const BuildOptions& opts) {
    const FamilySpec s = padded(spec0, opts);
    validate(s);
    if (int(zs.zeros.size()) != s.N)
        throw CardinalityMismatch("build_matrix: expected " + std::to_string(s.N) + " zeros");
    require_distinct(zs.zeros);
    IsospectralMatrix out;
    switch (s.family) {
        case Family::GHyp:
            if (s.alphas.size() == 1 && s.betas.size() == 1 && !opts.force_recursion)
                out.L = ghyp_explicit(zs.zeros, s.betas[0]);
            else
                out.L = ghyp_general(zs.zeros, s);
            break;
        case Family::Jacobi: out.L = jacobi_matrix(zs.zeros, s.alphas[0]); break;
        case Family::GBasicHyp: out.L = gbasic_matrix(zs.zeros, s); break;
        case Family::Wilson:
        case Family::Racah:
        case Family::AskeyWilson: out.L = matrix_from_lifted(s, lift_zero_variables(s, zs).primary); break;
        case Family::QRacah: out.L = qracah_matrix(zs.zeros, s.alphas, *s.q); break;
    }
    if (!out.L.allFinite()) throw SingularDenominator("build_matrix: non-finite matrix entry");
    out.reference = closed_form_spectrum(s);
    return out;
}

void check_matrix(IsospectralMatrix& m, const MatrixTolerances& tol) {
    m.computed = matrix_eigenvalues(m.L);
    m.spectral_residual = multiset_match(m.computed, m.reference);
    cplx sum = 0, prod = 1;
    double amax = 0;
    for (const auto& v : m.reference.values) {
        sum += v;
        prod *= v;
        amax = std::max(amax, std::abs(v));
    }
    m.trace_residual = relative(m.L.trace(), sum, amax);
    const cplx det = m.L.rows() == 1 ? m.L(0, 0) : cplx(m.L.partialPivLu().determinant());
    m.det_residual = relative(det, prod, std::pow(std::max(1.0, amax), double(m.L.rows())));
    m.pass = m.spectral_residual <= tol.spectral && m.trace_residual <= tol.trace && m.det_residual <= tol.det;
}

IsospectralMatrix verify_matrix(const FamilySpec& spec, const BuildOptions& opts, const MatrixTolerances& tol) {
    IsospectralMatrix m = build_matrix(spec, compute_zeros(spec), opts);
    check_matrix(m, tol);
    return m;
}

CVec identity_residual(const FamilySpec& s, const ZeroSet& zs) {
    validate(s);
    require_distinct(zs.zeros);
    const auto& z = zs.zeros;
    const int N = int(z.size());
    CVec out(N);
    switch (s.family) {
        case Family::GHyp:
        case Family::Jacobi: {
            CVec w = z;
            HypCoeffs c;
            if (s.family == Family::GHyp) {
                c = elementary_coeffs_hyp(s.alphas, s.betas);
            } else {
                // P_N^(a,b)(x) is proportional to (1-x)^N P_N(N+a+b+1; a+1; 2/(1-x)).
                for (auto& v : w) {
                    guard(1.0 - v, 1.0, "1 - x_n");
                    v = 2.0 / (1.0 - v);
                }
                c = elementary_coeffs_hyp({double(s.N) + s.alphas[0] + s.alphas[1] + 1.0}, {s.alphas[0] + 1.0});
            }
            std::vector<double> sc;
            const CVec v = detail::ghyp_rhs(w, c, &sc);
            for (int n = 0; n < N; ++n) out[n] = sc[n] > 0 ? v[n] / sc[n] : v[n];
            break;
        }
        case Family::GBasicHyp: {
            const auto W = detail::basic_weights(s.alphas, s.betas, *s.q, s.N);
            const cplx q = *s.q;
            const int r = W.r, sN = W.s;
            const double sgn_rs = (r - sN) % 2 ? -1.0 : 1.0;
            const cplx qN = std::pow(q, -s.N);
            for (int n = 0; n < N; ++n) {
                auto pr = [&](int p) {
                    cplx acc = 1;
                    const cplx zp = z[n] * std::pow(q, p);
                    for (int m = 0; m < N; ++m) acc *= zp - z[m];
                    return acc;
                };
                cplx v = 0;
                double sc = 0;
                auto add = [&](cplx t) {
                    v += t;
                    sc += std::abs(t);
                };
                add(-pr(1));
                for (int k = 1; k <= sN; ++k) {
                    const cplx c = std::pow(-q, -k) * W.c.b[k];
                    add(c * pr(k));
                    add(-c * pr(k + 1));
                }
                const cplx pre = -sgn_rs * z[n];
                add(pre * pr(sN - r));
                add(-pre * qN * pr(sN - r + 1));
                for (int j = 1; j <= r; ++j) {
                    const cplx c = std::pow(-1.0, j) * W.c.a[j];
                    if (j != r - sN) add(pre * c * pr(sN - r + j));
                    if (j != r - sN - 1) add(-pre * qN * c * pr(sN - r + j + 1));
                }
                out[n] = sc > 0 ? v / sc : v;
            }
            break;
        }
        default: out = equilibrium_components(s, zs); break;
    }
    return out;
}

}  // namespace isospectra
