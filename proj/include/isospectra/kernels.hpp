#pragma once

// Coefficient functions of the difference operators, templated so the same code
// runs on plain complex values and on dual numbers.

#include "isospectra/dual.hpp"
#include "isospectra/numeric_core.hpp"

namespace isospectra::kernels {

inline const cplx I{0.0, 1.0};

/// (a + i x)(b + i x)(c + i x)(d + i x).
template <class S>
S wilson_D(const S& x, const CVec& abcd) {
    S r(1.0);
    for (const auto& p : abcd) r = r * (I * x + p);
    return r;
}

/// Closed-form derivative of wilson_D through the elementary symmetric functions.
inline cplx wilson_D_prime(cplx x, const CVec& p) {
    const cplx a = p[0], b = p[1], c = p[2], d = p[3];
    const cplx e1 = a + b + c + d;
    const cplx e2 = a * b + a * c + a * d + b * c + b * d + c * d;
    const cplx e3 = a * b * c + a * b * d + a * c * d + b * c * d;
    return I * e3 - 2.0 * e2 * x - 3.0 * I * e1 * x * x + 4.0 * x * x * x;
}

template <class S>
S wilson_B(const S& x, const CVec& abcd) {
    return wilson_D(x, abcd) / ((2.0 * I) * x * ((2.0 * I) * x + 1.0));
}

/// Racah coefficient with parameters (alpha, beta, gamma, delta).
template <class S>
S racah_Dt(const S& y, const CVec& p) {
    const cplx al = p[0], be = p[1], ga = p[2], de = p[3];
    S y2 = 2.0 * y;
    return (y2 + (ga + de + 1.0)) * (y2 + (ga - de + 1.0)) * (y2 + (2.0 * al - ga - de + 1.0)) *
           (y2 + (2.0 * be - ga + de + 1.0)) / (32.0 * y * (y2 + 1.0));
}

/// Askey-Wilson coefficient D(z) = prod(1 - a z) / ((1 - z^2)(1 - q z^2)).
template <class S>
S aw_D(const S& z, const CVec& abcd, cplx q) {
    S num(1.0);
    for (const auto& p : abcd) num = num * (1.0 - p * z);
    S z2 = z * z;
    return num / ((1.0 - z2) * (1.0 - q * z2));
}

template <class S>
S aw_G(const S& z, const CVec& abcd, cplx q) {
    return aw_D(z, abcd, q) * (q * z - 1.0 / z);
}

template <class S>
S aw_K(const S& zn, const S& zm, cplx q) {
    return (zm - q * zn) * (q * zn * zm - 1.0) / ((zm - zn) * (zn * zm - 1.0));
}

/// z + sqrt(z^2 - 1), principal branch.
template <class S>
S aw_lift(const S& x) {
    using std::sqrt;
    return x + sqrt(x * x - 1.0);
}

// q-Racah, parameters (alpha, beta, gamma, delta).

template <class S>
S qracah_root(const S& z, const CVec& p, cplx q) {
    using std::sqrt;
    return sqrt(z * z - 4.0 * p[2] * p[3] * q);
}

template <class S>
S qracah_Z(const S& z, const CVec& p, cplx q) {
    return (z + qracah_root(z, p, q)) / (2.0 * p[2] * p[3] * q);
}

template <class S>
S qracah_B(const S& z, const CVec& p, cplx q) {
    const cplx al = p[0], be = p[1], ga = p[2], de = p[3];
    S Z = qracah_Z(z, p, q);
    S Z2 = Z * Z;
    return (1.0 - al * q * Z) * (1.0 - be * de * q * Z) * (1.0 - ga * q * Z) * (1.0 - ga * de * q * Z) /
           ((1.0 - ga * de * q * Z2) * (1.0 - ga * de * q * q * Z2));
}

template <class S>
S qracah_D(const S& z, const CVec& p, cplx q) {
    const cplx al = p[0], be = p[1], ga = p[2], de = p[3];
    S Z = qracah_Z(z, p, q);
    S Z2 = Z * Z;
    return q * (1.0 - Z) * (1.0 - de * Z) * (be - ga * Z) * (al - ga * de * Z) /
           ((1.0 - ga * de * Z2) * (1.0 - ga * de * q * Z2));
}

/// z^(s) for s = +1 or -1.
template <class S>
S qracah_shift(const S& z, int s, const CVec& p, cplx q) {
    const cplx qs = s > 0 ? q : 1.0 / q;
    return qs * z + double(s) * ((1.0 - q * q) / (2.0 * q)) * (z - qracah_root(z, p, q));
}

/// d z^(s) / dz.
inline cplx qracah_shift_slope(cplx z, int s, const CVec& p, cplx q) {
    const cplx qs = s > 0 ? q : 1.0 / q;
    return qs + double(s) * ((1.0 - q * q) / (2.0 * q)) * (1.0 - z / qracah_root(z, p, q));
}

/// Derivative of a scalar function through one dual pass.
template <class F>
cplx dual_derivative(F&& f, cplx at) {
    Dual<cplx> x(at, cplx(1));
    return f(x).d;
}

}  // namespace isospectra::kernels
