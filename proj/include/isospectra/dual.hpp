#pragma once

// Forward-mode dual numbers over complex scalars: one derivative direction.

#include <complex>

namespace isospectra {

template <class T>
struct Dual {
    T v{};
    T d{};

    Dual() = default;
    Dual(const T& value) : v(value) {}
    Dual(double value) : v(value) {}
    Dual(const T& value, const T& deriv) : v(value), d(deriv) {}

    Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
    Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
    Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
    Dual& operator/=(const Dual& o) {
        T inv = T(1) / o.v;
        d = (d - v * inv * o.d) * inv;
        v *= inv;
        return *this;
    }
};

template <class T> Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }

template <class T> Dual<T> operator+(Dual<T> a, const Dual<T>& b) { return a += b; }
template <class T> Dual<T> operator-(Dual<T> a, const Dual<T>& b) { return a -= b; }
template <class T> Dual<T> operator*(Dual<T> a, const Dual<T>& b) { return a *= b; }
template <class T> Dual<T> operator/(Dual<T> a, const Dual<T>& b) { return a /= b; }

template <class T> Dual<T> operator+(Dual<T> a, const T& b) { a.v += b; return a; }
template <class T> Dual<T> operator+(const T& b, Dual<T> a) { a.v += b; return a; }
template <class T> Dual<T> operator-(Dual<T> a, const T& b) { a.v -= b; return a; }
template <class T> Dual<T> operator-(const T& b, const Dual<T>& a) { return {b - a.v, -a.d}; }
template <class T> Dual<T> operator*(const Dual<T>& a, const T& b) { return {a.v * b, a.d * b}; }
template <class T> Dual<T> operator*(const T& b, const Dual<T>& a) { return {a.v * b, a.d * b}; }
template <class T> Dual<T> operator/(const Dual<T>& a, const T& b) { return {a.v / b, a.d / b}; }
template <class T> Dual<T> operator/(const T& b, const Dual<T>& a) { return Dual<T>(b) / a; }

template <class T> Dual<T> operator+(Dual<T> a, double b) { a.v += b; return a; }
template <class T> Dual<T> operator+(double b, Dual<T> a) { a.v += b; return a; }
template <class T> Dual<T> operator-(Dual<T> a, double b) { a.v -= b; return a; }
template <class T> Dual<T> operator-(double b, const Dual<T>& a) { return {T(b) - a.v, -a.d}; }
template <class T> Dual<T> operator*(const Dual<T>& a, double b) { return {a.v * b, a.d * b}; }
template <class T> Dual<T> operator*(double b, const Dual<T>& a) { return {a.v * b, a.d * b}; }
template <class T> Dual<T> operator/(const Dual<T>& a, double b) { return {a.v / b, a.d / b}; }
template <class T> Dual<T> operator/(double b, const Dual<T>& a) { return Dual<T>(T(b)) / a; }

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
    using std::sqrt;
    T r = sqrt(a.v);
    return {r, a.d / (T(2) * r)};
}

// Value part, usable on plain scalars as well.
template <class T> const T& value_of(const Dual<T>& a) { return a.v; }
inline const std::complex<double>& value_of(const std::complex<double>& a) { return a; }

}  // namespace isospectra
