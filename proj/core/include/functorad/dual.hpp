#pragma once

#include <cmath>

namespace functorad {

/// First-order truncated jet a + b*eps with eps^2 = 0. Nesting
/// Dual<Dual<double>> carries two independent infinitesimals, which is
/// what the second tangent map needs.
///
/// The value part of every operation is computed exactly as the plain
/// double operation would be, so projecting a jet back to its value is
/// bit-identical to evaluating without derivatives.
template <class T>
struct Dual {
  T v{};
  T d{};

  Dual() = default;
  Dual(T value, T deriv) : v(value), d(deriv) {}
  explicit Dual(double c) : v(c), d(0.0) {}
};

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <class T>
Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }
template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d};
}
template <class T>
Dual<T> operator*(double s, const Dual<T>& a) { return {s * a.v, s * a.d}; }

inline double primal(double x) { return x; }
template <class T>
double primal(const Dual<T>& a) { return primal(a.v); }

inline double recip(double x) { return 1.0 / x; }
template <class T>
Dual<T> recip(const Dual<T>& a) {
  const T r = recip(a.v);
  return {r, -1.0 * (a.d * (r * r))};
}

using std::exp;
using std::sqrt;

// Out of line so the compiler cannot merge a sin/cos pair into sincos,
// whose last bit may differ from a lone sin.
double sin_of(double x);
double cos_of(double x);

template <class T>
Dual<T> sin_of(const Dual<T>& a) { return {sin_of(a.v), a.d * cos_of(a.v)}; }
template <class T>
Dual<T> cos_of(const Dual<T>& a) { return {cos_of(a.v), -1.0 * (a.d * sin_of(a.v))}; }
template <class T>
Dual<T> exp(const Dual<T>& a) {
  const T e = exp(a.v);
  return {e, a.d * e};
}
/// Undefined at 0; callers guard against that.
template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  const T s = sqrt(a.v);
  return {s, a.d * recip(2.0 * s)};
}

}  // namespace functorad
