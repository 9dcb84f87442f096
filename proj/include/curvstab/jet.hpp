#ifndef CURVSTAB_JET_HPP
#define CURVSTAB_JET_HPP

#include <Eigen/Dense>
#include <cmath>

namespace curvstab {

// Order-2 truncated Taylor jet in d variables: value, gradient, Hessian.
// Carries exact first and second derivatives through chart metric formulas
// so no spatial finite differences are ever taken.
struct Jet2 {
  double v = 0.0;
  Eigen::VectorXd g;
  Eigen::MatrixXd h;

  Jet2() = default;
  explicit Jet2(int dim) : v(0.0), g(Eigen::VectorXd::Zero(dim)), h(Eigen::MatrixXd::Zero(dim, dim)) {}
  Jet2(double value, int dim) : v(value), g(Eigen::VectorXd::Zero(dim)), h(Eigen::MatrixXd::Zero(dim, dim)) {}

  int dim() const { return static_cast<int>(g.size()); }

  static Jet2 constant(double c, int dim) { return Jet2(c, dim); }
  static Jet2 variable(double value, int index, int dim) {
    Jet2 j(value, dim);
    j.g(index) = 1.0;
    return j;
  }

  Jet2 operator-() const {
    Jet2 r = *this;
    r.v = -r.v; r.g = -r.g; r.h = -r.h;
    return r;
  }
};

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  Jet2 r = a; r.v += b.v; r.g += b.g; r.h += b.h; return r;
}
inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  Jet2 r = a; r.v -= b.v; r.g -= b.g; r.h -= b.h; return r;
}
inline Jet2 operator+(const Jet2& a, double c) { Jet2 r = a; r.v += c; return r; }
inline Jet2 operator+(double c, const Jet2& a) { return a + c; }
inline Jet2 operator-(const Jet2& a, double c) { Jet2 r = a; r.v -= c; return r; }
inline Jet2 operator-(double c, const Jet2& a) { return (-a) + c; }

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r(a.dim());
  r.v = a.v * b.v;
  r.g = a.v * b.g + b.v * a.g;
  r.h = a.v * b.h + b.v * a.h + a.g * b.g.transpose() + b.g * a.g.transpose();
  return r;
}
inline Jet2 operator*(const Jet2& a, double c) {
  Jet2 r = a; r.v *= c; r.g *= c; r.h *= c; return r;
}
inline Jet2 operator*(double c, const Jet2& a) { return a * c; }

// f(u) with chain rule through second order.
inline Jet2 apply_unary(const Jet2& u, double f, double df, double d2f) {
  Jet2 r(u.dim());
  r.v = f;
  r.g = df * u.g;
  r.h = df * u.h + d2f * u.g * u.g.transpose();
  return r;
}

inline Jet2 sin(const Jet2& u) { return apply_unary(u, std::sin(u.v), std::cos(u.v), -std::sin(u.v)); }
inline Jet2 cos(const Jet2& u) { return apply_unary(u, std::cos(u.v), -std::sin(u.v), -std::cos(u.v)); }
inline Jet2 exp(const Jet2& u) { const double e = std::exp(u.v); return apply_unary(u, e, e, e); }
inline Jet2 sqrt(const Jet2& u) {
  const double s = std::sqrt(u.v);
  return apply_unary(u, s, 0.5 / s, -0.25 / (s * u.v));
}
inline Jet2 inverse(const Jet2& u) {
  const double iv = 1.0 / u.v;
  return apply_unary(u, iv, -iv * iv, 2.0 * iv * iv * iv);
}
inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * inverse(b); }
inline Jet2 operator/(const Jet2& a, double c) { return a * (1.0 / c); }
inline Jet2 operator/(double c, const Jet2& a) { return inverse(a) * c; }

inline Jet2 pow_int(const Jet2& u, int k) {
  Jet2 r = Jet2::constant(1.0, u.dim());
  for (int i = 0; i < k; ++i) r = r * u;
  return r;
}

} // namespace curvstab

#endif
