#ifndef CCALE_VEC2_HPP
#define CCALE_VEC2_HPP

#include <array>
#include <cmath>
#include <numbers>

namespace ccale {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
  constexpr Vec2& operator/=(double s) { x /= s; y /= s; return *this; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
constexpr Vec2 operator/(Vec2 a, double s) { return a /= s; }

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
/// z-component of the 3D cross product.
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
constexpr double norm2(const Vec2& a) { return dot(a, a); }
/// Rotates by -pi/2: for a counterclockwise edge direction this is the outward normal.
constexpr Vec2 perp_right(const Vec2& a) { return {a.y, -a.x}; }
inline Vec2 unit_from_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// Symmetric-capable 2x2 matrix, row-major.
struct Mat2 {
  double a = 0.0, b = 0.0;
  double c = 0.0, d = 0.0;

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 outer(const Vec2& u, const Vec2& v) { return {u.x * v.x, u.x * v.y, u.y * v.x, u.y * v.y}; }
  /// Matrix whose columns are u and v.
  static constexpr Mat2 columns(const Vec2& u, const Vec2& v) { return {u.x, v.x, u.y, v.y}; }

  constexpr Mat2& operator+=(const Mat2& o) { a += o.a; b += o.b; c += o.c; d += o.d; return *this; }
  constexpr Mat2& operator-=(const Mat2& o) { a -= o.a; b -= o.b; c -= o.c; d -= o.d; return *this; }
  constexpr Mat2& operator*=(double s) { a *= s; b *= s; c *= s; d *= s; return *this; }

  constexpr double det() const { return a * d - b * c; }
  constexpr double trace() const { return a + d; }
  constexpr Mat2 transpose() const { return {a, c, b, d}; }
  constexpr Mat2 inverse() const {
    const double k = 1.0 / det();
    return {d * k, -b * k, -c * k, a * k};
  }
  double frobenius() const { return std::sqrt(a * a + b * b + c * c + d * d); }
};

constexpr Mat2 operator+(Mat2 m, const Mat2& o) { return m += o; }
constexpr Mat2 operator-(Mat2 m, const Mat2& o) { return m -= o; }
constexpr Mat2 operator*(Mat2 m, double s) { return m *= s; }
constexpr Mat2 operator*(double s, Mat2 m) { return m *= s; }
constexpr Vec2 operator*(const Mat2& m, const Vec2& v) { return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y}; }
constexpr Mat2 operator*(const Mat2& m, const Mat2& n) {
  return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}

/// Eigenvalues of a symmetric matrix, ascending.
inline std::array<double, 2> symmetric_eigenvalues(const Mat2& m) {
  const double mean = 0.5 * (m.a + m.d);
  const double off = 0.5 * (m.b + m.c);
  const double r = std::hypot(0.5 * (m.a - m.d), off);
  return {mean - r, mean + r};
}

/// Geometry switch: planar (alpha = 0) or axisymmetric about the X axis (alpha = 1).
enum class Geometry : int { planar = 0, axisymmetric = 1 };

constexpr double alpha_of(Geometry g) { return g == Geometry::axisymmetric ? 1.0 : 0.0; }

/// Pseudo-radius R = 1 - alpha + alpha*Y.
constexpr double pseudo_radius(Geometry g, double y) {
  const double a = alpha_of(g);
  return 1.0 - a + a * y;
}

}  // namespace ccale

#endif  // CCALE_VEC2_HPP
