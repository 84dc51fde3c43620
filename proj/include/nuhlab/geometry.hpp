#pragma once

#include <cmath>
#include <stdexcept>

namespace nuhlab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double c) const { return {c * x, c * y}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  Vec2 normalized() const {
    const double n = norm();
    if (n == 0.0) throw std::domain_error("cannot normalize zero vector");
    return {x / n, y / n};
  }
};

inline Vec2 operator*(double c, const Vec2& v) { return v * c; }

struct Mat2 {
  double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;

  Vec2 operator*(const Vec2& v) const {
    return {m11 * v.x + m12 * v.y, m21 * v.x + m22 * v.y};
  }
  Mat2 operator*(const Mat2& o) const {
    return {m11 * o.m11 + m12 * o.m21, m11 * o.m12 + m12 * o.m22,
            m21 * o.m11 + m22 * o.m21, m21 * o.m12 + m22 * o.m22};
  }
  double det() const { return m11 * m22 - m12 * m21; }
  Mat2 inverse() const {
    const double d = det();
    if (d == 0.0) throw std::domain_error("singular 2x2 matrix");
    return {m22 / d, -m12 / d, -m21 / d, m11 / d};
  }
  Vec2 solve(const Vec2& b) const { return inverse() * b; }
};

/// A point on the 2-torus; coordinates always in [0,1).
struct TorusPoint {
  double x = 0.0;
  double y = 0.0;
};

inline double wrap1(double v) {
  double r = v - std::floor(v);
  if (r >= 1.0) r = 0.0;  // guards against floor rounding at tiny negatives
  return r;
}

/// Canonical projection R^2 -> T^2.
inline TorusPoint wrap(const Vec2& p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y))
    throw std::domain_error("wrap: non-finite coordinates");
  return {wrap1(p.x), wrap1(p.y)};
}

inline Vec2 as_vec(const TorusPoint& p) { return {p.x, p.y}; }

/// Representative of a - b with both components in [-1/2, 1/2).
inline Vec2 torus_displacement(const TorusPoint& a, const TorusPoint& b) {
  auto comp = [](double d) { return d - std::floor(d + 0.5); };
  return {comp(a.x - b.x), comp(a.y - b.y)};
}

inline double torus_dist(const TorusPoint& a, const TorusPoint& b) {
  return torus_displacement(a, b).norm();
}

}  // namespace nuhlab
