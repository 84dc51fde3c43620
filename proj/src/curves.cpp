#include "nuhlab/curves.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nuhlab {

double Curve::arclength() const {
  double len = 0.0;
  for (size_t i = 1; i < vertices.size(); ++i)
    len += (vertices[i] - vertices[i - 1]).norm();
  return len;
}

std::vector<double> Curve::arc_coords() const {
  std::vector<double> arc(vertices.size(), 0.0);
  for (size_t i = 1; i < vertices.size(); ++i)
    arc[i] = arc[i - 1] + (vertices[i] - vertices[i - 1]).norm();
  return arc;
}

Curve straight_segment(const TorusPoint& p, const Vec2& v, double h,
                       int half_count) {
  Curve c;
  const Vec2 base = as_vec(p);
  const Vec2 dir = v.normalized();
  c.vertices.reserve(2 * half_count + 1);
  for (int i = -half_count; i <= half_count; ++i)
    c.vertices.push_back(base + (h * double(i) / half_count) * dir);
  return c;
}

Curve iterate_curve(const TorusMap& map, const Curve& c, const Vec2& noise) {
  Curve out;
  out.vertices.reserve(c.vertices.size());
  for (const Vec2& v : c.vertices)
    out.vertices.push_back(map.apply_lift(v) + noise);
  return out;
}

Curve resample(const Curve& c, double spacing) {
  if (spacing <= 0.0) throw std::invalid_argument("spacing must be positive");
  Curve out;
  if (c.vertices.empty()) return out;
  out.vertices.push_back(c.vertices.front());
  for (size_t i = 1; i < c.vertices.size(); ++i) {
    const Vec2 a = c.vertices[i - 1], b = c.vertices[i];
    const double len = (b - a).norm();
    const int pieces = std::max(1, int(std::ceil(len / spacing)));
    for (int k = 1; k <= pieces; ++k)
      out.vertices.push_back(a + (double(k) / pieces) * (b - a));
  }
  return out;
}

Curve truncate_around(const Curve& c, double center_arc, double window) {
  const auto arc = c.arc_coords();
  Curve out;
  for (size_t i = 0; i < c.vertices.size(); ++i)
    if (std::abs(arc[i] - center_arc) <= window)
      out.vertices.push_back(c.vertices[i]);
  return out;
}

CurvatureReport holder_constant(const Curve& curve, double zeta,
                                const ConeParams& cone, double chart_radius) {
  const size_t m = curve.vertices.size();
  if (m < 3) throw std::invalid_argument("curve needs at least 3 vertices");

  // chord tangents, attributed to segment midpoints
  std::vector<Vec2> tang(m - 1);
  std::vector<double> tarc(m - 1);
  const auto arc = curve.arc_coords();
  for (size_t i = 0; i + 1 < m; ++i) {
    const Vec2 d = curve.vertices[i + 1] - curve.vertices[i];
    if (d.norm() == 0.0)
      throw std::domain_error("degenerate curve segment");
    tang[i] = d.normalized();
    if (!in_cone(tang[i], cone, ConeKind::Cu))
      throw std::domain_error("curve tangent outside the cu cone");
    tarc[i] = 0.5 * (arc[i] + arc[i + 1]);
  }

  CurvatureReport rep;
  rep.holder_exponent = zeta;
  for (size_t i = 0; i < tang.size(); ++i) {
    for (size_t j = i + 1; j < tang.size(); ++j) {
      const double d = tarc[j] - tarc[i];
      if (d <= 0.0 || d > chart_radius) continue;
      // slope of the tangent at j over the splitting carried by the
      // tangent at i; in 2D a scalar: tan of the angle between them
      const double cosang =
          std::clamp(tang[i].dot(tang[j]), -1.0, 1.0);
      const double slope = std::abs(std::tan(std::acos(std::abs(cosang))));
      rep.kappa = std::max(rep.kappa, slope / std::pow(d, zeta));
    }
  }
  return rep;
}

}  // namespace nuhlab
