#include "nuhlab/cones.hpp"

#include <cmath>
#include <stdexcept>

namespace nuhlab {

ConeParams ConeParams::for_map(const TorusMap& map, double width,
                               double lambda) {
  if (!(width > 0.0 && width < 1.0))
    throw std::invalid_argument("cone width must lie in (0,1)");
  return {width, map.e_u(), map.e_s(), lambda};
}

bool in_cone(const Vec2& v, const ConeParams& cone, ConeKind which) {
  if (v.norm() == 0.0) throw std::domain_error("in_cone: zero vector");
  const Mat2 basis{cone.e_s.x, cone.e_u.x, cone.e_s.y, cone.e_u.y};
  const Vec2 c = basis.solve(v);  // (e_s component, e_u component)
  if (which == ConeKind::Cu) return std::abs(c.x) <= cone.width * std::abs(c.y);
  return std::abs(c.y) <= cone.width * std::abs(c.x);
}

std::vector<ConeViolation> check_cone_invariance(const TorusMap& map,
                                                 const ConeParams& cone,
                                                 double noise_radius,
                                                 int samples, RngStream& rng) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  std::vector<ConeViolation> violations;
  const NoiseModel noise{noise_radius};
  for (int s = 0; s < samples; ++s) {
    const TorusPoint x = random_point(rng);
    const Vec2 t = sample_noise(noise, rng);
    // Additive noise leaves Df unchanged; the translated image only matters
    // because cones are base-point independent here.
    const Mat2 J = map.jacobian(x);
    const Mat2 Jinv = J.inverse();
    bool cu_ok = true, cs_ok = true;
    for (const double sgn : {1.0, -1.0}) {
      if (!in_cone(J * (cone.e_u + sgn * cone.width * cone.e_s), cone,
                   ConeKind::Cu))
        cu_ok = false;
      if (!in_cone(Jinv * (cone.e_s + sgn * cone.width * cone.e_u), cone,
                   ConeKind::Cs))
        cs_ok = false;
    }
    if (!cu_ok) violations.push_back({x, t, ConeKind::Cu});
    if (!cs_ok) violations.push_back({x, t, ConeKind::Cs});
  }
  return violations;
}

namespace {

double angle_between(const Vec2& a, const Vec2& b) {
  // directions are sign-free; fold into [0, pi/2]
  const double c = std::abs(a.dot(b)) / (a.norm() * b.norm());
  return std::acos(std::min(1.0, c));
}

}  // namespace

DirectionEstimate estimate_direction(const TorusMap& map,
                                     const RandomOrbit& orbit, int index,
                                     int settle) {
  const int n = int(orbit.points.size()) - 1;
  if (index - settle < 0 || index + settle > n)
    throw std::out_of_range("estimate_direction: settle exceeds orbit bounds");

  DirectionEstimate est;
  est.at = orbit.points[index];
  est.settle_steps = settle;

  Vec2 v = map.e_u();
  Vec2 prev = v;
  for (int j = index - settle; j < index; ++j) {
    prev = v;
    v = (map.jacobian(orbit.points[j]) * v).normalized();
  }
  est.v_cu = v;
  double res_cu = settle > 0 ? angle_between(v, prev) : 0.0;

  Vec2 w = map.e_s();
  Vec2 prev_w = w;
  for (int j = index + settle; j > index; --j) {
    prev_w = w;
    w = map.jacobian(orbit.points[j - 1]).solve(w).normalized();
  }
  est.v_cs = w;
  const double res_cs = settle > 0 ? angle_between(w, prev_w) : 0.0;
  est.residual = std::max(res_cu, res_cs);
  return est;
}

double domination_gap(const TorusMap& map, const DirectionEstimate& dir) {
  const Mat2 J = map.jacobian(dir.at);
  return (J * dir.v_cs).norm() / (J * dir.v_cu).norm();
}

CocycleTrace cocycle_log_norms(const TorusMap& map, const RandomOrbit& orbit,
                               int settle) {
  const int n = int(orbit.points.size()) - 1;
  if (n <= settle)
    throw std::invalid_argument("cocycle_log_norms: orbit shorter than settle");

  CocycleTrace trace;
  trace.start_index = settle;
  Vec2 v = map.e_u();
  for (int j = 0; j < settle; ++j)
    v = (map.jacobian(orbit.points[j]) * v).normalized();
  trace.values.reserve(n - settle);
  trace.directions.reserve(n - settle);
  for (int j = settle; j < n; ++j) {
    const Vec2 w = map.jacobian(orbit.points[j]) * v;
    const double nw = w.norm();
    trace.values.push_back(-std::log(nw));
    trace.directions.push_back(v);
    v = w * (1.0 / nw);
  }
  return trace;
}

}  // namespace nuhlab
