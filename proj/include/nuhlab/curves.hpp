#pragma once

#include <vector>

#include "nuhlab/cones.hpp"
#include "nuhlab/geometry.hpp"
#include "nuhlab/torus_map.hpp"

namespace nuhlab {

/// A discretized cu-curve, kept in lift coordinates so arclength is
/// well defined across wrap boundaries.
struct Curve {
  std::vector<Vec2> vertices;

  double arclength() const;
  /// cumulative arclength of each vertex from vertices[0]
  std::vector<double> arc_coords() const;
};

/// Straight segment of half-length h around p along unit direction v,
/// with 2*half_count + 1 vertices.
Curve straight_segment(const TorusPoint& p, const Vec2& v, double h,
                       int half_count);

/// One noisy step applied to every vertex through the continuous lift.
Curve iterate_curve(const TorusMap& map, const Curve& c, const Vec2& noise);

/// Re-discretize to vertex spacing <= spacing (linear interpolation).
Curve resample(const Curve& c, double spacing);

/// Keep only the part within arclength <= window of the vertex closest to
/// the given arc coordinate; returns the trimmed curve.
Curve truncate_around(const Curve& c, double center_arc, double window);

struct CurvatureReport {
  double holder_exponent = 0.5;
  double kappa = 0.0;     // estimated Hoelder curvature constant
  double c1_bound = 0.0;  // calibration bound the curve was compared against
};

/// Discrete Hoelder curvature: max over vertex pairs within the chart
/// radius of |tan(angle between tangents)| / dist^zeta. Tangents must stay
/// inside the cu cone.
CurvatureReport holder_constant(const Curve& curve, double zeta,
                                const ConeParams& cone,
                                double chart_radius = 0.1);

}  // namespace nuhlab
