#pragma once

#include <vector>

#include "nuhlab/geometry.hpp"
#include "nuhlab/noise.hpp"
#include "nuhlab/torus_map.hpp"

namespace nuhlab {

enum class ConeKind { Cu, Cs };

/// Cone fields of width `width` around the reference splitting (e_s, e_u).
struct ConeParams {
  double width = 0.2;
  Vec2 e_u;
  Vec2 e_s;
  double lambda = 0.5;  // domination constant

  static ConeParams for_map(const TorusMap& map, double width, double lambda);
};

/// Membership test: v = v1 e_s + v2 e_u lies in the cu cone iff
/// |v1| <= width |v2| (roles swapped for cs). Boundary inclusive.
bool in_cone(const Vec2& v, const ConeParams& cone, ConeKind which);

struct ConeViolation {
  TorusPoint at;
  Vec2 noise;
  ConeKind which;
};

/// Random scan of cone invariance: the extremal boundary vectors of the cu
/// cone must map into the cu cone under Df, the cs boundary under Df^{-1}.
std::vector<ConeViolation> check_cone_invariance(const TorusMap& map,
                                                 const ConeParams& cone,
                                                 double noise_radius,
                                                 int samples, RngStream& rng);

struct DirectionEstimate {
  TorusPoint at;
  Vec2 v_cu;
  Vec2 v_cs;
  int settle_steps = 0;
  double residual = 0.0;  // angle change over the last settling step
};

/// Settled E^cu / E^cs estimates at orbit position `index`: e_u pushed
/// forward `settle` steps, e_s pulled back through inverse Jacobians from
/// `index + settle`.
DirectionEstimate estimate_direction(const TorusMap& map,
                                     const RandomOrbit& orbit, int index,
                                     int settle);

/// ||Df v_cs|| / ||Df v_cu|| at the estimate's base point.
double domination_gap(const TorusMap& map, const DirectionEstimate& dir);

/// Per-step log-norms a_j = log ||Df^{-1} | E^cu|| along a random orbit,
/// with the settled direction carried forward by push-and-renormalize.
struct CocycleTrace {
  int start_index = 0;               // orbit index of the first entry
  std::vector<double> values;        // a_j, j = start_index .. n-1
  std::vector<Vec2> directions;      // settled v_cu at each step
};

CocycleTrace cocycle_log_norms(const TorusMap& map, const RandomOrbit& orbit,
                               int settle);

}  // namespace nuhlab
