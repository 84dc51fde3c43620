#pragma once

#include <vector>

#include "nuhlab/cones.hpp"
#include "nuhlab/curves.hpp"
#include "nuhlab/noise.hpp"
#include "nuhlab/torus_map.hpp"

namespace nuhlab {

struct PlissInput {
  std::vector<double> values;  // a_1 .. a_N
  double c1 = 0.0;
  double c2 = 0.0;
  double H = 0.0;
};

/// Pliss index selection in linear time: returns every 1-based index n_i
/// with sum_{j=n+1}^{n_i} a_j >= c1 (n_i - n) for all 0 <= n < n_i.
/// Boundary ties count as selected.
std::vector<int> pliss_select(const PlissInput& input);

struct HyperbolicTimeReport {
  double alpha = 0.0;
  std::vector<int> indices;   // 1-based positions within the trace
  double density = 0.0;
  double gamma_bound = 0.0;   // Pliss zeta when the average is good enough
};

/// n is an alpha-hyperbolic time iff sum_{j=n-k+1}^n a_j <= k log(alpha)
/// for every k = 1..n.
HyperbolicTimeReport detect_hyperbolic_times(const CocycleTrace& trace,
                                             double alpha);

struct DensityStats {
  double mean = 0.0;
  double min = 0.0;
  double p5 = 0.0;
  double p50 = 0.0;
  int orbits = 0;
};

DensityStats estimate_density(const TorusMap& map, const NoiseModel& model,
                              int ensemble, int n, double alpha,
                              std::uint64_t seed, int workers = 1);

/// Measured expansion rate c = -mean(a_j) on a long calibration orbit, and
/// the working alpha = exp(-c/4).
double calibrate_alpha(const TorusMap& map, const NoiseModel& model,
                       std::uint64_t seed, int n = 20000);

struct ContractionCheck {
  int hyp_time = 0;
  std::vector<double> max_ratio;  // max over tested pairs, per k = 1..n
  int pairs = 0;
};

/// Backward contraction along a cu-curve through the orbit start: iterates a
/// short straight cu-segment forward hyp_time steps with the orbit's noises
/// and measures arclength ratios dist_{n-k} / dist_n for points whose image
/// distance at time n is at most delta1. The initial half-length is sized
/// from the cocycle so the final arclength is about delta1; hyperbolic
/// times beyond ~28 steps are not representable in doubles and are rejected.
ContractionCheck check_backward_contraction(const TorusMap& map,
                                            const RandomOrbit& orbit,
                                            const CocycleTrace& trace,
                                            int hyp_time, double delta1);

struct DistortionReport {
  double c2_constant = 1.0;  // calibration bound compared against
  double max_ratio = 0.0;
  int pairs_checked = 0;
  double delta1 = 0.0;
  int hyp_time = 0;
};

/// Bounded distortion of the tangential stretch of f^n along a cu-curve at a
/// hyperbolic time. Evaluated over the last `window` steps (comparison
/// points earlier than that are closer than double precision resolves and
/// contribute factors of 1).
DistortionReport check_distortion(const TorusMap& map, const RandomOrbit& orbit,
                                  const CocycleTrace& trace, int hyp_time,
                                  double delta1, double c2_constant = 1.1,
                                  int window = 20);

}  // namespace nuhlab
