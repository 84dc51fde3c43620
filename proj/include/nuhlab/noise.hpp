#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nuhlab/geometry.hpp"
#include "nuhlab/torus_map.hpp"

namespace nuhlab {

/// Additive uniform noise on the Euclidean disk of radius epsilon.
struct NoiseModel {
  double epsilon = 0.0;
};

/// Deterministic per-worker random stream. Identical (seed, stream_id)
/// reproduces identical sequences bit for bit; doubles are derived from the
/// raw 64-bit output so the sequence does not depend on library
/// distribution internals.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  double uniform01() { return double(eng_() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t seed_, stream_id_;
  std::mt19937_64 eng_;
};

struct RandomOrbit {
  std::vector<TorusPoint> points;  // x, f_t^1 x, ..., f_t^n x
  std::vector<Vec2> noises;        // noises[j] was added at step j (noises[0] = 0)
};

/// Uniform sample on the closed disk of radius epsilon (polar method).
Vec2 sample_noise(const NoiseModel& model, RngStream& rng);

RandomOrbit random_orbit(const TorusMap& map, const NoiseModel& model,
                         const TorusPoint& x0, int n, RngStream& rng);

TorusPoint random_point(RngStream& rng);

struct NondegeneracyReport {
  bool condition1_ok = false;  // images cover a ball around f(x)
  bool condition2_ok = false;  // one-step push-forward has bounded density
  double xi_estimate = 0.0;    // estimated covered radius
  double max_density = 0.0;    // max one-step image density per unit area
  double uniform_density = 0.0;  // 1 / (pi eps^2), the exact disk density
};

/// Monte-Carlo evidence for the non-degeneracy conditions with n0 = 1.
NondegeneracyReport check_nondegeneracy(const TorusMap& map,
                                        const NoiseModel& model,
                                        const TorusPoint& x, int samples,
                                        RngStream& rng);

}  // namespace nuhlab
