#include "nuhlab/noise.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nuhlab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id),
      eng_(splitmix64(seed ^ splitmix64(stream_id))) {}

Vec2 sample_noise(const NoiseModel& model, RngStream& rng) {
  if (model.epsilon < 0.0) throw std::domain_error("epsilon must be >= 0");
  if (model.epsilon == 0.0) {
    // keep the stream position independent of epsilon
    rng.uniform01();
    rng.uniform01();
    return {0.0, 0.0};
  }
  const double r = model.epsilon * std::sqrt(rng.uniform01());
  const double th = 2.0 * std::numbers::pi * rng.uniform01();
  const Vec2 t{r * std::cos(th), r * std::sin(th)};
  assert(t.norm() <= model.epsilon * (1.0 + 1e-15));
  return t;
}

RandomOrbit random_orbit(const TorusMap& map, const NoiseModel& model,
                         const TorusPoint& x0, int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("orbit length must be >= 1");
  RandomOrbit orbit;
  orbit.points.reserve(n + 1);
  orbit.noises.reserve(n + 1);
  orbit.points.push_back(x0);
  orbit.noises.push_back({0.0, 0.0});
  for (int j = 0; j < n; ++j) {
    const Vec2 t = sample_noise(model, rng);
    orbit.noises.push_back(t);
    orbit.points.push_back(wrap(as_vec(map.apply(orbit.points.back())) + t));
  }
  return orbit;
}

TorusPoint random_point(RngStream& rng) {
  return {rng.uniform01(), rng.uniform01()};
}

NondegeneracyReport check_nondegeneracy(const TorusMap& map,
                                        const NoiseModel& model,
                                        const TorusPoint& x, int samples,
                                        RngStream& rng) {
  NondegeneracyReport rep;
  const double eps = model.epsilon;
  if (eps <= 0.0) return rep;  // degenerate: both conditions marked failed
  rep.uniform_density = 1.0 / (std::numbers::pi * eps * eps);

  const TorusPoint fx = map.apply(x);
  constexpr int kCoverGrid = 64;
  constexpr int kDensityGrid = 8;
  std::vector<char> hit(kCoverGrid * kCoverGrid, 0);
  std::vector<int> count(kDensityGrid * kDensityGrid, 0);

  for (int s = 0; s < samples; ++s) {
    const Vec2 t = sample_noise(model, rng);
    // displacement of the image from f(x), in [-eps, eps]^2
    const int ci = std::min(kCoverGrid - 1,
                            int((t.x + eps) / (2 * eps) * kCoverGrid));
    const int cj = std::min(kCoverGrid - 1,
                            int((t.y + eps) / (2 * eps) * kCoverGrid));
    hit[ci * kCoverGrid + cj] = 1;
    const int di = std::min(kDensityGrid - 1,
                            int((t.x + eps) / (2 * eps) * kDensityGrid));
    const int dj = std::min(kDensityGrid - 1,
                            int((t.y + eps) / (2 * eps) * kDensityGrid));
    ++count[di * kDensityGrid + dj];
  }

  // Covered radius: the largest rho such that every cover cell whose center
  // lies within rho of f(x) was hit.
  const double cell = 2.0 * eps / kCoverGrid;
  double xi = eps;
  for (int i = 0; i < kCoverGrid; ++i) {
    for (int j = 0; j < kCoverGrid; ++j) {
      if (hit[i * kCoverGrid + j]) continue;
      const double cx = -eps + (i + 0.5) * cell;
      const double cy = -eps + (j + 0.5) * cell;
      xi = std::min(xi, std::hypot(cx, cy));
    }
  }
  rep.xi_estimate = xi;
  rep.condition1_ok = xi >= 0.9 * eps;

  const double dcell_area = (2.0 * eps / kDensityGrid) * (2.0 * eps / kDensityGrid);
  int max_count = 0;
  for (int c : count) max_count = std::max(max_count, c);
  rep.max_density = double(max_count) / (double(samples) * dcell_area);
  rep.condition2_ok = rep.max_density <= rep.uniform_density * 1.1;
  (void)fx;
  return rep;
}

}  // namespace nuhlab
