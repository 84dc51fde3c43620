#include "nuhlab/hyperbolic_times.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nuhlab/parallel.hpp"
#include "nuhlab/stats.hpp"

namespace nuhlab {

std::vector<int> pliss_select(const PlissInput& input) {
  if (!(input.H >= input.c2 && input.c2 > input.c1))
    throw std::domain_error("pliss_select: need H >= c2 > c1");
  for (double a : input.values)
    if (a > input.H) throw std::domain_error("pliss_select: value above H");

  // n_i selected iff T(n_i) >= T(n) for all n < n_i, T(n) = S(n) - c1 n.
  std::vector<int> out;
  const int N = int(input.values.size());
  double T = 0.0, run_max = 0.0;
  for (int i = 1; i <= N; ++i) {
    T += input.values[i - 1] - input.c1;
    if (T >= run_max) out.push_back(i);
    run_max = std::max(run_max, T);
  }
  return out;
}

HyperbolicTimeReport detect_hyperbolic_times(const CocycleTrace& trace,
                                             double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0,1)");
  if (trace.values.empty())
    throw std::invalid_argument("empty cocycle trace");

  // n is hyperbolic iff T(n) <= min_{m<n} T(m), T(n) = sum (a_j - log alpha).
  HyperbolicTimeReport rep;
  rep.alpha = alpha;
  const double la = std::log(alpha);
  const int N = int(trace.values.size());
  double T = 0.0, run_min = 0.0;
  for (int i = 1; i <= N; ++i) {
    T += trace.values[i - 1] - la;
    if (T <= run_min) rep.indices.push_back(i);
    run_min = std::min(run_min, T);
  }
  rep.density = double(rep.indices.size()) / N;

  double H = -trace.values[0], c2sum = 0.0;
  for (double a : trace.values) {
    H = std::max(H, -a);
    c2sum += -a;
  }
  const double c2 = c2sum / N, c1 = -la;
  rep.gamma_bound =
      (c2 > c1) ? (H > c2 ? (c2 - c1) / (H - c1) : 1.0) : 0.0;
  return rep;
}

double calibrate_alpha(const TorusMap& map, const NoiseModel& model,
                       std::uint64_t seed, int n) {
  RngStream rng(seed, 0);
  const RandomOrbit orbit = random_orbit(map, model, random_point(rng), n, rng);
  const CocycleTrace trace = cocycle_log_norms(map, orbit, 30);
  const double c = -mean(trace.values);
  if (c <= 0.0)
    throw std::runtime_error("calibrate_alpha: no average expansion measured");
  return std::exp(-c / 4.0);
}

DensityStats estimate_density(const TorusMap& map, const NoiseModel& model,
                              int ensemble, int n, double alpha,
                              std::uint64_t seed, int workers) {
  if (ensemble < 1 || n < 100)
    throw std::invalid_argument("estimate_density: need ensemble >= 1, n >= 100");
  constexpr int kSettle = 30;
  std::vector<double> densities(ensemble);
  parallel_for(ensemble, workers, [&](int i) {
    RngStream rng(seed, std::uint64_t(i));
    const RandomOrbit orbit =
        random_orbit(map, model, random_point(rng), n + kSettle, rng);
    const CocycleTrace trace = cocycle_log_norms(map, orbit, kSettle);
    densities[i] = detect_hyperbolic_times(trace, alpha).density;
  });
  DensityStats s;
  s.orbits = ensemble;
  s.mean = mean(densities);
  s.min = *std::min_element(densities.begin(), densities.end());
  s.p5 = percentile(densities, 5.0);
  s.p50 = percentile(densities, 50.0);
  return s;
}

namespace {

void require_valid_hyp_time(const CocycleTrace& trace, int hyp_time) {
  if (hyp_time < 1 || hyp_time > int(trace.values.size()))
    throw std::out_of_range("hyperbolic time outside the trace");
}

}  // namespace

ContractionCheck check_backward_contraction(const TorusMap& map,
                                            const RandomOrbit& orbit,
                                            const CocycleTrace& trace,
                                            int hyp_time, double delta1) {
  require_valid_hyp_time(trace, hyp_time);
  const int n = hyp_time;
  const int base = trace.start_index;

  double log_contract = 0.0;
  for (int m = 0; m < n; ++m) log_contract += trace.values[m];
  const double half_len = 0.9 * delta1 * std::exp(log_contract);
  if (half_len < 1e-12)
    throw std::invalid_argument(
        "hyperbolic time too deep for double-precision curve tracking");

  constexpr int kHalf = 100;
  Curve curve =
      straight_segment(orbit.points[base], trace.directions[0], half_len, kHalf);

  // per-step arclength distance of every vertex from the tracked center
  std::vector<std::vector<double>> dist(n + 1,
                                        std::vector<double>(2 * kHalf + 1));
  auto record = [&](const Curve& c, int step) {
    const auto arc = c.arc_coords();
    for (int m = 0; m <= 2 * kHalf; ++m)
      dist[step][m] = std::abs(arc[m] - arc[kHalf]);
  };
  record(curve, 0);
  for (int s = 1; s <= n; ++s) {
    curve = iterate_curve(map, curve, orbit.noises[base + s]);
    record(curve, s);
  }

  ContractionCheck out;
  out.hyp_time = n;
  out.max_ratio.assign(n, 0.0);
  for (int m = 0; m <= 2 * kHalf; ++m) {
    if (m == kHalf) continue;
    const double dn = dist[n][m];
    if (dn <= 0.0 || dn > delta1) continue;
    ++out.pairs;
    for (int k = 1; k <= n; ++k)
      out.max_ratio[k - 1] = std::max(out.max_ratio[k - 1], dist[n - k][m] / dn);
  }
  return out;
}

DistortionReport check_distortion(const TorusMap& map, const RandomOrbit& orbit,
                                  const CocycleTrace& trace, int hyp_time,
                                  double delta1, double c2_constant,
                                  int window) {
  require_valid_hyp_time(trace, hyp_time);
  const int n = hyp_time;
  const int w = std::min(n, window);
  const int j0 = trace.start_index + n - w;  // orbit index of the window start

  double log_contract = 0.0;
  for (int m = n - w; m < n; ++m) log_contract += trace.values[m];
  const double base_len = 0.9 * delta1 * std::exp(log_contract);
  const Vec2 dir = trace.directions[n - w];

  // tangential stretch of f^w along the curve starting at a lift offset
  auto stretch_from = [&](double offset) -> std::pair<double, double> {
    TorusPoint y = wrap(as_vec(orbit.points[j0]) + offset * dir);
    Vec2 u = dir;
    double log_stretch = 0.0;
    for (int s = 0; s < w; ++s) {
      const Vec2 pushed = map.jacobian(y) * u;
      const double np = pushed.norm();
      log_stretch += std::log(np);
      u = pushed * (1.0 / np);
      y = wrap(as_vec(map.apply(y)) + orbit.noises[j0 + s + 1]);
    }
    return {log_stretch, torus_dist(y, orbit.points[j0 + w])};
  };

  const double log_stretch_x = stretch_from(0.0).first;
  DistortionReport rep;
  rep.c2_constant = c2_constant;
  rep.delta1 = delta1;
  rep.hyp_time = n;
  rep.max_ratio = 1.0;
  for (const double frac : {-1.0, -0.5, -0.25, 0.25, 0.5, 1.0}) {
    const auto [ls, final_dist] = stretch_from(frac * base_len);
    if (final_dist > delta1) continue;  // locality clause of the bound
    ++rep.pairs_checked;
    rep.max_ratio = std::max(rep.max_ratio, std::exp(std::abs(ls - log_stretch_x)));
  }
  return rep;
}

}  // namespace nuhlab
