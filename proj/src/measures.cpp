#include "nuhlab/measures.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "nuhlab/parallel.hpp"
#include "nuhlab/stats.hpp"

namespace nuhlab {

GridHistogram GridHistogram::uniform(int n) {
  GridHistogram h;
  h.n = n;
  h.mass.assign(size_t(n) * n, 1.0 / (double(n) * n));
  return h;
}

int GridHistogram::cell_of(const TorusPoint& p, int n) {
  const int i = std::min(n - 1, int(p.x * n));
  const int j = std::min(n - 1, int(p.y * n));
  return i * n + j;
}

double GridHistogram::total() const {
  return std::accumulate(mass.begin(), mass.end(), 0.0);
}

void GridHistogram::normalize() {
  const double t = total();
  if (t <= 0.0) throw std::domain_error("histogram with no mass");
  for (double& m : mass) m /= t;
}

void GridHistogram::check_valid() const {
  if (std::abs(total() - 1.0) > 1e-9)
    throw std::logic_error("histogram mass not normalized");
  for (double m : mass)
    if (m < 0.0) throw std::logic_error("negative histogram mass");
}

double l1_distance(const GridHistogram& h1, const GridHistogram& h2) {
  if (h1.n != h2.n) throw std::domain_error("l1_distance: grid size mismatch");
  double d = 0.0;
  for (size_t i = 0; i < h1.mass.size(); ++i)
    d += std::abs(h1.mass[i] - h2.mass[i]);
  return d;
}

double birkhoff_average(const RandomOrbit& orbit,
                        const std::function<double(const TorusPoint&)>& obs) {
  const size_t n = orbit.points.size() - 1;
  if (n < 1) throw std::invalid_argument("orbit too short");
  double s = 0.0;
  for (size_t j = 0; j < n; ++j) s += obs(orbit.points[j]);
  return s / double(n);
}

GridHistogram empirical_histogram(const std::vector<RandomOrbit>& orbits,
                                  int n, int burn_in) {
  GridHistogram h;
  h.n = n;
  h.mass.assign(size_t(n) * n, 0.0);
  for (const RandomOrbit& o : orbits) {
    if (int(o.points.size()) <= burn_in)
      throw std::invalid_argument("orbit shorter than burn-in");
    for (size_t j = burn_in; j < o.points.size(); ++j)
      h.mass[GridHistogram::cell_of(o.points[j], n)] += 1.0;
  }
  h.normalize();
  h.check_valid();
  return h;
}

void UlamOperator::check_valid() const {
  for (const auto& row : rows) {
    double s = 0.0;
    for (const auto& [c, p] : row) {
      if (p < 0.0) throw std::logic_error("negative transition probability");
      s += p;
    }
    if (std::abs(s - 1.0) > 1e-9)
      throw std::logic_error("ulam row not stochastic");
  }
}

namespace {

// Equal-weight polar quadrature of the uniform law on the eps-disk.
std::vector<Vec2> disk_nodes(double eps) {
  if (eps == 0.0) return {{0.0, 0.0}};
  constexpr int kRings = 8, kAngles = 16;
  std::vector<Vec2> nodes;
  nodes.reserve(kRings * kAngles);
  for (int i = 0; i < kRings; ++i) {
    const double r = eps * std::sqrt((i + 0.5) / kRings);
    for (int j = 0; j < kAngles; ++j) {
      // stagger rings so nodes do not align radially
      const double th = 2.0 * std::numbers::pi * (j + 0.5 * (i % 2)) / kAngles;
      nodes.push_back({r * std::cos(th), r * std::sin(th)});
    }
  }
  return nodes;
}

}  // namespace

UlamOperator ulam_operator(const TorusMap& map, const NoiseModel& model, int n,
                           int samples_per_cell) {
  if (n < 8) throw std::invalid_argument("ulam grid must be >= 8");
  if (samples_per_cell < 16)
    throw std::invalid_argument("need >= 16 samples per cell");
  const int sub = std::max(1, int(std::floor(std::sqrt(double(samples_per_cell)))));
  const std::vector<Vec2> nodes = disk_nodes(model.epsilon);
  const double w = 1.0 / (double(sub) * sub * double(nodes.size()));

  UlamOperator op;
  op.n = n;
  op.rows.assign(size_t(n) * n, {});
  std::vector<double> scratch(size_t(n) * n, 0.0);
  std::vector<int> touched;
  for (int ci = 0; ci < n; ++ci) {
    for (int cj = 0; cj < n; ++cj) {
      touched.clear();
      for (int si = 0; si < sub; ++si) {
        for (int sj = 0; sj < sub; ++sj) {
          const TorusPoint p{(ci + (si + 0.5) / sub) / n,
                             (cj + (sj + 0.5) / sub) / n};
          const Vec2 img = as_vec(map.apply(p));
          for (const Vec2& t : nodes) {
            const int c = GridHistogram::cell_of(wrap(img + t), n);
            if (scratch[c] == 0.0) touched.push_back(c);
            scratch[c] += w;
          }
        }
      }
      std::sort(touched.begin(), touched.end());
      auto& row = op.rows[size_t(ci) * n + cj];
      row.reserve(touched.size());
      double s = 0.0;
      for (int c : touched) {
        row.emplace_back(c, scratch[c]);
        s += scratch[c];
        scratch[c] = 0.0;
      }
      for (auto& [c, p] : row) p /= s;
    }
  }
  op.check_valid();
  return op;
}

GridHistogram stationary_density(const UlamOperator& op, double tol,
                                 int max_iters) {
  GridHistogram h = GridHistogram::uniform(op.n);
  std::vector<double> next(h.mass.size());
  double residual = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (size_t i = 0; i < op.rows.size(); ++i)
      for (const auto& [c, p] : op.rows[i]) next[c] += h.mass[i] * p;
    residual = 0.0;
    for (size_t i = 0; i < next.size(); ++i)
      residual += std::abs(next[i] - h.mass[i]);
    h.mass.swap(next);
    if (residual < tol) {
      h.normalize();
      h.check_valid();
      return h;
    }
  }
  throw std::runtime_error("stationary_density: no convergence, residual " +
                           std::to_string(residual));
}

namespace {

std::vector<std::function<double(const TorusPoint&)>> fourier_observables(
    int modes) {
  std::vector<std::function<double(const TorusPoint&)>> obs;
  for (int k = 1; k <= modes; ++k) {
    const double f = 2.0 * std::numbers::pi * k;
    obs.push_back([f](const TorusPoint& p) { return std::cos(f * p.x); });
    obs.push_back([f](const TorusPoint& p) { return std::sin(f * p.x); });
    obs.push_back([f](const TorusPoint& p) { return std::cos(f * p.y); });
    obs.push_back([f](const TorusPoint& p) { return std::sin(f * p.y); });
  }
  return obs;
}

}  // namespace

BasinReport cluster_basins(const TorusMap& map, const NoiseModel& model,
                           int ensemble, int n_steps, int modes,
                           double threshold, std::uint64_t seed, int workers) {
  if (modes < 2) throw std::invalid_argument("need >= 2 Fourier modes");
  const auto obs = fourier_observables(modes);
  const int burn_in = std::min(1000, n_steps / 10);

  BasinReport rep;
  rep.modes = modes;
  rep.averages.assign(ensemble, {});
  parallel_for(ensemble, workers, [&](int i) {
    RngStream rng(seed, std::uint64_t(i));
    const RandomOrbit orbit =
        random_orbit(map, model, random_point(rng), n_steps, rng);
    std::vector<double> avg(obs.size(), 0.0);
    const int count = n_steps - burn_in;
    for (int j = burn_in; j < n_steps; ++j)
      for (size_t o = 0; o < obs.size(); ++o)
        avg[o] += obs[o](orbit.points[j]);
    for (double& a : avg) a /= count;
    rep.averages[i] = std::move(avg);
  });

  // single linkage = connected components of the threshold graph
  std::vector<int> parent(ensemble);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    return parent[a] == a ? a : parent[a] = find(parent[a]);
  };
  for (int a = 0; a < ensemble; ++a) {
    for (int b = a + 1; b < ensemble; ++b) {
      double d2 = 0.0;
      for (size_t o = 0; o < rep.averages[a].size(); ++o) {
        const double d = rep.averages[a][o] - rep.averages[b][o];
        d2 += d * d;
      }
      if (std::sqrt(d2) <= threshold) parent[find(a)] = find(b);
    }
  }
  rep.assignments.assign(ensemble, -1);
  int next_label = 0;
  for (int a = 0; a < ensemble; ++a) {
    const int root = find(a);
    if (rep.assignments[root] < 0) rep.assignments[root] = next_label++;
    rep.assignments[a] = rep.assignments[root];
  }
  rep.clusters = next_label;
  return rep;
}

GridHistogram ensemble_histogram(const TorusMap& map, const NoiseModel& model,
                                 const EnsembleConfig& cfg) {
  std::vector<GridHistogram> parts(cfg.orbits);
  parallel_for(cfg.orbits, cfg.workers, [&](int i) {
    RngStream rng(cfg.seed, std::uint64_t(i));
    const RandomOrbit orbit =
        random_orbit(map, model, random_point(rng), cfg.steps, rng);
    GridHistogram h;
    h.n = cfg.grid_n;
    h.mass.assign(size_t(cfg.grid_n) * cfg.grid_n, 0.0);
    for (size_t j = cfg.burn_in; j < orbit.points.size(); ++j)
      h.mass[GridHistogram::cell_of(orbit.points[j], cfg.grid_n)] += 1.0;
    parts[i] = std::move(h);
  });
  GridHistogram h;
  h.n = cfg.grid_n;
  h.mass.assign(size_t(cfg.grid_n) * cfg.grid_n, 0.0);
  for (const auto& part : parts)
    for (size_t c = 0; c < h.mass.size(); ++c) h.mass[c] += part.mass[c];
  h.normalize();
  h.check_valid();
  return h;
}

std::vector<StabilityPoint> stability_curve(const TorusMap& map,
                                            const std::vector<double>& epsilons,
                                            const GridHistogram& reference,
                                            const EnsembleConfig& cfg) {
  std::vector<StabilityPoint> curve;
  curve.reserve(epsilons.size());
  for (size_t k = 0; k < epsilons.size(); ++k) {
    EnsembleConfig c = cfg;
    c.seed = cfg.seed + 1000 * (k + 1);  // independent ensembles per level
    const GridHistogram h = ensemble_histogram(map, NoiseModel{epsilons[k]}, c);
    curve.push_back({epsilons[k], l1_distance(h, reference)});
  }
  return curve;
}

std::vector<PushforwardDensityBound> curve_pushforward_density(
    const TorusMap& map, const RandomOrbit& orbit, const CocycleTrace& trace,
    const std::vector<int>& hyp_times, double delta1, double c2_constant) {
  std::vector<PushforwardDensityBound> out;
  out.reserve(hyp_times.size());
  for (int n : hyp_times) {
    // The density of the pushed arclength measure is 1/stretch; its spread
    // over the delta1-truncated image is the distortion ratio.
    const DistortionReport d =
        check_distortion(map, orbit, trace, n, delta1, c2_constant);
    PushforwardDensityBound b;
    b.hyp_time = n;
    b.max_density = d.max_ratio;
    b.min_density = 1.0 / d.max_ratio;
    b.ratio = d.max_ratio * d.max_ratio;
    b.pass = b.ratio <= c2_constant * c2_constant;
    out.push_back(b);
  }
  return out;
}

namespace {

double decay_slope(const std::vector<int>& ns, const std::vector<double>& fracs,
                   double floor_value) {
  if (ns.size() < 3) return 0.0;  // not enough points for a fit
  std::vector<double> xs, ys;
  for (size_t i = 0; i < ns.size(); ++i) {
    xs.push_back(double(ns[i]));
    ys.push_back(std::log(std::max(fracs[i], floor_value)));
  }
  return linear_fit(xs, ys).slope;
}

}  // namespace

RnueStats rnue_experiment(const TorusMap& map, const NoiseModel& model,
                          int ensemble, int n_steps, std::uint64_t seed,
                          int workers) {
  if (ensemble < 100 || n_steps < 1000)
    throw std::invalid_argument("rnue: need ensemble >= 100, n >= 1000");
  constexpr int kSettle = 30;
  constexpr double kBadThreshold = 0.05;  // orbit is bad at n if mean > -0.05

  RnueStats st;
  for (int n : {100, 300, 1000, 3000})
    if (n < n_steps) st.n_ladder.push_back(n);
  st.n_ladder.push_back(n_steps);
  st.orbit_means.assign(ensemble, 0.0);
  std::vector<std::vector<char>> bad(ensemble,
                                     std::vector<char>(st.n_ladder.size(), 0));
  parallel_for(ensemble, workers, [&](int i) {
    RngStream rng(seed, std::uint64_t(i));
    const RandomOrbit orbit =
        random_orbit(map, model, random_point(rng), n_steps + kSettle, rng);
    const CocycleTrace trace = cocycle_log_norms(map, orbit, kSettle);
    double run = 0.0;
    size_t ladder_pos = 0;
    for (size_t j = 0; j < trace.values.size(); ++j) {
      run += trace.values[j];
      while (ladder_pos < st.n_ladder.size() &&
             int(j) + 1 == st.n_ladder[ladder_pos]) {
        bad[i][ladder_pos] = run / double(j + 1) > -kBadThreshold;
        ++ladder_pos;
      }
    }
    st.orbit_means[i] = run / double(trace.values.size());
  });

  st.mean = mean(st.orbit_means);
  st.max = *std::max_element(st.orbit_means.begin(), st.orbit_means.end());
  st.p5 = percentile(st.orbit_means, 5.0);
  st.c_ladder = {0.01, 0.05, 0.1, 0.2};
  for (double c : st.c_ladder) {
    int count = 0;
    for (double m : st.orbit_means)
      if (m > -c) ++count;
    st.fraction_above.push_back(double(count) / ensemble);
  }
  for (size_t l = 0; l < st.n_ladder.size(); ++l) {
    int count = 0;
    for (int i = 0; i < ensemble; ++i) count += bad[i][l];
    st.bad_fraction.push_back(double(count) / ensemble);
  }
  st.fitted_rate =
      decay_slope(st.n_ladder, st.bad_fraction, 0.5 / double(ensemble));
  return st;
}

FrequencyStats frequency_experiment(const TorusMap& map,
                                    const NoiseModel& model,
                                    double partition_radius, int ensemble,
                                    const std::vector<int>& n_ladder,
                                    std::uint64_t seed, int workers) {
  if (n_ladder.empty()) throw std::invalid_argument("empty n ladder");
  const int n_max = *std::max_element(n_ladder.begin(), n_ladder.end());

  auto outside_v = [&](const TorusPoint& p) {
    if (map.kind() == TorusMap::Kind::DerivedAnosov)
      return !map.in_deformation_region(p);
    if (partition_radius <= 0.0) return true;
    return torus_dist(p, map.params().center) >= partition_radius;
  };

  FrequencyStats st;
  st.n_ladder = n_ladder;
  std::vector<std::vector<double>> fracs(
      n_ladder.size(), std::vector<double>(ensemble, 0.0));
  parallel_for(ensemble, workers, [&](int i) {
    RngStream rng(seed, std::uint64_t(i));
    const RandomOrbit orbit =
        random_orbit(map, model, random_point(rng), n_max, rng);
    int outside = 0;
    size_t pos = 0;
    for (int j = 0; j < n_max; ++j) {
      if (outside_v(orbit.points[j])) ++outside;
      while (pos < n_ladder.size() && j + 1 == n_ladder[pos]) {
        fracs[pos][i] = double(outside) / double(j + 1);
        ++pos;
      }
    }
  });

  for (size_t l = 0; l < n_ladder.size(); ++l) {
    st.mean_fraction.push_back(mean(fracs[l]));
    st.p5_fraction.push_back(percentile(fracs[l], 5.0));
  }
  st.zeta = st.p5_fraction.front();
  for (size_t l = 0; l < n_ladder.size(); ++l) {
    int count = 0;
    for (int i = 0; i < ensemble; ++i)
      if (fracs[l][i] < st.zeta) ++count;
    st.bad_fraction.push_back(double(count) / ensemble);
  }
  st.fitted_rate =
      decay_slope(st.n_ladder, st.bad_fraction, 0.5 / double(ensemble));
  return st;
}

}  // namespace nuhlab
