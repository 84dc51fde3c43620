#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nuhlab/cones.hpp"
#include "nuhlab/hyperbolic_times.hpp"
#include "nuhlab/noise.hpp"
#include "nuhlab/torus_map.hpp"

namespace nuhlab {

/// Probability histogram on the n x n grid over [0,1)^2.
struct GridHistogram {
  int n = 0;
  std::vector<double> mass;  // row-major, mass[i*n+j], sums to 1

  static GridHistogram uniform(int n);
  static int cell_of(const TorusPoint& p, int n);
  double& at(int i, int j) { return mass[size_t(i) * n + j]; }
  double total() const;
  void normalize();
  void check_valid() const;  // total = 1 +- 1e-9, all cells >= 0
};

double l1_distance(const GridHistogram& h1, const GridHistogram& h2);

double birkhoff_average(const RandomOrbit& orbit,
                        const std::function<double(const TorusPoint&)>& obs);

GridHistogram empirical_histogram(const std::vector<RandomOrbit>& orbits,
                                  int n, int burn_in);

/// Row-stochastic transition matrix of one noisy step on the grid partition,
/// built by deterministic quadrature: a stratified midpoint subgrid per cell
/// composed with a fixed polar quadrature of the noise disk.
struct UlamOperator {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> rows;  // cell -> (cell, prob)

  void check_valid() const;  // rows sum to 1 +- 1e-9, entries >= 0
};

UlamOperator ulam_operator(const TorusMap& map, const NoiseModel& model, int n,
                           int samples_per_cell);

GridHistogram stationary_density(const UlamOperator& op, double tol,
                                 int max_iters);

struct BasinReport {
  int modes = 0;
  std::vector<std::vector<double>> averages;  // per-orbit Birkhoff vectors
  std::vector<int> assignments;
  int clusters = 0;
};

BasinReport cluster_basins(const TorusMap& map, const NoiseModel& model,
                           int ensemble, int n_steps, int modes,
                           double threshold, std::uint64_t seed,
                           int workers = 1);

struct EnsembleConfig {
  int orbits = 100;
  int steps = 10000;
  int burn_in = 1000;
  int grid_n = 32;
  std::uint64_t seed = 1;
  int workers = 1;
};

/// Long-orbit histogram estimator of the stationary measure at the model's
/// noise level (Lebesgue-random starts).
GridHistogram ensemble_histogram(const TorusMap& map, const NoiseModel& model,
                                 const EnsembleConfig& cfg);

struct StabilityPoint {
  double epsilon = 0.0;
  double l1_to_reference = 0.0;
};

std::vector<StabilityPoint> stability_curve(const TorusMap& map,
                                            const std::vector<double>& epsilons,
                                            const GridHistogram& reference,
                                            const EnsembleConfig& cfg);

struct PushforwardDensityBound {
  int hyp_time = 0;
  double min_density = 0.0;  // relative to arclength, up to normalization
  double max_density = 0.0;
  double ratio = 0.0;        // max/min over the delta1-truncated image
  bool pass = false;         // ratio <= c2^2
};

std::vector<PushforwardDensityBound> curve_pushforward_density(
    const TorusMap& map, const RandomOrbit& orbit, const CocycleTrace& trace,
    const std::vector<int>& hyp_times, double delta1, double c2_constant);

struct RnueStats {
  std::vector<double> orbit_means;       // per-orbit (1/n) sum a_j
  double mean = 0.0, max = 0.0, p5 = 0.0;
  std::vector<double> c_ladder;          // thresholds c
  std::vector<double> fraction_above;    // fraction of orbits with mean > -c
  std::vector<int> n_ladder;             // bad-set decay: fraction failing at n
  std::vector<double> bad_fraction;
  double fitted_rate = 0.0;              // slope of log(bad fraction) vs n
};

RnueStats rnue_experiment(const TorusMap& map, const NoiseModel& model,
                          int ensemble, int n_steps, std::uint64_t seed,
                          int workers = 1);

struct FrequencyStats {
  std::vector<int> n_ladder;
  std::vector<double> mean_fraction;   // mean time fraction outside V, per n
  std::vector<double> p5_fraction;     // 5th percentile, per n
  double zeta = 0.0;                   // empirical zeta (p5 at the smallest n)
  std::vector<double> bad_fraction;    // orbits with occupancy < zeta, per n
  double fitted_rate = 0.0;            // slope of log(bad fraction) vs n
};

FrequencyStats frequency_experiment(const TorusMap& map,
                                    const NoiseModel& model,
                                    double partition_radius, int ensemble,
                                    const std::vector<int>& n_ladder,
                                    std::uint64_t seed, int workers = 1);

}  // namespace nuhlab
