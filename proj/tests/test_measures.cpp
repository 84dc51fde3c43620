#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nuhlab/measures.hpp"

using namespace nuhlab;

TEST_CASE("grid histogram basics") {
  const GridHistogram u = GridHistogram::uniform(8);
  CHECK(u.total() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(GridHistogram::cell_of({0.0, 0.0}, 8) == 0);
  CHECK(GridHistogram::cell_of({0.999, 0.999}, 8) == 63);
  CHECK(GridHistogram::cell_of({0.51, 0.26}, 8) == 4 * 8 + 2);
  GridHistogram h;
  h.n = 2;
  h.mass = {0.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(h.normalize(), std::domain_error);
  h.mass = {2.0, 1.0, 1.0, 0.0};
  h.normalize();
  CHECK(h.mass[0] == doctest::Approx(0.5));
  h.mass[0] = -0.1;
  CHECK_THROWS_AS(h.check_valid(), std::logic_error);
}

TEST_CASE("l1 distance between uniform and a point mass is 2 - 2/n^2") {
  const int n = 32;
  const GridHistogram u = GridHistogram::uniform(n);
  GridHistogram p;
  p.n = n;
  p.mass.assign(size_t(n) * n, 0.0);
  p.mass[17] = 1.0;
  CHECK(l1_distance(u, p) ==
        doctest::Approx(2.0 - 2.0 / (double(n) * n)).epsilon(1e-12));
  CHECK(l1_distance(u, u) == 0.0);
  CHECK_THROWS_AS(l1_distance(u, GridHistogram::uniform(16)), std::domain_error);
}

TEST_CASE("birkhoff average against a hand-computed sum") {
  const TorusMap cat = TorusMap::linear({2, 1, 1, 1});
  RngStream rng(31, 0);
  const RandomOrbit orbit = random_orbit(cat, {0.01}, {0.2, 0.9}, 50, rng);
  auto obs = [](const TorusPoint& p) { return p.x * p.x - p.y; };
  double expect = 0.0;
  for (int j = 0; j < 50; ++j) expect += obs(orbit.points[j]);
  CHECK(birkhoff_average(orbit, obs) == doctest::Approx(expect / 50));
  RandomOrbit stub;
  stub.points = {{0.1, 0.1}};
  CHECK_THROWS_AS(birkhoff_average(stub, obs), std::invalid_argument);
}

TEST_CASE("empirical histogram of a pinned orbit is a point mass") {
  const TorusMap cat = TorusMap::linear({2, 1, 1, 1});
  RngStream rng(32, 0);
  const RandomOrbit orbit = random_orbit(cat, {0.0}, {0.0, 0.0}, 200, rng);
  const GridHistogram h = empirical_histogram({orbit}, 16, 50);
  CHECK(h.mass[0] == doctest::Approx(1.0));
  CHECK_THROWS_AS(empirical_histogram({orbit}, 16, 500), std::invalid_argument);
}

TEST_CASE("ulam operator of the noisy cat map fixes Lebesgue exactly") {
  const TorusMap cat = TorusMap::linear({2, 1, 1, 1});
  const UlamOperator op = ulam_operator(cat, {0.05}, 32, 256);
  op.check_valid();
  // unimodular integer matrices permute the quadrature lattice, so one
  // application of the operator must return the uniform density unchanged
  const GridHistogram u = GridHistogram::uniform(32);
  GridHistogram pushed = u;
  std::fill(pushed.mass.begin(), pushed.mass.end(), 0.0);
  for (size_t i = 0; i < op.rows.size(); ++i)
    for (const auto& [c, p] : op.rows[i]) pushed.mass[c] += u.mass[i] * p;
  CHECK(l1_distance(pushed, u) < 1e-9);
  const GridHistogram stat = stationary_density(op, 1e-10, 500);
  CHECK(l1_distance(stat, u) < 1e-6);
}

TEST_CASE("ulam operator rejects bad resolutions") {
  const TorusMap cat = TorusMap::linear({2, 1, 1, 1});
  CHECK_THROWS_AS(ulam_operator(cat, {0.05}, 4, 256), std::invalid_argument);
  CHECK_THROWS_AS(ulam_operator(cat, {0.05}, 32, 4), std::invalid_argument);
}

TEST_CASE("stationary_density reports non-convergence") {
  const TorusMap cat = TorusMap::linear({2, 1, 1, 1});
  const UlamOperator op = ulam_operator(cat, {0.05}, 8, 16);
  CHECK_THROWS_AS(stationary_density(op, 1e-30, 0), std::runtime_error);
}

TEST_CASE("DA stationary density: Ulam and long orbits agree") {
  const TorusMap da = TorusMap::derived_anosov({});
  const NoiseModel model{0.05};
  const UlamOperator op = ulam_operator(da, model, 32, 256);
  const GridHistogram stat = stationary_density(op, 1e-8, 2000);
  EnsembleConfig cfg;
  cfg.orbits = 100;
  cfg.steps = 8000;
  cfg.burn_in = 500;
  cfg.grid_n = 32;
  cfg.seed = 33;
  cfg.workers = 2;
  const GridHistogram emp = ensemble_histogram(da, model, cfg);
  CHECK(l1_distance(stat, emp) < 0.25);
}

TEST_CASE("ensemble histogram is independent of the worker count") {
  const TorusMap da = TorusMap::derived_anosov({});
  EnsembleConfig cfg;
  cfg.orbits = 20;
  cfg.steps = 2000;
  cfg.burn_in = 100;
  cfg.grid_n = 16;
  cfg.seed = 34;
  cfg.workers = 1;
  const GridHistogram h1 = ensemble_histogram(da, {0.03}, cfg);
  cfg.workers = 3;
  const GridHistogram h3 = ensemble_histogram(da, {0.03}, cfg);
  REQUIRE(h1.mass.size() == h3.mass.size());
  for (size_t c = 0; c < h1.mass.size(); ++c) CHECK(h1.mass[c] == h3.mass[c]);
}

TEST_CASE("basin clustering separates the two-attractor fixture") {
  const TorusMap two = TorusMap::two_attractor_fixture();
  const auto rep = cluster_basins(two, {0.01}, 40, 2000, 2, 1.0, 35, 2);
  CHECK(rep.clusters == 2);
  const TorusMap cat = TorusMap::linear({2, 1, 1, 1});
  const auto one = cluster_basins(cat, {0.01}, 40, 2000, 2, 1.0, 36, 2);
  CHECK(one.clusters == 1);
  CHECK_THROWS_AS(cluster_basins(cat, {0.01}, 10, 2000, 1, 1.0, 37),
                  std::invalid_argument);
}

TEST_CASE("noisy cat map stays L1-close to Lebesgue at every level") {
  // Lebesgue is stationary for the linear map at all noise levels, so the
  // whole curve should sit at the Monte Carlo floor
  const TorusMap cat = TorusMap::linear({2, 1, 1, 1});
  EnsembleConfig cfg;
  cfg.orbits = 50;
  cfg.steps = 4000;
  cfg.burn_in = 200;
  cfg.grid_n = 16;
  cfg.seed = 38;
  cfg.workers = 2;
  const GridHistogram u = GridHistogram::uniform(16);
  const auto curve = stability_curve(cat, {0.1, 0.05, 0.02}, u, cfg);
  REQUIRE(curve.size() == 3);
  CHECK(curve[0].epsilon == 0.1);
  for (const auto& pt : curve) CHECK(pt.l1_to_reference < 0.3);
}

TEST_CASE("pushforward density of the linear map is flat") {
  const TorusMap cat = TorusMap::linear({2, 1, 1, 1});
  RngStream rng(39, 0);
  const RandomOrbit orbit = random_orbit(cat, {0.0}, {0.45, 0.15}, 80, rng);
  const CocycleTrace trace = cocycle_log_norms(cat, orbit, 30);
  const auto bounds = curve_pushforward_density(cat, orbit, trace, {5, 10, 15},
                                                0.05, 1.1);
  REQUIRE(bounds.size() == 3);
  for (const auto& b : bounds) {
    CHECK(b.ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.pass);
  }
}

TEST_CASE("rnue statistics of the cat map sit at -log lambda_u") {
  const TorusMap cat = TorusMap::linear({2, 1, 1, 1});
  const double expect = -std::log((3.0 + std::sqrt(5.0)) / 2.0);
  const auto st = rnue_experiment(cat, {0.02}, 100, 1000, 40, 2);
  CHECK(st.mean == doctest::Approx(expect).epsilon(1e-9));
  CHECK(st.max < -0.9);
  for (double f : st.fraction_above) CHECK(f == 0.0);
  for (double f : st.bad_fraction) CHECK(f == 0.0);
  CHECK_THROWS_AS(rnue_experiment(cat, {0.02}, 10, 1000, 40),
                  std::invalid_argument);
}

TEST_CASE("frequency experiment sees the Lebesgue share outside V") {
  const TorusMap da = TorusMap::derived_anosov({});
  const auto st = frequency_experiment(da, {0.02}, 0.0, 100, {200, 800}, 41, 2);
  const double lebesgue_outside =
      1.0 - std::numbers::pi * 0.12 * 0.12;  // about 0.955
  REQUIRE(st.mean_fraction.size() == 2);
  for (double f : st.mean_fraction)
    CHECK(f == doctest::Approx(lebesgue_outside).epsilon(0.08));
  CHECK(st.zeta > 0.5);
  CHECK_THROWS_AS(frequency_experiment(da, {0.02}, 0.0, 100, {}, 41),
                  std::invalid_argument);
}
