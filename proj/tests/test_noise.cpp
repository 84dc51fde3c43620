#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nuhlab/noise.hpp"
#include "nuhlab/torus_map.hpp"

using namespace nuhlab;

TEST_CASE("zero noise is the degenerate point mass") {
  NoiseModel m{0.0};
  RngStream rng(1, 0);
  for (int i = 0; i < 100; ++i) {
    const Vec2 t = sample_noise(m, rng);
    CHECK(t.x == 0.0);
    CHECK(t.y == 0.0);
  }
}

TEST_CASE("disk samples stay inside the radius and have the right law") {
  const double eps = 0.02;
  NoiseModel m{eps};
  RngStream rng(2, 0);
  const int n = 1000000;
  double sx = 0.0, sy = 0.0;
  int inner = 0;
  for (int i = 0; i < n; ++i) {
    const Vec2 t = sample_noise(m, rng);
    REQUIRE(t.norm() <= eps);
    sx += t.x;
    sy += t.y;
    if (t.norm() <= eps / 2) ++inner;
  }
  // CLT bound with Var = eps^2/4 per coordinate
  CHECK(std::abs(sx / n) < 3 * eps / 1000);
  CHECK(std::abs(sy / n) < 3 * eps / 1000);
  // area ratio of the half-radius disk
  CHECK(double(inner) / n == doctest::Approx(0.25).epsilon(0.04));
}

TEST_CASE("nested supports across noise levels") {
  NoiseModel small{0.01};
  RngStream rng(3, 0);
  for (int i = 0; i < 1000; ++i)
    CHECK(sample_noise(small, rng).norm() <= 0.05);
}

TEST_CASE("random orbits satisfy the defining recursion") {
  const TorusMap da = TorusMap::derived_anosov({});
  NoiseModel m{0.01};
  RngStream rng(4, 0);
  const RandomOrbit orbit = random_orbit(da, m, {0.3, 0.7}, 500, rng);
  REQUIRE(orbit.points.size() == 501);
  REQUIRE(orbit.noises.size() == 501);
  for (int j = 0; j < 500; ++j) {
    const TorusPoint expect =
        wrap(as_vec(da.apply(orbit.points[j])) + orbit.noises[j + 1]);
    CHECK(torus_dist(expect, orbit.points[j + 1]) == 0.0);
  }
}

TEST_CASE("zero noise at a fixed point stays put") {
  const TorusMap cat = TorusMap::linear({2, 1, 1, 1});
  RngStream rng(5, 0);
  const RandomOrbit orbit = random_orbit(cat, {0.0}, {0.0, 0.0}, 5, rng);
  for (const auto& p : orbit.points) {
    CHECK(p.x == 0.0);
    CHECK(p.y == 0.0);
  }
}

TEST_CASE("zero noise reproduces the deterministic orbit") {
  const TorusMap da = TorusMap::derived_anosov({});
  RngStream rng(6, 0);
  const RandomOrbit orbit = random_orbit(da, {0.0}, {0.3, 0.4}, 100, rng);
  TorusPoint q{0.3, 0.4};
  for (int j = 1; j <= 100; ++j) {
    q = da.apply(q);
    CHECK(torus_dist(q, orbit.points[j]) == 0.0);
  }
}

TEST_CASE("identical stream parameters reproduce identical orbits") {
  const TorusMap da = TorusMap::derived_anosov({});
  NoiseModel m{0.05};
  RngStream r1(42, 3), r2(42, 3);
  const RandomOrbit o1 = random_orbit(da, m, {0.1, 0.9}, 200, r1);
  const RandomOrbit o2 = random_orbit(da, m, {0.1, 0.9}, 200, r2);
  for (size_t j = 0; j < o1.points.size(); ++j) {
    CHECK(o1.points[j].x == o2.points[j].x);
    CHECK(o1.points[j].y == o2.points[j].y);
  }
  RngStream r3(42, 4);
  const RandomOrbit o3 = random_orbit(da, m, {0.1, 0.9}, 200, r3);
  CHECK(torus_dist(o1.points.back(), o3.points.back()) > 0.0);
}

TEST_CASE("non-degeneracy report for additive noise") {
  const TorusMap da = TorusMap::derived_anosov({});
  NoiseModel m{0.05};
  RngStream rng(7, 0);
  const auto rep = check_nondegeneracy(da, m, {0.2, 0.6}, 100000, rng);
  CHECK(rep.condition1_ok);
  CHECK(rep.xi_estimate >= 0.9 * m.epsilon);
  CHECK(rep.condition2_ok);
  CHECK(rep.max_density <= rep.uniform_density * 1.1);
}

TEST_CASE("non-degeneracy fails without noise") {
  const TorusMap da = TorusMap::derived_anosov({});
  RngStream rng(8, 0);
  const auto rep = check_nondegeneracy(da, {0.0}, {0.2, 0.6}, 1000, rng);
  CHECK_FALSE(rep.condition1_ok);
}
