#include <cmath>

#include "doctest.h"
#include "nuhlab/cones.hpp"
#include "nuhlab/noise.hpp"

using namespace nuhlab;

namespace {
const double kLambdaS = (3.0 - std::sqrt(5.0)) / 2.0;
const double kLogInvLambdaU = -std::log((3.0 + std::sqrt(5.0)) / 2.0);
}  // namespace

TEST_CASE("in_cone membership and scale invariance") {
  const TorusMap cat = TorusMap::linear({2, 1, 1, 1});
  const ConeParams cone = ConeParams::for_map(cat, 0.2, 0.5);
  CHECK(in_cone(cone.e_u, cone, ConeKind::Cu));
  CHECK_FALSE(in_cone(cone.e_s, cone, ConeKind::Cu));
  CHECK(in_cone(cone.e_u + 0.2 * cone.e_s, cone, ConeKind::Cu));  // boundary
  CHECK(in_cone(cone.e_s, cone, ConeKind::Cs));
  RngStream rng(1, 0);
  for (int i = 0; i < 200; ++i) {
    const Vec2 v{rng.uniform01() * 2 - 1, rng.uniform01() * 2 - 1};
    if (v.norm() == 0.0) continue;
    const bool base = in_cone(v, cone, ConeKind::Cu);
    CHECK(in_cone(v * 7.5, cone, ConeKind::Cu) == base);
    CHECK(in_cone(v * -0.03, cone, ConeKind::Cu) == base);
  }
  CHECK_THROWS_AS(in_cone({0, 0}, cone, ConeKind::Cu), std::domain_error);
}

TEST_CASE("cone invariance holds for the cat map and the default DA map") {
  RngStream rng(2, 0);
  const TorusMap cat = TorusMap::linear({2, 1, 1, 1});
  const ConeParams cone = ConeParams::for_map(cat, 0.2, 0.5);
  CHECK(check_cone_invariance(cat, cone, 0.05, 20000, rng).empty());
  const TorusMap da = TorusMap::derived_anosov({});
  CHECK(check_cone_invariance(da, cone, 0.05, 20000, rng).empty());
}

TEST_CASE("wide cones with strong shear are not invariant") {
  DAParams p;
  p.strength = 0.95;
  const TorusMap da = TorusMap::derived_anosov(p);
  const ConeParams cone = ConeParams::for_map(da, 0.9, 0.5);
  RngStream rng(3, 0);
  CHECK_FALSE(check_cone_invariance(da, cone, 0.0, 50000, rng).empty());
}

TEST_CASE("direction estimates recover the cat-map eigenvectors") {
  const TorusMap cat = TorusMap::linear({2, 1, 1, 1});
  RngStream rng(4, 0);
  const RandomOrbit orbit = random_orbit(cat, {0.0}, {0.123, 0.456}, 40, rng);
  const DirectionEstimate est = estimate_direction(cat, orbit, 20, 10);
  CHECK(std::abs(est.v_cu.x) == doctest::Approx(0.850651).epsilon(1e-5));
  CHECK(std::abs(est.v_cu.y) == doctest::Approx(0.525731).epsilon(1e-5));
  CHECK(std::abs(est.v_cs.x) == doctest::Approx(0.525731).epsilon(1e-5));
  CHECK(std::abs(est.v_cs.y) == doctest::Approx(0.850651).epsilon(1e-5));
  CHECK(est.residual < 1e-12);
  CHECK_THROWS_AS(estimate_direction(cat, orbit, 5, 10), std::out_of_range);
}

TEST_CASE("DA direction residual decays geometrically in settle") {
  const TorusMap da = TorusMap::derived_anosov({});
  RngStream rng(5, 0);
  const RandomOrbit orbit = random_orbit(da, {0.01}, {0.321, 0.654}, 200, rng);
  double prev = 1.0;
  int shrank = 0, total = 0;
  for (int settle = 5; settle <= 40; settle += 5) {
    const double res = estimate_direction(da, orbit, 80, settle).residual;
    if (settle > 5) {
      ++total;
      if (res <= prev * 0.999 + 1e-15) ++shrank;
    }
    prev = res;
  }
  CHECK(shrank == total);
  CHECK(estimate_direction(da, orbit, 80, 40).residual < 1e-8);
}

TEST_CASE("domination gap of the cat map is the squared stable eigenvalue") {
  const TorusMap cat = TorusMap::linear({2, 1, 1, 1});
  RngStream rng(6, 0);
  const RandomOrbit orbit = random_orbit(cat, {0.0}, {0.9, 0.2}, 60, rng);
  const DirectionEstimate est = estimate_direction(cat, orbit, 30, 20);
  CHECK(domination_gap(cat, est) ==
        doctest::Approx(kLambdaS * kLambdaS).epsilon(1e-9));
  CHECK(domination_gap(cat, est) == doctest::Approx(0.145898).epsilon(1e-5));
}

TEST_CASE("domination gap of the validated DA map stays below lambda") {
  const TorusMap da = TorusMap::derived_anosov({});
  RngStream rng(7, 0);
  const RandomOrbit orbit = random_orbit(da, {0.01}, {0.11, 0.77}, 5000, rng);
  double worst = 0.0;
  for (int idx = 40; idx < 4960; idx += 50) {
    const DirectionEstimate est = estimate_direction(da, orbit, idx, 30);
    worst = std::max(worst, domination_gap(da, est));
  }
  CHECK(worst <= 0.5);
}

TEST_CASE("cat-map cocycle log-norms are exactly constant") {
  const TorusMap cat = TorusMap::linear({2, 1, 1, 1});
  RngStream rng(8, 0);
  const RandomOrbit orbit = random_orbit(cat, {0.02}, {0.4, 0.8}, 300, rng);
  const CocycleTrace trace = cocycle_log_norms(cat, orbit, 30);
  double var = 0.0;
  for (double a : trace.values) {
    CHECK(a == doctest::Approx(kLogInvLambdaU).epsilon(1e-12));
    var += (a - kLogInvLambdaU) * (a - kLogInvLambdaU);
  }
  CHECK(var / trace.values.size() < 1e-20);
}

TEST_CASE("DA cocycle log-norms respect the off-V and in-V certificates") {
  const TorusMap da = TorusMap::derived_anosov({});
  const auto rep = verify_conditions(da, 0.2, 32, 0.5);
  RngStream rng(9, 0);
  const RandomOrbit orbit = random_orbit(da, {0.01}, {0.6, 0.3}, 3000, rng);
  const CocycleTrace trace = cocycle_log_norms(da, orbit, 30);
  for (size_t m = 0; m < trace.values.size(); ++m) {
    const TorusPoint at = orbit.points[trace.start_index + m];
    // margin covers the noise-induced wobble of the carried direction
    if (da.in_deformation_region(at))
      CHECK(trace.values[m] <= std::log(1.0 + rep.delta0) + 0.05);
    else
      CHECK(trace.values[m] <= std::log(rep.sigma2) + 0.05);
  }
}
