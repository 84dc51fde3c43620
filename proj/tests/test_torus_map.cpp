#include <cmath>

#include "doctest.h"
#include "nuhlab/noise.hpp"
#include "nuhlab/torus_map.hpp"

using namespace nuhlab;

namespace {
const double kLambdaU = (3.0 + std::sqrt(5.0)) / 2.0;
const double kLambdaS = (3.0 - std::sqrt(5.0)) / 2.0;
}  // namespace

TEST_CASE("wrap reduces mod 1 into [0,1) and is idempotent") {
  auto p = wrap({1.5, 1.0});
  CHECK(p.x == doctest::Approx(0.5));
  CHECK(p.y == doctest::Approx(0.0));
  p = wrap({-0.25, 2.0});
  CHECK(p.x == doctest::Approx(0.75));
  CHECK(p.y == doctest::Approx(0.0));
  p = wrap({0.3, 0.7});
  CHECK(p.x == doctest::Approx(0.3));
  CHECK(p.y == doctest::Approx(0.7));
  const auto q = wrap(as_vec(p));
  CHECK(q.x == p.x);
  CHECK(q.y == p.y);
  CHECK_THROWS_AS(wrap({std::nan(""), 0.0}), std::domain_error);
}

TEST_CASE("linear cat map arithmetic") {
  const TorusMap cat = TorusMap::linear({2, 1, 1, 1});
  auto p = cat.apply({0.1, 0.2});
  CHECK(p.x == doctest::Approx(0.4));
  CHECK(p.y == doctest::Approx(0.3));
  p = cat.apply({0.5, 0.5});
  CHECK(p.x == doctest::Approx(0.5));
  CHECK(p.y == doctest::Approx(0.0));
  p = cat.apply({0.0, 0.0});
  CHECK(p.x == 0.0);
  CHECK(p.y == 0.0);
  CHECK(cat.lambda_u() == doctest::Approx(kLambdaU));
  CHECK(cat.lambda_s() == doctest::Approx(kLambdaS));
  CHECK(cat.e_u().x == doctest::Approx(0.850651).epsilon(1e-5));
  CHECK(cat.e_u().y == doctest::Approx(0.525731).epsilon(1e-5));
}

TEST_CASE("linear inverse is the inverse matrix") {
  const TorusMap cat = TorusMap::linear({2, 1, 1, 1});
  RngStream rng(7, 0);
  for (int i = 0; i < 100; ++i) {
    const TorusPoint q = random_point(rng);
    const TorusPoint back = cat.inverse_apply(cat.apply(q));
    CHECK(torus_dist(back, q) < 1e-12);
  }
}

TEST_CASE("DA map with zero strength equals the linear map exactly") {
  DAParams params;
  params.strength = 0.0;
  const TorusMap da = TorusMap::derived_anosov(params);
  const TorusMap cat = TorusMap::linear(params.base);
  RngStream rng(3, 0);
  for (int i = 0; i < 200; ++i) {
    const Vec2 p{rng.uniform01() * 3 - 1, rng.uniform01() * 3 - 1};
    const Vec2 a = da.apply_lift(p), b = cat.apply_lift(p);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    const TorusPoint q = wrap(p);
    CHECK(torus_dist(da.inverse_apply(q), cat.inverse_apply(q)) == 0.0);
  }
}

TEST_CASE("DA map agrees with the base map off the deformation region") {
  const TorusMap da = TorusMap::derived_anosov({});
  const TorusMap cat = TorusMap::linear(da.params().base);
  RngStream rng(4, 0);
  int tested = 0;
  while (tested < 200) {
    const TorusPoint q = random_point(rng);
    if (da.in_deformation_region(q)) continue;
    ++tested;
    CHECK(torus_dist(da.apply(q), cat.apply(q)) == 0.0);
    const Mat2 J = da.jacobian(q);
    CHECK(J.m11 == 2.0);
    CHECK(J.m12 == 1.0);
    CHECK(J.m21 == 1.0);
    CHECK(J.m22 == 1.0);
  }
}

TEST_CASE("expansion factor at the fixed point is (1-s) lambda_u") {
  const TorusMap da = TorusMap::derived_anosov({});
  const Mat2 J = da.jacobian({0.0, 0.0});
  const double factor = (J * da.e_u()).norm();
  CHECK(factor == doctest::Approx(0.37 * kLambdaU).epsilon(1e-9));
  CHECK(factor == doctest::Approx(0.9687).epsilon(1e-3));
}

TEST_CASE("analytic Jacobian matches central finite differences") {
  const TorusMap da = TorusMap::derived_anosov({});
  RngStream rng(5, 0);
  const double h = 1e-6;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    // concentrate half the samples near the deformation region
    TorusPoint q = random_point(rng);
    if (i % 2 == 0)
      q = wrap(Vec2{(rng.uniform01() - 0.5) * 0.3, (rng.uniform01() - 0.5) * 0.3});
    const Mat2 J = da.jacobian(q);
    const Vec2 base = as_vec(q);
    const Vec2 dx = (da.apply_lift(base + Vec2{h, 0}) -
                     da.apply_lift(base - Vec2{h, 0})) * (1.0 / (2 * h));
    const Vec2 dy = (da.apply_lift(base + Vec2{0, h}) -
                     da.apply_lift(base - Vec2{0, h})) * (1.0 / (2 * h));
    worst = std::max({worst, std::abs(J.m11 - dx.x), std::abs(J.m21 - dx.y),
                      std::abs(J.m12 - dy.x), std::abs(J.m22 - dy.y)});
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("apply and inverse_apply round trip within 1e-10") {
  const TorusMap da = TorusMap::derived_anosov({});
  RngStream rng(6, 0);
  for (int i = 0; i < 10000; ++i) {
    const TorusPoint q = random_point(rng);
    CHECK(torus_dist(da.inverse_apply(da.apply(q)), q) < 1e-10);
    CHECK(torus_dist(da.apply(da.inverse_apply(q)), q) < 1e-10);
  }
}

TEST_CASE("Jacobian determinant stays in the diffeomorphism band") {
  const TorusMap da = TorusMap::derived_anosov({});
  for (int i = 0; i < 128; ++i) {
    for (int j = 0; j < 128; ++j) {
      const double det = da.jacobian({i / 128.0, j / 128.0}).det();
      CHECK(det > 0.3);
      CHECK(det < 2.0);
      if (!da.in_deformation_region({i / 128.0, j / 128.0}))
        CHECK(det == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("construction rejects invalid parameters") {
  DAParams p;
  p.radius = 0.6;
  CHECK_THROWS_AS(TorusMap::derived_anosov(p), std::invalid_argument);
  p = {};
  p.strength = 1.0;
  CHECK_THROWS_AS(TorusMap::derived_anosov(p), std::invalid_argument);
  p = {};
  p.base = {1, 0, 0, 1};
  CHECK_THROWS_AS(TorusMap::derived_anosov(p), std::invalid_argument);
  p = {};
  p.base = {2, 1, 1, 1.5};
  CHECK_THROWS_AS(TorusMap::derived_anosov(p), std::invalid_argument);
}

TEST_CASE("verify_conditions certifies the cat map") {
  const TorusMap cat = TorusMap::linear({2, 1, 1, 1});
  const auto rep = verify_conditions(cat, 0.2, 32, 0.5);
  CHECK(rep.certified());
  CHECK(rep.sigma1 >= 2.61);
  CHECK(rep.sigma2 <= 0.383);
  CHECK(rep.delta0 == 0.0);
  CHECK(rep.max_domination == doctest::Approx(kLambdaS * kLambdaS).epsilon(1e-9));
}

TEST_CASE("verify_conditions certifies the default DA parameters") {
  const TorusMap da = TorusMap::derived_anosov({});
  const auto rep = verify_conditions(da, 0.2, 64, 0.5);
  CHECK(rep.certified());
  CHECK(rep.sigma1 > 2.0);
  CHECK(rep.sigma2 < 1.0);
  CHECK(rep.delta0 > 0.0);
  CHECK(rep.delta0 < 0.2);
}

TEST_CASE("verify_conditions flags an absurd strength") {
  DAParams p;
  p.strength = 0.99;
  const TorusMap da = TorusMap::derived_anosov(p);
  const auto rep = verify_conditions(da, 0.2, 32, 0.5);
  CHECK_FALSE(rep.certified());
}

TEST_CASE("verify_conditions validates its inputs") {
  const TorusMap cat = TorusMap::linear({2, 1, 1, 1});
  CHECK_THROWS_AS(verify_conditions(cat, 0.2, 8, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(verify_conditions(cat, 1.5, 32, 0.5), std::invalid_argument);
}
