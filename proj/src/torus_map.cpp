#include "nuhlab/torus_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nuhlab {

namespace {

// Bump profile psi(t) = (1 - t^2)^3 on [0,1], zero outside. C^2 at t = 1.
double psi(double t) {
  if (t >= 1.0) return 0.0;
  const double u = 1.0 - t * t;
  return u * u * u;
}

double dpsi(double t) {
  if (t >= 1.0) return 0.0;
  const double u = 1.0 - t * t;
  return -6.0 * t * u * u;
}

// max over t in [0,1] of |d/dt (t psi(t))|; the invertibility constraint is
// strength * max < 1.
double max_shear_slope() {
  double m = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = i / 1000.0;
    m = std::max(m, std::abs(psi(t) + t * dpsi(t)));
  }
  return m;
}

void eigen_split(const Mat2& base, double& lu, double& ls, Vec2& eu, Vec2& es) {
  const double tr = base.m11 + base.m22;
  const double det = base.det();
  const double disc = tr * tr - 4.0 * det;
  if (disc <= 0.0)
    throw std::invalid_argument("base matrix must have real distinct eigenvalues");
  const double sq = std::sqrt(disc);
  double l1 = (tr + sq) / 2.0, l2 = (tr - sq) / 2.0;
  if (std::abs(l1) < std::abs(l2)) std::swap(l1, l2);
  lu = l1;
  ls = l2;
  auto eigvec = [&](double lam) -> Vec2 {
    // (base - lam I) v = 0; pick the better-conditioned row.
    const Vec2 r1{base.m11 - lam, base.m12};
    const Vec2 r2{base.m21, base.m22 - lam};
    const Vec2 v1{-r1.y, r1.x}, v2{-r2.y, r2.x};
    return (r1.norm() >= r2.norm() ? v1 : v2).normalized();
  };
  eu = eigvec(lu);
  es = eigvec(ls);
  if (eu.x < 0) eu = eu * -1.0;
  if (es.x < 0) es = es * -1.0;
}

}  // namespace

TorusMap TorusMap::linear(const Mat2& base) {
  TorusMap m;
  m.kind_ = Kind::Linear;
  m.params_.base = base;
  m.params_.radius = 0.0;
  m.params_.strength = 0.0;
  m.base_inv_ = base.inverse();
  eigen_split(base, m.lambda_u_, m.lambda_s_, m.e_u_, m.e_s_);
  if (std::abs(m.lambda_u_) <= 1.0)
    throw std::invalid_argument("base matrix is not hyperbolic");
  return m;
}

TorusMap TorusMap::derived_anosov(const DAParams& params) {
  const Mat2& b = params.base;
  auto is_int = [](double v) { return v == std::floor(v); };
  if (!is_int(b.m11) || !is_int(b.m12) || !is_int(b.m21) || !is_int(b.m22))
    throw std::invalid_argument("base matrix must have integer entries");
  if (std::abs(std::abs(b.det()) - 1.0) > 0.0)
    throw std::invalid_argument("base matrix must have |det| = 1");
  if (!(params.radius > 0.0 && params.radius < 0.5))
    throw std::invalid_argument("radius must lie in (0, 1/2)");
  if (!(params.strength >= 0.0 && params.strength < 1.0))
    throw std::invalid_argument("strength must lie in [0, 1)");
  if (params.strength * max_shear_slope() >= 1.0)
    throw std::invalid_argument("strength too large: shear not invertible");

  TorusMap m = linear(b);
  m.kind_ = Kind::DerivedAnosov;
  m.params_ = params;

  // V must lift into a unit open cube, and so must its image under the base
  // map (condition on the deformation region of the construction).
  const double base_norm = std::sqrt(b.m11 * b.m11 + b.m12 * b.m12 +
                                     b.m21 * b.m21 + b.m22 * b.m22);
  if (base_norm * 2.0 * params.radius >= 1.0)
    throw std::invalid_argument("radius too large: f(V) does not fit a unit cube");
  return m;
}

TorusMap TorusMap::two_attractor_fixture() {
  TorusMap m;
  m.kind_ = Kind::TwoAttractor;
  m.params_.base = {0.5, 0, 0, 0.5};
  m.base_inv_ = {2, 0, 0, 2};
  m.lambda_u_ = 2.0;  // unused; fixture has no hyperbolic splitting
  m.lambda_s_ = 0.5;
  m.e_u_ = {1, 0};
  m.e_s_ = {0, 1};
  return m;
}

Vec2 TorusMap::shear_lift(const Vec2& z) const {
  const Vec2 d = torus_displacement(wrap(z), params_.center);
  const double rho = d.norm();
  if (rho >= params_.radius) return z;
  const double u = d.dot(e_u_);
  return z - params_.strength * psi(rho / params_.radius) * u * e_u_;
}

Mat2 TorusMap::shear_jacobian(const Vec2& z) const {
  const Vec2 d = torus_displacement(wrap(z), params_.center);
  const double rho = d.norm();
  const double r = params_.radius;
  if (rho >= r) return Mat2{};
  const double t = rho / r;
  const double u = d.dot(e_u_);
  Vec2 b = psi(t) * e_u_;
  if (rho > 1e-15) b = b + (u * dpsi(t) / (r * rho)) * d;
  const double s = params_.strength;
  return {1.0 - s * e_u_.x * b.x, -s * e_u_.x * b.y,
          -s * e_u_.y * b.x, 1.0 - s * e_u_.y * b.y};
}

Vec2 TorusMap::shear_inverse(const Vec2& z) const {
  const Vec2 d = torus_displacement(wrap(z), params_.center);
  const double rho = d.norm();
  const double r = params_.radius;
  if (rho >= r || params_.strength == 0.0) return z;
  // The shear moves points along e_u only; solve the 1D equation
  // u (1 - s psi(|(u,w)|/r)) = u_z by Newton.
  const double uz = d.dot(e_u_);
  const Vec2 w_vec = d - uz * e_u_;
  const double w = w_vec.norm();
  const double s = params_.strength;
  double u = uz;
  bool ok = false;
  for (int it = 0; it < 100; ++it) {
    const double rho_q = std::hypot(u, w);
    const double t = rho_q / r;
    const double F = u - s * psi(t) * u - uz;
    if (std::abs(F) < 1e-15) {
      ok = true;
      break;
    }
    double dF = 1.0 - s * psi(t);
    if (rho_q > 0.0) dF -= s * u * u * dpsi(t) / (r * rho_q);
    u -= F / dF;
  }
  if (!ok)
    throw std::runtime_error("shear inverse: Newton did not converge");
  return z - d + w_vec + u * e_u_;
}

TorusPoint TorusMap::apply(const TorusPoint& p) const {
  switch (kind_) {
    case Kind::Linear:
      return wrap(params_.base * as_vec(p));
    case Kind::DerivedAnosov:
      return wrap(shear_lift(params_.base * as_vec(p)));
    case Kind::TwoAttractor: {
      const TorusPoint c = p.x < 0.5 ? TorusPoint{0.25, 0.25} : TorusPoint{0.75, 0.75};
      const Vec2 d = torus_displacement(p, c);
      return wrap(as_vec(c) + 0.5 * d);
    }
  }
  throw std::logic_error("unreachable");
}

Vec2 TorusMap::apply_lift(const Vec2& p) const {
  switch (kind_) {
    case Kind::Linear:
      return params_.base * p;
    case Kind::DerivedAnosov:
      return shear_lift(params_.base * p);
    case Kind::TwoAttractor: {
      const TorusPoint q = wrap(p);
      const TorusPoint c = q.x < 0.5 ? TorusPoint{0.25, 0.25} : TorusPoint{0.75, 0.75};
      const Vec2 d = torus_displacement(q, c);
      return p - d + 0.5 * d;
    }
  }
  throw std::logic_error("unreachable");
}

Mat2 TorusMap::jacobian(const TorusPoint& p) const {
  switch (kind_) {
    case Kind::Linear:
      return params_.base;
    case Kind::DerivedAnosov:
      return shear_jacobian(params_.base * as_vec(p)) * params_.base;
    case Kind::TwoAttractor:
      return {0.5, 0, 0, 0.5};
  }
  throw std::logic_error("unreachable");
}

TorusPoint TorusMap::inverse_apply(const TorusPoint& p) const {
  switch (kind_) {
    case Kind::Linear:
      return wrap(base_inv_ * as_vec(p));
    case Kind::DerivedAnosov:
      return wrap(base_inv_ * shear_inverse(as_vec(p)));
    case Kind::TwoAttractor:
      throw std::domain_error("two-attractor fixture is not invertible");
  }
  throw std::logic_error("unreachable");
}

bool TorusMap::in_deformation_region(const TorusPoint& p) const {
  if (kind_ == Kind::Linear) return false;
  if (kind_ == Kind::TwoAttractor) return false;
  const TorusPoint fh = wrap(params_.base * as_vec(p));
  return torus_dist(fh, params_.center) < params_.radius;
}

MapConditionsReport verify_conditions(const TorusMap& map, double cone_width,
                                      int grid_n, double lambda_target) {
  if (grid_n < 16) throw std::invalid_argument("grid_n must be >= 16");
  if (!(cone_width > 0.0 && cone_width < 1.0))
    throw std::invalid_argument("cone width must lie in (0,1)");

  const Vec2 eu = map.e_u(), es = map.e_s();
  const Mat2 basis{es.x, eu.x, es.y, eu.y};  // columns (e_s, e_u)
  const double a = cone_width;
  constexpr int kSettle = 30;
  constexpr double kInVCap = 1.2;  // 1 + delta0 must stay below this

  MapConditionsReport rep;
  rep.cone_width = a;
  double min_e_off = std::numeric_limits<double>::infinity();
  double max_off = 0.0, max_in = 1.0, max_dom = 0.0;

  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      const TorusPoint q{double(i) / grid_n, double(j) / grid_n};
      const Mat2 J = map.jacobian(q);
      const Mat2 Jinv = J.inverse();

      // (A): extremal cone vectors stay inside (sufficient by linearity).
      for (const double sgn : {1.0, -1.0}) {
        const Vec2 w = J * (eu + sgn * a * es);
        const Vec2 cw = basis.solve(w);  // (e_s comp, e_u comp)
        if (std::abs(cw.x) > a * std::abs(cw.y) + 1e-10)
          rep.violations.emplace_back(q, "A-cu");
        const Vec2 ww = Jinv * (es + sgn * a * eu);
        const Vec2 cww = basis.solve(ww);
        if (std::abs(cww.y) > a * std::abs(cww.x) + 1e-10)
          rep.violations.emplace_back(q, "A-cs");
      }

      // Settled invariant directions: push e_u forward through preimages,
      // pull e_s back through images.
      Vec2 vcu = eu;
      {
        std::vector<TorusPoint> pre(kSettle + 1);
        pre[0] = q;
        for (int k = 0; k < kSettle; ++k) pre[k + 1] = map.inverse_apply(pre[k]);
        for (int k = kSettle; k > 0; --k)
          vcu = (map.jacobian(pre[k]) * vcu).normalized();
      }
      Vec2 vcs = es;
      {
        std::vector<TorusPoint> fwd(kSettle + 1);
        fwd[0] = q;
        for (int k = 0; k < kSettle; ++k) fwd[k + 1] = map.apply(fwd[k]);
        for (int k = kSettle; k > 0; --k)
          vcs = map.jacobian(fwd[k - 1]).solve(vcs).normalized();
      }

      const double e = (J * vcu).norm();
      const double c = (J * vcs).norm();
      const double dom = c / e;
      max_dom = std::max(max_dom, dom);
      if (dom > lambda_target) rep.violations.emplace_back(q, "dom");

      if (map.in_deformation_region(q)) {
        const double bound = std::max(1.0 / e, c);
        max_in = std::max(max_in, bound);
        if (bound >= kInVCap) rep.violations.emplace_back(q, "D");
      } else {
        min_e_off = std::min(min_e_off, e);
        const double bound = std::max(1.0 / e, c);
        max_off = std::max(max_off, bound);
        if (e <= 1.0) rep.violations.emplace_back(q, "B");
        if (bound >= 1.0) rep.violations.emplace_back(q, "C");
      }
    }
  }

  rep.sigma1 = min_e_off;
  rep.sigma2 = max_off;
  rep.delta0 = std::max(0.0, max_in - 1.0);
  rep.max_domination = max_dom;
  return rep;
}

}  // namespace nuhlab
