#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nuhlab/geometry.hpp"

namespace nuhlab {

/// Parameters of the derived-from-Anosov family.
struct DAParams {
  Mat2 base{2, 1, 1, 1};          // integer hyperbolic matrix, |det| = 1
  TorusPoint center{0.0, 0.0};    // center of the deformation region V
  double radius = 0.12;           // radius of V, in (0, 1/2)
  double strength = 0.63;         // shear amplitude, in [0, 1)
};

struct MapConditionsReport {
  double sigma1 = 0.0;      // certified volume-hyperbolicity constant (> 1)
  double sigma2 = 0.0;      // certified off-V contraction constant (< 1)
  double delta0 = 0.0;      // certified in-V near-neutral constant (>= 0)
  double cone_width = 0.0;
  double max_domination = 0.0;
  std::vector<std::pair<TorusPoint, std::string>> violations;

  bool certified() const { return violations.empty(); }
};

/// A diffeomorphism of T^2: the linear Anosov base map, the derived-from-Anosov
/// perturbation f = g o f_hat, or the synthetic two-attractor test fixture.
/// Immutable after construction; all queries are pure.
class TorusMap {
 public:
  enum class Kind { Linear, DerivedAnosov, TwoAttractor };

  static TorusMap linear(const Mat2& base);
  static TorusMap derived_anosov(const DAParams& params);
  /// Piecewise contraction with two invariant discs; used only to validate
  /// basin counting. Not invertible.
  static TorusMap two_attractor_fixture();

  Kind kind() const { return kind_; }
  const DAParams& params() const { return params_; }

  TorusPoint apply(const TorusPoint& p) const;
  /// Continuous lift of the map: agrees with apply modulo Z^2 and is
  /// continuous along curves in R^2.
  Vec2 apply_lift(const Vec2& p) const;
  Mat2 jacobian(const TorusPoint& p) const;
  bool invertible() const { return kind_ != Kind::TwoAttractor; }
  TorusPoint inverse_apply(const TorusPoint& p) const;

  /// True where Df differs from the base matrix (for the DA map, the
  /// preimage under f_hat of the shear support ball).
  bool in_deformation_region(const TorusPoint& p) const;

  // Reference hyperbolic splitting of the base matrix.
  double lambda_u() const { return lambda_u_; }
  double lambda_s() const { return lambda_s_; }
  const Vec2& e_u() const { return e_u_; }
  const Vec2& e_s() const { return e_s_; }

 private:
  TorusMap() = default;

  Vec2 shear_lift(const Vec2& z) const;   // g in lift coordinates
  Mat2 shear_jacobian(const Vec2& z) const;
  Vec2 shear_inverse(const Vec2& z) const;

  Kind kind_ = Kind::Linear;
  DAParams params_;
  Mat2 base_inv_;
  double lambda_u_ = 0.0, lambda_s_ = 0.0;
  Vec2 e_u_, e_s_;
};

/// Certify conditions (A)-(D) and the domination bound on a grid_n x grid_n
/// sample. An all-fail report is valid output.
MapConditionsReport verify_conditions(const TorusMap& map, double cone_width,
                                      int grid_n, double lambda_target);

}  // namespace nuhlab
