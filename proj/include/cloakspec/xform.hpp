#pragma once

#include <functional>
#include <limits>
#include <string>

#include "cloakspec/types.hpp"

namespace cloakspec {

/// A planar diffeomorphism with closed-form Jacobian and inverse.
struct DiffeoSpec {
  std::string name;
  std::function<Vec2(const Vec2&)> map;
  std::function<Mat2(const Vec2&)> jacobian;
  std::function<Vec2(const Vec2&)> inverse;
  /// Points where `map` may be evaluated.
  std::function<bool(const Vec2&)> in_domain;
  /// Points where `inverse` may be evaluated.
  std::function<bool(const Vec2&)> in_range;
};

/// Symmetric coefficient tensor g and scalar q, stored as evaluation
/// closures. The ellipticity bounds bracket the eigenvalues of g and the
/// value of q; an unknown bound is reported as 0 / +inf.
struct MaterialField {
  std::function<Mat2(const Vec2&)> g;
  std::function<double(const Vec2&)> q;
  double lower_ellipticity = 0.0;
  double upper_ellipticity = std::numeric_limits<double>::infinity();
};

MaterialField isotropic_medium(double g_scale, double q_value);
MaterialField diagonal_medium(double gxx, double gyy, double q_value);
/// g = I, q = 0: the Laplace operator (no mass term).
MaterialField laplace_medium();

/// (F_* g)(y) = DF g DF^T / |det DF| and (F_* q)(y) = q / |det DF| at
/// x = F^{-1}(y); the tensor is symmetrised after the triple product.
/// Evaluating outside F's range throws DomainError.
MaterialField push_forward(const DiffeoSpec& f, const MaterialField& m);

DiffeoSpec identity_map();

/// Singular cloak map x -> (1 + |x|/2) x/|x|, B_2\{0} onto B_2\B_1.
DiffeoSpec cloak_map();

/// Regularised cloak map x -> (2(1-eps)/(2-eps) + |x|/(2-eps)) x/|x|,
/// B_2\B_eps onto B_2\B_1. eps = 1 is the identity. The affine radial
/// profile is evaluated for every |x| > 0 so quadrature points just inside
/// a polygonal interface stay evaluable.
DiffeoSpec reg_cloak_map(double eps);

/// (x, y) -> (x, -y)/(x^2 + y^2), the conformal map z -> 1/z written as a
/// real involution.
DiffeoSpec inversion_map();

/// G o F, with the chain-rule Jacobian and inverse F^{-1} o G^{-1}.
DiffeoSpec compose(const DiffeoSpec& g, const DiffeoSpec& f);

/// x -> F(s x)/s. Conjugating by a dilation moves the support of a
/// boundary-fixing map; the Jacobian bound is unchanged.
DiffeoSpec dilate_conjugate(const DiffeoSpec& f, double s);

/// x + t b(x), b a smooth seeded bump vanishing with two derivatives on
/// |x| = 1.8 and scaled so that sup |Db| = 1.4. Invertible for |t| <= 0.2.
DiffeoSpec bump_diffeo(double t, unsigned long long seed);

/// Parses `identity`, `cloak`, `regcloak:<eps>`, `inversion`,
/// `bump:<t>:<seed>`.
DiffeoSpec diffeo_from_name(const std::string& name);

/// (F_eps)_*(I, 1) with exact eps-dependent ellipticity bounds.
MaterialField cloak_shell_medium(double eps);

/// Bump map support radius and the Jacobian bound it is normalised to.
inline constexpr double kBumpSupport = 1.8;
inline constexpr double kBumpJacobianBound = 1.4;

}  // namespace cloakspec
