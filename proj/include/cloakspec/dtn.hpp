#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cloakspec/fem.hpp"

namespace cloakspec {

/// Truncated DtN operator in the boundary basis
/// {1/sqrt(2 pi R), cos(n t)/sqrt(pi R), sin(n t)/sqrt(pi R)}, n = 1..N,
/// ordered 1, cos 1, sin 1, cos 2, sin 2, ...
struct DtNMatrix {
  double omega = 0.0;
  int modes = 0;
  double radius = 0.0;
  Eigen::MatrixXd entries;
};

/// Basis functions sampled at the outer ring nodes (ring x (2N+1)).
Eigen::MatrixXd trig_basis(const Mesh& mesh, int modes, double radius);

/// Radius of a circular outer boundary; ParameterError otherwise.
double outer_radius(const Mesh& mesh);

/// Column k is the projected boundary flux of the solution with Dirichlet
/// data psi_k at lambda = omega^2. The projection uses trapezoid weights,
/// so entries = Psi^T S Psi for the discrete Schur complement S. When the
/// system carries a load the map is affine and each column includes the
/// load response.
DtNMatrix dtn_matrix(const AssembledSystem& sys, double omega, int modes);
DtNMatrix dtn_matrix(const Mesh& mesh, const std::vector<MaterialField>& media,
                     double omega, int modes,
                     const std::optional<Source>& source = std::nullopt);

/// diag(omega J_n'(omega R) / J_n(omega R)), cos/sin entries duplicated.
/// ResonanceError when omega R sits on a zero of some J_n (|J_n| < 1e-8
/// past half its first zero).
DtNMatrix dtn_free_analytic(double omega, int modes, double radius);

/// sigma_max(A - B) / sigma_max(B).
double dtn_error(const DtNMatrix& a, const DtNMatrix& b);

std::string dtn_to_json(const DtNMatrix& d);

}  // namespace cloakspec
