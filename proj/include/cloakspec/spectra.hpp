#pragma once

#include <utility>
#include <vector>

#include "cloakspec/fem.hpp"

namespace cloakspec {

struct SchifferCandidate {
  double lambda = 0.0;
  double boundary_flatness = 0.0;
  int mode_index = 0;
};

/// Full Neumann spectrum below lambda_max with the flatness of each
/// eigenspace, plus the flat ones.
struct SchifferReport {
  double lambda_max = 0.0;
  double flatness_tol = 0.0;
  EigenResult spectrum;
  /// Per eigenvalue: smallest flatness attained on its cluster's
  /// eigenspace (NaN for the zero mode).
  std::vector<double> flatness;
  std::vector<SchifferCandidate> candidates;
};

/// std of the boundary trace (trapezoid weighted) over the L2(Omega) norm.
double boundary_flatness(const Mesh& mesh, const Eigen::VectorXd& u);

/// Neumann eigenpairs with lambda <= lambda_max and their boundary
/// flatness. Each cluster is scored by the flattest function in its span,
/// so a radial mode hidden in a degenerate cluster is still found.
/// ResolutionError when lambda_max needs more than max_edge/10 per
/// wavelength 2 pi / sqrt(lambda_max).
SchifferReport schiffer_scan(const Mesh& mesh, const MaterialField& medium,
                             double lambda_max, double flatness_tol);

/// Tied-boundary eigenpairs (values are omega^2; the zero mode is kept and
/// flagged).
EigenResult resonance_eigs(const Mesh& mesh, const MaterialField& medium, int count);

/// Tied-boundary eigenvalues of the unit-scaled disk with g = I, constant
/// q: m = 0 needs J_1(k) = 0, m >= 1 needs J_m(k) = 0, omega = k/(R sqrt(q)).
std::vector<std::pair<int, double>> resonance_disk_oracle(double q, double radius,
                                                          int m_max, int k_max);

/// Two media on one domain coupled through the boundary by A:
/// trace row  a11 u + a12 v = 0, flux row a21 (g1 du/dn) + a22 (g2 dv/dn) = 0.
struct ITEConfig {
  MaterialField medium1;
  MaterialField medium2;
  Mat2 coupling = Mat2::Identity();
  /// The caller asserts (g1, q1) != (g2, q2).
  bool distinct_media = true;
};

/// The conformally reduced exterior problem: (I, 0) coupled to (g_a, q_a)
/// with A = [[1, -1], [1, 1]].
ITEConfig reduced_exterior_config(const MaterialField& target);

/// Real transmission eigenvalues (omega^2) on a simply connected mesh.
/// node_vectors stacks the two nodal fields. The K-kernel is excluded.
EigenResult ite_eigs(const Mesh& mesh, const ITEConfig& cfg, int count);

/// (m, omega) for g_a = I, q_a constant on the unit disk: zeros of J_{m-1}
/// for m >= 1 and of J_1 for m = 0, divided by sqrt(q_a). Sorted by omega.
std::vector<std::pair<int, double>> ite_disk_oracle(double q_a, int m_max, int k_max);

/// Largest omega the mesh resolves with 10 points per wavelength in a
/// medium of refractive index sqrt(index2).
double resolved_omega(const Mesh& mesh, double index2);

struct OracleMatch {
  struct Entry {
    int m = 0;
    double oracle = 0.0;
    double nearest = 0.0;       // closest computed value
    double relative_error = 0.0;
    bool matched = false;
  };
  double cutoff = 0.0;
  std::vector<Entry> entries;     // oracle values at or below the cutoff
  std::vector<double> unmatched;  // computed values below the cutoff with no oracle partner
  bool ok = false;
};

/// Every oracle value <= cutoff must have a computed value within match_tol
/// (relative); every computed value <= cutoff must have an oracle value
/// within partner_tol.
OracleMatch match_oracle(const std::vector<double>& computed,
                         const std::vector<std::pair<int, double>>& oracle, double cutoff,
                         double match_tol, double partner_tol);

/// sqrt of each value (clamped at zero).
std::vector<double> omegas_of(const std::vector<double>& lambdas);

}  // namespace cloakspec
