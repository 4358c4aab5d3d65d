#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace cloakspec {

using SpMat = Eigen::SparseMatrix<double>;

struct PencilOptions {
  int count = 1;
  /// K + shift*M must be positive definite.
  double shift = 1.0;
  double tolerance = 1e-10;
  int max_iterations = 2000;
  std::uint64_t seed = 0x5eedULL;
};

struct PencilEigenpairs {
  Eigen::VectorXd values;     // ascending
  Eigen::MatrixXd vectors;    // M-orthonormal columns
  Eigen::VectorXd residuals;  // |Kv - lambda Mv| / max(|Kv|, shift |Mv|)
  int iterations = 0;
};

/// Smallest `count` eigenpairs of K v = lambda M v for symmetric K, M with
/// K + shift*M positive definite (M may be singular). Block subspace
/// iteration on (K + shift M)^{-1} M with Rayleigh-Ritz and a seeded start
/// block, so results are bit-reproducible. Throws SolverError if the
/// shifted matrix cannot be factored or the iteration stalls.
PencilEigenpairs smallest_eigenpairs(const SpMat& k, const SpMat& m,
                                     const PencilOptions& opts);

/// Number of eigenvalues of (K, M) strictly below sigma, from the inertia of
/// K - sigma M (M positive definite). Throws SolverError when sigma is
/// numerically an eigenvalue.
int count_below(const SpMat& k, const SpMat& m, double sigma);

/// Cluster label per (ascending) value: neighbours whose gap is below
/// rel_tol * max(|a|, |b|) share a label. Values below zero_tol in
/// magnitude are compared absolutely.
std::vector<int> cluster_labels(const std::vector<double>& values,
                                double rel_tol = 0.005, double zero_tol = 1e-8);

/// Deterministic sign: the entry of largest magnitude (lowest index on
/// ties) is made positive.
void normalise_sign(Eigen::Ref<Eigen::VectorXd> v);

}  // namespace cloakspec
