#include "cloakspec/eigsolve.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "cloakspec/errors.hpp"

namespace cloakspec {
namespace {

// Two passes of Cholesky QR in the M inner product. Returns false if the
// block is numerically rank deficient.
bool m_orthonormalise(Eigen::MatrixXd& y, const SpMat& m) {
  for (int pass = 0; pass < 2; ++pass) {
    Eigen::MatrixXd gram = y.transpose() * (m * y);
    gram = 0.5 * (gram + gram.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) return false;
    const Eigen::MatrixXd l = llt.matrixL();
    if (l.diagonal().minCoeff() <= 1e-13 * l.diagonal().maxCoeff()) return false;
    y = llt.matrixU().solve<Eigen::OnTheRight>(y);
  }
  return true;
}

}  // namespace

void normalise_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index best = 0;
  double mag = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    // small relative slack so the choice does not flip on roundoff
    if (std::abs(v(i)) > mag * (1.0 + 1e-9)) {
      mag = std::abs(v(i));
      best = i;
    }
  }
  if (v.size() > 0 && v(best) < 0) v = -v;
}

PencilEigenpairs smallest_eigenpairs(const SpMat& k, const SpMat& m,
                                     const PencilOptions& opts) {
  const Eigen::Index n = k.rows();
  if (opts.count < 1 || opts.count > n) throw SolverError("eigenpair count out of range");
  const int p = static_cast<int>(std::min<Eigen::Index>(
      n, std::max(2 * opts.count, opts.count + 8)));

  const SpMat b = k + opts.shift * m;
  Eigen::SimplicialLLT<SpMat> chol(b);
  if (chol.info() != Eigen::Success) {
    throw SolverError("shifted pencil K + tau M is not positive definite");
  }

  std::mt19937_64 gen(opts.seed);
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      x(i, j) = 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0;
    }
  }

  PencilEigenpairs out;
  Eigen::VectorXd ritz;
  Eigen::VectorXd res(opts.count);
  for (int it = 1; it <= opts.max_iterations; ++it) {
    Eigen::MatrixXd y = chol.solve(m * x);
    if (!m_orthonormalise(y, m)) {
      throw SolverError("subspace lost rank; M is singular on the iteration space");
    }
    Eigen::MatrixXd kp = y.transpose() * (k * y);
    kp = 0.5 * (kp + kp.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kp);
    ritz = es.eigenvalues();
    x = y * es.eigenvectors();

    const Eigen::MatrixXd kx = k * x.leftCols(opts.count);
    const Eigen::MatrixXd mx = m * x.leftCols(opts.count);
    double worst = 0.0;
    for (int j = 0; j < opts.count; ++j) {
      const double denom = std::max(kx.col(j).norm(), opts.shift * mx.col(j).norm());
      res(j) = (kx.col(j) - ritz(j) * mx.col(j)).norm() / denom;
      worst = std::max(worst, res(j));
    }
    out.iterations = it;
    if (worst <= opts.tolerance) break;
    if (it == opts.max_iterations && worst > 1e3 * opts.tolerance) {
      std::ostringstream msg;
      msg << "subspace iteration stalled at residual " << worst;
      throw SolverError(msg.str());
    }
  }
  out.values = ritz.head(opts.count);
  out.vectors = x.leftCols(opts.count);
  out.residuals = res;
  for (int j = 0; j < opts.count; ++j) normalise_sign(out.vectors.col(j));
  return out;
}

int count_below(const SpMat& k, const SpMat& m, double sigma) {
  const SpMat a = k - sigma * m;
  Eigen::SimplicialLDLT<SpMat> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw SolverError("inertia factorisation failed");
  const Eigen::VectorXd d = ldlt.vectorD();
  const double scale = d.cwiseAbs().maxCoeff();
  int negative = 0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (std::abs(d(i)) <= 1e-14 * scale) {
      throw SolverError("inertia count: sigma is numerically an eigenvalue");
    }
    if (d(i) < 0) ++negative;
  }
  return negative;
}

std::vector<int> cluster_labels(const std::vector<double>& values, double rel_tol,
                                double zero_tol) {
  std::vector<int> labels(values.size(), 0);
  int label = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double a = values[i - 1];
    const double b = values[i];
    const double scale = std::max(std::abs(a), std::abs(b));
    const bool same = scale <= zero_tol ? true : std::abs(b - a) < rel_tol * scale;
    if (!same) ++label;
    labels[i] = label;
  }
  return labels;
}

}  // namespace cloakspec
