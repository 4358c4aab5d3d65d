#include "cloakspec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "cloakspec/bessel.hpp"
#include "cloakspec/errors.hpp"

namespace cloakspec {
namespace {

double index_squared(const MaterialField& m) {
  if (m.lower_ellipticity > 0.0 && std::isfinite(m.upper_ellipticity)) {
    return m.upper_ellipticity / m.lower_ellipticity;
  }
  return 1.0;
}

// Weighted covariance of boundary traces of the columns of v.
Eigen::MatrixXd trace_covariance(const Mesh& mesh, const Eigen::MatrixXd& v) {
  const Eigen::VectorXd w = boundary_weights(mesh);
  const double total = w.sum();
  Eigen::MatrixXd t(w.size(), v.cols());
  for (Eigen::Index k = 0; k < w.size(); ++k) t.row(k) = v.row(mesh.outer_boundary[k]);
  const Eigen::RowVectorXd mean = (w.transpose() * t) / total;
  t.rowwise() -= mean;
  Eigen::MatrixXd c = t.transpose() * w.asDiagonal() * t / total;
  return 0.5 * (c + c.transpose());
}

// Smallest flatness over span(v) given the L2 Gram matrix.
double min_flatness(const Eigen::MatrixXd& cov, const Eigen::MatrixXd& gram) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, gram);
  return std::sqrt(std::max(0.0, es.eigenvalues()(0)));
}

}  // namespace

double resolved_omega(const Mesh& mesh, double index2) {
  return 2.0 * std::numbers::pi / (10.0 * mesh.max_edge_length() * std::sqrt(index2));
}

double boundary_flatness(const Mesh& mesh, const Eigen::VectorXd& u) {
  const AssembledSystem unit = assemble(mesh, isotropic_medium(1.0, 1.0));
  const Eigen::MatrixXd v = u;
  const double l2 = u.dot(unit.mass * u);
  if (!(l2 > 0.0)) throw ParameterError("boundary_flatness: zero function");
  return std::sqrt(trace_covariance(mesh, v)(0, 0) / l2);
}

SchifferReport schiffer_scan(const Mesh& mesh, const MaterialField& medium,
                             double lambda_max, double flatness_tol) {
  if (!(lambda_max > 0.0)) throw ParameterError("lambda_max must be positive");
  if (!(flatness_tol > 0.0 && flatness_tol <= 0.1)) {
    throw ParameterError("flatness_tol must lie in (0, 0.1]");
  }
  const double omega_ok = resolved_omega(mesh, index_squared(medium));
  if (lambda_max > omega_ok * omega_ok) {
    std::ostringstream os;
    os << "lambda_max " << lambda_max << " exceeds the resolved limit " << omega_ok * omega_ok
       << " (10 points per wavelength)";
    throw ResolutionError(os.str());
  }
  const AssembledSystem sys = assemble(mesh, medium);
  const int below = count_eigenvalues_below(sys, lambda_max, Constraint::none);
  if (below > static_cast<int>(mesh.num_nodes()) / 4) {
    throw ResolutionError("too many eigenvalues below lambda_max for this mesh");
  }

  SchifferReport rep;
  rep.lambda_max = lambda_max;
  rep.flatness_tol = flatness_tol;
  rep.spectrum = solve_eig(sys, std::max(below, 1), Constraint::none);
  const auto& vals = rep.spectrum.values;
  const Eigen::MatrixXd& vec = rep.spectrum.node_vectors;
  const AssembledSystem unit = assemble(mesh, isotropic_medium(1.0, 1.0));
  const double zero_scale = 1e-8 * std::max(1.0, lambda_max);

  rep.flatness.assign(vals.size(), std::numeric_limits<double>::quiet_NaN());
  std::size_t start = 0;
  while (start < vals.size()) {
    std::size_t end = start + 1;
    while (end < vals.size() && rep.spectrum.clusters[end] == rep.spectrum.clusters[start]) ++end;
    if (std::abs(vals[start]) > zero_scale) {
      const auto cols = static_cast<Eigen::Index>(end - start);
      const Eigen::MatrixXd v = vec.middleCols(static_cast<Eigen::Index>(start), cols);
      Eigen::MatrixXd gram = v.transpose() * (unit.mass * v);
      gram = 0.5 * (gram + gram.transpose());
      const double flat = min_flatness(trace_covariance(mesh, v), gram);
      double mean = 0.0;
      for (std::size_t i = start; i < end; ++i) {
        rep.flatness[i] = flat;
        mean += vals[i];
      }
      if (flat <= flatness_tol) {
        rep.candidates.push_back({mean / static_cast<double>(end - start), flat,
                                  static_cast<int>(start)});
      }
    }
    start = end;
  }
  return rep;
}

EigenResult resonance_eigs(const Mesh& mesh, const MaterialField& medium, int count) {
  if (mesh.inner_boundary) throw ParameterError("resonance_eigs needs a simply connected mesh");
  return solve_eig(assemble(mesh, medium), count, Constraint::tied_boundary);
}

std::vector<std::pair<int, double>> resonance_disk_oracle(double q, double radius,
                                                          int m_max, int k_max) {
  if (!(q > 0.0) || !(radius > 0.0)) throw ParameterError("oracle needs q > 0, radius > 0");
  std::vector<std::pair<int, double>> out;
  for (int m = 0; m <= m_max; ++m) {
    const int order = m == 0 ? 1 : m;
    for (int k = 1; k <= k_max; ++k) {
      out.emplace_back(m, bessel_root(order, k) / (radius * std::sqrt(q)));
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second < b.second; });
  return out;
}

ITEConfig reduced_exterior_config(const MaterialField& target) {
  ITEConfig cfg;
  cfg.medium1 = laplace_medium();
  cfg.medium2 = target;
  cfg.coupling << 1.0, -1.0, 1.0, 1.0;
  cfg.distinct_media = true;
  return cfg;
}

std::vector<std::pair<int, double>> ite_disk_oracle(double q_a, int m_max, int k_max) {
  if (!(q_a > 0.0)) throw ParameterError("ite oracle needs q_a > 0");
  std::vector<std::pair<int, double>> out;
  for (int m = 0; m <= m_max; ++m) {
    const int order = m == 0 ? 1 : m - 1;
    for (int k = 1; k <= k_max; ++k) {
      out.emplace_back(m, bessel_root(order, k) / std::sqrt(q_a));
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second < b.second; });
  return out;
}

EigenResult ite_eigs(const Mesh& mesh, const ITEConfig& cfg, int count) {
  if (!cfg.distinct_media) throw ConfigurationError("the two media must differ");
  const Mat2& a = cfg.coupling;
  if (a(0, 0) == 0.0) throw ConfigurationError("trace row cannot be solved for the first field (a11 = 0)");
  if (a(1, 0) == 0.0 || a(1, 1) == 0.0) {
    throw ConfigurationError("flux row must weight both fields (a21, a22 nonzero)");
  }
  if (a.determinant() == 0.0) throw ConfigurationError("coupling matrix is singular");
  if (mesh.inner_boundary) throw ParameterError("ite_eigs needs a simply connected mesh");

  const AssembledSystem s1 = assemble(mesh, cfg.medium1);
  const AssembledSystem s2 = assemble(mesh, cfg.medium2);
  const int n = static_cast<int>(mesh.num_nodes());
  std::vector<int> ring_pos(n, -1);
  for (std::size_t k = 0; k < mesh.outer_boundary.size(); ++k) {
    ring_pos[mesh.outer_boundary[k]] = static_cast<int>(k);
  }
  std::vector<int> interior(n, -1);
  int ni = 0;
  for (int i = 0; i < n; ++i) {
    if (ring_pos[i] < 0) interior[i] = ni++;
  }
  const int nb = static_cast<int>(mesh.outer_boundary.size());
  const int dofs = 2 * ni + nb;
  if (count < 1 || count > dofs / 4) throw ParameterError("ite_eigs: count must lie in [1, DOFs/4]");

  // Trial space ties u_b = s v_b; test space ties the two boundary tests.
  const double s = -a(0, 1) / a(0, 0);
  std::vector<Eigen::Triplet<double>> pt, qt;
  for (int i = 0; i < n; ++i) {
    if (interior[i] >= 0) {
      pt.emplace_back(i, interior[i], 1.0);
      pt.emplace_back(n + i, ni + interior[i], 1.0);
      qt.emplace_back(i, interior[i], 1.0);
      qt.emplace_back(n + i, ni + interior[i], 1.0);
    } else {
      pt.emplace_back(i, 2 * ni + ring_pos[i], s);
      pt.emplace_back(n + i, 2 * ni + ring_pos[i], 1.0);
      qt.emplace_back(i, 2 * ni + ring_pos[i], 1.0);
      qt.emplace_back(n + i, 2 * ni + ring_pos[i], 1.0);
    }
  }
  SpMat p(2 * n, dofs), q(2 * n, dofs);
  p.setFromTriplets(pt.begin(), pt.end());
  q.setFromTriplets(qt.begin(), qt.end());

  auto block_diag = [n](const SpMat& x, double wx, const SpMat& y, double wy) {
    std::vector<Eigen::Triplet<double>> t;
    for (int c = 0; c < x.outerSize(); ++c) {
      for (SpMat::InnerIterator it(x, c); it; ++it) t.emplace_back(it.row(), c, wx * it.value());
    }
    for (int c = 0; c < y.outerSize(); ++c) {
      for (SpMat::InnerIterator it(y, c); it; ++it) {
        t.emplace_back(n + it.row(), n + c, wy * it.value());
      }
    }
    SpMat out(2 * n, 2 * n);
    out.setFromTriplets(t.begin(), t.end());
    return out;
  };
  const SpMat qt_mat = q.transpose();
  SpMat kr = qt_mat * block_diag(s1.stiffness, a(1, 0), s2.stiffness, a(1, 1)) * p;
  SpMat mr = qt_mat * block_diag(s1.mass, a(1, 0), s2.mass, a(1, 1)) * p;
  kr.prune(0.0);
  mr.prune(0.0);

  EigenResult res;
  std::vector<double> values;
  Eigen::MatrixXd vectors;
  std::vector<double> residuals;
  constexpr double kShift = 1.0;

  bool symmetric_done = false;
  if (s == 1.0) {
    Eigen::SimplicialLLT<SpMat> probe(kr + kShift * mr);
    if (probe.info() == Eigen::Success) {
      PencilOptions opts;
      opts.count = std::min(count + 1, dofs);
      opts.shift = kShift;
      const PencilEigenpairs pe = smallest_eigenpairs(kr, mr, opts);
      const double zero_scale = 1e-8 * std::max(1.0, std::abs(pe.values(pe.values.size() - 1)));
      std::vector<Eigen::Index> keep;
      for (Eigen::Index i = 0; i < pe.values.size() && static_cast<int>(keep.size()) < count; ++i) {
        if (std::abs(pe.values(i)) > zero_scale) keep.push_back(i);
      }
      vectors.resize(dofs, static_cast<Eigen::Index>(keep.size()));
      for (std::size_t j = 0; j < keep.size(); ++j) {
        values.push_back(pe.values(keep[j]));
        residuals.push_back(pe.residuals(keep[j]));
        vectors.col(static_cast<Eigen::Index>(j)) = pe.vectors.col(keep[j]);
      }
      symmetric_done = true;
    }
  }

  if (!symmetric_done) {
    constexpr int kDenseLimit = 2000;
    if (dofs > kDenseLimit) {
      std::ostringstream os;
      os << "nonsymmetric transmission pencil with " << dofs << " DOFs exceeds the dense limit "
         << kDenseLimit;
      throw SolverError(os.str());
    }
    const Eigen::MatrixXd kd(kr), md(mr);
    Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(kd, md, true);
    if (ges.info() != Eigen::Success) throw SolverError("QZ iteration failed");
    const Eigen::VectorXcd alpha = ges.alphas();
    const Eigen::VectorXd beta = ges.betas();
    const Eigen::MatrixXcd evec = ges.eigenvectors();
    const double kscale = kd.cwiseAbs().maxCoeff();
    const double mscale = md.cwiseAbs().maxCoeff();
    const double spectral_scale = kscale / std::max(mscale, 1e-300);
    struct Pair {
      double value;
      Eigen::VectorXd vec;
      double residual;
    };
    std::vector<Pair> found;
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
      // infinite eigenvalues come from the singular mass block
      if (std::abs(beta(i)) <= 1e-10 * std::abs(alpha(i)) / spectral_scale) continue;
      const std::complex<double> lam = alpha(i) / beta(i);
      if (std::abs(lam.imag()) >= 1e-8 * std::abs(lam)) continue;
      const double value = lam.real();
      if (std::abs(value) <= 1e-10 * spectral_scale) continue;  // K-kernel
      // real eigenvector: the dominant real/imaginary part of the complex one
      Eigen::VectorXd v = evec.col(i).real();
      const Eigen::VectorXd vi = evec.col(i).imag();
      if (vi.norm() > v.norm()) v = vi;
      v.normalize();
      normalise_sign(v);
      const Eigen::VectorXd kv = kd * v;
      const Eigen::VectorXd mv = md * v;
      const double r = (kv - value * mv).norm() / std::max(kv.norm(), kShift * mv.norm());
      found.push_back({value, v, r});
    }
    std::stable_sort(found.begin(), found.end(),
                     [](const Pair& x, const Pair& y) { return x.value < y.value; });
    if (static_cast<int>(found.size()) > count) found.resize(count);
    vectors.resize(dofs, static_cast<Eigen::Index>(found.size()));
    for (std::size_t j = 0; j < found.size(); ++j) {
      values.push_back(found[j].value);
      residuals.push_back(found[j].residual);
      vectors.col(static_cast<Eigen::Index>(j)) = found[j].vec;
    }
  }

  res.values = std::move(values);
  res.residuals = std::move(residuals);
  res.node_vectors = p * vectors;
  res.vectors = std::move(vectors);
  res.clusters = cluster_labels(res.values);
  return res;
}

std::vector<double> omegas_of(const std::vector<double>& lambdas) {
  std::vector<double> out;
  out.reserve(lambdas.size());
  for (double l : lambdas) out.push_back(std::sqrt(std::max(0.0, l)));
  return out;
}

OracleMatch match_oracle(const std::vector<double>& computed,
                         const std::vector<std::pair<int, double>>& oracle, double cutoff,
                         double match_tol, double partner_tol) {
  auto nearest = [](const std::vector<double>& pool, double x) {
    double best = std::numeric_limits<double>::infinity();
    for (double v : pool) {
      if (std::abs(v - x) < std::abs(best - x)) best = v;
    }
    return best;
  };
  OracleMatch out;
  out.cutoff = cutoff;
  out.ok = true;
  std::vector<double> oracle_values;
  for (const auto& [m, w] : oracle) {
    oracle_values.push_back(w);
    if (w > cutoff) continue;
    OracleMatch::Entry e;
    e.m = m;
    e.oracle = w;
    e.nearest = nearest(computed, w);
    e.relative_error = std::abs(e.nearest - w) / w;
    e.matched = e.relative_error <= match_tol;
    out.ok = out.ok && e.matched;
    out.entries.push_back(e);
  }
  for (double c : computed) {
    if (c > cutoff) continue;
    const double w = nearest(oracle_values, c);
    if (!(std::abs(w - c) <= partner_tol * w)) {
      out.unmatched.push_back(c);
      out.ok = false;
    }
  }
  return out;
}

}  // namespace cloakspec
