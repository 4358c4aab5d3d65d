#include "cloakspec/cloak.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>

#include "cloakspec/errors.hpp"
#include "cloakspec/spectra.hpp"

namespace cloakspec {
namespace {

constexpr double kOuter = 2.0;
constexpr double kInterface = 1.0;

void check_experiment(const CloakExperiment& exp) {
  if (!(exp.epsilon > 0.0 && exp.epsilon <= 1.0)) throw ParameterError("epsilon must lie in (0, 1]");
  if (exp.modes < 1) throw ParameterError("modes must be at least 1");
  if (!(exp.omega > 0.0)) throw ParameterError("omega must be positive");
  if (!(exp.mesh_h > 0.0)) throw ParameterError("mesh h must be positive");
  if (exp.mesh_h > kInterface / 4.0) {
    throw ResolutionError("mesh h must not exceed 1/4 to resolve the interface");
  }
}

}  // namespace

Mesh cloak_mesh(double epsilon, double h) {
  return make_graded_disk(kOuter, kInterface, h, std::min(h, epsilon / 4.0));
}

Mesh cloak_target_mesh(double h) { return extract_region(cloak_mesh(1.0, h), 0); }

std::vector<MaterialField> cloak_media(double epsilon, const MaterialField& target) {
  return {target, cloak_shell_medium(epsilon)};
}

CloakRun run_cloak(const CloakExperiment& exp) {
  check_experiment(exp);
  const auto t0 = std::chrono::steady_clock::now();
  const Mesh mesh = cloak_mesh(exp.epsilon, exp.mesh_h);
  const double omega_ok = resolved_omega(mesh, 1.0);
  if (exp.omega > omega_ok) {
    std::ostringstream os;
    os << "omega " << exp.omega << " exceeds the resolved limit " << omega_ok;
    throw ResolutionError(os.str());
  }

  std::optional<Source> source;
  if (exp.source) {
    std::vector<int> parent;
    const Mesh inner = extract_region(mesh, 0, &parent);
    if (exp.source->size() != static_cast<Eigen::Index>(inner.num_nodes())) {
      throw ParameterError("source length does not match the target mesh");
    }
    Eigen::VectorXd nodal = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_nodes()));
    for (std::size_t i = 0; i < parent.size(); ++i) nodal(parent[i]) = (*exp.source)(i);
    source = Source::from_nodal(std::move(nodal));
  }

  const AssembledSystem sys = assemble(mesh, cloak_media(exp.epsilon, exp.target), source);
  CloakRun run;
  run.dtn = dtn_matrix(sys, exp.omega, exp.modes);
  run.record.epsilon = exp.epsilon;
  run.record.omega = exp.omega;
  run.record.modes = exp.modes;
  run.record.dofs = static_cast<int>(mesh.num_nodes() - mesh.outer_boundary.size());
  run.record.dtn_error_value =
      dtn_error(run.dtn, dtn_free_analytic(exp.omega, exp.modes, kOuter));
  run.record.factor_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return run;
}

std::vector<CloakRun> sweep(const CloakExperiment& base, const std::vector<double>& epsilons) {
  if (epsilons.empty()) throw ParameterError("empty epsilon list");
  std::vector<CloakRun> out;
  out.reserve(epsilons.size());
  for (double eps : epsilons) {
    CloakExperiment exp = base;
    exp.epsilon = eps;
    out.push_back(run_cloak(exp));
  }
  return out;
}

std::pair<double, double> source_projection(const Eigen::VectorXd& f,
                                            const Eigen::MatrixXd& basis, const SpMat& mass) {
  const Eigen::VectorXd mf = mass * f;
  const double total = std::sqrt(std::max(0.0, f.dot(mf)));
  if (basis.cols() == 0) return {0.0, total};
  Eigen::MatrixXd gram = basis.transpose() * (mass * basis);
  gram = 0.5 * (gram + gram.transpose());
  const Eigen::VectorXd coeff = gram.ldlt().solve(basis.transpose() * mf);
  const Eigen::VectorXd in = basis * coeff;
  const Eigen::VectorXd out = f - in;
  return {std::sqrt(std::max(0.0, in.dot(mass * in))),
          std::sqrt(std::max(0.0, out.dot(mass * out)))};
}

ResonantSource resonant_source(const MaterialField& target, double omega_guess, double h) {
  const Mesh inner = cloak_target_mesh(h);
  const int count = 16;
  const EigenResult eig = resonance_eigs(inner, target, count);
  int best = -1;
  for (int i = 0; i < count; ++i) {
    if (eig.zero_index && *eig.zero_index == i) continue;
    const double w = std::sqrt(std::max(0.0, eig.values[i]));
    if (best < 0 || std::abs(w - omega_guess) <
                        std::abs(std::sqrt(std::max(0.0, eig.values[best])) - omega_guess)) {
      best = i;
    }
  }
  ResonantSource rs;
  std::vector<int> members;
  for (int i = 0; i < count; ++i) {
    if (eig.clusters[i] == eig.clusters[best]) members.push_back(i);
  }
  rs.eigenspace.resize(eig.node_vectors.rows(), static_cast<Eigen::Index>(members.size()));
  for (std::size_t j = 0; j < members.size(); ++j) {
    rs.eigenspace.col(static_cast<Eigen::Index>(j)) = eig.node_vectors.col(members[j]);
  }
  // combination maximising the tied boundary value
  const int ring_node = inner.outer_boundary.front();
  Eigen::VectorXd f = rs.eigenspace * rs.eigenspace.row(ring_node).transpose();
  if (f.norm() == 0.0) f = rs.eigenspace.col(0);
  const AssembledSystem sys = assemble(inner, target);
  f /= std::sqrt(f.dot(sys.mass * f));
  rs.omega = std::sqrt(f.dot(sys.stiffness * f));
  normalise_sign(f);
  rs.nodal = std::move(f);
  return rs;
}

}  // namespace cloakspec
