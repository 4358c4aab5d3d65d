#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cloakspec/dtn.hpp"
#include "cloakspec/fem.hpp"

namespace cloakspec {

/// Regularised cloak of B_1 inside B_2. The source, if any, is given as
/// nodal values on the region-0 sub-mesh (see cloak_target_mesh), which is
/// the same for every epsilon at fixed mesh_h.
struct CloakExperiment {
  double epsilon = 1.0;
  double omega = 1.0;
  MaterialField target = isotropic_medium(1.0, 1.0);
  std::optional<Eigen::VectorXd> source;
  int modes = 8;
  double mesh_h = 0.05;
};

struct SweepRecord {
  double epsilon = 0.0;
  double dtn_error_value = 0.0;
  int dofs = 0;
  double factor_seconds = 0.0;
  double omega = 0.0;
  int modes = 0;
};

struct CloakRun {
  DtNMatrix dtn;
  SweepRecord record;
};

/// Composite disk of radius 2, interface at 1, shell graded from width
/// min(h, eps/4) at the interface.
Mesh cloak_mesh(double epsilon, double h);

/// Region-0 part of cloak_mesh (independent of epsilon).
Mesh cloak_target_mesh(double h);

/// {target on region 0, (F_eps)_*(I, 1) on region 1}.
std::vector<MaterialField> cloak_media(double epsilon, const MaterialField& target);

CloakRun run_cloak(const CloakExperiment& exp);

/// One run per epsilon, in the given order.
std::vector<CloakRun> sweep(const CloakExperiment& base, const std::vector<double>& epsilons);

/// L2(q) split of f against span(basis) (columns M-orthonormal or not).
/// Returns (|component in|, |component out|) in the M norm; an empty basis
/// gives (0, |f|).
std::pair<double, double> source_projection(const Eigen::VectorXd& f,
                                            const Eigen::MatrixXd& basis, const SpMat& mass);

/// Interior resonance nearest omega_guess on the target mesh and the member
/// of its eigenspace with the largest boundary trace (the radial mode on a
/// disk), normalised to unit L2(q) norm.
struct ResonantSource {
  double omega = 0.0;
  Eigen::VectorXd nodal;  // on cloak_target_mesh(h)
  Eigen::MatrixXd eigenspace;
};
ResonantSource resonant_source(const MaterialField& target, double omega_guess, double h);

}  // namespace cloakspec
