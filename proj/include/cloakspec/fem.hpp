#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "cloakspec/eigsolve.hpp"
#include "cloakspec/mesh.hpp"
#include "cloakspec/xform.hpp"

namespace cloakspec {

/// Right-hand side f of div(g grad u) + lambda q u = f. Either a point
/// function or nodal values of a P1 function; on composite meshes it is
/// only integrated over region 0.
struct Source {
  std::function<double(const Vec2&)> function;
  Eigen::VectorXd nodal;

  static Source from_function(std::function<double(const Vec2&)> f) {
    Source s;
    s.function = std::move(f);
    return s;
  }
  static Source from_nodal(Eigen::VectorXd v) {
    Source s;
    s.nodal = std::move(v);
    return s;
  }
};

enum class Constraint { none, dirichlet, tied_boundary };

/// Node to degree-of-freedom map. Dirichlet nodes map to -1; under
/// tied_boundary every outer-boundary node maps to the last DOF.
/// `prolongation` (nodes x dofs) expands a DOF vector to nodal values.
struct DofMap {
  Constraint constraint = Constraint::none;
  std::vector<int> node_to_dof;
  int num_dofs = 0;
  SpMat prolongation;
};

DofMap make_dof_map(const Mesh& mesh, Constraint constraint);

/// K[i][j] = int g grad phi_j . grad phi_i, M[i][j] = int q phi_j phi_i,
/// F[i] = int f phi_i over all mesh nodes (no constraint applied).
struct AssembledSystem {
  std::shared_ptr<const Mesh> mesh;
  SpMat stiffness;
  SpMat mass;
  Eigen::VectorXd load;
  DofMap dof_map;  // unconstrained
};

/// One material per region tag (index = tag). A single-entry list applies
/// everywhere. Coefficients are sampled at the three interior points with
/// barycentric coordinates (2/3, 1/6, 1/6).
AssembledSystem assemble(const Mesh& mesh, const std::vector<MaterialField>& media,
                         const std::optional<Source>& source = std::nullopt);
AssembledSystem assemble(const Mesh& mesh, const MaterialField& medium,
                         const std::optional<Source>& source = std::nullopt);

/// Factorisation of (K - lambda M) restricted to interior (non outer
/// boundary) nodes, reusable across boundary data. Keeps a pointer to
/// `sys`, which must outlive the solver.
class DirichletSolver {
public:
  DirichletSolver(const AssembledSystem& sys, double lambda);
  /// Nodal solution with u = boundary_values on the outer ring (ring order).
  Eigen::VectorXd solve(const Eigen::VectorXd& boundary_values,
                        bool with_load = true) const;
  double lambda() const { return lambda_; }
  double pivot_ratio() const { return pivot_ratio_; }

private:
  const AssembledSystem* sys_;
  double lambda_;
  double pivot_ratio_ = 1.0;
  std::vector<int> interior_;  // node ids of interior unknowns
  SpMat a_ii_;
  SpMat a_ib_;
  Eigen::SimplicialLDLT<SpMat> ldlt_;
};

/// Throws ResonanceError when the pivot ratio of the interior factorisation
/// drops below 1e-12.
Eigen::VectorXd solve_dirichlet(const AssembledSystem& sys,
                                const Eigen::VectorXd& boundary_values,
                                double lambda);

/// Residual (K - lambda M) u - F on the outer ring divided by the lumped
/// (trapezoid) boundary mass, in ring order. Throws InconsistencyError if
/// the interior residual exceeds 1e-8 relative.
Eigen::VectorXd boundary_flux(const AssembledSystem& sys, const Eigen::VectorXd& u,
                              double lambda);

/// Trapezoid weight of each outer-ring node (half the two adjacent edges).
Eigen::VectorXd boundary_weights(const Mesh& mesh);

struct EigenResult {
  std::vector<double> values;          // ascending
  Eigen::MatrixXd vectors;             // DOF space, one column per value
  Eigen::MatrixXd node_vectors;        // prolongated to mesh nodes
  std::vector<double> residuals;
  std::vector<int> clusters;           // label per value
  std::optional<int> zero_index;       // index of a kept zero eigenvalue
  DofMap dof_map;
};

/// Smallest `count` eigenpairs of K v = lambda M v on the constrained space.
/// Vectors are M-orthonormal. count must not exceed DOFs / 4.
EigenResult solve_eig(const AssembledSystem& sys, int count, Constraint constraint);

/// Number of eigenvalues strictly below lambda on the constrained space.
int count_eigenvalues_below(const AssembledSystem& sys, double lambda,
                            Constraint constraint);

/// Constrained K and M (P^T K P, P^T M P).
SpMat restrict_matrix(const SpMat& a, const DofMap& map);

}  // namespace cloakspec
