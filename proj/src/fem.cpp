#include "cloakspec/fem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "cloakspec/errors.hpp"

namespace cloakspec {
namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

constexpr std::array<std::array<double, 3>, 3> kQuadBary = {{
    {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
    {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
    {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0},
}};

std::string tri_msg(std::size_t t, const std::string& what) {
  std::ostringstream os;
  os << "triangle " << t << ": " << what;
  return os.str();
}

std::vector<char> outer_flags(const Mesh& mesh) {
  std::vector<char> on(mesh.num_nodes(), 0);
  for (int i : mesh.outer_boundary) on[i] = 1;
  return on;
}

}  // namespace

DofMap make_dof_map(const Mesh& mesh, Constraint constraint) {
  DofMap map;
  map.constraint = constraint;
  const auto on = outer_flags(mesh);
  const int n = static_cast<int>(mesh.num_nodes());
  map.node_to_dof.assign(n, -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    if (constraint == Constraint::none || !on[i]) map.node_to_dof[i] = next++;
  }
  if (constraint == Constraint::tied_boundary) {
    for (int i = 0; i < n; ++i) {
      if (on[i]) map.node_to_dof[i] = next;
    }
    ++next;
  }
  map.num_dofs = next;
  Triplets trip;
  for (int i = 0; i < n; ++i) {
    if (map.node_to_dof[i] >= 0) trip.emplace_back(i, map.node_to_dof[i], 1.0);
  }
  map.prolongation.resize(n, next);
  map.prolongation.setFromTriplets(trip.begin(), trip.end());
  return map;
}

SpMat restrict_matrix(const SpMat& a, const DofMap& map) {
  const SpMat& p = map.prolongation;
  SpMat out = SpMat(p.transpose()) * a * p;
  out.prune(0.0);
  return out;
}

AssembledSystem assemble(const Mesh& mesh, const MaterialField& medium,
                         const std::optional<Source>& source) {
  return assemble(mesh, std::vector<MaterialField>{medium}, source);
}

AssembledSystem assemble(const Mesh& mesh, const std::vector<MaterialField>& media,
                         const std::optional<Source>& source) {
  if (media.empty()) throw ParameterError("assemble: no material supplied");
  const auto n = static_cast<Eigen::Index>(mesh.num_nodes());
  const bool composite = mesh.interface_radius.has_value();
  if (source && source->nodal.size() != 0 && source->nodal.size() != n) {
    throw ParameterError("assemble: nodal source length does not match the mesh");
  }

  Triplets kt, mt;
  kt.reserve(9 * mesh.num_triangles());
  mt.reserve(9 * mesh.num_triangles());
  Eigen::VectorXd load = Eigen::VectorXd::Zero(n);

  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const int tag = mesh.region_tag.empty() ? 0 : mesh.region_tag[t];
    if (media.size() > 1 && (tag < 0 || tag >= static_cast<int>(media.size()))) {
      throw AssemblyError(tri_msg(t, "no material for region tag"));
    }
    const MaterialField& med = media.size() == 1 ? media[0] : media[tag];
    const Vec2 p[3] = {mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]};
    const double area = mesh.signed_area(t);
    if (!(area > 0.0)) throw AssemblyError(tri_msg(t, "non-positive area"));

    Vec2 grad[3];
    for (int i = 0; i < 3; ++i) {
      const Vec2& pj = p[(i + 1) % 3];
      const Vec2& pk = p[(i + 2) % 3];
      grad[i] = Vec2(pj.y() - pk.y(), pk.x() - pj.x()) / (2.0 * area);
    }

    Mat2 gsum = Mat2::Zero();
    double mloc[3][3] = {};
    double floc[3] = {};
    const bool with_source = source && source->function && (!composite || tag == 0);
    for (const auto& bary : kQuadBary) {
      const Vec2 x = bary[0] * p[0] + bary[1] * p[1] + bary[2] * p[2];
      Mat2 g;
      double q = 0.0;
      try {
        g = med.g(x);
        q = med.q(x);
      } catch (const Error& e) {
        throw AssemblyError(tri_msg(t, std::string("coefficient evaluation failed: ") + e.what()));
      }
      const double asym = std::abs(g(0, 1) - g(1, 0));
      const double det = g.determinant();
      if (!g.allFinite() || !std::isfinite(q) || q < 0.0 || g.trace() <= 0.0 || det <= 0.0 ||
          asym > 1e-12 * g.cwiseAbs().maxCoeff()) {
        throw AssemblyError(tri_msg(t, "coefficients not symmetric elliptic"));
      }
      const double w = area / 3.0;
      gsum += w * g;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) mloc[i][j] += w * q * bary[i] * bary[j];
      }
      if (with_source) {
        double f = 0.0;
        try {
          f = source->function(x);
        } catch (const Error& e) {
          throw AssemblyError(tri_msg(t, std::string("source evaluation failed: ") + e.what()));
        }
        for (int i = 0; i < 3; ++i) floc[i] += w * f * bary[i];
      }
    }
    if (source && source->nodal.size() == n && (!composite || tag == 0)) {
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          floc[i] += area / 12.0 * (i == j ? 2.0 : 1.0) * source->nodal(tri[j]);
        }
      }
    }
    for (int i = 0; i < 3; ++i) {
      load(tri[i]) += floc[i];
      for (int j = 0; j < 3; ++j) {
        kt.emplace_back(tri[i], tri[j], grad[i].dot(gsum * grad[j]));
        mt.emplace_back(tri[i], tri[j], mloc[i][j]);
      }
    }
  }

  AssembledSystem sys;
  sys.mesh = std::make_shared<const Mesh>(mesh);
  sys.stiffness.resize(n, n);
  sys.stiffness.setFromTriplets(kt.begin(), kt.end());
  sys.mass.resize(n, n);
  sys.mass.setFromTriplets(mt.begin(), mt.end());
  sys.load = std::move(load);
  sys.dof_map = make_dof_map(mesh, Constraint::none);
  return sys;
}

DirichletSolver::DirichletSolver(const AssembledSystem& sys, double lambda)
    : sys_(&sys), lambda_(lambda) {
  const Mesh& mesh = *sys.mesh;
  const auto on = outer_flags(mesh);
  const int n = static_cast<int>(mesh.num_nodes());
  std::vector<int> local(n, -1);
  std::vector<int> bpos(n, -1);
  for (int i = 0; i < n; ++i) {
    if (!on[i]) {
      local[i] = static_cast<int>(interior_.size());
      interior_.push_back(i);
    }
  }
  for (std::size_t k = 0; k < mesh.outer_boundary.size(); ++k) {
    bpos[mesh.outer_boundary[k]] = static_cast<int>(k);
  }
  const SpMat a = sys.stiffness - lambda * sys.mass;
  Triplets ii, ib;
  for (int col = 0; col < a.outerSize(); ++col) {
    for (SpMat::InnerIterator it(a, col); it; ++it) {
      const int r = static_cast<int>(it.row());
      if (local[r] < 0) continue;
      if (local[col] >= 0) {
        ii.emplace_back(local[r], local[col], it.value());
      } else {
        ib.emplace_back(local[r], bpos[col], it.value());
      }
    }
  }
  const auto ni = static_cast<Eigen::Index>(interior_.size());
  a_ii_.resize(ni, ni);
  a_ii_.setFromTriplets(ii.begin(), ii.end());
  a_ib_.resize(ni, static_cast<Eigen::Index>(mesh.outer_boundary.size()));
  a_ib_.setFromTriplets(ib.begin(), ib.end());

  std::ostringstream name;
  name.precision(10);
  name << "lambda = " << lambda;
  if (ni == 0) return;
  ldlt_.compute(a_ii_);
  if (ldlt_.info() != Eigen::Success) {
    throw ResonanceError(name.str() + " makes the interior system singular");
  }
  const Eigen::VectorXd d = ldlt_.vectorD().cwiseAbs();
  pivot_ratio_ = d.minCoeff() / d.maxCoeff();
  if (!(pivot_ratio_ >= 1e-12)) {
    throw ResonanceError(name.str() + " is numerically a Dirichlet eigenvalue");
  }
}

Eigen::VectorXd DirichletSolver::solve(const Eigen::VectorXd& boundary_values,
                                       bool with_load) const {
  const Mesh& mesh = *sys_->mesh;
  if (boundary_values.size() != static_cast<Eigen::Index>(mesh.outer_boundary.size())) {
    throw ParameterError("boundary data length does not match the outer ring");
  }
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_nodes()));
  for (std::size_t k = 0; k < mesh.outer_boundary.size(); ++k) {
    u(mesh.outer_boundary[k]) = boundary_values(static_cast<Eigen::Index>(k));
  }
  if (interior_.empty()) return u;
  Eigen::VectorXd rhs = -(a_ib_ * boundary_values);
  if (with_load) {
    for (std::size_t k = 0; k < interior_.size(); ++k) rhs(k) += sys_->load(interior_[k]);
  }
  Eigen::VectorXd x = ldlt_.solve(rhs);
  const Eigen::VectorXd r = rhs - a_ii_ * x;
  x += ldlt_.solve(r);
  for (std::size_t k = 0; k < interior_.size(); ++k) u(interior_[k]) = x(k);
  return u;
}

Eigen::VectorXd solve_dirichlet(const AssembledSystem& sys,
                                const Eigen::VectorXd& boundary_values, double lambda) {
  return DirichletSolver(sys, lambda).solve(boundary_values);
}

Eigen::VectorXd boundary_weights(const Mesh& mesh) {
  const auto& ring = mesh.outer_boundary;
  const auto nb = ring.size();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nb));
  for (std::size_t k = 0; k < nb; ++k) {
    const double len = (mesh.nodes[ring[(k + 1) % nb]] - mesh.nodes[ring[k]]).norm();
    w(k) += 0.5 * len;
    w((k + 1) % nb) += 0.5 * len;
  }
  return w;
}

Eigen::VectorXd boundary_flux(const AssembledSystem& sys, const Eigen::VectorXd& u,
                              double lambda) {
  const Mesh& mesh = *sys.mesh;
  if (u.size() != static_cast<Eigen::Index>(mesh.num_nodes())) {
    throw ParameterError("boundary_flux: vector length does not match the mesh");
  }
  const Eigen::VectorXd ku = sys.stiffness * u;
  const Eigen::VectorXd mu = sys.mass * u;
  const Eigen::VectorXd r = ku - lambda * mu - sys.load;
  // magnitude of the terms that cancel in r, so u = const with K u = 0 still has a scale
  const Eigen::VectorXd ua = u.cwiseAbs();
  const double scale = (SpMat(sys.stiffness.cwiseAbs()) * ua).maxCoeff() +
                       std::abs(lambda) * (SpMat(sys.mass.cwiseAbs()) * ua).maxCoeff() +
                       sys.load.cwiseAbs().maxCoeff();
  const auto on = outer_flags(mesh);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (!on[i]) worst = std::max(worst, std::abs(r(i)));
  }
  if (worst > 1e-8 * std::max(scale, 1e-300)) {
    std::ostringstream os;
    os << "interior residual " << worst / scale << " exceeds 1e-8";
    throw InconsistencyError(os.str());
  }
  const Eigen::VectorXd w = boundary_weights(mesh);
  Eigen::VectorXd flux(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) flux(k) = r(mesh.outer_boundary[k]) / w(k);
  return flux;
}

EigenResult solve_eig(const AssembledSystem& sys, int count, Constraint constraint) {
  EigenResult res;
  res.dof_map = make_dof_map(*sys.mesh, constraint);
  if (count < 1 || count > res.dof_map.num_dofs / 4) {
    throw ParameterError("solve_eig: count must lie in [1, DOFs/4]");
  }
  const SpMat k = restrict_matrix(sys.stiffness, res.dof_map);
  const SpMat m = restrict_matrix(sys.mass, res.dof_map);
  PencilOptions opts;
  opts.count = count;
  PencilEigenpairs pe;
  try {
    pe = smallest_eigenpairs(k, m, opts);
  } catch (const SolverError& e) {
    throw SolverError(std::string("M is not positive definite on the constrained space (") +
                      e.what() + ")");
  }
  res.values.assign(pe.values.data(), pe.values.data() + pe.values.size());
  res.residuals.assign(pe.residuals.data(), pe.residuals.data() + pe.residuals.size());
  res.vectors = std::move(pe.vectors);
  res.node_vectors = res.dof_map.prolongation * res.vectors;
  res.clusters = cluster_labels(res.values);
  const double scale = std::max(1.0, std::abs(res.values.back()));
  for (int i = 0; i < count; ++i) {
    if (std::abs(res.values[i]) <= 1e-8 * scale) {
      res.zero_index = i;
      break;
    }
  }
  return res;
}

int count_eigenvalues_below(const AssembledSystem& sys, double lambda,
                            Constraint constraint) {
  const DofMap map = make_dof_map(*sys.mesh, constraint);
  return count_below(restrict_matrix(sys.stiffness, map), restrict_matrix(sys.mass, map),
                     lambda);
}

}  // namespace cloakspec
