#include "cloakspec/dtn.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "cloakspec/bessel.hpp"
#include "cloakspec/errors.hpp"

namespace cloakspec {
namespace {

void check_modes(int modes) {
  if (modes < 0) throw ParameterError("modes must be non-negative");
}

double sigma_max(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(0);
}

}  // namespace

double outer_radius(const Mesh& mesh) {
  if (mesh.outer_curve.kind != BoundaryCurve::Kind::circle) {
    throw ParameterError("DtN maps need a circular outer boundary");
  }
  return mesh.outer_curve.a;
}

Eigen::MatrixXd trig_basis(const Mesh& mesh, int modes, double radius) {
  check_modes(modes);
  const auto& ring = mesh.outer_boundary;
  Eigen::MatrixXd psi(static_cast<Eigen::Index>(ring.size()), 2 * modes + 1);
  const double c0 = 1.0 / std::sqrt(2.0 * std::numbers::pi * radius);
  const double cn = 1.0 / std::sqrt(std::numbers::pi * radius);
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Vec2& p = mesh.nodes[ring[i]];
    const double t = std::atan2(p.y(), p.x());
    const auto row = static_cast<Eigen::Index>(i);
    psi(row, 0) = c0;
    for (int n = 1; n <= modes; ++n) {
      psi(row, 2 * n - 1) = cn * std::cos(n * t);
      psi(row, 2 * n) = cn * std::sin(n * t);
    }
  }
  return psi;
}

DtNMatrix dtn_matrix(const AssembledSystem& sys, double omega, int modes) {
  check_modes(modes);
  const Mesh& mesh = *sys.mesh;
  const double radius = outer_radius(mesh);
  if (static_cast<int>(mesh.outer_boundary.size()) < 8 * modes) {
    std::ostringstream os;
    os << "outer ring has " << mesh.outer_boundary.size() << " nodes, fewer than 8N = "
       << 8 * modes;
    throw ParameterError(os.str());
  }
  const double lambda = omega * omega;
  const Eigen::MatrixXd psi = trig_basis(mesh, modes, radius);
  const DirichletSolver solver(sys, lambda);
  const Eigen::VectorXd w = boundary_weights(mesh);

  DtNMatrix d;
  d.omega = omega;
  d.modes = modes;
  d.radius = radius;
  d.entries.resize(psi.cols(), psi.cols());
  for (Eigen::Index k = 0; k < psi.cols(); ++k) {
    const Eigen::VectorXd u = solver.solve(psi.col(k));
    const Eigen::VectorXd flux = boundary_flux(sys, u, lambda);
    d.entries.col(k) = psi.transpose() * w.cwiseProduct(flux);
  }
  return d;
}

DtNMatrix dtn_matrix(const Mesh& mesh, const std::vector<MaterialField>& media,
                     double omega, int modes, const std::optional<Source>& source) {
  const AssembledSystem sys = assemble(mesh, media, source);
  return dtn_matrix(sys, omega, modes);
}

DtNMatrix dtn_free_analytic(double omega, int modes, double radius) {
  check_modes(modes);
  if (!(omega > 0.0) || !(radius > 0.0)) {
    throw ParameterError("dtn_free_analytic: omega and radius must be positive");
  }
  const double x = omega * radius;
  DtNMatrix d;
  d.omega = omega;
  d.modes = modes;
  d.radius = radius;
  d.entries = Eigen::MatrixXd::Zero(2 * modes + 1, 2 * modes + 1);
  for (int n = 0; n <= modes; ++n) {
    const double jn = bessel_j(n, x);
    if (std::abs(jn) < 1e-8 && x > 0.5 * bessel_root(n, 1)) {
      std::ostringstream os;
      os << "J_" << n << "(omega R) vanishes at omega R = " << x;
      throw ResonanceError(os.str());
    }
    const double value = omega * bessel_j_prime(n, x) / jn;
    if (n == 0) {
      d.entries(0, 0) = value;
    } else {
      d.entries(2 * n - 1, 2 * n - 1) = value;
      d.entries(2 * n, 2 * n) = value;
    }
  }
  return d;
}

double dtn_error(const DtNMatrix& a, const DtNMatrix& b) {
  if (a.modes != b.modes || std::abs(a.omega - b.omega) > 1e-12 * std::abs(b.omega) ||
      std::abs(a.radius - b.radius) > 1e-12 * b.radius ||
      a.entries.rows() != b.entries.rows() || a.entries.cols() != b.entries.cols()) {
    throw ParameterError("dtn_error: operators differ in omega, modes or radius");
  }
  const double denom = sigma_max(b.entries);
  if (!(denom > 0.0)) throw ParameterError("dtn_error: reference operator is zero");
  return sigma_max(a.entries - b.entries) / denom;
}

std::string dtn_to_json(const DtNMatrix& d) {
  nlohmann::ordered_json j;
  j["omega"] = d.omega;
  j["modes"] = d.modes;
  j["radius"] = d.radius;
  auto& e = j["entries"] = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < d.entries.rows(); ++r) {
    auto row = nlohmann::ordered_json::array();
    for (Eigen::Index c = 0; c < d.entries.cols(); ++c) row.push_back(d.entries(r, c));
    e.push_back(std::move(row));
  }
  return j.dump(2);
}

}  // namespace cloakspec
