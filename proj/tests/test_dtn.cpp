#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>

#include "cloakspec/bessel.hpp"
#include "cloakspec/cloak.hpp"
#include "cloakspec/dtn.hpp"
#include "cloakspec/errors.hpp"

using namespace cloakspec;

namespace {

const MaterialField kFree = isotropic_medium(1.0, 1.0);

double asymmetry(const DtNMatrix& d) {
  return (d.entries - d.entries.transpose()).cwiseAbs().maxCoeff() / d.entries.cwiseAbs().maxCoeff();
}

int order_of(int k) { return (k + 1) / 2; }

}  // namespace

TEST_CASE("dtn_free_analytic examples") {
  const DtNMatrix a = dtn_free_analytic(1.0, 0, 2.0);
  REQUIRE(a.entries.rows() == 1);
  CHECK(a.entries(0, 0) == doctest::Approx(-2.5759).epsilon(1e-3 / 2.5759));
  CHECK(dtn_free_analytic(0.5, 0, 2.0).entries(0, 0) == doctest::Approx(-0.2875).epsilon(1e-3 / 0.2875));

  const DtNMatrix b = dtn_free_analytic(1.0, 8, 2.0);
  CHECK(b.entries.rows() == 17);
  for (int n = 1; n <= 8; ++n) {
    CHECK(b.entries(2 * n - 1, 2 * n - 1) == b.entries(2 * n, 2 * n));
    CHECK(b.entries(2 * n, 2 * n) == doctest::Approx(bessel_j_prime(n, 2.0) / bessel_j(n, 2.0)).epsilon(1e-12));
  }
  CHECK((b.entries - Eigen::MatrixXd(b.entries.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(dtn_free_analytic(bessel_root(0, 1) / 2.0, 2, 2.0), ResonanceError);
  CHECK_THROWS_AS(dtn_free_analytic(bessel_root(3, 1) / 2.0, 4, 2.0), ResonanceError);
  CHECK_NOTHROW(dtn_free_analytic(bessel_root(3, 1) / 2.0, 2, 2.0));
}

TEST_CASE("dtn_error examples") {
  const DtNMatrix a = dtn_free_analytic(1.0, 4, 2.0);
  DtNMatrix b = dtn_free_analytic(0.9, 4, 2.0);
  CHECK(dtn_error(a, a) == 0.0);
  b.omega = a.omega;
  const double sa = Eigen::JacobiSVD<Eigen::MatrixXd>(a.entries).singularValues()(0);
  const double sb = Eigen::JacobiSVD<Eigen::MatrixXd>(b.entries).singularValues()(0);
  CHECK(dtn_error(a, b) * sb == doctest::Approx(dtn_error(b, a) * sa).epsilon(1e-12));
  CHECK(dtn_error(a, b) >= 0.0);

  CHECK_THROWS_AS(dtn_error(a, dtn_free_analytic(0.9, 4, 2.0)), ParameterError);
  CHECK_THROWS_AS(dtn_error(a, dtn_free_analytic(1.0, 3, 2.0)), ParameterError);
  CHECK_THROWS_AS(dtn_error(a, dtn_free_analytic(1.0, 4, 1.5)), ParameterError);
}

TEST_CASE("discrete free-space DtN against the analytic operator") {
  const Mesh m = make_disk(2.0, 0.05);
  const DtNMatrix d = dtn_matrix(m, {kFree}, 1.0, 8);
  const DtNMatrix exact = dtn_free_analytic(1.0, 8, 2.0);
  CHECK(d.omega == 1.0);
  CHECK(d.modes == 8);
  CHECK(d.radius == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(dtn_error(d, exact) <= 0.02);
  CHECK(asymmetry(d) <= 1e-8);
  for (int k = 0; k < 17; ++k) {
    CAPTURE(k);
    const double e = exact.entries(k, k);
    CHECK(std::abs(d.entries(k, k) - e) <= 0.02 * std::abs(e));
  }
}

TEST_CASE("refinement moves the entries towards the analytic values") {
  const Mesh m = make_disk(2.0, 0.05);
  const DtNMatrix exact = dtn_free_analytic(1.0, 8, 2.0);
  const double coarse = dtn_error(dtn_matrix(m, {kFree}, 1.0, 8), exact);
  const double fine = dtn_error(dtn_matrix(refine(m), {kFree}, 1.0, 8), exact);
  MESSAGE("free DtN error " << coarse << " -> " << fine);
  CHECK(coarse / fine >= 2.5);
}

TEST_CASE("zero-frequency constant mode has zero flux") {
  const DtNMatrix d = dtn_matrix(make_disk(2.0, 0.05), {kFree}, 1e-6, 8);
  CHECK(std::abs(d.entries(0, 0)) <= 1e-8);
  // mode n of a harmonic function: flux n/R
  CHECK(d.entries(3, 3) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("parameter and resonance errors") {
  const Mesh m = make_disk(2.0, 0.25);
  const int ring = static_cast<int>(m.outer_boundary.size());
  CHECK_NOTHROW(dtn_matrix(m, {kFree}, 1.0, ring / 8));
  CHECK_THROWS_AS(dtn_matrix(m, {kFree}, 1.0, ring / 8 + 1), ParameterError);
  CHECK_THROWS_AS(dtn_matrix(make_ellipse(1.3, 0.8, 0.1), {kFree}, 1.0, 2), ParameterError);

  const AssembledSystem s = assemble(m, kFree);
  const EigenResult e = solve_eig(s, 1, Constraint::dirichlet);
  CHECK_THROWS_AS(dtn_matrix(s, std::sqrt(e.values[0]), 2), ResonanceError);
}

TEST_CASE("symmetry for anisotropic and composite media") {
  const Mesh m = make_disk(2.0, 0.1);
  CHECK(asymmetry(dtn_matrix(m, {push_forward(bump_diffeo(0.15, 1), kFree)}, 1.0, 8)) <= 1e-8);
  CHECK(asymmetry(dtn_matrix(m, {diagonal_medium(1.0, 2.0, 1.5)}, 0.7, 8)) <= 1e-8);
  const Mesh c = cloak_mesh(0.3, 0.1);
  CHECK(asymmetry(dtn_matrix(c, cloak_media(0.3, isotropic_medium(3.0, 2.0)), 1.0, 8)) <= 1e-8);
}

TEST_CASE("radial media decouple the Fourier modes") {
  const double eps = 0.3;
  const DtNMatrix d = dtn_matrix(cloak_mesh(eps, 0.05), cloak_media(eps, isotropic_medium(3.0, 2.0)), 1.0, 8);
  const double diag = d.entries.diagonal().cwiseAbs().maxCoeff();
  double worst = 0.0;
  for (int i = 0; i < 17; ++i) {
    for (int j = 0; j < 17; ++j) {
      if (order_of(i) != order_of(j)) worst = std::max(worst, std::abs(d.entries(i, j)));
    }
  }
  MESSAGE("largest cross-order entry / diagonal scale = " << worst / diag);
  CHECK(worst <= 0.02 * diag);
}

TEST_CASE("boundary-fixing push-forwards leave the DtN map invariant") {
  const Mesh m = make_disk(2.0, 0.05);
  const DtNMatrix base = dtn_matrix(m, {kFree}, 1.0, 8);
  const double self = dtn_error(base, dtn_matrix(refine(m), {kFree}, 1.0, 8));
  for (double t : {0.05, 0.15}) {
    for (unsigned long long seed : {1ULL, 2ULL}) {
      CAPTURE(t);
      CAPTURE(seed);
      const double e = dtn_error(dtn_matrix(m, {push_forward(bump_diffeo(t, seed), kFree)}, 1.0, 8), base);
      MESSAGE("t=" << t << " seed=" << seed << " invariance error " << e << " self error " << self);
      CHECK(e <= 3.0 * self);
    }
  }
}

TEST_CASE("a source makes the map affine") {
  const Mesh c = cloak_mesh(1.0, 0.1);
  const auto media = cloak_media(1.0, kFree);
  const Source f = Source::from_function([](const Vec2& p) { return 1.0 + p.y(); });
  const DtNMatrix plain = dtn_matrix(c, media, 1.0, 4);
  const DtNMatrix loaded = dtn_matrix(c, media, 1.0, 4, f);
  const Eigen::MatrixXd shift = loaded.entries - plain.entries;
  CHECK(shift.cwiseAbs().maxCoeff() > 1e-6);
  for (int k = 1; k < shift.cols(); ++k) CHECK((shift.col(k) - shift.col(0)).norm() <= 1e-10 * shift.norm());
}

TEST_CASE("json") {
  const DtNMatrix a = dtn_free_analytic(1.0, 2, 2.0);
  const auto j = nlohmann::json::parse(dtn_to_json(a));
  CHECK(j["modes"] == 2);
  CHECK(j["omega"] == 1.0);
  CHECK(j["entries"].size() == 5);
  CHECK(j["entries"][2][2].get<double>() == a.entries(2, 2));
}
