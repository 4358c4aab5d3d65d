#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cloakspec/bessel.hpp"
#include "cloakspec/errors.hpp"
#include "cloakspec/spectra.hpp"

using namespace cloakspec;

namespace {

const MaterialField kUnit = isotropic_medium(1.0, 1.0);

std::vector<double> nonzero_omegas(const EigenResult& r) {
  std::vector<double> v;
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    if (!r.zero_index || static_cast<int>(i) != *r.zero_index) v.push_back(std::sqrt(r.values[i]));
  }
  return v;
}

bool contains(const std::vector<std::pair<int, double>>& list, int m, double w) {
  return std::any_of(list.begin(), list.end(),
                     [&](const auto& e) { return e.first == m && std::abs(e.second - w) <= 1e-4; });
}

DiffeoSpec unit_disk_bump(double t, unsigned long long seed) {
  return dilate_conjugate(bump_diffeo(t, seed), kBumpSupport);
}

}  // namespace

TEST_CASE("oracles") {
  CHECK(contains(ite_disk_oracle(4.0, 1, 1), 1, 2.4048 / 2.0));
  CHECK(contains(ite_disk_oracle(1.0, 0, 1), 0, 3.83171));
  CHECK(contains(ite_disk_oracle(4.0, 2, 1), 2, 3.83171 / 2.0));
  const auto ite = ite_disk_oracle(4.0, 3, 2);
  CHECK(std::is_sorted(ite.begin(), ite.end(), [](const auto& a, const auto& b) { return a.second < b.second; }));

  const auto res = resonance_disk_oracle(1.0, 1.0, 3, 2);
  CHECK(contains(res, 0, bessel_root(1, 1)));
  CHECK(contains(res, 1, bessel_root(1, 1)));
  CHECK(contains(res, 2, bessel_root(2, 1)));
  CHECK(contains(resonance_disk_oracle(4.0, 1.0, 2, 1), 2, bessel_root(2, 1) / 2.0));
  CHECK_THROWS_AS(ite_disk_oracle(0.0, 1, 1), ParameterError);
}

TEST_CASE("match_oracle") {
  const std::vector<std::pair<int, double>> oracle = {{0, 1.0}, {1, 2.0}, {2, 3.0}};
  const OracleMatch good = match_oracle({1.01, 2.0, 2.02, 5.0}, oracle, 2.5, 0.015, 0.03);
  CHECK(good.ok);
  CHECK(good.entries.size() == 2);
  CHECK(good.unmatched.empty());
  CHECK(good.entries[0].relative_error == doctest::Approx(0.01));

  const OracleMatch missing = match_oracle({1.0}, oracle, 2.5, 0.015, 0.03);
  CHECK(!missing.ok);
  CHECK(!missing.entries[1].matched);

  const OracleMatch spurious = match_oracle({1.0, 1.5, 2.0}, oracle, 2.5, 0.015, 0.03);
  CHECK(!spurious.ok);
  REQUIRE(spurious.unmatched.size() == 1);
  CHECK(spurious.unmatched[0] == 1.5);
}

TEST_CASE("boundary_flatness") {
  const Mesh m = make_disk(1.0, 0.1);
  Eigen::VectorXd bowl(m.num_nodes()), tilt(m.num_nodes());
  for (std::size_t i = 0; i < m.num_nodes(); ++i) {
    bowl(i) = m.nodes[i].squaredNorm();
    tilt(i) = m.nodes[i].x();
  }
  CHECK(boundary_flatness(m, bowl) <= 1e-12);
  CHECK(boundary_flatness(m, tilt) > 0.5);
  CHECK(boundary_flatness(m, 3.0 * tilt) == doctest::Approx(boundary_flatness(m, tilt)));
  CHECK_THROWS_AS(boundary_flatness(m, Eigen::VectorXd::Zero(m.num_nodes())), ParameterError);
}

TEST_CASE("Schiffer scan on the unit disk") {
  const Mesh m = make_disk(1.0, 0.05);
  const SchifferReport r = schiffer_scan(m, kUnit, 40.0, 1e-2);
  const double w = bessel_root(1, 1);
  REQUIRE(r.candidates.size() == 1);
  CHECK(r.candidates[0].lambda == doctest::Approx(w * w).epsilon(0.01));
  CHECK(r.candidates[0].boundary_flatness >= 0.0);
  CHECK(r.candidates[0].boundary_flatness <= 1e-2);
  CHECK(r.candidates[0].mode_index > 0);
  CHECK(r.spectrum.values.back() < 40.0);
  CHECK(std::abs(r.spectrum.values[0]) <= 1e-8);
  CHECK(std::isnan(r.flatness[0]));
  for (std::size_t i = 1; i < r.flatness.size(); ++i) {
    if (r.spectrum.clusters[i] == r.spectrum.clusters[r.candidates[0].mode_index]) continue;
    CAPTURE(i);
    CHECK(r.flatness[i] > 0.2);
  }
}

TEST_CASE("Schiffer scan on an ellipse finds nothing") {
  const SchifferReport r = schiffer_scan(make_ellipse(1.3, 0.8, 0.05), kUnit, 40.0, 1e-2);
  CHECK(r.candidates.empty());
  CHECK(r.spectrum.values.size() > 5);
}

TEST_CASE("Schiffer candidate survives a boundary-fixing push-forward") {
  const Mesh m = make_disk(1.0, 0.05);
  const SchifferReport plain = schiffer_scan(m, kUnit, 40.0, 1e-2);
  const SchifferReport pushed = schiffer_scan(m, push_forward(unit_disk_bump(0.15, 1), kUnit), 40.0, 1e-2);
  REQUIRE(plain.candidates.size() == 1);
  REQUIRE(pushed.candidates.size() == 1);
  const double w = bessel_root(1, 1);
  const double disc = std::abs(plain.candidates[0].lambda - w * w);
  CHECK(std::abs(pushed.candidates[0].lambda - plain.candidates[0].lambda) <= disc);
}

TEST_CASE("Schiffer scan errors") {
  const Mesh m = make_disk(1.0, 0.25);
  CHECK_THROWS_AS(schiffer_scan(m, kUnit, 1e4, 1e-2), ResolutionError);
  CHECK_THROWS_AS(schiffer_scan(m, kUnit, 10.0, 0.5), ParameterError);
  CHECK_THROWS_AS(schiffer_scan(m, kUnit, 10.0, 0.0), ParameterError);
  CHECK_THROWS_AS(schiffer_scan(m, kUnit, -1.0, 1e-2), ParameterError);
}

TEST_CASE("resonance eigenvalues of the unit disk") {
  const Mesh m = make_disk(1.0, 0.03);
  const EigenResult r = resonance_eigs(m, kUnit, 8);
  REQUIRE(r.zero_index.has_value());
  CHECK(*r.zero_index == 0);
  const auto w = nonzero_omegas(r);
  const double j11 = bessel_root(1, 1), j21 = bessel_root(2, 1);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(w[i] - j11) / j11 <= 0.01);
  CHECK(r.clusters[1] == r.clusters[3]);
  CHECK(std::abs(w[3] - j21) / j21 <= 0.01);
  CHECK(std::abs(w[4] - j21) / j21 <= 0.01);
  CHECK(r.clusters[4] != r.clusters[3]);
  for (double res : r.residuals) CHECK(res <= 1e-8);

  CHECK_THROWS_AS(resonance_eigs(make_annulus(1.0, 2.0, 0.1), kUnit, 4), ParameterError);
}

TEST_CASE("scaling law: q -> c q divides omega by sqrt(c)") {
  const Mesh m = make_disk(1.0, 0.05);
  const auto w1 = nonzero_omegas(resonance_eigs(m, kUnit, 8));
  for (double c : {4.0, 2.5}) {
    const auto wc = nonzero_omegas(resonance_eigs(m, isotropic_medium(1.0, c), 8));
    REQUIRE(wc.size() == w1.size());
    for (std::size_t i = 0; i < w1.size(); ++i) CHECK(std::abs(wc[i] * std::sqrt(c) - w1[i]) <= 1e-6 * w1[i]);
  }
}

TEST_CASE("resonance eigenvalues are invariant under a boundary-fixing push-forward") {
  const Mesh coarse = make_disk(1.0, 0.05);
  const Mesh fine = refine(coarse);
  const MaterialField pushed = push_forward(unit_disk_bump(0.15, 2), kUnit);
  const auto p0 = nonzero_omegas(resonance_eigs(coarse, kUnit, 8));
  const auto p1 = nonzero_omegas(resonance_eigs(fine, kUnit, 8));
  const auto q0 = nonzero_omegas(resonance_eigs(coarse, pushed, 8));
  const auto q1 = nonzero_omegas(resonance_eigs(fine, pushed, 8));
  for (int i = 0; i < 6; ++i) {
    CAPTURE(i);
    const double disc = std::abs(p0[i] - p1[i]) + std::abs(q0[i] - q1[i]);
    CHECK(std::abs(p1[i] - q1[i]) <= disc);
  }
}

TEST_CASE("reduced exterior transmission problem on the unit disk") {
  const Mesh m = make_disk(1.0, 0.03);
  const EigenResult r = ite_eigs(m, reduced_exterior_config(isotropic_medium(1.0, 4.0)), 6);
  REQUIRE(r.values.size() == 6);
  const auto w = omegas_of(r.values);
  CHECK(std::abs(w[0] - bessel_root(0, 1) / 2.0) / (bessel_root(0, 1) / 2.0) <= 0.015);
  const double m0 = bessel_root(1, 1) / 2.0;
  CHECK(std::any_of(w.begin(), w.end(), [&](double x) { return std::abs(x - m0) / m0 <= 0.015; }));
  CHECK(r.node_vectors.rows() == static_cast<Eigen::Index>(2 * m.num_nodes()));
  // traces tie v = w on the boundary
  for (Eigen::Index c = 0; c < r.node_vectors.cols(); ++c) {
    for (int b : m.outer_boundary) {
      CHECK(r.node_vectors(b, c) == r.node_vectors(static_cast<Eigen::Index>(m.num_nodes()) + b, c));
    }
  }
  const double cutoff = std::min(resolved_omega(m, 4.0), w.back() / 1.015);
  const OracleMatch match = match_oracle(w, ite_disk_oracle(4.0, 8, 4), cutoff, 0.015, 0.03);
  CHECK(match.entries.size() >= 3);
  CHECK(match.ok);
}

TEST_CASE("transmission kernel is excluded") {
  const Mesh m = make_disk(1.0, 0.1);
  const EigenResult r = ite_eigs(m, reduced_exterior_config(kUnit), 4);
  for (double v : r.values) CHECK(v > 1e-6);
}

TEST_CASE("QZ path agrees with the symmetric path") {
  const Mesh m = make_disk(1.0, 0.1);
  ITEConfig sym = reduced_exterior_config(isotropic_medium(1.0, 4.0));
  ITEConfig neg = sym;
  neg.coupling.row(1) *= -1.0;  // same problem, indefinite pencil
  const EigenResult a = ite_eigs(m, sym, 5);
  const EigenResult b = ite_eigs(m, neg, 5);
  REQUIRE(b.values.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(b.values[i] == doctest::Approx(a.values[i]).epsilon(1e-7));

  ITEConfig skew = sym;
  skew.coupling << 1.0, -2.0, 1.0, 1.0;
  const EigenResult c = ite_eigs(m, skew, 4);
  for (std::size_t i = 0; i < c.values.size(); ++i) CHECK(c.residuals[i] <= 1e-8);
}

TEST_CASE("transmission configuration errors") {
  const Mesh m = make_disk(1.0, 0.25);
  ITEConfig cfg = reduced_exterior_config(isotropic_medium(1.0, 4.0));
  ITEConfig same = cfg;
  same.distinct_media = false;
  CHECK_THROWS_AS(ite_eigs(m, same, 2), ConfigurationError);
  ITEConfig singular = cfg;
  singular.coupling << 1.0, -1.0, 1.0, -1.0;
  CHECK_THROWS_AS(ite_eigs(m, singular, 2), ConfigurationError);
  ITEConfig no_trace = cfg;
  no_trace.coupling << 0.0, 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(ite_eigs(m, no_trace, 2), ConfigurationError);
  ITEConfig one_flux = cfg;
  one_flux.coupling << 1.0, -1.0, 0.0, 1.0;
  CHECK_THROWS_AS(ite_eigs(m, one_flux, 2), ConfigurationError);
  CHECK_THROWS_AS(ite_eigs(make_annulus(1.0, 2.0, 0.25), cfg, 2), ParameterError);
}
