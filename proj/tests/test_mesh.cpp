#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "cloakspec/errors.hpp"
#include "cloakspec/mesh.hpp"

using namespace cloakspec;

namespace {

constexpr double kPi = std::numbers::pi;

bool all_positive(const Mesh& m) {
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    if (!(m.signed_area(t) > 0.0)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("make_disk examples") {
  const Mesh m = make_disk(2.0, 0.2, 1.0);
  CHECK_NOTHROW(validate(m));
  bool split = true;
  for (const auto& p : m.nodes) CHECK(p.norm() <= 2.0 + 1e-12);
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    const Vec2 c = (m.nodes[tri[0]] + m.nodes[tri[1]] + m.nodes[tri[2]]) / 3.0;
    split = split && ((c.norm() < 1.0) == (m.region_tag[t] == 0));
  }
  CHECK(split);

  CHECK(make_disk(1.0, 0.25).area() == doctest::Approx(kPi).epsilon(0.05 / kPi));

  const Mesh fine = make_disk(2.0, 0.1, 1.0);
  int on_interface = 0;
  for (const auto& p : fine.nodes) {
    if (std::abs(p.norm() - 1.0) <= 1e-12) ++on_interface;
  }
  CHECK(on_interface >= 60);
  CHECK(fine.max_edge_length() <= 1.5 * 0.1);
}

TEST_CASE("interface is conforming") {
  const Mesh m = make_disk(2.0, 0.1, 1.0);
  // every interface ring edge is shared by one region-0 and one region-1 triangle
  std::set<std::pair<int, int>> in0, in1;
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    for (int e = 0; e < 3; ++e) {
      const int a = tri[e], b = tri[(e + 1) % 3];
      if (std::abs(m.nodes[a].norm() - 1.0) < 1e-12 && std::abs(m.nodes[b].norm() - 1.0) < 1e-12) {
        (m.region_tag[t] == 0 ? in0 : in1).insert({std::min(a, b), std::max(a, b)});
      }
    }
  }
  CHECK(!in0.empty());
  CHECK(in0 == in1);
}

TEST_CASE("parameter errors") {
  CHECK_THROWS_AS(make_disk(1.0, 0.3), ParameterError);
  CHECK_THROWS_AS(make_disk(-1.0, 0.1), ParameterError);
  CHECK_THROWS_AS(make_disk(2.0, 0.1, 2.5), ParameterError);
  CHECK_THROWS_AS(make_ellipse(1.0, 0.5, 0.2), ParameterError);
  CHECK_THROWS_AS(make_annulus(1.0, 0.5, 0.1), ParameterError);
}

TEST_CASE("make_ellipse examples") {
  const Mesh e = make_ellipse(1.0, 1.0, 0.25);
  const Mesh d = make_disk(1.0, 0.25);
  CHECK(e.num_nodes() == d.num_nodes());
  CHECK(e.num_triangles() == d.num_triangles());

  CHECK(make_ellipse(1.3, 0.8, 0.1).area() == doctest::Approx(kPi * 1.04).epsilon(0.02 / (kPi * 1.04)));

  const Mesh thin = make_ellipse(1.0, 0.5, 0.1);
  for (const auto& p : thin.nodes) CHECK(p.x() * p.x() + 4.0 * p.y() * p.y() <= 1.0 + 1e-9);
  CHECK(all_positive(thin));
}

TEST_CASE("refine") {
  const Mesh m = make_disk(1.0, 0.25);
  const Mesh r = refine(m);
  CHECK(r.num_triangles() == 4 * m.num_triangles());
  CHECK(std::abs(r.area() - kPi) < std::abs(m.area() - kPi));
  CHECK_NOTHROW(validate(r));

  const Mesh c = refine(make_disk(2.0, 0.2, 1.0));
  int ring = 0;
  for (const auto& p : c.nodes) {
    if (std::abs(p.norm() - 1.0) < 1e-3) {
      CHECK(std::abs(p.norm() - 1.0) <= 1e-12);
      ++ring;
    }
  }
  CHECK(ring > 0);
}

TEST_CASE("refine twice: area error falls by 3x per level") {
  Mesh m = make_disk(1.0, 0.25);  // h = 0.4 is outside the h <= R/4 precondition
  double err = std::abs(m.area() - kPi);
  for (int level = 0; level < 2; ++level) {
    m = refine(m);
    const double next = std::abs(m.area() - kPi);
    CHECK(err / next >= 3.0);
    err = next;
  }
}

TEST_CASE("boundary_angles") {
  const Mesh eight = make_ring_mesh({Ring{1.0, 8}}, true, std::nullopt);
  const auto a = boundary_angles(eight);
  REQUIRE(a.size() == 8);
  for (int i = 0; i < 8; ++i) CHECK(std::abs(a[i] - i * kPi / 4.0) <= 1e-12);

  const Mesh d = make_disk(2.0, 0.1);
  const auto b = boundary_angles(d);
  const double limit = 2.0 * (2.0 * kPi / static_cast<double>(b.size()));
  for (std::size_t i = 1; i < b.size(); ++i) {
    CHECK(b[i] > b[i - 1]);
    CHECK(b[i] - b[i - 1] < limit);
  }

  Mesh single;
  single.nodes = {Vec2(2.0, 0.0)};
  single.outer_boundary = {0};
  const auto s = boundary_angles(single);
  REQUIRE(s.size() == 1);
  CHECK(s[0] == 0.0);

  Mesh origin;
  origin.nodes = {Vec2(0.0, 0.0)};
  origin.outer_boundary = {0};
  CHECK_THROWS_AS(boundary_angles(origin), GeometryError);
}

TEST_CASE("Euler characteristic and quality gate") {
  for (double h : {0.25, 0.1, 0.05}) {
    CAPTURE(h);
    const Mesh d = make_disk(1.0, h);
    CHECK(d.euler_characteristic() == 1);
    CHECK(d.min_angle_degrees() >= 20.0);
    const Mesh c = make_disk(2.0, h, 1.0);
    CHECK(c.euler_characteristic() == 1);
    CHECK(c.min_angle_degrees() >= 20.0);
    const Mesh e = make_ellipse(1.3, 0.8, std::min(h, 0.2));
    CHECK(e.euler_characteristic() == 1);
    CHECK(e.min_angle_degrees() >= 20.0);
    const Mesh a = make_annulus(1.0, 2.0, h);
    CHECK(a.euler_characteristic() == 0);
    CHECK(a.min_angle_degrees() >= 20.0);
    CHECK(a.inner_boundary.has_value());
  }
}

TEST_CASE("no duplicate nodes") {
  const Mesh m = make_disk(2.0, 0.1, 1.0);
  std::set<std::pair<long long, long long>> seen;
  for (const auto& p : m.nodes) {
    seen.insert({std::llround(p.x() * 1e11), std::llround(p.y() * 1e11)});
  }
  CHECK(seen.size() == m.num_nodes());
}

TEST_CASE("graded cloak mesh") {
  const Mesh g = make_graded_disk(2.0, 1.0, 0.05, 0.0125);
  CHECK_NOTHROW(validate(g));
  CHECK(all_positive(g));
  CHECK(g.euler_characteristic() == 1);
  double first = 10.0;
  for (const auto& p : g.nodes) {
    const double r = p.norm();
    if (r > 1.0 + 1e-12) first = std::min(first, r - 1.0);
  }
  CHECK(first == doctest::Approx(0.0125));
  const Mesh inner = extract_region(g, 0);
  CHECK(inner.euler_characteristic() == 1);
  CHECK(inner.area() == doctest::Approx(make_disk(1.0, 0.05).area()).epsilon(1e-12));
}

TEST_CASE("json round trip") {
  const Mesh m = make_disk(2.0, 0.2, 1.0);
  const Mesh back = mesh_from_json(mesh_to_json(m));
  CHECK(back.nodes.size() == m.nodes.size());
  for (std::size_t i = 0; i < m.nodes.size(); ++i) CHECK(back.nodes[i] == m.nodes[i]);
  CHECK(back.triangles == m.triangles);
  CHECK(back.outer_boundary == m.outer_boundary);
  CHECK(back.region_tag == m.region_tag);
  CHECK(!back.inner_boundary.has_value());

  const Mesh a = make_annulus(1.0, 2.0, 0.25);
  CHECK(mesh_from_json(mesh_to_json(a)).inner_boundary == a.inner_boundary);
  CHECK_THROWS(mesh_from_json("{\"version\": 99}"));
}
