#include "cloakspec/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <unordered_map>
#include <utility>

#include <nlohmann/json.hpp>

#include "cloakspec/errors.hpp"

namespace cloakspec {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMeshFormatVersion = 1;

using Edge = std::pair<int, int>;

Edge edge_key(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

struct EdgeHash {
  std::size_t operator()(const Edge& e) const noexcept {
    return std::hash<long long>()((static_cast<long long>(e.first) << 32) ^
                                  static_cast<long long>(e.second));
  }
};

struct EdgeInfo {
  int count = 0;
  int tag_mask = 0;  // bit r set when a triangle with tag r touches the edge
};

std::unordered_map<Edge, EdgeInfo, EdgeHash> collect_edges(const Mesh& mesh) {
  std::unordered_map<Edge, EdgeInfo, EdgeHash> edges;
  edges.reserve(mesh.triangles.size() * 2);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const int tag = mesh.region_tag.empty() ? 0 : mesh.region_tag[t];
    for (int e = 0; e < 3; ++e) {
      auto& info = edges[edge_key(tri[e], tri[(e + 1) % 3])];
      ++info.count;
      info.tag_mask |= 1 << std::clamp(tag, 0, 30);
    }
  }
  return edges;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

// Zips two concentric rings into a band of triangles, picking the shorter
// diagonal at every step.
void zip_rings(const std::vector<Vec2>& nodes, const std::vector<int>& inner,
               const std::vector<int>& outer, int tag,
               std::vector<std::array<int, 3>>& tris, std::vector<int>& tags) {
  const int ni = static_cast<int>(inner.size());
  const int no = static_cast<int>(outer.size());
  auto in = [&](int i) { return inner[static_cast<std::size_t>(i % ni)]; };
  auto out = [&](int j) { return outer[static_cast<std::size_t>(j % no)]; };
  int i = 0;
  int j = 0;
  while (i < ni || j < no) {
    bool advance_outer;
    if (i == ni) {
      advance_outer = true;
    } else if (j == no) {
      advance_outer = false;
    } else {
      const double d_out = (nodes[in(i)] - nodes[out(j + 1)]).norm();
      const double d_in = (nodes[out(j)] - nodes[in(i + 1)]).norm();
      const double scale = std::max(d_out, d_in);
      if (std::abs(d_out - d_in) > 1e-12 * scale) {
        advance_outer = d_out < d_in;
      } else {
        const double a_next = static_cast<double>(i + 1) / ni;
        const double b_next = static_cast<double>(j + 1) / no;
        advance_outer = b_next <= a_next;
      }
    }
    if (advance_outer) {
      tris.push_back({in(i), out(j), out(j + 1)});
      ++j;
    } else {
      tris.push_back({in(i), out(j), in(i + 1)});
      ++i;
    }
    tags.push_back(tag);
  }
}

int ring_count(double radius, double spacing) {
  return 6 * std::max(1, static_cast<int>(std::lround(radius / spacing)));
}

// Orders the boundary edges of a triangle set into closed loops. Edges are
// oriented as they appear in the (counterclockwise) triangles.
std::vector<std::vector<int>> boundary_loops(const Mesh& mesh) {
  auto edges = collect_edges(mesh);
  std::map<int, int> next;
  for (const auto& tri : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = tri[e];
      const int b = tri[(e + 1) % 3];
      if (edges[edge_key(a, b)].count == 1) next[a] = b;
    }
  }
  std::vector<std::vector<int>> loops;
  std::set<int> used;
  for (const auto& [start, unused] : next) {
    if (used.count(start)) continue;
    std::vector<int> loop;
    int cur = start;
    while (!used.count(cur)) {
      used.insert(cur);
      loop.push_back(cur);
      auto it = next.find(cur);
      if (it == next.end()) throw GeometryError("open boundary chain");
      cur = it->second;
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

double polar_angle(const Vec2& p) {
  double a = std::atan2(p.y(), p.x());
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

// Rotates a ring so it starts at the node of smallest polar angle.
void rotate_to_min_angle(const std::vector<Vec2>& nodes, std::vector<int>& ring) {
  if (ring.empty()) return;
  auto it = std::min_element(ring.begin(), ring.end(), [&](int a, int b) {
    return polar_angle(nodes[a]) < polar_angle(nodes[b]);
  });
  std::rotate(ring.begin(), it, ring.end());
}

double signed_ring_area(const std::vector<Vec2>& nodes,
                        const std::vector<int>& ring) {
  double s = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Vec2& p = nodes[ring[i]];
    const Vec2& q = nodes[ring[(i + 1) % ring.size()]];
    s += p.x() * q.y() - p.y() * q.x();
  }
  return 0.5 * s;
}

}  // namespace

Vec2 BoundaryCurve::project(const Vec2& p) const {
  switch (kind) {
    case Kind::circle: {
      const double r = p.norm();
      return r > 0.0 ? Vec2(p * (a / r)) : p;
    }
    case Kind::ellipse: {
      const double s = std::sqrt(p.x() * p.x() / (a * a) + p.y() * p.y() / (b * b));
      return s > 0.0 ? Vec2(p / s) : p;
    }
    case Kind::none:
      break;
  }
  return p;
}

double Mesh::signed_area(std::size_t t) const {
  const auto& tri = triangles[t];
  const Vec2 e1 = nodes[tri[1]] - nodes[tri[0]];
  const Vec2 e2 = nodes[tri[2]] - nodes[tri[0]];
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

double Mesh::area() const {
  double a = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) a += signed_area(t);
  return a;
}

double Mesh::max_edge_length() const {
  double h = 0.0;
  for (const auto& tri : triangles) {
    for (int e = 0; e < 3; ++e) {
      h = std::max(h, (nodes[tri[e]] - nodes[tri[(e + 1) % 3]]).norm());
    }
  }
  return h;
}

double Mesh::min_angle_degrees() const {
  double worst = 180.0;
  for (const auto& tri : triangles) {
    for (int v = 0; v < 3; ++v) {
      const Vec2 a = nodes[tri[(v + 1) % 3]] - nodes[tri[v]];
      const Vec2 b = nodes[tri[(v + 2) % 3]] - nodes[tri[v]];
      const double c = a.dot(b) / (a.norm() * b.norm());
      worst = std::min(worst, std::acos(std::clamp(c, -1.0, 1.0)) * 180.0 /
                                  std::numbers::pi);
    }
  }
  return worst;
}

std::size_t Mesh::num_edges() const { return collect_edges(*this).size(); }

long Mesh::euler_characteristic() const {
  return static_cast<long>(nodes.size()) - static_cast<long>(num_edges()) +
         static_cast<long>(triangles.size());
}

Mesh make_ring_mesh(const std::vector<Ring>& rings, bool with_centre,
                    std::optional<double> interface_radius) {
  if (rings.empty()) throw ParameterError("ring mesh needs at least one ring");
  if (!with_centre && rings.size() < 2) {
    throw ParameterError("annular ring mesh needs at least two rings");
  }
  Mesh mesh;
  std::vector<std::vector<int>> ring_nodes;
  if (with_centre) mesh.nodes.emplace_back(0.0, 0.0);
  for (const Ring& ring : rings) {
    if (ring.count < 3 || !(ring.radius > 0.0)) {
      throw ParameterError("degenerate ring");
    }
    std::vector<int> ids;
    for (int i = 0; i < ring.count; ++i) {
      const double th = kTwoPi * i / ring.count;
      ids.push_back(static_cast<int>(mesh.nodes.size()));
      mesh.nodes.emplace_back(ring.radius * std::cos(th),
                              ring.radius * std::sin(th));
    }
    ring_nodes.push_back(std::move(ids));
  }
  auto band_tag = [&](double outer_r) {
    if (!interface_radius) return 0;
    return outer_r <= *interface_radius * (1.0 + 1e-12) ? 0 : 1;
  };
  if (with_centre) {
    const auto& first = ring_nodes.front();
    const int tag = band_tag(rings.front().radius);
    for (std::size_t i = 0; i < first.size(); ++i) {
      mesh.triangles.push_back({0, first[i], first[(i + 1) % first.size()]});
      mesh.region_tag.push_back(tag);
    }
  }
  for (std::size_t k = 0; k + 1 < rings.size(); ++k) {
    zip_rings(mesh.nodes, ring_nodes[k], ring_nodes[k + 1],
              band_tag(rings[k + 1].radius), mesh.triangles, mesh.region_tag);
  }
  mesh.outer_boundary = ring_nodes.back();
  mesh.outer_curve = BoundaryCurve::circle(rings.back().radius);
  if (!with_centre) {
    mesh.inner_boundary = ring_nodes.front();
    mesh.inner_curve = BoundaryCurve::circle(rings.front().radius);
  }
  mesh.interface_radius = interface_radius;
  return mesh;
}

Mesh make_disk(double radius, double h, std::optional<double> interface_radius) {
  require(radius > 0.0 && std::isfinite(radius), "make_disk: radius must be positive");
  require(h > 0.0 && h <= radius / 4.0 * (1.0 + 1e-12),
          "make_disk: need 0 < h <= radius/4");
  std::vector<Ring> rings;
  if (interface_radius) {
    const double r1 = *interface_radius;
    require(r1 > 0.0 && r1 < radius, "make_disk: need 0 < interface < radius");
    const int n0 = static_cast<int>(std::ceil(r1 / h - 1e-9));
    const int n1 = static_cast<int>(std::ceil((radius - r1) / h - 1e-9));
    const double dr0 = r1 / n0;
    const double dr1 = (radius - r1) / n1;
    for (int k = 1; k <= n0; ++k) {
      const double r = k == n0 ? r1 : k * dr0;
      rings.push_back({r, ring_count(r, dr0)});
    }
    for (int k = 1; k <= n1; ++k) {
      const double r = k == n1 ? radius : r1 + k * dr1;
      rings.push_back({r, std::max(rings.back().count, ring_count(r, dr1))});
    }
  } else {
    const int n = static_cast<int>(std::ceil(radius / h - 1e-9));
    const double dr = radius / n;
    for (int k = 1; k <= n; ++k) {
      const double r = k == n ? radius : k * dr;
      rings.push_back({r, ring_count(r, dr)});
    }
  }
  return make_ring_mesh(rings, true, interface_radius);
}

Mesh make_annulus(double inner_radius, double outer_radius, double h) {
  require(inner_radius > 0.0 && outer_radius > inner_radius,
          "make_annulus: need 0 < inner < outer");
  require(h > 0.0 && h <= (outer_radius - inner_radius) / 2.0 * (1.0 + 1e-12),
          "make_annulus: need 0 < h <= (outer - inner)/2");
  const int n = static_cast<int>(std::ceil((outer_radius - inner_radius) / h - 1e-9));
  const double dr = (outer_radius - inner_radius) / n;
  std::vector<Ring> rings;
  for (int k = 0; k <= n; ++k) {
    const double r = k == n ? outer_radius : inner_radius + k * dr;
    const int c = ring_count(r, dr);
    rings.push_back({r, rings.empty() ? c : std::max(rings.back().count, c)});
  }
  return make_ring_mesh(rings, false, std::nullopt);
}

Mesh make_ellipse(double a, double b, double h) {
  require(a > 0.0 && b > 0.0, "make_ellipse: semi-axes must be positive");
  require(h > 0.0 && h <= std::min(a, b) / 4.0 * (1.0 + 1e-12),
          "make_ellipse: need 0 < h <= min(a, b)/4");
  Mesh mesh = make_disk(1.0, h / std::max(a, b));
  for (auto& p : mesh.nodes) p = Vec2(a * p.x(), b * p.y());
  mesh.outer_curve = BoundaryCurve::ellipse(a, b);
  for (int id : mesh.outer_boundary) {
    mesh.nodes[id] = mesh.outer_curve.project(mesh.nodes[id]);
  }
  return mesh;
}

Mesh make_graded_disk(double radius, double interface_radius, double h,
                      double first_width, double growth) {
  require(radius > 0.0 && interface_radius > 0.0 && interface_radius < radius,
          "make_graded_disk: need 0 < interface < radius");
  require(h > 0.0 && h <= interface_radius / 4.0 * (1.0 + 1e-12) &&
              h <= (radius - interface_radius) / 2.0 * (1.0 + 1e-12),
          "make_graded_disk: h too large for the geometry");
  require(first_width > 0.0 && growth > 1.0,
          "make_graded_disk: need first_width > 0 and growth > 1");

  std::vector<Ring> rings;
  const int n0 = static_cast<int>(std::ceil(interface_radius / h - 1e-9));
  const double dr0 = interface_radius / n0;
  for (int k = 1; k <= n0; ++k) {
    const double r = k == n0 ? interface_radius : k * dr0;
    rings.push_back({r, ring_count(r, dr0)});
  }
  const int interface_count = rings.back().count;

  const double shell = radius - interface_radius;
  std::vector<double> widths;
  double used = 0.0;
  for (double w = first_width; w < h && used + w < 0.5 * shell; w *= growth) {
    widths.push_back(w);
    used += w;
  }
  const int n_uniform = std::max(1, static_cast<int>(std::ceil((shell - used) / h - 1e-9)));
  const double w_uniform = (shell - used) / n_uniform;
  for (int k = 0; k < n_uniform; ++k) widths.push_back(w_uniform);

  double r = interface_radius;
  for (std::size_t k = 0; k < widths.size(); ++k) {
    r = k + 1 == widths.size() ? radius : r + widths[k];
    int count = interface_count;
    if (widths[k] >= 0.6 * h) count = std::max(rings.back().count, ring_count(r, widths[k]));
    rings.push_back({r, count});
  }
  return make_ring_mesh(rings, true, interface_radius);
}

Mesh refine(const Mesh& mesh) {
  Mesh out;
  out.nodes = mesh.nodes;
  out.outer_curve = mesh.outer_curve;
  out.inner_curve = mesh.inner_curve;
  out.interface_radius = mesh.interface_radius;

  const auto edges = collect_edges(mesh);
  std::set<int> outer_set(mesh.outer_boundary.begin(), mesh.outer_boundary.end());
  std::set<int> inner_set;
  if (mesh.inner_boundary) inner_set.insert(mesh.inner_boundary->begin(), mesh.inner_boundary->end());

  std::unordered_map<Edge, int, EdgeHash> mid;
  mid.reserve(edges.size());
  auto midpoint = [&](int a, int b) {
    const Edge key = edge_key(a, b);
    auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    Vec2 p = 0.5 * (mesh.nodes[a] + mesh.nodes[b]);
    const EdgeInfo& info = edges.at(key);
    if (info.count == 1) {
      if (outer_set.count(a) && outer_set.count(b)) {
        p = mesh.outer_curve.project(p);
      } else if (inner_set.count(a) && inner_set.count(b)) {
        p = mesh.inner_curve.project(p);
      }
    } else if (mesh.interface_radius && info.tag_mask == 0b11) {
      p = BoundaryCurve::circle(*mesh.interface_radius).project(p);
    }
    const int id = static_cast<int>(out.nodes.size());
    out.nodes.push_back(p);
    mid.emplace(key, id);
    return id;
  };

  out.triangles.reserve(mesh.triangles.size() * 4);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto [a, b, c] = mesh.triangles[t];
    const int ab = midpoint(a, b);
    const int bc = midpoint(b, c);
    const int ca = midpoint(c, a);
    out.triangles.push_back({a, ab, ca});
    out.triangles.push_back({ab, b, bc});
    out.triangles.push_back({ca, bc, c});
    out.triangles.push_back({ab, bc, ca});
    const int tag = mesh.region_tag.empty() ? 0 : mesh.region_tag[t];
    for (int i = 0; i < 4; ++i) out.region_tag.push_back(tag);
  }

  auto refine_ring = [&](const std::vector<int>& ring) {
    std::vector<int> r;
    r.reserve(ring.size() * 2);
    for (std::size_t i = 0; i < ring.size(); ++i) {
      r.push_back(ring[i]);
      r.push_back(mid.at(edge_key(ring[i], ring[(i + 1) % ring.size()])));
    }
    return r;
  };
  out.outer_boundary = refine_ring(mesh.outer_boundary);
  if (mesh.inner_boundary) out.inner_boundary = refine_ring(*mesh.inner_boundary);
  return out;
}

Mesh extract_region(const Mesh& mesh, int tag, std::vector<int>* parent_nodes) {
  std::vector<int> local(mesh.nodes.size(), -1);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    if (mesh.region_tag[t] != tag) continue;
    for (int v : mesh.triangles[t]) local[v] = 0;
  }
  Mesh sub;
  std::vector<int> parents;
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    if (local[i] < 0) continue;
    local[i] = static_cast<int>(sub.nodes.size());
    sub.nodes.push_back(mesh.nodes[i]);
    parents.push_back(static_cast<int>(i));
  }
  if (sub.nodes.empty()) throw GeometryError("extract_region: no triangles with that tag");
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    if (mesh.region_tag[t] != tag) continue;
    const auto& tri = mesh.triangles[t];
    sub.triangles.push_back({local[tri[0]], local[tri[1]], local[tri[2]]});
    sub.region_tag.push_back(tag);
  }
  auto loops = boundary_loops(sub);
  std::sort(loops.begin(), loops.end(), [&](const auto& x, const auto& y) {
    return std::abs(signed_ring_area(sub.nodes, x)) > std::abs(signed_ring_area(sub.nodes, y));
  });
  if (loops.empty() || loops.size() > 2) {
    throw GeometryError("extract_region: unsupported boundary topology");
  }
  sub.outer_boundary = loops[0];
  rotate_to_min_angle(sub.nodes, sub.outer_boundary);
  if (loops.size() == 2) {
    std::vector<int> inner = loops[1];
    std::reverse(inner.begin(), inner.end());
    rotate_to_min_angle(sub.nodes, inner);
    sub.inner_boundary = inner;
  }
  if (mesh.interface_radius) {
    const auto iface = BoundaryCurve::circle(*mesh.interface_radius);
    if (tag == 0) {
      sub.outer_curve = iface;
    } else {
      sub.outer_curve = mesh.outer_curve;
      sub.inner_curve = iface;
    }
  } else {
    sub.outer_curve = mesh.outer_curve;
    sub.inner_curve = mesh.inner_curve;
  }
  if (parent_nodes) *parent_nodes = std::move(parents);
  return sub;
}

std::vector<double> boundary_angles(const Mesh& mesh) {
  if (mesh.outer_boundary.empty()) throw GeometryError("empty outer boundary");
  std::vector<double> angles;
  angles.reserve(mesh.outer_boundary.size());
  for (int id : mesh.outer_boundary) {
    const Vec2& p = mesh.nodes.at(static_cast<std::size_t>(id));
    if (p.norm() < 1e-14) throw GeometryError("boundary node at the origin");
    angles.push_back(polar_angle(p));
  }
  const auto first = std::min_element(angles.begin(), angles.end());
  std::rotate(angles.begin(), first, angles.end());
  for (std::size_t i = 1; i < angles.size(); ++i) {
    if (!(angles[i] > angles[i - 1])) {
      throw GeometryError("outer boundary is not a counterclockwise star-shaped ring");
    }
  }
  return angles;
}

void validate(const Mesh& mesh) {
  const int n = static_cast<int>(mesh.nodes.size());
  if (mesh.region_tag.size() != mesh.triangles.size()) {
    throw GeometryError("region_tag length differs from triangle count");
  }
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    for (int v : mesh.triangles[t]) {
      if (v < 0 || v >= n) throw GeometryError("triangle index out of range");
    }
    if (!(mesh.signed_area(t) > 0.0)) {
      throw GeometryError("triangle " + std::to_string(t) + " has non-positive area");
    }
  }
  // duplicate nodes
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return mesh.nodes[a].x() < mesh.nodes[b].x(); });
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (mesh.nodes[order[j]].x() - mesh.nodes[order[i]].x() > 1e-12) break;
      if ((mesh.nodes[order[j]] - mesh.nodes[order[i]]).norm() <= 1e-12) {
        throw GeometryError("duplicate nodes " + std::to_string(order[i]) + ", " + std::to_string(order[j]));
      }
    }
  }
  const auto edges = collect_edges(mesh);
  auto check_ring = [&](const std::vector<int>& ring, const char* name) {
    if (ring.size() < 3) throw GeometryError(std::string(name) + " ring too short");
    std::set<int> seen;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      if (!seen.insert(ring[i]).second) {
        throw GeometryError(std::string(name) + " ring repeats a node");
      }
      auto it = edges.find(edge_key(ring[i], ring[(i + 1) % ring.size()]));
      if (it == edges.end() || it->second.count != 1) {
        throw GeometryError(std::string(name) + " ring has a non-boundary edge");
      }
    }
  };
  check_ring(mesh.outer_boundary, "outer");
  if (mesh.inner_boundary) check_ring(*mesh.inner_boundary, "inner");
  if (mesh.interface_radius) {
    const double r1 = *mesh.interface_radius;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      for (int v : mesh.triangles[t]) {
        const double r = mesh.nodes[v].norm();
        if ((mesh.region_tag[t] == 0 && r > r1 + 1e-9) ||
            (mesh.region_tag[t] == 1 && r < r1 * (1.0 - 1e-9) - 1e-9)) {
          throw GeometryError("triangle " + std::to_string(t) + " crosses the interface");
        }
      }
    }
  }
}

std::string mesh_to_json(const Mesh& mesh) {
  nlohmann::ordered_json j;
  j["version"] = kMeshFormatVersion;
  auto nodes = nlohmann::ordered_json::array();
  for (const auto& p : mesh.nodes) nodes.push_back({p.x(), p.y()});
  j["nodes"] = std::move(nodes);
  auto tris = nlohmann::ordered_json::array();
  for (const auto& t : mesh.triangles) tris.push_back({t[0], t[1], t[2]});
  j["triangles"] = std::move(tris);
  j["outer_boundary"] = mesh.outer_boundary;
  if (mesh.inner_boundary) {
    j["inner_boundary"] = *mesh.inner_boundary;
  } else {
    j["inner_boundary"] = nullptr;
  }
  j["region_tag"] = mesh.region_tag;
  return j.dump();
}

Mesh mesh_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("mesh file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("version").get<int>() != kMeshFormatVersion) {
      throw IoError("unsupported mesh format version");
    }
    Mesh mesh;
    for (const auto& p : j.at("nodes")) mesh.nodes.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    for (const auto& t : j.at("triangles")) mesh.triangles.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
    mesh.outer_boundary = j.at("outer_boundary").get<std::vector<int>>();
    if (!j.at("inner_boundary").is_null()) mesh.inner_boundary = j.at("inner_boundary").get<std::vector<int>>();
    mesh.region_tag = j.at("region_tag").get<std::vector<int>>();
    validate(mesh);
    return mesh;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed mesh file: ") + e.what());
  }
}

}  // namespace cloakspec
