#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cloakspec/types.hpp"

namespace cloakspec {

/// Exact curve a boundary ring approximates; used by refine() to place
/// new boundary nodes on the true curve.
struct BoundaryCurve {
  enum class Kind { none, circle, ellipse };
  Kind kind = Kind::none;
  double a = 0.0;  // radius, or x semi-axis
  double b = 0.0;  // y semi-axis (ellipse)

  static BoundaryCurve circle(double r) { return {Kind::circle, r, r}; }
  static BoundaryCurve ellipse(double a, double b) {
    return {Kind::ellipse, a, b};
  }
  Vec2 project(const Vec2& p) const;
};

/// Planar triangulation. Triangles are counterclockwise; the outer boundary
/// ring is counterclockwise and not closed (last node connects to first).
/// region_tag is 0 inside the interface circle and 1 outside it.
struct Mesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> outer_boundary;
  std::optional<std::vector<int>> inner_boundary;
  std::vector<int> region_tag;

  // Geometry metadata; not part of the file format.
  BoundaryCurve outer_curve;
  BoundaryCurve inner_curve;
  std::optional<double> interface_radius;

  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_triangles() const { return triangles.size(); }
  double signed_area(std::size_t t) const;
  double area() const;
  double max_edge_length() const;
  double min_angle_degrees() const;
  std::size_t num_edges() const;
  /// nodes - edges + triangles
  long euler_characteristic() const;
};

/// One concentric ring of `count` equally spaced nodes starting at angle 0.
struct Ring {
  double radius = 0.0;
  int count = 0;
};

/// Triangulates the bands between consecutive rings (plus a centre fan when
/// `with_centre`). Bands whose outer radius is at most `interface_radius`
/// get region tag 0, the rest 1.
Mesh make_ring_mesh(const std::vector<Ring>& rings, bool with_centre,
                    std::optional<double> interface_radius);

Mesh make_disk(double radius, double h,
               std::optional<double> interface_radius = std::nullopt);
Mesh make_annulus(double inner_radius, double outer_radius, double h);
Mesh make_ellipse(double a, double b, double h);

/// Composite disk of radius `radius` with an interface circle at
/// `interface_radius` whose shell rings are graded towards the interface:
/// the first shell band has radial width `first_width`, widths then grow
/// geometrically by `growth` until they reach h. Thin bands keep the node
/// count of the interface ring, so their triangles are right-angled.
Mesh make_graded_disk(double radius, double interface_radius, double h,
                      double first_width, double growth = 1.5);

/// Uniform red refinement; boundary and interface midpoints are moved onto
/// the exact curves.
Mesh refine(const Mesh& mesh);

/// Sub-mesh made of triangles with the given region tag. `parent_nodes`
/// (if non-null) receives the parent index of every sub-mesh node. The
/// outer boundary of the sub-mesh is the interface ring for tag 0.
Mesh extract_region(const Mesh& mesh, int tag,
                    std::vector<int>* parent_nodes = nullptr);

/// Polar angles of the outer boundary nodes, in ring order, rotated so the
/// sequence starts at its minimum and is strictly increasing.
std::vector<double> boundary_angles(const Mesh& mesh);

/// Throws GeometryError naming the first violated invariant.
void validate(const Mesh& mesh);

/// Versioned JSON text format (keys: version, nodes, triangles,
/// outer_boundary, inner_boundary, region_tag).
std::string mesh_to_json(const Mesh& mesh);
Mesh mesh_from_json(const std::string& text);

}  // namespace cloakspec
