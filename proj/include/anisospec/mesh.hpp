#pragma once

#include "anisospec/geometry.hpp"

#include <array>
#include <iosfwd>
#include <vector>

namespace anisospec {

struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<char> boundary;                 // per vertex
  std::vector<char> sharp;                    // boundary corner with interior angle below 45°
  double h = 0.0;

  std::size_t interior_count() const;
  double triangle_area(std::size_t t) const;
  /// Smallest interior angle in degrees over all triangles.
  double min_angle_deg() const;
  /// Same, skipping triangles at sharp corners and triangles spanning a
  /// feature thinner than h (all three vertices on the boundary), where 15°
  /// cannot be met.
  double min_angle_deg_away_from_tips() const;
  std::size_t edge_count() const;
};

/// Conforming Delaunay triangulation of the membrane: boundary rings
/// resampled at spacing about h (corners kept), equilateral lattice inside.
Mesh triangulate(const Membrane& m, double h);

/// Plain-text export:
///   anisospec-mesh 1
///   <nv> <nt> <h>
///   nv lines "x y boundary_flag"
///   nt lines "i j k"
void write_mesh(std::ostream& os, const Mesh& mesh);
Mesh read_mesh(std::istream& is);

}  // namespace anisospec
