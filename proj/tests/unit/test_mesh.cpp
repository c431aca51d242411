#include "doctest.h"

#include "anisospec/errors.hpp"
#include "anisospec/mesh.hpp"
#include "anisospec/shapes.hpp"

#include <sstream>

using namespace anisospec;

namespace {

double total_area(const Mesh& mesh) {
  double s = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) s += mesh.triangle_area(t);
  return s;
}

}  // namespace

TEST_CASE("triangle areas sum to the membrane area") {
  for (const auto& m : {shapes::rect(1, 2), shapes::cropped_disk(1, 0.6, 128), shapes::annulus(0.5, 0.3, 128),
                        shapes::asterisk(3)}) {
    const Mesh mesh = triangulate(m, 0.05);
    CHECK(total_area(mesh) == doctest::Approx(area(m)).epsilon(1e-3));
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) CHECK(mesh.triangle_area(t) > 0.0);
    CHECK(mesh.min_angle_deg_away_from_tips() >= 15.0);
  }
}

TEST_CASE("square mesh is conforming and refines with h") {
  const Mesh coarse = triangulate(shapes::rect(1, 1), 0.1);
  const Mesh fine = triangulate(shapes::rect(1, 1), 0.05);
  CHECK(fine.vertices.size() > 3 * coarse.vertices.size());
  // Euler: V - E + F = 1 for a disk-like region.
  CHECK(static_cast<long>(fine.vertices.size()) - static_cast<long>(fine.edge_count()) +
            static_cast<long>(fine.triangles.size()) ==
        1);
  std::size_t nb = 0;
  for (char b : fine.boundary) nb += b;
  CHECK(nb + fine.interior_count() == fine.vertices.size());
}

TEST_CASE("mesh text round trip is exact") {
  const Mesh mesh = triangulate(shapes::cropped_disk(1, 0.6, 64), 0.1);
  std::stringstream ss;
  write_mesh(ss, mesh);
  const Mesh back = read_mesh(ss);
  REQUIRE(back.vertices.size() == mesh.vertices.size());
  REQUIRE(back.triangles.size() == mesh.triangles.size());
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    CHECK(back.vertices[i] == mesh.vertices[i]);
    CHECK(back.boundary[i] == mesh.boundary[i]);
  }
  CHECK(back.triangles == mesh.triangles);
  std::stringstream again;
  write_mesh(again, back);
  std::stringstream first;
  write_mesh(first, mesh);
  CHECK(again.str() == first.str());
}

TEST_CASE("meshing rejects bad spacing and malformed files") {
  CHECK_THROWS_AS(triangulate(shapes::rect(1, 1), 0.0), InvalidParams);
  CHECK_THROWS_AS(triangulate(shapes::rect(1, 1), 5.0), InvalidParams);
  std::istringstream bad("anisospec-mesh 1\n3 1 0.1\n0 0 1\n");
  CHECK_THROWS_AS(read_mesh(bad), ParseError);
}
