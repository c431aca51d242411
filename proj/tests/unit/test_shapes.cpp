#include "doctest.h"
#include "oracles.hpp"

#include "anisospec/errors.hpp"
#include "anisospec/numerics.hpp"
#include "anisospec/shapes.hpp"

#include <cmath>

using namespace anisospec;

TEST_CASE("polygonal disks and annuli converge in area") {
  CHECK(area(shapes::disk(1, 4096)) == doctest::Approx(kPi).epsilon(2e-6));
  CHECK(area(shapes::annulus(0.5, 0.25, 4096)) == doctest::Approx(kPi * (0.25 - 0.0625)).epsilon(2e-6));
  CHECK(shapes::annulus(0.5, 0.25, 64).holes().size() == 1);
}

TEST_CASE("cropped disk is bounded by the band") {
  const Membrane m = shapes::cropped_disk(1, 0.6, 256);
  for (const auto& v : m.outer()) CHECK(std::abs(v.y()) <= 0.6 + 1e-12);
  CHECK(chord_width(m, 0.0) == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(chord_width(m, kPi / 2) == doctest::Approx(1.2).epsilon(1e-9));
}

TEST_CASE("star has 2m tips on the outer circle") {
  const Membrane m = shapes::star(10);
  int tips = 0;
  for (const auto& v : m.outer()) tips += std::abs(v.norm() - 1.0) < 1e-12;
  CHECK(tips == 20);
  CHECK_THROWS_AS(shapes::star(10, 1.0, 0.1), InvalidParams);
}

TEST_CASE("s_chain has unit area") {
  for (int k : {1, 2}) {
    CAPTURE(k);
    CHECK(std::abs(area(shapes::s_chain(k, 512)) - 1.0) <= 2e-2);
  }
}

TEST_CASE("s_counterexample: sup width 4, never attained, larger diameter") {
  const Membrane m = shapes::s_counterexample();
  const auto prof = width_profile(m, 1024);
  CHECK(prof.sup_width == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(prof.attained == TriState::NotAttained);
  CHECK(diameter(m) > 4.0 + 0.1);
  CHECK(diameter(m) == doctest::Approx(oracle::diameter(m)));
  // The horizontal chord through the middle approaches 4 but is cut at the notches.
  CHECK(chord_width(m, 0.0) < 4.0);
}

TEST_CASE("by_name dispatches and rejects bad input") {
  CHECK(area(shapes::by_name("rect", {1, 2})) == doctest::Approx(2.0));
  CHECK(shapes::by_name("disk", {1, 32}).outer().size() == 32);
  CHECK_THROWS_AS(shapes::by_name("hexagon", {}), InvalidParams);
  CHECK_THROWS_AS(shapes::rect(-1, 1), InvalidParams);
  CHECK_THROWS_AS(shapes::disk(1, 2), InvalidParams);
  CHECK_THROWS_AS(shapes::annulus(0.5, 0.6, 64), InvalidParams);
  CHECK_THROWS_AS(shapes::cropped_disk(1, 1.5, 64), InvalidParams);
  CHECK_THROWS_AS(shapes::asterisk(0), InvalidParams);
  CHECK_THROWS_AS(shapes::s_chain(0, 512), InvalidParams);
}
