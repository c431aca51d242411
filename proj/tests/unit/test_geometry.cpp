#include "doctest.h"
#include "oracles.hpp"

#include "anisospec/errors.hpp"
#include "anisospec/geometry.hpp"
#include "anisospec/numerics.hpp"
#include "anisospec/shapes.hpp"

#include <cmath>

using namespace anisospec;

namespace {

std::vector<std::pair<const char*, Membrane>> small_corpus() {
  return {{"square", shapes::rect(1, 1)},
          {"rect12", shapes::rect(1, 2)},
          {"rotated", shapes::rotated_rect(1, 2, 0.3)},
          {"disk", shapes::disk(1, 64)},
          {"annulus", shapes::annulus(0.5, 0.3, 64)},
          {"cropped", shapes::cropped_disk(1, 0.6, 64)},
          {"asterisk", shapes::asterisk(3)},
          {"star", shapes::star(3, 1.0, 0.5, 6)},
          {"counter", shapes::s_counterexample()}};
}

}  // namespace

TEST_CASE("membrane construction validates rings") {
  CHECK_THROWS_AS(Membrane(Ring{{0, 0}, {1, 0}}), InvalidRing);
  // bow tie
  CHECK_THROWS_AS(Membrane(Ring{{0, 0}, {1, 1}, {1, 0}, {0, 1}}), InvalidRing);
  // hole outside the outer ring
  CHECK_THROWS_AS(Membrane(Ring{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {Ring{{2, 2}, {3, 2}, {3, 3}}}), InvalidRing);
  // clockwise input is reoriented
  const Membrane m(Ring{{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  CHECK(area(m) == doctest::Approx(1.0));
  CHECK(m.contains({0.5, 0.5}));
  CHECK_FALSE(m.contains({1.0, 0.5}));
}

TEST_CASE("area and diameter of simple shapes") {
  CHECK(area(shapes::rect(1, 2)) == doctest::Approx(2.0));
  CHECK(diameter(shapes::rect(1, 2)) == doctest::Approx(std::sqrt(5.0)));
  CHECK(area(shapes::annulus(0.5, 0.3, 4096)) == doctest::Approx(kPi * (0.25 - 0.09)).epsilon(1e-5));
  CHECK(is_convex(shapes::rect(1, 2)));
  CHECK_FALSE(is_convex(shapes::annulus(0.5, 0.3, 64)));
  CHECK_FALSE(is_convex(shapes::star(5)));
  for (const auto& [name, m] : small_corpus()) {
    CAPTURE(name);
    CHECK(diameter(m) == doctest::Approx(oracle::diameter(m)).epsilon(1e-12));
  }
}

TEST_CASE("vertical sections of an annulus") {
  const auto s = vertical_components(shapes::annulus(0.5, 0.3, 4096), 0.0);
  REQUIRE(s.intervals.size() == 2);
  CHECK(s.intervals[0].length() == doctest::Approx(0.2).epsilon(1e-4));
  CHECK(s.intervals[1].lo == doctest::Approx(0.3).epsilon(1e-4));
}

TEST_CASE("chord_width agrees with the brute-force chord oracle") {
  for (const auto& [name, m] : small_corpus())
    for (int k = 0; k < 12; ++k) {
      const double theta = kPi * k / 12 + 0.01;
      CAPTURE(name);
      CAPTURE(theta);
      const double fast = chord_width(m, theta);
      const double brute = oracle::chord_width(m, theta);
      // The oracle scans finitely many offsets, so it can only fall short.
      CHECK(fast >= brute - 1e-9);
      CHECK(fast <= brute + 2e-3 * diameter(m));
    }
}

TEST_CASE("chord witness lies inside and has the reported length") {
  for (const auto& [name, m] : small_corpus()) {
    CAPTURE(name);
    const Chord c = longest_chord(m, 0.4);
    CHECK((c.b - c.a).norm() == doctest::Approx(c.length).epsilon(1e-9));
    for (int k = 1; k < 20; ++k) CHECK(m.contains(c.a + (c.b - c.a) * (k / 20.0)));
  }
}

TEST_CASE("chord widths on documented shapes") {
  const Membrane sq = shapes::rect(1, 1);
  CHECK(chord_width(sq, 0.0) == doctest::Approx(1.0));
  CHECK(chord_width(sq, kPi / 2) == doctest::Approx(1.0));
  CHECK(chord_width(sq, kPi / 4) == doctest::Approx(std::sqrt(2.0)));
  // Annulus: the longest chord is tangent to the hole.
  for (double r : {0.1, 0.2, 0.3, 0.4}) {
    const Membrane a = shapes::annulus(0.5, r, 4096);
    for (double theta : {0.0, 0.9, 2.0})
      CHECK(std::abs(chord_width(a, theta) - std::sqrt(1 - 4 * r * r)) <= 1e-3);
  }
}

TEST_CASE("width profile: maxima, sup and attainment") {
  const auto sq = width_profile(shapes::rect(1, 1), 256);
  CHECK(sq.sup_width == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(sq.maxima.size() == 2);
  CHECK(sq.attained == TriState::Attained);

  const auto st = width_profile(shapes::star(10), 1024);
  CHECK(st.thetas.size() == 1024);
  CHECK(st.maxima.size() == 10);
  for (const auto& w : st.maxima) CHECK(w.width == doctest::Approx(st.sup_width).epsilon(1e-6));

  const auto dk = width_profile(shapes::disk(1, 2048), 512);
  CHECK(dk.continuum);
  CHECK(dk.sup_width == doctest::Approx(2.0).epsilon(1e-5));

  const auto ce = width_profile(shapes::s_counterexample(), 1024);
  CHECK(ce.sup_width == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(ce.attained == TriState::NotAttained);
}

TEST_CASE("attainment strips and their multiplicity") {
  const auto w = attainment_check(shapes::rect(1, 2), kPi / 2);
  REQUIRE(w.has_value());
  CHECK(w->width == doctest::Approx(2.0));
  CHECK(w->strip.length() == doctest::Approx(1.0));
  // Every non-diagonal direction of a rectangle has a flat strip; the
  // diagonals split them into two clusters.
  CHECK(attainment_check(shapes::rect(1, 2), 0.3).has_value());
  CHECK_FALSE(attainment_check(shapes::rect(1, 2), std::atan2(2.0, 1.0)).has_value());

  CHECK(attainment_multiplicity(shapes::rect(1, 2), 512) == 2);
  CHECK(attainment_multiplicity(shapes::rect(1, 1), 512) == 2);
  CHECK(attainment_multiplicity(shapes::cropped_disk(1, 0.6, 256), 512) == 1);
  CHECK(attainment_multiplicity(shapes::asterisk(9), 1024) == 9);
  CHECK(attainment_multiplicity(shapes::disk(1, 256), 512) == 0);
  CHECK(attainment_multiplicity(shapes::star(10), 1024) == 0);
}

TEST_CASE("optimal design existence") {
  CHECK(has_optimal_design(shapes::rect(1, 2)) == TriState::Attained);
  CHECK(has_optimal_design(shapes::disk(1, 256)) == TriState::Attained);
  CHECK(has_optimal_design(shapes::s_counterexample()) == TriState::NotAttained);
  CHECK(std::string(to_string(TriState::NotAttained)) == "not_attained");
}

TEST_CASE("rigid motions preserve widths") {
  const Membrane m = shapes::cropped_disk(1, 0.6, 64);
  const Membrane r = m.rotated(0.7).translated({3, -1});
  CHECK(area(r) == doctest::Approx(area(m)));
  for (double theta : {0.1, 1.0, 2.2})
    CHECK(chord_width(r, theta + 0.7) == doctest::Approx(chord_width(m, theta)).epsilon(1e-9));
  CHECK(chord_width(m.scaled(2.5), 0.3) == doctest::Approx(2.5 * chord_width(m, 0.3)).epsilon(1e-12));
}
