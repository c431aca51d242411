#include "doctest.h"
#include "oracles.hpp"

#include "anisospec/errors.hpp"
#include "anisospec/numerics.hpp"
#include "anisospec/shapes.hpp"
#include "anisospec/spectra.hpp"

#include <cmath>

using namespace anisospec;

TEST_CASE("pi_p and the 1D eigenvalue against the finite-difference oracle") {
  CHECK(pi_p(2.0) == doctest::Approx(kPi).epsilon(1e-14));
  // π_p = 2π/(p sin(π/p))
  for (double p : {1.5, 3.0, 4.0}) CHECK(pi_p(p) == doctest::Approx(2 * kPi / (p * std::sin(kPi / p))).epsilon(1e-13));
  for (double p : {1.5, 2.0, 3.0, 4.0})
    for (double len : {0.5, 1.0, 2.0}) {
      CAPTURE(p);
      CAPTURE(len);
      const auto r = lambda_1d(p, len);
      CHECK(r.method == "closed_form");
      CHECK(std::abs(r.value - oracle::rayleigh_1d_extrapolated(p, len, 200)) <= 1e-3 * r.value);
    }
  CHECK(lambda_1d(2, 1).value == doctest::Approx(kPi * kPi).epsilon(1e-14));
  CHECK_THROWS_AS(lambda_1d(1.0, 1.0), InvalidExponent);
  CHECK_THROWS_AS(lambda_1d(2.0, 0.0), InvalidLength);
}

TEST_CASE("degenerate eigenvalue on the square") {
  const Membrane sq = shapes::rect(1, 1);
  CHECK(lambda_degenerate(sq, Anisotropy::directional(1, kPi / 2), 2).value == doctest::Approx(kPi * kPi));
  CHECK(lambda_degenerate(sq, Anisotropy::directional(2, 0), 2).value == doctest::Approx(4 * kPi * kPi));
  // The diagonal chord is √2 long.
  CHECK(lambda_degenerate(sq, Anisotropy::directional(1, kPi / 4), 2).value == doctest::Approx(kPi * kPi / 2));
  const auto z = lambda_degenerate(sq, Anisotropy::zero(), 2);
  CHECK(z.value == 0.0);
  CHECK(z.method == "closed_form");
  CHECK_THROWS_AS(lambda_degenerate(sq, Anisotropy::euclidean(), 2), NotDegenerate);
  // Classification sees through wrappers.
  const Anisotropy wrapped = Anisotropy::scaled(2, Anisotropy::rotated(0.3, Anisotropy::directional(1, 0.3)));
  CHECK(lambda_degenerate(sq, wrapped, 3).value == doctest::Approx(8 * lambda_1d(3, 1).value));
}

TEST_CASE("lambda_min equals the 1D value at the widest chord") {
  const auto r = lambda_min(shapes::rect(1, 2), 2.0);
  CHECK(r.result.value == doctest::Approx(kPi * kPi / 5).epsilon(1e-9));
  CHECK(r.extremizers.complete);
  REQUIRE(r.extremizers.anisotropies.size() == 2);
  for (const auto& e : r.extremizers.anisotropies)
    CHECK(lambda_degenerate(shapes::rect(1, 2), e, 2).value == doctest::Approx(r.result.value).epsilon(1e-9));

  const auto star = lambda_min(shapes::star(10), 2.0);
  CHECK(star.extremizers.anisotropies.size() == 10);

  const auto ce = lambda_min(shapes::s_counterexample(), 2.0);
  CHECK(ce.result.value == doctest::Approx(kPi * kPi / 16).epsilon(1e-9));
  CHECK(ce.extremizers.anisotropies.empty());
  CHECK_FALSE(ce.extremizers.complete);

  const auto disk = lambda_min(shapes::disk(1, 2048), 2.0);
  CHECK_FALSE(disk.extremizers.complete);
  CHECK(disk.extremizers.anisotropies.size() == 1);
}

TEST_CASE("estimate bounds scale with the norm of H") {
  const Anisotropy h = Anisotropy::quadratic(Mat2::Identity() * 4);  // ‖H‖ = 2
  const Bounds b = u_estimate_bounds(1.0, 3.0, h, 2.0);
  CHECK(b.lower == doctest::Approx(4.0));
  CHECK(b.upper == doctest::Approx(12.0));
  CHECK_THROWS_AS(u_estimate_bounds(1.0, 3.0, Anisotropy::zero(), 2.0), ZeroAnisotropy);
}

TEST_CASE("lambda_max is the Euclidean FEM value") {
  SolverOptions o;
  o.h = 0.02;
  const auto r = lambda_max(shapes::rect(1, 1), 2.0, o);
  CHECK(r.method == "fem");
  CHECK(r.value == doctest::Approx(2 * kPi * kPi).epsilon(1e-2));
  const double bessel = oracle::radial_disk_p2(1.0, 4000);
  CHECK(std::abs(lambda_max(shapes::disk(1, 256), 2.0, o).value - bessel) <= 1e-2 * bessel);
}

TEST_CASE("blow-up rectangles have unit area and bounds growing like k^p") {
  for (double p : {2.0, 3.0}) {
    const auto seq = blowup_sequence(Anisotropy::quadratic(Mat2::Identity()), p, 16);
    REQUIRE(seq.size() == 16);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      CHECK(seq[i].k == static_cast<int>(i) + 1);
      CHECK(seq[i].area == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(seq[i].bound.value == doctest::Approx(lambda_1d(p, 1.0 / seq[i].k).value).epsilon(1e-12));
    }
    CHECK(seq.back().bound.value / seq.front().bound.value == doctest::Approx(std::pow(16.0, p)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(blowup_sequence(Anisotropy::zero(), 2.0, 4), ZeroAnisotropy);
}

TEST_CASE("diameter and area inequalities") {
  for (double p : {1.5, 2.0, 3.0}) {
    CAPTURE(p);
    const auto sq = id_min_bound(shapes::rect(1, 1), p);
    CHECK(sq.holds);
    CHECK(sq.equality);  // the diagonal is the widest chord

    const auto rr = id_min_bound(shapes::cropped_disk(1, 0.6, 256), p);
    CHECK(rr.holds);

    const auto ce = id_min_bound(shapes::s_counterexample(), p);
    CHECK(ce.holds);
    CHECK_FALSE(ce.equality);
    CHECK(ce.lhs > ce.rhs);

    const auto ip = ip_min_bound(shapes::rect(1, 2), p);
    CHECK(ip.holds);
    CHECK(ip.lhs <= ip.rhs);
    CHECK_FALSE(ip.equality);

    const auto disk = ip_min_bound(shapes::disk(1, 4096), p, 1e-5);
    CHECK(disk.holds);
    CHECK(disk.equality);
  }
  CHECK_THROWS_AS(ip_min_bound(shapes::star(10), 2.0), NotConvex);

  const auto iso = isodiametric_check(shapes::rect(1, 1));
  CHECK(iso.holds);
  CHECK(iso.bound == doctest::Approx(kPi / 2));
}
