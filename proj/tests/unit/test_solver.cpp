#include "doctest.h"
#include "oracles.hpp"

#include "anisospec/errors.hpp"
#include "anisospec/mesh.hpp"
#include "anisospec/numerics.hpp"
#include "anisospec/shapes.hpp"
#include "anisospec/solver.hpp"

#include <cmath>
#include <random>

using namespace anisospec;

namespace {

DiscreteField bubble(const Mesh& mesh) {
  DiscreteField u;
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec2& v = mesh.vertices[i];
    u.values.push_back(mesh.boundary[i] ? 0.0 : v.x() * (1 - v.x()) * v.y() * (1 - v.y()));
  }
  return u;
}

SolverOptions at(double h) {
  SolverOptions o;
  o.h = h;
  return o;
}

}  // namespace

TEST_CASE("quadrature of |u|^p for a polynomial bubble") {
  const Mesh mesh = triangulate(shapes::rect(1, 1), 0.02);
  const DiscreteField u = bubble(mesh);
  CHECK(lp_norm_p(mesh, u, 2.0) == doctest::Approx(1.0 / 900).epsilon(1e-2));
  CHECK(lp_norm_p(mesh, u, 2.0, true) == doctest::Approx(1.0 / 900).epsilon(1e-2));
  // ∬|∇u|² for the bubble is 2·(1/30)·(1/3) = 1/45.
  CHECK(rayleigh_eval(mesh, u, Anisotropy::euclidean(), 2.0).energy == doctest::Approx(1.0 / 45).epsilon(1e-2));
}

TEST_CASE("gradient of the quotient matches central differences") {
  const Mesh mesh = triangulate(shapes::rect(1, 1), 0.15);
  DiscreteField u = bubble(mesh);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> jitter(0.5, 1.5);
  for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] *= jitter(rng);
  for (const auto& h : {Anisotropy::euclidean(), Anisotropy::weighted_lq(3, 1, 0.5)})
    for (double p : {2.0, 3.0}) {
      const auto g = rayleigh_gradient(mesh, u, h, p);
      for (std::size_t i = 0; i < u.values.size(); ++i) {
        if (mesh.boundary[i]) {
          CHECK(g[i] == 0.0);
          continue;
        }
        const double e = 1e-7 * (1 + std::abs(u.values[i]));
        DiscreteField up = u, dn = u;
        up.values[i] += e;
        dn.values[i] -= e;
        const double fd = (rayleigh_eval(mesh, up, h, p).quotient - rayleigh_eval(mesh, dn, h, p).quotient) / (2 * e);
        CHECK(std::abs(g[i] - fd) <= 1e-4 * (1 + std::abs(fd)));
      }
    }
}

TEST_CASE("square, Euclidean, p = 2: 2π² within 1%") {
  const auto r = solve_membrane(shapes::rect(1, 1), Anisotropy::euclidean(), 2.0, at(0.02));
  CHECK(r.path == "inverse_iteration");
  CHECK(r.result.method == "fem");
  CHECK(std::abs(r.result.value - 2 * kPi * kPi) <= 0.01 * 2 * kPi * kPi);
  CHECK(r.result.value >= 2 * kPi * kPi);  // conforming P1 is an upper bound
}

TEST_CASE("descent path agrees with the linear path at p = 2") {
  // WeightedLq with q = 2 is quadratic but only the descent path sees it as generic.
  const Anisotropy h = Anisotropy::weighted_lq(2, 1, 1);
  const auto lin = solve_membrane(shapes::rect(1, 1), Anisotropy::euclidean(), 2.0, at(0.05));
  const auto gen = solve_membrane(shapes::rect(1, 1), h, 2.0, at(0.05));
  CHECK(gen.result.value == doctest::Approx(lin.result.value).epsilon(2e-3));
}

TEST_CASE("degenerate anisotropy on the square approaches the 1D value") {
  for (double p : {2.0, 3.0}) {
    CAPTURE(p);
    const double ref = oracle::rayleigh_1d_extrapolated(p, 1.0, 200);
    const auto r = solve_membrane(shapes::rect(1, 1), Anisotropy::directional(1, kPi / 2), p, at(0.05));
    CHECK(r.result.value >= ref * (1 - 1e-3));
    CHECK(r.result.value <= ref * 1.05);
  }
}

TEST_CASE("repeated solves are bit identical") {
  const Anisotropy h = Anisotropy::weighted_lq(3, 1, 0.5);
  const auto a = solve_membrane(shapes::cropped_disk(1, 0.6, 64), h, 2.5, at(0.1));
  const auto b = solve_membrane(shapes::cropped_disk(1, 0.6, 64), h, 2.5, at(0.1));
  CHECK(a.result.value == b.result.value);
  CHECK(a.u.values == b.u.values);
  CHECK(a.restart_values == b.restart_values);
}

TEST_CASE("minimizer is normalized and nonnegative") {
  const auto r = solve_membrane(shapes::rect(1, 2), Anisotropy::quadratic(Mat2::Identity()), 3.0, at(0.1));
  const Mesh mesh = triangulate(shapes::rect(1, 2), 0.1);
  for (double v : r.u.values) CHECK(v >= 0.0);
  CHECK(lp_norm_p(mesh, r.u, 3.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("slices of a degenerate minimizer are 1D eigenfunctions") {
  const Mesh mesh = triangulate(shapes::rect(1, 1), 0.025);
  const auto r = rayleigh_minimize(mesh, Anisotropy::directional(1, kPi / 2), 2.0, at(0.025));
  SliceOptions so;
  so.target = kPi * kPi;
  so.tol = 0.02;
  const auto rep = slice_check(mesh, r.u, kPi / 2, 2.0, so);
  CHECK(rep.nontrivial > 0);
  CHECK(rep.fraction >= 0.9);
}

TEST_CASE("convergence study shows second order at p = 2") {
  const auto t = convergence_study(shapes::rect(1, 1), Anisotropy::euclidean(), 2.0, {0.1, 0.05, 0.025});
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0].lambda > t.rows[1].lambda);
  CHECK(t.rows[1].lambda > t.rows[2].lambda);
  CHECK(t.order == doctest::Approx(2.0).epsilon(0.25));
  CHECK(t.extrapolated == doctest::Approx(2 * kPi * kPi).epsilon(1e-3));
}

TEST_CASE("solver input validation") {
  CHECK_THROWS_AS(solve_membrane(shapes::rect(1, 1), Anisotropy::euclidean(), 1.0, at(0.1)), InvalidExponent);
  CHECK_THROWS_AS(solve_membrane(shapes::rect(1, 1), Anisotropy::zero(), 2.0, at(0.1)), ZeroAnisotropy);
}
