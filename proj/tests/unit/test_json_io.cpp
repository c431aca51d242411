#include "doctest.h"

#include "anisospec/errors.hpp"
#include "anisospec/json_io.hpp"
#include "anisospec/shapes.hpp"

#include <cstdio>
#include <fstream>
#include <random>

using namespace anisospec;

namespace {

Mat2 mat(double a, double b, double c, double d) {
  Mat2 m;
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("anisotropy documents round trip exactly") {
  const std::vector<Anisotropy> all = {
      Anisotropy::euclidean(),
      Anisotropy::zero(),
      Anisotropy::directional(1.0 / 3, 0.1),
      Anisotropy::quadratic(mat(1, 0.3, 0.3, 0.5)),
      Anisotropy::weighted_lq(3, 1, 0.7),
      Anisotropy::scaled(2.5, Anisotropy::rotated(0.123456789, Anisotropy::euclidean())),
      Anisotropy::max_of({Anisotropy::directional(1, 0.2), Anisotropy::directional(1, 1.3)}),
      Anisotropy::lp_sum(2.5, {Anisotropy::directional(1, 0), Anisotropy::quadratic(mat(2, 0, 0, 1))})};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2, 2);
  for (const auto& h : all) {
    const std::string text = dump(to_json(h));
    const Anisotropy back = anisotropy_from_json(parse_json(text));
    CHECK(dump(to_json(back)) == text);
    for (int i = 0; i < 50; ++i) {
      const Vec2 xi(u(rng), u(rng));
      CHECK(back.eval(xi) == h.eval(xi));
    }
  }
}

TEST_CASE("documented anisotropy syntax") {
  const auto h = parse_anisotropy(R"({"kind":"lpsum","p":2,"children":[{"kind":"euclidean"},{"kind":"zero"}]})");
  CHECK(h.eval({3, 4}) == doctest::Approx(5.0));
  const auto d = parse_anisotropy(R"({"schema":"anisospec/1","kind":"directional","c":2,"theta":0,"units":"rad"})");
  CHECK(d.eval({1, 5}) == doctest::Approx(2.0));
  CHECK(to_json(Anisotropy::weighted_lq(2, 1, 1))["kind"] == "weightedlq");
  CHECK(to_json(Anisotropy::max_of({Anisotropy::euclidean()}))["kind"] == "maxof");
}

TEST_CASE("malformed anisotropy documents are rejected") {
  CHECK_THROWS_AS(parse_anisotropy(R"({"kind":"euclidean","extra":1})"), ParseError);
  CHECK_THROWS_AS(parse_anisotropy(R"({"kind":"directional","c":1,"theta":90,"units":"deg"})"), ParseError);
  CHECK_THROWS_AS(parse_anisotropy(R"({"kind":"directional","c":1})"), ParseError);
  CHECK_THROWS_AS(parse_anisotropy(R"({"kind":"directional","c":"one","theta":0})"), ParseError);
  CHECK_THROWS_AS(parse_anisotropy(R"({"kind":"hexagonal"})"), ParseError);
  CHECK_THROWS_AS(parse_anisotropy(R"({"kind":"euclidean","schema":"anisospec/2"})"), ParseError);
  CHECK_THROWS_AS(parse_anisotropy(R"({"kind":)"), ParseError);
  CHECK_THROWS_AS(parse_anisotropy(R"({"kind":"quadratic","a":[[1,0],[0]]})"), ParseError);
  // Semantically invalid values surface the library's own error.
  CHECK_THROWS_AS(parse_anisotropy(R"({"kind":"directional","c":-1,"theta":0})"), InvalidAnisotropy);
  CHECK_THROWS_AS(parse_anisotropy("/nonexistent/h.json"), std::ios_base::failure);
}

TEST_CASE("membrane documents round trip through a file") {
  const ShapeSpec spec{"annulus", {0.5, 0.3, 64}};
  const Membrane m = spec.build();
  const std::string path = "json_io_membrane.json";
  {
    std::ofstream out(path);
    out << dump(to_json(m, &spec));
  }
  const Membrane back = load_membrane(path);
  std::remove(path.c_str());
  CHECK(back.outer() == m.outer());
  REQUIRE(back.holes().size() == 1);
  CHECK(back.holes()[0] == m.holes()[0]);
  const Json j = to_json(m, &spec);
  CHECK(j["schema"] == kSchema);
  CHECK(j["generator"]["name"] == "annulus");
}

TEST_CASE("membrane documents are validated") {
  CHECK_THROWS_AS(membrane_from_json(parse_json(R"({"outer":[[0,0],[1,0],[0,1]]})")), ParseError);
  CHECK_THROWS_AS(membrane_from_json(parse_json(R"({"schema":"anisospec/1","outer":[[0,0],[1,0],[0,1]],"color":1})")),
                  ParseError);
  CHECK_THROWS_AS(membrane_from_json(parse_json(R"({"schema":"anisospec/1","outer":[[0,0],[1,0]]})")), InvalidRing);
  const Membrane t = membrane_from_json(parse_json(R"({"schema":"anisospec/1","outer":[[0,0],[1,0],[0,1]]})"));
  CHECK(area(t) == doctest::Approx(0.5));
}

TEST_CASE("spectral results and reports serialize with fixed key order") {
  SpectralResult r{9.869604401089358, "closed_form", 2.0, 0.0, "lambda_1d", true};
  const std::string text = dump(to_json(r));
  CHECK(text.find("\"value\"") < text.find("\"method\""));
  CHECK(parse_json(text)["value"].get<double>() == r.value);

  VerificationReport rep;
  rep.suite = "demo";
  CaseResult c;
  c.name = "one";
  c.inputs = {{"shape", "rect:1,1"}};
  c.kind = CaseKind::Equal;
  c.expected = 1.0;
  c.observed = 1.0;
  c.pass = true;
  rep.cases.push_back(c);
  rep.passed = 1;
  const Json j = to_json(rep);
  CHECK(j["ok"] == true);
  CHECK(j["summary"]["total"] == 1);
  CHECK(j["cases"][0]["inputs"]["shape"] == "rect:1,1");
  CHECK_FALSE(j["cases"][0].contains("error"));
}
