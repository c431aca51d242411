#include "doctest.h"

#include "anisospec/errors.hpp"
#include "anisospec/numerics.hpp"
#include "anisospec/verify.hpp"

#include <atomic>
#include <sstream>
#include <stdexcept>

using namespace anisospec;

namespace {

CaseResult make(CaseKind kind, double expected, double observed, double tol) {
  CaseResult c;
  c.name = "c";
  c.kind = kind;
  c.expected = expected;
  c.observed = observed;
  c.tolerance = tol;
  judge(c);
  return c;
}

VerifyConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST_CASE("config: defaults, overrides and comments") {
  const VerifyConfig d = parse("");
  CHECK(d.h == 0.02);
  CHECK(d.tol_fem == 0.02);
  CHECK(d.seed == 20240601u);
  const VerifyConfig c = parse("# comment\n  h = 0.05   # trailing\n\nseed=7\nrestarts = 2\n");
  CHECK(c.h == 0.05);
  CHECK(c.seed == 7u);
  CHECK(c.restarts == 2);
}

TEST_CASE("config: malformed input is a ParseError") {
  CHECK_THROWS_AS(parse("colour = blue\n"), ParseError);
  CHECK_THROWS_AS(parse("h = fast\n"), ParseError);
  CHECK_THROWS_AS(parse("h = 0.05x\n"), ParseError);
  CHECK_THROWS_AS(parse("h 0.05\n"), ParseError);
  CHECK_THROWS_AS(parse("h = -1\n"), ParseError);
  CHECK_THROWS_AS(parse("restarts = 0\n"), ParseError);
  CHECK_THROWS_AS(load_config("/nonexistent/verify.conf"), std::ios_base::failure);
}

TEST_CASE("judge applies each case kind") {
  CHECK(make(CaseKind::Equal, 1.0, 1.05, 0.1).pass);
  CHECK_FALSE(make(CaseKind::Equal, 1.0, 1.2, 0.1).pass);
  CHECK(make(CaseKind::AtMost, 1.0, 1.05, 0.1).pass);
  CHECK_FALSE(make(CaseKind::AtMost, 1.0, 1.2, 0.1).pass);
  CHECK(make(CaseKind::AtLeast, 1.0, 0.95, 0.1).pass);
  CHECK_FALSE(make(CaseKind::AtLeast, 1.0, 0.8, 0.1).pass);
  CHECK(make(CaseKind::StrictBelow, 1.0, 0.8, 0.1).pass);
  CHECK_FALSE(make(CaseKind::StrictBelow, 1.0, 0.95, 0.1).pass);
  CHECK_FALSE(make(CaseKind::Equal, 1.0, std::nan(""), 0.1).pass);
  CHECK(std::string(to_string(CaseKind::StrictBelow)) == "strict_below");
}

TEST_CASE("an errored case fails the report") {
  VerificationReport r;
  r.suite = "x";
  CHECK_FALSE(r.ok());  // empty
  r.cases.push_back(make(CaseKind::Equal, 1, 1, 0));
  summarize(r);
  CHECK(r.ok());
  CaseResult bad = make(CaseKind::Equal, 1, 1, 0);
  bad.error = "NoConvergence: stalled";
  judge(bad);
  r.cases.push_back(bad);
  summarize(r);
  CHECK(r.errored == 1);
  CHECK_FALSE(r.ok());

  std::ostringstream os;
  write_text_report(os, r);
  CHECK(os.str().find("ERROR") != std::string::npos);
  CHECK(os.str().find("NOT OK") != std::string::npos);
}

TEST_CASE("run_cases returns results in index order for any worker count") {
  for (int workers : {0, 1, 3, 8}) {
    std::atomic<int> calls{0};
    const auto out = run_cases(
        37,
        [&](std::size_t i) {
          ++calls;
          CaseResult c;
          c.name = std::to_string(i);
          return c;
        },
        workers);
    REQUIRE(out.size() == 37);
    CHECK(calls == 37);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i].name == std::to_string(i));
  }
}

TEST_CASE("T2 suite on the square passes and carries a replay line") {
  VerifyConfig cfg;
  cfg.h = 0.04;
  const auto r = suite_theorem_T2({T2Case{{"rect", {1, 1}}, kPi / 2, 2.0}, T2Case{{"rect", {1, 1}}, 0.0, 3.0}}, cfg);
  REQUIRE(r.cases.size() == 2);
  CHECK(r.ok());
  bool replay = false;
  for (const auto& [k, v] : r.cases[0].inputs) replay = replay || (k == "replay" && v.find("solve --gen rect:1,1") == 0);
  CHECK(replay);
}

TEST_CASE("suite failures become error entries instead of exceptions") {
  VerifyConfig cfg;
  cfg.h = 0.04;
  const auto r = suite_theorem_T2({T2Case{{"no_such_shape", {}}, 0.0, 2.0}}, cfg);
  REQUIRE(r.cases.size() == 1);
  CHECK(r.errored == 1);
  CHECK(r.cases[0].error.find("InvalidParams") != std::string::npos);
  CHECK_FALSE(r.ok());
}

TEST_CASE("blow-up suite") {
  const auto r = suite_blowup({Anisotropy::euclidean(), Anisotropy::zero()}, {2.0, 3.0}, VerifyConfig{});
  CHECK(r.ok());
  CHECK(r.cases.size() == 10);
  // 16² = 256 falls short of the required growth.
  VerifyConfig short_run;
  short_run.k_max = 16;
  CHECK(suite_blowup({Anisotropy::euclidean()}, {2.0}, short_run).failed == 1);
}

TEST_CASE("suite registry") {
  const auto names = suite_names();
  CHECK(names.size() == 8);
  CHECK_THROWS_AS(run_suite("T9", VerifyConfig{}), InvalidParams);
}
