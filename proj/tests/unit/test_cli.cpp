#include "doctest.h"

#include "anisospec/cli.hpp"
#include "anisospec/json_io.hpp"
#include "anisospec/numerics.hpp"
#include "anisospec/shapes.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace anisospec;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("exit codes distinguish usage, computation and success") {
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"lambda", "--gen", "rect:1,1", "--anis", "{\"kind\":\"euclidean\"}", "--p", "0.5"}).code == 2);
  CHECK(invoke({"lambda", "--gen", "rect:1,1", "--anis", "{\"kind\":\"euclidean\",\"x\":1}", "--p", "2"}).code == 2);
  CHECK(invoke({"classify", "--anis", "{\"kind\":\"directional\",\"c\":1,\"theta\":1,\"units\":\"deg\"}"}).code == 2);
  CHECK(invoke({"gen-shape", "--gen", "hexagon:1"}).code == 2);
  const Run missing = invoke({"lambda-min", "--shape", "/nonexistent/m.json", "--p", "2"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("I/O error") != std::string::npos);
  // Non-convex membrane: the area inequality does not apply.
  CHECK(invoke({"bounds", "--gen", "star:10", "--anis", "{\"kind\":\"euclidean\"}", "--p", "2", "--h", "0.1"}).code == 0);
}

TEST_CASE("gen-shape writes a membrane that loads back") {
  const Run r = invoke({"gen-shape", "--gen", "annulus:0.5,0.3,64", "--out", "cli_annulus.json"});
  REQUIRE(r.code == 0);
  const Membrane m = load_membrane("cli_annulus.json");
  CHECK(m.outer() == shapes::annulus(0.5, 0.3, 64).outer());
  const Run again = invoke({"lambda-min", "--shape", "cli_annulus.json", "--p", "2"});
  CHECK(again.code == 0);
  const Json j = parse_json(again.out);
  CHECK(j["value"].get<double>() == doctest::Approx(lambda_1d(2, std::sqrt(1 - 4 * 0.09)).value).epsilon(2e-3));
  std::remove("cli_annulus.json");
}

TEST_CASE("degenerate lambda on the square is pi squared") {
  const Run r = invoke({"lambda", "--gen", "rect:1,1", "--anis", R"({"kind":"directional","c":1,"theta":1.5708})", "--p", "2"});
  REQUIRE(r.code == 0);
  const Json j = parse_json(r.out);
  CHECK(j["method"] == "closed_form");
  CHECK(j["value"].get<double>() == doctest::Approx(kPi * kPi).epsilon(1e-6));
}

TEST_CASE("width-profile CSV on the ten-fold star") {
  const Run r = invoke({"width-profile", "--gen", "star:10", "--n", "1024"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("theta,width,maximum\n", 0) == 0);
  CHECK(lines(r.out) == 1025);
  int maxima = 0;
  std::istringstream in(r.out);
  std::string row;
  std::getline(in, row);
  while (std::getline(in, row)) maxima += row.back() == '1';
  CHECK(maxima == 10);
}

TEST_CASE("outputs are byte identical across runs") {
  const std::vector<std::string> args = {"solve", "--gen", "cropped_disk:1,0.6,64", "--anis",
                                         R"({"kind":"weightedlq","q":3,"wx":1,"wy":0.5})", "--p", "2.5", "--h", "0.1"};
  const Run a = invoke(args), b = invoke(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const Run c = invoke({"blowup", "--anis", R"({"kind":"euclidean"})", "--p", "2", "--k-max", "8"});
  REQUIRE(c.code == 0);
  CHECK(c.out.rfind("k,area,bound\n", 0) == 0);
  CHECK(lines(c.out) == 9);
}

TEST_CASE("artifact goes to --out and the summary to stdout") {
  const Run r = invoke({"lambda-min", "--gen", "rect:1,2", "--p", "2", "--out", "cli_min.json"});
  REQUIRE(r.code == 0);
  CHECK(parse_json(slurp("cli_min.json"))["value"].get<double>() == doctest::Approx(kPi * kPi / 5));
  CHECK_FALSE(r.out.empty());
  std::remove("cli_min.json");
}

TEST_CASE("verify T5 through the installed binary") {
  const std::string cmd = std::string(ANISOSPEC_CLI_PATH) + " verify --suite T5 --out cli_t5.json --text cli_t5.txt > cli_t5.log 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 0);
  const Json j = parse_json(slurp("cli_t5.json"));
  CHECK(j["ok"] == true);
  CHECK(j["suite"] == "T5");
  CHECK(slurp("cli_t5.txt").find("\nOK") != std::string::npos);
  for (const char* f : {"cli_t5.json", "cli_t5.txt", "cli_t5.log"}) std::remove(f);
}
