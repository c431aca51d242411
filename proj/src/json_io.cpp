#include "anisospec/json_io.hpp"

#include "anisospec/errors.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace anisospec {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ParseError(msg); }

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& what) {
  if (!j.is_object()) fail(what + " must be a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : j.items()) {
    if (item.key() == "units") {
      if (item.value() != "rad") fail("angles are radians only; units '" + item.value().dump() + "' rejected");
      continue;
    }
    if (!ok.count(item.key())) fail("unknown field '" + item.key() + "' in " + what);
  }
  if (j.contains("schema") && j["schema"] != kSchema) fail("unsupported schema " + j["schema"].dump());
}

double number(const Json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) fail(what + " needs field '" + key + "'");
  const Json& v = j[key];
  if (!v.is_number()) fail("field '" + std::string(key) + "' of " + what + " must be a number");
  return v.get<double>();
}

Vec2 point(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) fail("points are [x, y] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

Ring ring(const Json& j) {
  if (!j.is_array()) fail("a ring is an array of points");
  Ring r;
  for (const auto& q : j) r.push_back(point(q));
  return r;
}

Json ring_json(const Ring& r) {
  Json a = Json::array();
  for (const auto& q : r) a.push_back({q.x(), q.y()});
  return a;
}

std::vector<Anisotropy> children(const Json& j, const std::string& what) {
  if (!j.contains("children") || !j["children"].is_array()) fail(what + " needs a 'children' array");
  std::vector<Anisotropy> out;
  for (const auto& c : j["children"]) out.push_back(anisotropy_from_json(c));
  return out;
}

Anisotropy child(const Json& j, const std::string& what) {
  if (!j.contains("child")) fail(what + " needs a 'child'");
  return anisotropy_from_json(j["child"]);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Json to_json(const Anisotropy& h) {
  using K = Anisotropy::Kind;
  const auto& n = h.node();
  Json j;
  auto list = [&]() {
    Json a = Json::array();
    for (const auto& c : n.children) a.push_back(to_json(c));
    return a;
  };
  switch (n.kind) {
    case K::Euclidean: j["kind"] = "euclidean"; break;
    case K::Zero: j["kind"] = "zero"; break;
    case K::Directional:
      j["kind"] = "directional";
      j["c"] = n.a;
      j["theta"] = n.b;
      break;
    case K::Quadratic:
      j["kind"] = "quadratic";
      j["a"] = {{n.m(0, 0), n.m(0, 1)}, {n.m(1, 0), n.m(1, 1)}};
      break;
    case K::WeightedLq:
      j["kind"] = "weightedlq";
      j["q"] = n.a;
      j["wx"] = n.b;
      j["wy"] = n.c;
      break;
    case K::Scaled:
      j["kind"] = "scaled";
      j["alpha"] = n.a;
      j["child"] = to_json(n.children.front());
      break;
    case K::Rotated:
      j["kind"] = "rotated";
      j["phi"] = n.a;
      j["child"] = to_json(n.children.front());
      break;
    case K::MaxOf:
      j["kind"] = "maxof";
      j["children"] = list();
      break;
    case K::LpSum:
      j["kind"] = "lpsum";
      j["p"] = n.a;
      j["children"] = list();
      break;
  }
  return j;
}

Anisotropy anisotropy_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) fail("anisotropy needs a string 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  const std::string what = "anisotropy '" + kind + "'";
  if (kind == "euclidean") {
    check_keys(j, {"schema", "kind"}, what);
    return Anisotropy::euclidean();
  }
  if (kind == "zero") {
    check_keys(j, {"schema", "kind"}, what);
    return Anisotropy::zero();
  }
  if (kind == "directional") {
    check_keys(j, {"schema", "kind", "c", "theta"}, what);
    return Anisotropy::directional(number(j, "c", what), number(j, "theta", what));
  }
  if (kind == "quadratic") {
    check_keys(j, {"schema", "kind", "a"}, what);
    if (!j.contains("a") || !j["a"].is_array() || j["a"].size() != 2) fail("quadratic needs a 2x2 array 'a'");
    const Vec2 r0 = point(j["a"][0]), r1 = point(j["a"][1]);
    Mat2 a;
    a << r0.x(), r0.y(), r1.x(), r1.y();
    return Anisotropy::quadratic(a);
  }
  if (kind == "weightedlq") {
    check_keys(j, {"schema", "kind", "q", "wx", "wy"}, what);
    return Anisotropy::weighted_lq(number(j, "q", what), number(j, "wx", what), number(j, "wy", what));
  }
  if (kind == "scaled") {
    check_keys(j, {"schema", "kind", "alpha", "child"}, what);
    return Anisotropy::scaled(number(j, "alpha", what), child(j, what));
  }
  if (kind == "rotated") {
    check_keys(j, {"schema", "kind", "phi", "child"}, what);
    return Anisotropy::rotated(number(j, "phi", what), child(j, what));
  }
  if (kind == "maxof") {
    check_keys(j, {"schema", "kind", "children"}, what);
    return Anisotropy::max_of(children(j, what));
  }
  if (kind == "lpsum") {
    check_keys(j, {"schema", "kind", "p", "children"}, what);
    return Anisotropy::lp_sum(number(j, "p", what), children(j, what));
  }
  fail("unknown anisotropy kind '" + kind + "'");
}

Json to_json(const Membrane& m, const ShapeSpec* generator) {
  Json j;
  j["schema"] = kSchema;
  j["type"] = "membrane";
  j["outer"] = ring_json(m.outer());
  Json holes = Json::array();
  for (const auto& h : m.holes()) holes.push_back(ring_json(h));
  j["holes"] = holes;
  if (generator) j["generator"] = {{"name", generator->name}, {"params", generator->params}};
  return j;
}

Membrane membrane_from_json(const Json& j) {
  check_keys(j, {"schema", "type", "outer", "holes", "generator"}, "membrane");
  if (!j.contains("schema")) fail("membrane document needs \"schema\":\"anisospec/1\"");
  if (j.contains("type") && j["type"] != "membrane") fail("document type must be 'membrane'");
  if (!j.contains("outer")) fail("membrane needs an 'outer' ring");
  std::vector<Ring> holes;
  if (j.contains("holes")) {
    if (!j["holes"].is_array()) fail("'holes' must be an array of rings");
    for (const auto& h : j["holes"]) holes.push_back(ring(h));
  }
  return Membrane(ring(j["outer"]), holes);
}

Json to_json(const SpectralResult& r) {
  Json j;
  j["value"] = r.value;
  j["method"] = r.method;
  j["p"] = r.p;
  j["error_estimate"] = r.error_estimate;
  j["converged"] = r.converged;
  j["provenance"] = r.provenance;
  return j;
}

Json to_json(const VerificationReport& r) {
  Json j;
  j["schema"] = kSchema;
  j["suite"] = r.suite;
  Json cases = Json::array();
  for (const auto& c : r.cases) {
    Json cj;
    cj["name"] = c.name;
    Json in = Json::object();
    for (const auto& [k, v] : c.inputs) in[k] = v;
    cj["inputs"] = in;
    cj["kind"] = to_string(c.kind);
    cj["expected"] = c.expected;
    cj["observed"] = c.observed;
    cj["tolerance"] = c.tolerance;
    cj["pass"] = c.pass;
    if (!c.error.empty()) cj["error"] = c.error;
    cases.push_back(cj);
  }
  j["cases"] = cases;
  j["summary"] = {{"total", r.cases.size()}, {"passed", r.passed}, {"failed", r.failed}, {"errored", r.errored}};
  j["ok"] = r.ok();
  j["runtime_s"] = r.runtime_s;
  return j;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) { return parse_json(slurp(path)); }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Anisotropy parse_anisotropy(const std::string& text_or_path) {
  const auto first = text_or_path.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text_or_path[first] == '{') return anisotropy_from_json(parse_json(text_or_path));
  return anisotropy_from_json(read_json_file(text_or_path));
}

Membrane load_membrane(const std::string& path) { return membrane_from_json(read_json_file(path)); }

}  // namespace anisospec
