#include "anisospec/verify.hpp"

#include "anisospec/errors.hpp"
#include "anisospec/json_io.hpp"
#include "anisospec/numerics.hpp"
#include "anisospec/shapes.hpp"
#include "verify_detail.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

namespace anisospec {

// ---------------------------------------------------------------------------
// Plumbing

Membrane ShapeSpec::build() const { return shapes::by_name(name, params); }

std::string ShapeSpec::label() const {
  std::ostringstream os;
  os << name << "(";
  for (std::size_t i = 0; i < params.size(); ++i) os << (i ? "," : "") << params[i];
  os << ")";
  return os.str();
}

const char* to_string(CaseKind k) {
  switch (k) {
    case CaseKind::Equal: return "equal";
    case CaseKind::AtMost: return "at_most";
    case CaseKind::AtLeast: return "at_least";
    case CaseKind::StrictBelow: return "strict_below";
  }
  return "?";
}

void judge(CaseResult& c) {
  if (!c.error.empty() || !std::isfinite(c.observed) || !std::isfinite(c.expected)) {
    c.pass = false;
    return;
  }
  switch (c.kind) {
    case CaseKind::Equal: c.pass = std::abs(c.observed - c.expected) <= c.tolerance; break;
    case CaseKind::AtMost: c.pass = c.observed <= c.expected + c.tolerance; break;
    case CaseKind::AtLeast: c.pass = c.observed >= c.expected - c.tolerance; break;
    case CaseKind::StrictBelow: c.pass = c.observed < c.expected - c.tolerance; break;
  }
}

void summarize(VerificationReport& r) {
  r.passed = r.failed = r.errored = 0;
  for (const auto& c : r.cases) {
    if (!c.error.empty())
      ++r.errored;
    else if (c.pass)
      ++r.passed;
    else
      ++r.failed;
  }
}

std::vector<CaseResult> run_cases(std::size_t n, const std::function<CaseResult(std::size_t)>& job, int workers) {
  std::vector<CaseResult> out(n);
  auto guarded = [&](std::size_t i) {
    try {
      out[i] = job(i);
    } catch (const std::exception& e) {
      out[i].name = "case " + std::to_string(i);
      out[i].error = e.what();
      out[i].pass = false;
    }
  };
  int w = workers > 0 ? workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  w = static_cast<int>(std::min<std::size_t>(w, n));
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) guarded(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < w; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) guarded(i);
    });
  for (auto& th : pool) th.join();
  return out;
}

namespace detail {

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

SolverOptions solver_options(const VerifyConfig& cfg) {
  SolverOptions o;
  o.h = cfg.h;
  o.tol = cfg.solver_tol;
  o.restarts = cfg.restarts;
  o.seed = cfg.seed;
  return o;
}

double fem_tolerance(double reference, const SpectralResult& fem, const VerifyConfig& cfg) {
  const double rel = std::abs(fem.p - 2.0) < 1e-12 ? cfg.tol_fem : cfg.tol_fem_other;
  return std::max(rel * std::abs(reference), cfg.fem_error_factor * fem.error_estimate);
}

std::string anis_json(const Anisotropy& h) { return to_json(h).dump(); }

std::string gen_arg(const ShapeSpec& s) {
  std::string out = s.name;
  for (std::size_t i = 0; i < s.params.size(); ++i) out += (i ? "," : ":") + num(s.params[i]);
  return out;
}

CaseResult guarded(CaseResult c, const std::function<void(CaseResult&)>& fill) {
  try {
    fill(c);
  } catch (const std::exception& e) {
    c.error = e.what();
  }
  judge(c);
  return c;
}

Anisotropy unit_norm(const Anisotropy& h) {
  const double n = sup_norm(h);
  if (!(n > kClassifyTol)) throw ZeroAnisotropy("cannot normalize the zero anisotropy");
  if (std::abs(n - 1.0) <= 1e-12) return h;
  return Anisotropy::scaled(1.0 / n, h);
}

VerificationReport finish(std::string suite, std::vector<CaseResult> cases,
                          std::chrono::steady_clock::time_point start) {
  VerificationReport r;
  r.suite = std::move(suite);
  r.cases = std::move(cases);
  summarize(r);
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace detail

using namespace detail;

// ---------------------------------------------------------------------------
// Config

VerifyConfig parse_config(std::istream& is) {
  VerifyConfig c;
  std::map<std::string, double*> reals{
      {"tol_geometric", &c.tol_geometric},     {"tol_curved", &c.tol_curved},
      {"tol_fem", &c.tol_fem},                 {"tol_fem_other", &c.tol_fem_other},
      {"fem_error_factor", &c.fem_error_factor}, {"tol_fem_scaling", &c.tol_fem_scaling},
      {"tol_fem_rotation", &c.tol_fem_rotation}, {"tol_rotation", &c.tol_rotation},
      {"tol_scaling", &c.tol_scaling},         {"tol_exponent", &c.tol_exponent},
      {"strict_factor", &c.strict_factor},     {"h", &c.h},
      {"solver_tol", &c.solver_tol}};
  std::map<std::string, int*> ints{
      {"restarts", &c.restarts}, {"n_theta", &c.n_theta}, {"k_max", &c.k_max}, {"workers", &c.workers}};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    if (trim(line).empty()) continue;
    const std::string where = "config line " + std::to_string(lineno);
    if (eq == std::string::npos) throw ParseError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    std::size_t used = 0;
    try {
      if (auto it = reals.find(key); it != reals.end()) {
        *it->second = std::stod(val, &used);
      } else if (auto jt = ints.find(key); jt != ints.end()) {
        *jt->second = std::stoi(val, &used);
      } else if (key == "seed") {
        c.seed = std::stoull(val, &used);
      } else {
        throw ParseError(where + ": unknown key '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw ParseError(where + ": bad value '" + val + "' for '" + key + "'");
    }
    if (used != val.size()) throw ParseError(where + ": trailing characters in '" + val + "'");
  }
  if (!(c.h > 0) || c.restarts < 1 || c.n_theta < 8 || c.k_max < 8)
    throw ParseError("config: h > 0, restarts >= 1, n_theta >= 8 and k_max >= 8 are required");
  return c;
}

VerifyConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config '" + path + "'");
  return parse_config(in);
}

// ---------------------------------------------------------------------------
// T2: closed form against FEM for degenerate anisotropies

VerificationReport suite_theorem_T2(const std::vector<T2Case>& cases, const VerifyConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (cases.empty()) throw InvalidParams("suite_theorem_T2 needs at least one case");
  auto results = run_cases(
      cases.size(),
      [&](std::size_t i) {
        const T2Case& tc = cases[i];
        const Anisotropy h = Anisotropy::directional(1.0, tc.theta);
        CaseResult c;
        c.name = "T2 " + tc.shape.label() + " theta=" + num(tc.theta) + " p=" + num(tc.p);
        c.kind = CaseKind::Equal;
        c.inputs = {{"shape", tc.shape.label()}, {"anisotropy", anis_json(h)}, {"p", num(tc.p)},
                    {"h", num(cfg.h)},           {"seed", std::to_string(cfg.seed)},
                    {"replay", "solve --gen " + gen_arg(tc.shape) + " --anis '" + anis_json(h) + "' --p " +
                                   num(tc.p) + " --h " + num(cfg.h)}};
        return guarded(c, [&](CaseResult& r) {
          const Membrane m = tc.shape.build();
          r.expected = lambda_degenerate(m, h, tc.p).value;
          const SpectralResult fem = solve_membrane(m, h, tc.p, solver_options(cfg)).result;
          r.observed = fem.value;
          r.tolerance = fem_tolerance(r.expected, fem, cfg);
        });
      },
      cfg.workers);
  return finish("T2", std::move(results), start);
}

VerificationReport suite_theorem_T2(const std::vector<ShapeSpec>& shapes, const std::vector<double>& thetas,
                                    const std::vector<double>& p_list, const VerifyConfig& cfg) {
  std::vector<T2Case> cases;
  for (const auto& s : shapes)
    for (double t : thetas)
      for (double p : p_list) cases.push_back({s, t, p});
  return suite_theorem_T2(cases, cfg);
}

// ---------------------------------------------------------------------------
// T3: the Euclidean level dominates every unit-norm anisotropy

VerificationReport suite_theorem_T3(const std::vector<ShapeSpec>& shapes, const std::vector<Anisotropy>& anisotropies,
                                    const std::vector<double>& p_list, const VerifyConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (shapes.empty() || anisotropies.empty() || p_list.empty())
    throw InvalidParams("suite_theorem_T3 needs shapes, anisotropies and exponents");
  // The strict-gap witness: a polyhedral norm made of two directionals.
  const Anisotropy polyhedral =
      unit_norm(Anisotropy::max_of({Anisotropy::directional(1.0, 0.2), Anisotropy::directional(1.0, 1.3)}));

  struct Job {
    std::size_t shape;
    double p;
    Anisotropy h;
    bool strict;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < shapes.size(); ++s)
    for (double p : p_list) {
      for (const auto& h : anisotropies) jobs.push_back({s, p, h, false});
      jobs.push_back({s, p, polyhedral, true});
    }

  // Euclidean references first; every comparison in a (shape, p) group shares one.
  std::map<std::pair<std::size_t, double>, SpectralResult> euclid;
  std::vector<std::pair<std::size_t, double>> keys;
  for (std::size_t s = 0; s < shapes.size(); ++s)
    for (double p : p_list) keys.emplace_back(s, p);
  std::vector<SpectralResult> refs(keys.size());
  std::vector<std::string> ref_err(keys.size());
  run_cases(
      keys.size(),
      [&](std::size_t i) {
        try {
          refs[i] = lambda_max(shapes[keys[i].first].build(), keys[i].second, solver_options(cfg));
        } catch (const std::exception& e) {
          ref_err[i] = e.what();
        }
        return CaseResult{};
      },
      cfg.workers);
  for (std::size_t i = 0; i < keys.size(); ++i) euclid[keys[i]] = refs[i];
  std::map<std::pair<std::size_t, double>, std::string> euclid_err;
  for (std::size_t i = 0; i < keys.size(); ++i) euclid_err[keys[i]] = ref_err[i];

  auto results = run_cases(
      jobs.size(),
      [&](std::size_t i) {
        const Job& jb = jobs[i];
        const ShapeSpec& spec = shapes[jb.shape];
        CaseResult c;
        c.kind = jb.strict ? CaseKind::StrictBelow : CaseKind::AtMost;
        c.name = std::string(jb.strict ? "T3 strict gap " : "T3 ") + spec.label() + " p=" + num(jb.p) + " " +
                 jb.h.describe();
        c.inputs = {{"shape", spec.label()}, {"anisotropy", anis_json(jb.h)}, {"p", num(jb.p)},
                    {"h", num(cfg.h)},       {"seed", std::to_string(cfg.seed)},
                    {"replay", "solve --gen " + gen_arg(spec) + " --anis '" + anis_json(jb.h) + "' --p " +
                                   num(jb.p) + " --h " + num(cfg.h)}};
        return guarded(c, [&](CaseResult& r) {
          const auto key = std::make_pair(jb.shape, jb.p);
          if (!euclid_err[key].empty()) throw NoConvergence("Euclidean reference failed: " + euclid_err[key]);
          const SpectralResult& e = euclid.at(key);
          const Anisotropy h = unit_norm(jb.h);
          const SpectralResult fem = solve_membrane(spec.build(), h, jb.p, solver_options(cfg)).result;
          r.expected = e.value;
          r.observed = fem.value;
          r.tolerance = fem_tolerance(e.value, e, cfg) + fem_tolerance(fem.value, fem, cfg);
        });
      },
      cfg.workers);
  return finish("T3", std::move(results), start);
}

// ---------------------------------------------------------------------------
// T4: multiplicity table

VerificationReport suite_theorem_T4_multiplicity(const std::vector<MultiplicityCase>& cases, const VerifyConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (cases.empty()) throw InvalidParams("suite_theorem_T4_multiplicity needs at least one case");
  struct Job {
    std::size_t idx;
    int what;  // 0 attainment, 1 extremizers, 2 design
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (cases[i].attainment >= 0) jobs.push_back({i, 0});
    if (cases[i].extremizers >= 0) jobs.push_back({i, 1});
    if (!cases[i].design.empty()) jobs.push_back({i, 2});
  }
  auto results = run_cases(
      jobs.size(),
      [&](std::size_t k) {
        const MultiplicityCase& mc = cases[jobs[k].idx];
        const int what = jobs[k].what;
        static const char* names[] = {"attainment multiplicity", "extremizer count", "optimal design"};
        CaseResult c;
        c.name = std::string("T4 ") + names[what] + " " + mc.shape.label();
        c.kind = CaseKind::Equal;
        c.inputs = {{"shape", mc.shape.label()}, {"n_theta", std::to_string(cfg.n_theta)}};
        if (what == 2) c.inputs.emplace_back("expected", mc.design);
        return guarded(c, [&](CaseResult& r) {
          const Membrane m = mc.shape.build();
          if (what == 0) {
            r.expected = mc.attainment;
            r.observed = attainment_multiplicity(m, cfg.n_theta);
          } else if (what == 1) {
            r.expected = mc.extremizers;
            r.observed = static_cast<double>(lambda_min(m, 2.0, cfg.n_theta).extremizers.anisotropies.size());
          } else {
            const std::string got = to_string(has_optimal_design(m, width_profile(m, cfg.n_theta)));
            r.inputs.emplace_back("observed", got);
            r.expected = 1.0;
            r.observed = got == mc.design ? 1.0 : 0.0;
          }
        });
      },
      cfg.workers);
  return finish("T4_multiplicity", std::move(results), start);
}

// ---------------------------------------------------------------------------
// T5: diameter and area bounds

namespace {

bool curved(const ShapeSpec& s) {
  return s.name == "disk" || s.name == "annulus" || s.name == "cropped_disk" || s.name == "star" ||
         s.name == "s_chain";
}

}  // namespace

VerificationReport suite_theorem_T5(const std::vector<ShapeSpec>& shapes, const std::vector<double>& p_list,
                                    const VerifyConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (shapes.empty() || p_list.empty()) throw InvalidParams("suite_theorem_T5 needs shapes and exponents");

  // Geometry once per shape; the per-p checks are closed forms on top of it.
  struct Geo {
    Membrane m;
    WidthProfile profile;
    TriState design = TriState::Unresolved;
    double diam = 0.0;
    bool convex = false;
    std::string error;
  };
  std::vector<Geo> geo(shapes.size());
  run_cases(
      shapes.size(),
      [&](std::size_t i) {
        try {
          geo[i].m = shapes[i].build();
          geo[i].profile = width_profile(geo[i].m, cfg.n_theta);
          geo[i].design = has_optimal_design(geo[i].m, geo[i].profile);
          geo[i].diam = diameter(geo[i].m);
          geo[i].convex = is_convex(geo[i].m);
        } catch (const std::exception& e) {
          geo[i].error = e.what();
        }
        return CaseResult{};
      },
      1);

  std::vector<CaseResult> cases;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const ShapeSpec& s = shapes[i];
    const Geo& g = geo[i];
    const double eq_tol = curved(s) ? cfg.tol_curved : cfg.tol_geometric;
    auto base = [&](const std::string& what, double p) {
      CaseResult c;
      c.name = "T5 " + what + " " + s.label() + (p > 0 ? " p=" + num(p) : "");
      c.inputs = {{"shape", s.label()}, {"n_theta", std::to_string(cfg.n_theta)}, {"eq_tol", num(eq_tol)}};
      if (p > 0) c.inputs.emplace_back("p", num(p));
      if (!g.error.empty()) c.error = g.error;
      return c;
    };
    auto add = [&](CaseResult c, const std::function<void(CaseResult&)>& fill) {
      if (!c.error.empty()) {
        judge(c);
        cases.push_back(c);
      } else {
        cases.push_back(guarded(c, fill));
      }
    };

    // L_θ = diam for some θ: attained supremum equal to the diameter.
    const bool diam_chord = g.error.empty() && g.design == TriState::Attained &&
                            std::abs(g.profile.sup_width - g.diam) <= eq_tol * g.diam;

    add(base("isodiametric", 0), [&](CaseResult& r) {
      const IsodiametricCheck ic = isodiametric_check(g.m);
      r.kind = CaseKind::AtMost;
      r.expected = ic.bound;
      r.observed = ic.area;
      r.tolerance = cfg.tol_geometric * ic.bound;
    });

    for (double p : p_list) {
      add(base("ID-min", p), [&](CaseResult& r) {
        const InequalityCheck ic = id_min_bound(g.m, g.profile, p, eq_tol);
        r.kind = CaseKind::AtLeast;
        r.expected = ic.rhs;
        r.observed = ic.lhs;
        r.tolerance = eq_tol * ic.rhs;
      });
      add(base("ID-min equality iff diameter chord", p), [&](CaseResult& r) {
        const InequalityCheck ic = id_min_bound(g.m, g.profile, p, eq_tol);
        r.kind = CaseKind::Equal;
        r.inputs.emplace_back("diameter_chord", diam_chord ? "true" : "false");
        r.expected = diam_chord ? 1.0 : 0.0;
        r.observed = ic.equality ? 1.0 : 0.0;
      });
      if (!g.convex) continue;
      add(base("IP-min", p), [&](CaseResult& r) {
        const InequalityCheck ic = ip_min_bound(g.m, g.profile, p, eq_tol);
        r.kind = CaseKind::AtMost;
        r.expected = ic.rhs;
        r.observed = ic.lhs;
        r.tolerance = eq_tol * ic.rhs;
      });
      add(base("IP-min equality only for disks", p), [&](CaseResult& r) {
        const InequalityCheck ic = ip_min_bound(g.m, g.profile, p, eq_tol);
        r.kind = CaseKind::Equal;
        r.expected = s.name == "disk" ? 1.0 : 0.0;
        r.observed = ic.equality ? 1.0 : 0.0;
      });
      // λ_1d(diam) ≤ λ_min ≤ λ_1d(2√(|Ω|/π)), so the outer terms are ordered,
      // which is the isodiametric inequality again.
      add(base("ID-min and IP-min combined", p), [&](CaseResult& r) {
        const double lo = lambda_1d(p, diameter(g.m)).value;
        const double hi = lambda_1d(p, 2.0 * std::sqrt(area(g.m) / kPi)).value;
        r.kind = CaseKind::AtMost;
        r.expected = hi;
        r.observed = lo;
        r.tolerance = cfg.tol_geometric * hi;
      });
    }
  }
  return finish("T5", std::move(cases), start);
}

// ---------------------------------------------------------------------------
// Text report

void write_text_report(std::ostream& os, const VerificationReport& r) {
  os << "suite " << r.suite << ": " << r.passed << " passed, " << r.failed << " failed, " << r.errored
     << " errored in " << std::fixed << std::setprecision(1) << r.runtime_s << " s\n";
  os << std::defaultfloat;
  for (const auto& c : r.cases) {
    os << (c.error.empty() ? (c.pass ? "  PASS " : "  FAIL ") : "  ERROR ") << c.name;
    if (c.error.empty()) {
      os << std::setprecision(10) << "  expected " << c.expected << " " << to_string(c.kind) << ", observed "
         << c.observed << ", tol " << std::setprecision(3) << c.tolerance;
    } else {
      os << "  (" << c.error << ")";
    }
    os << "\n";
  }
  os << (r.ok() ? "OK" : "NOT OK") << "\n";
}

}  // namespace anisospec
