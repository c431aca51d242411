#include "anisospec/verify.hpp"

#include "anisospec/errors.hpp"
#include "anisospec/numerics.hpp"
#include "anisospec/shapes.hpp"
#include "anisospec/spectra.hpp"
#include "verify_detail.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace anisospec {

using namespace detail;

// ---------------------------------------------------------------------------
// Blow-up of the unit-area lower bounds

VerificationReport suite_blowup(const std::vector<Anisotropy>& h_list, const std::vector<double>& p_list,
                                const VerifyConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (cfg.k_max < 8) throw InvalidParams("suite_blowup needs k_max >= 8");
  std::vector<CaseResult> cases;
  for (const auto& h : h_list)
    for (double p : p_list) {
      const std::string tag = h.describe() + " p=" + num(p);
      auto base = [&](const std::string& what) {
        CaseResult c;
        c.name = "blowup " + what + " " + tag;
        c.inputs = {{"anisotropy", anis_json(h)}, {"p", num(p)}, {"k_max", std::to_string(cfg.k_max)}};
        return c;
      };
      if (classify(h).is_zero()) {
        cases.push_back(guarded(base("rejects zero anisotropy"), [&](CaseResult& r) {
          r.kind = CaseKind::Equal;
          r.expected = 1.0;
          try {
            blowup_sequence(h, p, cfg.k_max);
            r.observed = 0.0;
          } catch (const ZeroAnisotropy&) {
            r.observed = 1.0;
          }
        }));
        continue;
      }
      std::vector<BlowupEntry> seq;
      std::string err;
      try {
        seq = blowup_sequence(h, p, cfg.k_max);
      } catch (const std::exception& e) {
        err = e.what();
      }
      auto add = [&](const std::string& what, const std::function<void(CaseResult&)>& fill) {
        CaseResult c = base(what);
        c.error = err;
        cases.push_back(err.empty() ? guarded(c, fill) : (judge(c), c));
      };
      add("strictly increasing", [&](CaseResult& r) {
        bool inc = true;
        for (std::size_t k = 1; k < seq.size(); ++k) inc = inc && seq[k].bound.value > seq[k - 1].bound.value;
        r.kind = CaseKind::Equal;
        r.expected = 1.0;
        r.observed = inc ? 1.0 : 0.0;
      });
      add("unit area", [&](CaseResult& r) {
        double worst = 0.0;
        for (const auto& e : seq) worst = std::max(worst, std::abs(e.area - 1.0));
        r.kind = CaseKind::Equal;
        r.expected = 0.0;
        r.observed = worst;
        r.tolerance = cfg.tol_geometric;
      });
      add("growth ratio", [&](CaseResult& r) {
        r.kind = CaseKind::AtLeast;
        r.expected = 1e3;
        r.observed = seq.back().bound.value / seq.front().bound.value;
      });
      add("fitted exponent", [&](CaseResult& r) {
        // Least squares slope of log bound against log k.
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(seq.size());
        for (const auto& e : seq) {
          const double x = std::log(e.k), y = std::log(e.bound.value);
          sx += x;
          sy += y;
          sxx += x * x;
          sxy += x * y;
        }
        r.kind = CaseKind::Equal;
        r.expected = p;
        r.observed = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        r.tolerance = cfg.tol_exponent * p;
      });
    }
  return finish("blowup", std::move(cases), start);
}

// ---------------------------------------------------------------------------
// Anisotropic Faber-Krahn against the Wulff shape

namespace {

Membrane unit_area(const Membrane& m) { return m.scaled(1.0 / std::sqrt(area(m))); }

Membrane wulff_shape(const Anisotropy& h) {
  const ConvexBodyPoly w = polar_body(unit_ball_poly(h, 512));
  return unit_area(Membrane(w.vertices));
}

}  // namespace

VerificationReport suite_afk(const std::vector<Anisotropy>& h_list, const std::vector<double>& p_list,
                             const std::vector<ShapeSpec>& shapes, const VerifyConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (h_list.empty() || p_list.empty()) throw InvalidParams("suite_afk needs anisotropies and exponents");

  struct Ref {
    SpectralResult value;
    std::string error;
  };
  std::vector<std::pair<std::size_t, double>> keys;
  for (std::size_t i = 0; i < h_list.size(); ++i)
    for (double p : p_list) keys.emplace_back(i, p);
  std::vector<Ref> refs(keys.size());
  run_cases(
      keys.size(),
      [&](std::size_t k) {
        const Anisotropy& h = h_list[keys[k].first];
        try {
          if (!h.is_smooth_positive())
            throw InvalidAnisotropy(h.describe() + " is outside the smooth positive sub-grammar");
          refs[k].value = solve_membrane(wulff_shape(h), h, keys[k].second, solver_options(cfg)).result;
        } catch (const std::exception& e) {
          refs[k].error = e.what();
        }
        return CaseResult{};
      },
      cfg.workers);

  struct Job {
    std::size_t ref;
    int shape;  // index into shapes; -1 is the independent ellipse for quadratics
  };
  std::vector<Job> jobs;
  for (std::size_t k = 0; k < keys.size(); ++k) {
    for (std::size_t s = 0; s < shapes.size(); ++s) jobs.push_back({k, static_cast<int>(s)});
    if (h_list[keys[k].first].quadratic_form() && h_list[keys[k].first].is_smooth_positive())
      jobs.push_back({k, -1});
  }

  auto results = run_cases(
      jobs.size(),
      [&](std::size_t i) {
        const Job& jb = jobs[i];
        const Anisotropy& h = h_list[keys[jb.ref].first];
        const double p = keys[jb.ref].second;
        CaseResult c;
        const std::string shape = jb.shape >= 0 ? shapes[jb.shape].label() : "ellipse {x: x^T A^-1 x <= 1}";
        c.name = "AFK " + shape + " " + h.describe() + " p=" + num(p);
        c.kind = jb.shape >= 0 ? CaseKind::AtLeast : CaseKind::Equal;
        c.inputs = {{"shape", shape},   {"normalization", "unit area"}, {"anisotropy", anis_json(h)},
                    {"p", num(p)},      {"h", num(cfg.h)},              {"seed", std::to_string(cfg.seed)}};
        return guarded(c, [&](CaseResult& r) {
          const Ref& ref = refs[jb.ref];
          if (!ref.error.empty()) throw InvalidAnisotropy(ref.error);
          Membrane m;
          if (jb.shape >= 0) {
            m = unit_area(shapes[jb.shape].build());
          } else {
            // The polar ball of ξᵀAξ ≤ 1 is ξᵀA⁻¹ξ ≤ 1, built here from the
            // eigen-decomposition rather than through polar_body.
            Eigen::SelfAdjointEigenSolver<Mat2> es(*h.quadratic_form());
            Ring ring;
            const int n = 512;
            for (int k = 0; k < n; ++k) {
              const double t = 2.0 * kPi * k / n;
              const Vec2 u(std::sqrt(es.eigenvalues()(0)) * std::cos(t), std::sqrt(es.eigenvalues()(1)) * std::sin(t));
              ring.push_back(es.eigenvectors() * u);
            }
            m = unit_area(Membrane(ring));
          }
          const SpectralResult fem = solve_membrane(m, h, p, solver_options(cfg)).result;
          r.expected = ref.value.value;
          r.observed = fem.value;
          r.tolerance = fem_tolerance(ref.value.value, ref.value, cfg) + fem_tolerance(fem.value, fem, cfg);
        });
      },
      cfg.workers);
  return finish("afk", std::move(results), start);
}

// ---------------------------------------------------------------------------
// Properties: scaling, domain monotonicity, anisotropy monotonicity, rotation

VerificationReport suite_properties(const VerifyConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::function<CaseResult()>> jobs;
  auto rel = [](double tol, double ref) { return tol * std::abs(ref); };

  // Scaling, closed form.
  for (double p : {1.5, 2.0, 3.0})
    for (double alpha : {0.5, 2.0, 3.7}) {
      jobs.push_back([=, &cfg] {
        const ShapeSpec s{"rect", {1, 2}};
        const Anisotropy h = Anisotropy::directional(1.0, 0.4);
        CaseResult c;
        c.name = "P1 scaling closed form alpha=" + num(alpha) + " p=" + num(p);
        c.inputs = {{"shape", s.label()}, {"anisotropy", anis_json(h)}, {"alpha", num(alpha)}, {"p", num(p)}};
        return guarded(c, [&](CaseResult& r) {
          const Membrane m = s.build();
          r.expected = std::pow(alpha, p) * lambda_degenerate(m, h, p).value;
          r.observed = lambda_degenerate(m, Anisotropy::scaled(alpha, h), p).value;
          r.tolerance = rel(cfg.tol_scaling, r.expected);
        });
      });
    }
  // Scaling, FEM.
  for (double p : {2.0, 3.0})
    jobs.push_back([=, &cfg] {
      const ShapeSpec s{"rect", {1, 1}};
      const Anisotropy h = Anisotropy::euclidean();
      const double alpha = 2.0;
      CaseResult c;
      c.name = "P1 scaling FEM alpha=2 p=" + num(p);
      c.inputs = {{"shape", s.label()}, {"anisotropy", anis_json(h)}, {"alpha", num(alpha)},
                  {"p", num(p)},        {"h", num(cfg.h)}};
      return guarded(c, [&](CaseResult& r) {
        const Membrane m = s.build();
        r.expected = std::pow(alpha, p) * solve_membrane(m, h, p, solver_options(cfg)).result.value;
        r.observed = solve_membrane(m, Anisotropy::scaled(alpha, h), p, solver_options(cfg)).result.value;
        r.tolerance = rel(cfg.tol_fem_scaling, r.expected);
      });
    });

  // Domain monotonicity: inner ⊂ outer gives the larger level.
  struct Pair {
    std::string inner_label, outer_label;
    std::function<Membrane()> inner, outer;
  };
  const std::vector<Pair> pairs{
      {"rect(1,1)", "rect(2,1)", [] { return shapes::rect(1, 1); }, [] { return shapes::rect(2, 1); }},
      {"rect(1,1)", "rect(2,2)", [] { return shapes::rect(1, 1); }, [] { return shapes::rect(2, 2); }},
      {"disk(0.5,256)+(0.5,0.5)", "rect(1,1)", [] { return shapes::disk(0.5, 256).translated({0.5, 0.5}); },
       [] { return shapes::rect(1, 1); }},
      {"annulus(0.5,0.25,1024)", "disk(0.5,1024)", [] { return shapes::annulus(0.5, 0.25, 1024); },
       [] { return shapes::disk(0.5, 1024); }},
      {"cropped_disk(1,0.6,256)", "disk(1,256)", [] { return shapes::cropped_disk(1, 0.6, 256); },
       [] { return shapes::disk(1, 256); }},
      {"star(10)", "disk(1.05,256)", [] { return shapes::star(10); }, [] { return shapes::disk(1.05, 256); }}};
  for (const auto& pr : pairs)
    for (int k = 0; k < 8; ++k) {
      const double theta = kPi * k / 8 + 0.05;
      jobs.push_back([=, &cfg] {
        const Anisotropy h = Anisotropy::directional(1.0, theta);
        CaseResult c;
        c.name = "P2 domain monotonicity " + pr.inner_label + " in " + pr.outer_label + " theta=" + num(theta);
        c.kind = CaseKind::AtLeast;
        c.inputs = {{"inner", pr.inner_label}, {"outer", pr.outer_label}, {"anisotropy", anis_json(h)}, {"p", "2"}};
        return guarded(c, [&](CaseResult& r) {
          const Membrane in = pr.inner(), out = pr.outer();
          // Nesting is part of the premise; check it on the vertices.
          for (const Ring* ring : in.rings())
            for (const Vec2& q : *ring) {
              const Vec2 c0 = in.outer().front();
              const Vec2 nudged = q + 1e-9 * (c0 - q);
              if (!out.contains(q) && !out.contains(nudged)) {
                bool on_boundary = false;
                for (const Ring* o : out.rings())
                  for (std::size_t i = 0; i < o->size() && !on_boundary; ++i) {
                    const Vec2 a = (*o)[i], b = (*o)[(i + 1) % o->size()];
                    const double cr = (b - a).x() * (q - a).y() - (b - a).y() * (q - a).x();
                    const double t = (q - a).dot(b - a) / (b - a).squaredNorm();
                    on_boundary = std::abs(cr) <= 1e-12 * (b - a).norm() && t >= -1e-12 && t <= 1 + 1e-12;
                  }
                if (!on_boundary) throw InvalidParams("inner membrane is not contained in the outer one");
              }
            }
          r.expected = lambda_degenerate(out, h, 2.0).value;
          r.observed = lambda_degenerate(in, h, 2.0).value;
          r.tolerance = rel(cfg.tol_geometric, r.expected);
        });
      });
    }

  // Anisotropy monotonicity: the dominating degenerate minorant G ≤ H gives a
  // closed form below the FEM level of H.
  Mat2 q1, q2;
  q1 << 1, 0, 0, 0.25;
  q2 << 1, 0.3, 0.3, 0.5;
  const std::vector<Anisotropy> hs{
      Anisotropy::euclidean(),
      Anisotropy::quadratic(q1),
      Anisotropy::quadratic(q2),
      Anisotropy::weighted_lq(3, 1, 1),
      Anisotropy::weighted_lq(1.5, 1, 0.5),
      Anisotropy::max_of({Anisotropy::directional(1, 0.2), Anisotropy::directional(1, 1.3)}),
      Anisotropy::lp_sum(2, {Anisotropy::directional(1, 0), Anisotropy::directional(0.5, kPi / 2)}),
      Anisotropy::rotated(0.4, Anisotropy::weighted_lq(4, 1, 0.3))};
  for (const auto& h : hs)
    jobs.push_back([=, &cfg] {
      const ShapeSpec s{"rect", {1, 1}};
      CaseResult c;
      c.name = "P3 anisotropy monotonicity " + h.describe();
      c.kind = CaseKind::AtMost;
      c.inputs = {{"shape", s.label()}, {"anisotropy", anis_json(h)}, {"p", "2"}, {"h", num(cfg.h)}};
      return guarded(c, [&](CaseResult& r) {
        const Membrane m = s.build();
        const Anisotropy g = dominating_degenerate(h);
        r.inputs.emplace_back("minorant", anis_json(g));
        const SpectralResult fem = solve_membrane(m, h, 2.0, solver_options(cfg)).result;
        r.expected = fem.value;
        r.observed = lambda_degenerate(m, g, 2.0).value;
        r.tolerance = fem_tolerance(fem.value, fem, cfg);
      });
    });

  // Rotation: turning the membrane by φ pairs with rotate(H, -φ), because
  // rotate(H, φ) evaluates H after turning its argument by φ.
  const std::vector<ShapeSpec> rot_shapes{{"rect", {1, 2}}, {"annulus", {0.5, 0.3, 1024}}, {"star", {10}},
                                          {"s_counterexample", {}}};
  for (const auto& s : rot_shapes)
    for (double phi : {0.3, 1.1, 2.5})
      jobs.push_back([=, &cfg] {
        const Anisotropy h = Anisotropy::directional(1.0, 0.7);
        CaseResult c;
        c.name = "P4 rotation closed form " + s.label() + " phi=" + num(phi);
        c.inputs = {{"shape", s.label()}, {"anisotropy", anis_json(h)}, {"phi", num(phi)}, {"p", "2"}};
        return guarded(c, [&](CaseResult& r) {
          const Membrane m = s.build();
          r.expected = lambda_degenerate(m, h, 2.0).value;
          r.observed = lambda_degenerate(m.rotated(phi), rotate(h, -phi), 2.0).value;
          r.tolerance = rel(cfg.tol_rotation, r.expected);
        });
      });
  for (double phi : {0.3, 1.1})
    jobs.push_back([=, &cfg] {
      const Membrane sq = shapes::rect(1, 1);
      CaseResult c;
      c.name = "P4 rotated square with Directional(1, pi/2 + phi) phi=" + num(phi);
      c.inputs = {{"shape", "rect(1,1) rotated by phi"}, {"phi", num(phi)}, {"p", "2"}};
      return guarded(c, [&](CaseResult& r) {
        r.expected = lambda_degenerate(sq, Anisotropy::directional(1, kPi / 2), 2.0).value;
        r.observed = lambda_degenerate(sq.rotated(phi), Anisotropy::directional(1, kPi / 2 + phi), 2.0).value;
        r.tolerance = rel(cfg.tol_rotation, r.expected);
      });
    });
  for (double phi : {0.5, 1.2})
    jobs.push_back([=, &cfg] {
      const ShapeSpec s{"rect", {1, 2}};
      const Anisotropy h = Anisotropy::quadratic(q2);
      CaseResult c;
      c.name = "P4 rotation FEM " + s.label() + " phi=" + num(phi);
      c.inputs = {{"shape", s.label()}, {"anisotropy", anis_json(h)}, {"phi", num(phi)},
                  {"p", "2"},           {"h", num(cfg.h)}};
      return guarded(c, [&](CaseResult& r) {
        const Membrane m = s.build();
        r.expected = solve_membrane(m, h, 2.0, solver_options(cfg)).result.value;
        r.observed = solve_membrane(m.rotated(phi), rotate(h, -phi), 2.0, solver_options(cfg)).result.value;
        r.tolerance = rel(cfg.tol_fem_rotation, r.expected);
      });
    });

  auto results = run_cases(jobs.size(), [&](std::size_t i) { return jobs[i](); }, cfg.workers);
  return finish("properties", std::move(results), start);
}

// ---------------------------------------------------------------------------
// Strictness: positive anisotropies stay clear of their degenerate minorant

VerificationReport suite_strictness(const std::vector<Anisotropy>& anisotropies, double p, const VerifyConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  auto results = run_cases(
      anisotropies.size(),
      [&](std::size_t i) {
        const Anisotropy h = anisotropies[i];
        const ShapeSpec s{"rect", {1, 1}};
        CaseResult c;
        c.name = "strict gap " + h.describe() + " p=" + num(p);
        c.kind = CaseKind::StrictBelow;
        c.inputs = {{"shape", s.label()}, {"anisotropy", anis_json(h)}, {"p", num(p)},
                    {"h", num(cfg.h)},    {"strict_factor", num(cfg.strict_factor)}};
        return guarded(c, [&](CaseResult& r) {
          if (!classify(h).is_positive()) throw InvalidAnisotropy(h.describe() + " is not positive");
          if (std::abs(sup_norm(h) - 1.0) > 1e-9) throw InvalidAnisotropy(h.describe() + " is not unit-norm");
          const Membrane m = s.build();
          const Anisotropy g = dominating_degenerate(h);
          r.inputs.emplace_back("minorant", anis_json(g));
          const SpectralResult fem = solve_membrane(m, h, p, solver_options(cfg)).result;
          r.expected = fem.value;
          r.observed = lambda_degenerate(m, g, p).value;
          r.tolerance = cfg.strict_factor * fem_tolerance(fem.value, fem, cfg);
        });
      },
      cfg.workers);
  return finish("strictness", std::move(results), start);
}

// ---------------------------------------------------------------------------
// Shipped inputs

std::vector<ShapeSpec> default_corpus() {
  return {{"rect", {1, 1}},
          {"rect", {1, 2}},
          {"rect", {1, 4}},
          {"rotated_rect", {1, 2, 0.3}},
          {"disk", {1, 2048}},
          {"annulus", {0.5, 0.4, 4096}},
          {"cropped_disk", {1, 0.6, 256}},
          {"cropped_disk", {1, 0.3, 256}},
          {"asterisk", {9}},
          {"star", {10}},
          {"s_chain", {1, 512}},
          {"s_counterexample", {}}};
}

std::vector<T2Case> default_T2_cases() {
  std::vector<T2Case> out;
  const ShapeSpec square{"rect", {1, 1}};
  const ShapeSpec ann{"annulus", {0.5, 0.3, 4096}};
  const ShapeSpec rr{"rotated_rect", {1, 2, 0.3}};
  for (double p : {1.5, 2.0, 3.0}) {
    for (double t : {0.0, kPi / 3, kPi / 2}) out.push_back({square, t, p});
    for (double t : {0.0, kPi / 3, kPi / 2}) out.push_back({ann, t, p});
    for (double t : {0.3, 0.3 + kPi / 3, 0.3 + kPi / 2}) out.push_back({rr, t, p});
  }
  return out;
}

std::vector<MultiplicityCase> default_multiplicity_cases() {
  return {{{"disk", {1, 256}}, 0, -1, "attained"},
          {{"cropped_disk", {1, 0.6, 256}}, 1, -1, ""},
          {{"rect", {1, 2}}, 2, -1, ""},
          {{"asterisk", {9}}, 9, -1, ""},
          {{"star", {10}}, 0, 10, ""},
          {{"s_counterexample", {}}, -1, 0, "not_attained"}};
}

std::vector<Anisotropy> default_T3_anisotropies() {
  Mat2 q;
  q << 1, 0, 0, 0.25;
  return {Anisotropy::euclidean(), Anisotropy::directional(1, kPi / 2), Anisotropy::weighted_lq(2, 1, 0.25),
          Anisotropy::quadratic(q), Anisotropy::weighted_lq(4, 1, 1)};
}

std::vector<Anisotropy> default_strictness_anisotropies() {
  Mat2 q;
  q << 1, 0, 0, 0.25;
  return {Anisotropy::euclidean(), Anisotropy::quadratic(q), unit_norm(Anisotropy::weighted_lq(3, 1, 1)),
          Anisotropy::max_of({Anisotropy::directional(1, 0.2), Anisotropy::directional(1, 1.3)})};
}

std::vector<std::string> suite_names() {
  return {"T2", "T3", "T4", "T5", "blowup", "afk", "properties", "strictness"};
}

VerificationReport run_suite(const std::string& name, const VerifyConfig& cfg) {
  if (name == "T2") return suite_theorem_T2(default_T2_cases(), cfg);
  if (name == "T3") return suite_theorem_T3({{"rect", {1, 1}}, {"rect", {1, 2}}}, default_T3_anisotropies(), {2.0}, cfg);
  if (name == "T4") return suite_theorem_T4_multiplicity(default_multiplicity_cases(), cfg);
  if (name == "T5") return suite_theorem_T5(default_corpus(), {1.5, 2.0, 3.0}, cfg);
  if (name == "blowup")
    return suite_blowup({Anisotropy::euclidean(), Anisotropy::weighted_lq(3, 1, 1), Anisotropy::zero()}, {2.0, 3.0},
                        cfg);
  if (name == "afk") {
    Mat2 q;
    q << 4, 0, 0, 1;
    return suite_afk({Anisotropy::euclidean(), Anisotropy::quadratic(q), Anisotropy::weighted_lq(4, 1, 1)}, {2.0},
                     {{"rect", {1, 1}}, {"rect", {1, 2}}, {"cropped_disk", {1, 0.6, 256}}}, cfg);
  }
  if (name == "properties") return suite_properties(cfg);
  if (name == "strictness") return suite_strictness(default_strictness_anisotropies(), 2.0, cfg);
  throw InvalidParams("unknown suite '" + name + "'");
}

}  // namespace anisospec
