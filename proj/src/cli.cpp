#include "anisospec/cli.hpp"

#include "anisospec/errors.hpp"
#include "anisospec/json_io.hpp"
#include "anisospec/mesh.hpp"
#include "anisospec/shapes.hpp"
#include "anisospec/solver.hpp"
#include "anisospec/spectra.hpp"
#include "anisospec/verify.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace anisospec::cli {

namespace {

// Bad user input, reported with exit code 2.
struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string shape, gen, anis, out, config, suite = "all", field, mesh_out, text_out, h_list = "0.08,0.04,0.02";
  double p = 2.0, h = 0.02;
  int n = kProfileSamples, restarts = 3, k_max = 32, slices = 64;
  std::uint64_t seed = 20240601;
  bool richardson = false;
};

// Input parsing and validation: every library error becomes a usage error.
template <class F>
auto validated(F&& f) {
  try {
    return f();
  } catch (const std::ios_base::failure& e) {
    throw IoFailure(e.what());
  } catch (const Error& e) {
    throw Usage(e.what());
  }
}

ShapeSpec parse_gen(const std::string& text) {
  ShapeSpec s;
  const auto colon = text.find(':');
  s.name = text.substr(0, colon);
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t used = 0;
      try {
        s.params.push_back(std::stod(item, &used));
      } catch (const std::logic_error&) {
        used = 0;
      }
      if (used == 0 || used != item.size()) throw Usage("bad generator parameter '" + item + "' in --gen");
    }
  }
  return s;
}

Membrane shape_of(const Options& o) {
  if (o.shape.empty() == o.gen.empty()) throw Usage("give exactly one of --shape FILE or --gen NAME[:P1,P2,...]");
  return validated([&] { return o.shape.empty() ? parse_gen(o.gen).build() : load_membrane(o.shape); });
}

Anisotropy anis_of(const Options& o) {
  if (o.anis.empty()) throw Usage("--anis is required (JSON text or a file holding it)");
  return validated([&] { return parse_anisotropy(o.anis); });
}

void check_p(double p) {
  validated([&] { return pi_p(p); });
}

SolverOptions solver_of(const Options& o) {
  if (!(o.h > 0)) throw Usage("--h must be positive");
  if (o.restarts < 1) throw Usage("--restarts must be at least 1");
  SolverOptions s;
  s.h = o.h;
  s.seed = o.seed;
  s.restarts = o.restarts;
  s.richardson = o.richardson;
  return s;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoFailure("cannot write '" + path + "'");
  f << content;
  if (!f) throw IoFailure("write to '" + path + "' failed");
}

// The artifact goes to --out when given (summary on stdout), otherwise to
// stdout (summary on stderr).
void emit(const Options& o, std::ostream& out, std::ostream& err, const std::string& artifact,
          const std::string& summary) {
  if (o.out.empty()) {
    out << artifact;
    err << summary << "\n";
  } else {
    write_file(o.out, artifact);
    out << summary << "\n";
  }
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

Json extremizers_json(const ExtremizerSet& ex) {
  Json a = Json::array();
  for (const auto& h : ex.anisotropies) a.push_back(to_json(h));
  return {{"anisotropies", a}, {"complete", ex.complete}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Anisotropic p-Laplacian membrane eigenvalues", "anisospec"};
  // --h is the mesh size, so help is only --help.
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  Options o;

  auto shape_opts = [&](CLI::App* c) {
    c->add_option("--shape", o.shape, "membrane JSON file");
    c->add_option("--gen", o.gen, "generator, e.g. rect:1,2 or star:10");
  };
  auto anis_opt = [&](CLI::App* c) { c->add_option("--anis", o.anis, "anisotropy JSON text or file"); };
  auto p_opt = [&](CLI::App* c) { c->add_option("--p", o.p, "exponent p > 1"); };
  auto fem_opts = [&](CLI::App* c) {
    c->add_option("--h", o.h, "mesh size");
    c->add_option("--seed", o.seed, "random seed");
    c->add_option("--restarts", o.restarts, "descent restarts");
  };
  auto out_opt = [&](CLI::App* c) { c->add_option("--out", o.out, "output file"); };

  auto* gen_shape = app.add_subcommand("gen-shape", "write a generator membrane as JSON");
  gen_shape->add_option("--gen", o.gen, "generator, e.g. annulus:0.5,0.3,4096")->required();
  out_opt(gen_shape);

  auto* classify_cmd = app.add_subcommand("classify", "positive / degenerate / zero classification");
  anis_opt(classify_cmd);
  out_opt(classify_cmd);

  auto* profile_cmd = app.add_subcommand("width-profile", "width function L_theta as CSV");
  shape_opts(profile_cmd);
  profile_cmd->add_option("--n", o.n, "number of directions");
  out_opt(profile_cmd);

  auto* lambda_cmd = app.add_subcommand("lambda", "least level for one anisotropy");
  shape_opts(lambda_cmd);
  anis_opt(lambda_cmd);
  p_opt(lambda_cmd);
  fem_opts(lambda_cmd);
  out_opt(lambda_cmd);

  auto* min_cmd = app.add_subcommand("lambda-min", "minimum over unit-norm anisotropies");
  shape_opts(min_cmd);
  p_opt(min_cmd);
  min_cmd->add_option("--n", o.n, "number of directions");
  out_opt(min_cmd);

  auto* max_cmd = app.add_subcommand("lambda-max", "Euclidean level (FEM)");
  shape_opts(max_cmd);
  p_opt(max_cmd);
  fem_opts(max_cmd);
  out_opt(max_cmd);

  auto* bounds_cmd = app.add_subcommand("bounds", "lower and upper bounds for one anisotropy");
  shape_opts(bounds_cmd);
  anis_opt(bounds_cmd);
  p_opt(bounds_cmd);
  fem_opts(bounds_cmd);
  out_opt(bounds_cmd);

  auto* solve_cmd = app.add_subcommand("solve", "FEM minimization of the Rayleigh quotient");
  shape_opts(solve_cmd);
  anis_opt(solve_cmd);
  p_opt(solve_cmd);
  fem_opts(solve_cmd);
  solve_cmd->add_flag("--richardson", o.richardson, "add a 2h solve for the error estimate");
  solve_cmd->add_option("--field", o.field, "write the minimizer as CSV x,y,u");
  solve_cmd->add_option("--mesh-out", o.mesh_out, "write the mesh");
  out_opt(solve_cmd);

  auto* slice_cmd = app.add_subcommand("slice-check", "1D quotients of the minimizer along the degenerate direction");
  shape_opts(slice_cmd);
  anis_opt(slice_cmd);
  p_opt(slice_cmd);
  fem_opts(slice_cmd);
  slice_cmd->add_option("--slices", o.slices, "number of slices");
  out_opt(slice_cmd);

  auto* blowup_cmd = app.add_subcommand("blowup", "unit-area rectangle lower bounds as CSV");
  anis_opt(blowup_cmd);
  p_opt(blowup_cmd);
  blowup_cmd->add_option("--k-max", o.k_max, "last k");
  out_opt(blowup_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  verify_cmd->add_option("--suite", o.suite, "T2, T3, T4, T5, blowup, afk, properties, strictness or all");
  verify_cmd->add_option("--config", o.config, "key = value tolerance file");
  verify_cmd->add_option("--text", o.text_out, "also write the text report here");
  out_opt(verify_cmd);

  auto* conv_cmd = app.add_subcommand("convergence", "mesh refinement study");
  shape_opts(conv_cmd);
  anis_opt(conv_cmd);
  p_opt(conv_cmd);
  conv_cmd->add_option("--h-list", o.h_list, "comma separated mesh sizes, coarse to fine");
  conv_cmd->add_option("--seed", o.seed, "random seed");
  conv_cmd->add_option("--restarts", o.restarts, "descent restarts");
  out_opt(conv_cmd);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run with --help for the subcommand grammar\n";
    return 2;
  }

  try {
    if (gen_shape->parsed()) {
      const ShapeSpec spec = parse_gen(o.gen);
      const Membrane m = validated([&] { return spec.build(); });
      emit(o, out, err, dump(to_json(m, &spec)),
           "gen-shape " + spec.label() + ": " + std::to_string(m.vertex_count()) + " vertices, area " + num(area(m)));
    } else if (classify_cmd->parsed()) {
      const Anisotropy h = anis_of(o);
      const AnisotropyClass c = classify(h);
      Json j;
      j["anisotropy"] = to_json(h);
      j["type"] = c.is_zero() ? "zero" : c.is_degenerate() ? "degenerate" : "positive";
      j["norm"] = sup_norm(h);
      if (c.is_degenerate()) {
        j["c"] = c.c;
        j["theta"] = c.theta;
      }
      emit(o, out, err, dump(j), "classify: " + j["type"].get<std::string>());
    } else if (profile_cmd->parsed()) {
      const Membrane m = shape_of(o);
      if (o.n < 8) throw Usage("--n must be at least 8");
      const WidthProfile wp = width_profile(m, o.n);
      // Mark the sample nearest each reported maximum.
      std::vector<int> mark(wp.thetas.size(), 0);
      for (const auto& mx : wp.maxima) {
        std::size_t best = 0;
        for (std::size_t i = 0; i < wp.thetas.size(); ++i)
          if (std::abs(wp.thetas[i] - mx.theta) < std::abs(wp.thetas[best] - mx.theta)) best = i;
        mark[best] = 1;
      }
      std::ostringstream csv;
      csv << "theta,width,maximum\n" << std::setprecision(17);
      for (std::size_t i = 0; i < wp.thetas.size(); ++i)
        csv << wp.thetas[i] << "," << wp.values[i] << "," << mark[i] << "\n";
      emit(o, out, err, csv.str(),
           "width-profile: sup " + num(wp.sup_width) + ", maxima " + std::to_string(wp.maxima.size()) +
               (wp.continuum ? " (continuum)" : "") + ", attained " + to_string(wp.attained));
    } else if (lambda_cmd->parsed()) {
      const Membrane m = shape_of(o);
      const Anisotropy h = anis_of(o);
      check_p(o.p);
      const SolverOptions so = solver_of(o);
      const AnisotropyClass c = classify(h);
      const SpectralResult r =
          c.is_positive() ? solve_membrane(m, h, o.p, so).result : lambda_degenerate(m, h, o.p);
      Json j = to_json(r);
      j["anisotropy"] = to_json(h);
      emit(o, out, err, dump(j), "lambda (" + r.method + "): " + num(r.value));
    } else if (min_cmd->parsed()) {
      const Membrane m = shape_of(o);
      check_p(o.p);
      if (o.n < 8) throw Usage("--n must be at least 8");
      const MinimumResult r = lambda_min(m, o.p, o.n);
      Json j = to_json(r.result);
      j["sup_width"] = r.profile.sup_width;
      j["attained"] = to_string(r.profile.attained);
      j["extremizers"] = extremizers_json(r.extremizers);
      emit(o, out, err, dump(j),
           "lambda-min: " + num(r.result.value) + ", extremizers " + std::to_string(r.extremizers.anisotropies.size()) +
               ", design " + to_string(r.profile.attained));
    } else if (max_cmd->parsed()) {
      const Membrane m = shape_of(o);
      check_p(o.p);
      const SpectralResult r = lambda_max(m, o.p, solver_of(o));
      emit(o, out, err, dump(to_json(r)), "lambda-max: " + num(r.value) + " +- " + num(r.error_estimate));
    } else if (bounds_cmd->parsed()) {
      const Membrane m = shape_of(o);
      const Anisotropy h = anis_of(o);
      check_p(o.p);
      const SolverOptions so = solver_of(o);
      if (classify(h).is_zero()) throw Usage("bounds are undefined for the zero anisotropy");
      const double lo = lambda_min(m, o.p).result.value;
      const double hi = lambda_max(m, o.p, so).value;
      const Bounds b = u_estimate_bounds(lo, hi, h, o.p);
      Json j;
      j["anisotropy"] = to_json(h);
      j["p"] = o.p;
      j["lambda_min"] = lo;
      j["lambda_max"] = hi;
      j["lower"] = b.lower;
      j["upper"] = b.upper;
      emit(o, out, err, dump(j), "bounds: [" + num(b.lower) + ", " + num(b.upper) + "]");
    } else if (solve_cmd->parsed()) {
      const Membrane m = shape_of(o);
      const Anisotropy h = anis_of(o);
      check_p(o.p);
      const SolverOptions so = solver_of(o);
      const Mesh mesh = triangulate(m, so.h);
      const MinimizeResult r =
          o.richardson ? solve_membrane(m, h, o.p, so) : rayleigh_minimize(mesh, h, o.p, so);
      Json j = to_json(r.result);
      j["anisotropy"] = to_json(h);
      j["path"] = r.path;
      j["iterations"] = r.iterations;
      j["restart_values"] = r.restart_values;
      j["h"] = so.h;
      j["seed"] = so.seed;
      if (!o.field.empty() || !o.mesh_out.empty()) {
        if (!o.field.empty()) {
          if (r.u.values.size() != mesh.vertices.size()) throw Usage("--field is not available with --richardson");
          std::ostringstream csv;
          write_field_csv(csv, mesh, r.u);
          write_file(o.field, csv.str());
        }
        if (!o.mesh_out.empty()) {
          std::ostringstream ms;
          write_mesh(ms, mesh);
          write_file(o.mesh_out, ms.str());
        }
      }
      emit(o, out, err, dump(j), "solve (" + r.path + "): " + num(r.result.value));
    } else if (slice_cmd->parsed()) {
      const Membrane m = shape_of(o);
      const Anisotropy h = anis_of(o);
      check_p(o.p);
      const SolverOptions so = solver_of(o);
      const AnisotropyClass c = classify(h);
      if (!c.is_degenerate()) throw Usage("slice-check needs a degenerate anisotropy");
      if (o.slices < 1) throw Usage("--slices must be at least 1");
      const Mesh mesh = triangulate(m, so.h);
      const MinimizeResult r = rayleigh_minimize(mesh, h, o.p, so);
      SliceOptions sl;
      sl.target = lambda_1d(o.p, chord_width(m, c.theta)).value;
      sl.n_slices = o.slices;
      const SliceReport rep = slice_check(mesh, r.u, c.theta, o.p, sl);
      Json j;
      j["target"] = sl.target;
      j["n_slices"] = rep.n_slices;
      j["near_zero"] = rep.near_zero;
      j["nontrivial"] = rep.nontrivial;
      j["within"] = rep.within;
      j["fraction"] = rep.fraction;
      Json q = Json::array();
      for (double v : rep.quotients) q.push_back(std::isfinite(v) ? Json(v) : Json(nullptr));
      j["positions"] = rep.positions;
      j["quotients"] = q;
      emit(o, out, err, dump(j),
           "slice-check: " + std::to_string(rep.within) + "/" + std::to_string(rep.nontrivial) +
               " nontrivial slices within tolerance, " + std::to_string(rep.near_zero) + " near zero");
    } else if (blowup_cmd->parsed()) {
      const Anisotropy h = anis_of(o);
      check_p(o.p);
      const auto seq = validated([&] { return blowup_sequence(h, o.p, o.k_max); });
      std::ostringstream csv;
      csv << "k,area,bound\n" << std::setprecision(17);
      for (const auto& e : seq) csv << e.k << "," << e.area << "," << e.bound.value << "\n";
      emit(o, out, err, csv.str(),
           "blowup: bound " + num(seq.front().bound.value) + " at k=1, " + num(seq.back().bound.value) +
               " at k=" + std::to_string(seq.back().k));
    } else if (verify_cmd->parsed()) {
      const VerifyConfig cfg = o.config.empty() ? VerifyConfig{} : validated([&] { return load_config(o.config); });
      std::vector<std::string> names;
      if (o.suite == "all") {
        names = suite_names();
      } else {
        const auto all = suite_names();
        if (std::find(all.begin(), all.end(), o.suite) == all.end()) throw Usage("unknown suite '" + o.suite + "'");
        names = {o.suite};
      }
      Json reports = Json::array();
      std::ostringstream text;
      bool ok = true;
      int failed = 0, errored = 0, total = 0;
      for (const auto& name : names) {
        const VerificationReport r = run_suite(name, cfg);
        reports.push_back(to_json(r));
        write_text_report(text, r);
        ok = ok && r.ok();
        failed += r.failed;
        errored += r.errored;
        total += static_cast<int>(r.cases.size());
      }
      const Json doc = names.size() == 1 ? reports.front() : Json{{"schema", kSchema}, {"reports", reports}};
      if (!o.text_out.empty()) write_file(o.text_out, text.str());
      if (o.out.empty()) {
        out << text.str();
      } else {
        write_file(o.out, dump(doc));
      }
      out << "verify " << o.suite << ": " << total << " cases, " << failed << " failed, " << errored << " errored\n";
      return ok ? 0 : 1;
    } else if (conv_cmd->parsed()) {
      const Membrane m = shape_of(o);
      const Anisotropy h = anis_of(o);
      check_p(o.p);
      std::vector<double> hs;
      {
        std::stringstream ss(o.h_list);
        std::string item;
        while (std::getline(ss, item, ',')) {
          try {
            hs.push_back(std::stod(item));
          } catch (const std::logic_error&) {
            throw Usage("bad mesh size '" + item + "' in --h-list");
          }
        }
      }
      if (hs.size() < 3) throw Usage("--h-list needs at least three mesh sizes");
      const SolverOptions so = solver_of(o);
      const ConvergenceTable table = convergence_study(m, h, o.p, hs, so);
      Json rows = Json::array();
      for (const auto& r : table.rows) rows.push_back({{"h", r.h}, {"dofs", r.dofs}, {"lambda", r.lambda}});
      Json j;
      j["anisotropy"] = to_json(h);
      j["p"] = o.p;
      j["rows"] = rows;
      j["order"] = table.order;
      j["extrapolated"] = table.extrapolated;
      emit(o, out, err, dump(j), "convergence: order " + num(table.order) + ", extrapolated " + num(table.extrapolated));
    }
  } catch (const Usage& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const IoFailure& e) {
    err << "I/O error: " << e.what() << "\n";
    return 1;
  } catch (const std::ios_base::failure& e) {
    err << "I/O error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "computation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace anisospec::cli
