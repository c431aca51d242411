#pragma once

#include "anisospec/anisotropy.hpp"
#include "anisospec/geometry.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace anisospec {

/// A generator call: enough to rebuild the membrane from the CLI.
struct ShapeSpec {
  std::string name;
  std::vector<double> params;

  Membrane build() const;
  std::string label() const;  // e.g. "rect(1,2)"
};

enum class CaseKind {
  Equal,       // |expected - observed| <= tolerance
  AtMost,      // observed <= expected + tolerance
  AtLeast,     // observed >= expected - tolerance
  StrictBelow  // observed < expected - tolerance
};

const char* to_string(CaseKind k);

struct CaseResult {
  std::string name;
  std::vector<std::pair<std::string, std::string>> inputs;
  CaseKind kind = CaseKind::Equal;
  double expected = 0.0;
  double observed = 0.0;
  double tolerance = 0.0;  // absolute
  bool pass = false;
  std::string error;  // nonempty when the case threw
};

struct VerificationReport {
  std::string suite;
  std::vector<CaseResult> cases;
  int passed = 0;
  int failed = 0;
  int errored = 0;
  double runtime_s = 0.0;

  bool ok() const { return !cases.empty() && failed == 0 && errored == 0; }
};

/// Tolerances, mesh sizes and seeds shared by the suites. Loaded from a
/// "key = value" file; '#' starts a comment.
struct VerifyConfig {
  double tol_geometric = 1e-6;     // closed-form comparisons, relative
  double tol_curved = 1e-2;        // equality claims on polygonal curved shapes
  double tol_fem = 0.02;           // FEM floor at p = 2, relative
  double tol_fem_other = 0.03;     // FEM floor at other p
  double fem_error_factor = 3.0;   // FEM tolerance = max(tol_fem, factor·estimate)
  double tol_fem_scaling = 0.01;   // property suite
  double tol_fem_rotation = 0.005;
  double tol_rotation = 1e-9;
  double tol_scaling = 1e-12;
  double tol_exponent = 0.05;
  double strict_factor = 5.0;      // strict gaps must exceed this many tolerances
  double h = 0.02;
  double solver_tol = 1e-5;
  int restarts = 3;
  std::uint64_t seed = 20240601;
  int n_theta = 1024;
  int k_max = 32;
  int workers = 0;  // 0: hardware concurrency
};

VerifyConfig parse_config(std::istream& is);
VerifyConfig load_config(const std::string& path);

struct T2Case {
  ShapeSpec shape;
  double theta = 0.0;
  double p = 2.0;
};

struct MultiplicityCase {
  ShapeSpec shape;
  int attainment = -1;  // expected attainment_multiplicity, -1 to skip
  int extremizers = -1; // expected λ_min extremizer count, -1 to skip
  std::string design;   // expected has_optimal_design, empty to skip
};

/// FEM value for Directional(1, θ) against the closed form.
VerificationReport suite_theorem_T2(const std::vector<T2Case>& cases, const VerifyConfig& cfg);
/// Every (shape, θ, p) combination.
VerificationReport suite_theorem_T2(const std::vector<ShapeSpec>& shapes, const std::vector<double>& thetas,
                                    const std::vector<double>& p_list, const VerifyConfig& cfg);

/// λ^H ≤ λ^Euclidean for unit-norm H, plus a strict gap for a normalized
/// MaxOf of two Directionals.
VerificationReport suite_theorem_T3(const std::vector<ShapeSpec>& shapes, const std::vector<Anisotropy>& anisotropies,
                                    const std::vector<double>& p_list, const VerifyConfig& cfg);

VerificationReport suite_theorem_T4_multiplicity(const std::vector<MultiplicityCase>& cases, const VerifyConfig& cfg);

/// Diameter bound everywhere, area bound on convex shapes, isodiametric
/// inequality, and the combination of the two bounds.
VerificationReport suite_theorem_T5(const std::vector<ShapeSpec>& shapes, const std::vector<double>& p_list,
                                    const VerifyConfig& cfg);

/// Growth of the unit-area lower-bound sequence; the zero anisotropy is
/// expected to be rejected.
VerificationReport suite_blowup(const std::vector<Anisotropy>& h_list, const std::vector<double>& p_list,
                                const VerifyConfig& cfg);

/// λ^H(Ω) ≥ λ^H(Wulff shape) at equal area, for smooth positive H.
VerificationReport suite_afk(const std::vector<Anisotropy>& h_list, const std::vector<double>& p_list,
                             const std::vector<ShapeSpec>& shapes, const VerifyConfig& cfg);

/// Scaling, domain monotonicity, anisotropy monotonicity and rotation
/// invariance, closed form and FEM.
VerificationReport suite_properties(const VerifyConfig& cfg);

/// Strict gap between FEM λ^H and the dominating degenerate closed form on the
/// unit square.
VerificationReport suite_strictness(const std::vector<Anisotropy>& anisotropies, double p, const VerifyConfig& cfg);

// Shipped inputs.
std::vector<ShapeSpec> default_corpus();  // the 12 generators
std::vector<T2Case> default_T2_cases();
std::vector<MultiplicityCase> default_multiplicity_cases();
std::vector<Anisotropy> default_T3_anisotropies();
std::vector<Anisotropy> default_strictness_anisotropies();

/// Runs a suite by name (T2, T3, T4, T5, blowup, afk, properties, strictness)
/// on the shipped inputs.
VerificationReport run_suite(const std::string& name, const VerifyConfig& cfg);
std::vector<std::string> suite_names();

void write_text_report(std::ostream& os, const VerificationReport& report);

/// Applies the pass rule of the case kind and fills in pass.
void judge(CaseResult& c);

/// Tallies the cases into the report counts.
void summarize(VerificationReport& report);

/// Runs n jobs on a bounded worker pool; results come back in index order.
std::vector<CaseResult> run_cases(std::size_t n, const std::function<CaseResult(std::size_t)>& job, int workers);

}  // namespace anisospec
