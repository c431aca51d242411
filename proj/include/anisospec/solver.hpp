#pragma once

#include "anisospec/anisotropy.hpp"
#include "anisospec/mesh.hpp"
#include "anisospec/result.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace anisospec {

/// Per-vertex values of a P1 function; zero on boundary vertices.
struct DiscreteField {
  std::vector<double> values;
};

struct RayleighValue {
  double energy = 0.0;
  double norm = 0.0;  // ∬|u|^p
  double quotient = 0.0;
};

struct SolverOptions {
  double h = 0.02;
  double tol = 1e-5;       // relative quotient change over `window` iterations
  int window = 50;
  int max_iter = 20000;
  int restarts = 3;
  std::uint64_t seed = 20240601;
  bool richardson = false;  // solve_membrane: add a 2h solve for the error estimate
};

struct MinimizeResult {
  SpectralResult result;
  DiscreteField u;  // normalized to ∬|u|^p = 1, nonnegative
  int iterations = 0;
  std::string path;  // "inverse_iteration" or "descent"
  std::vector<double> restart_values;
};

/// 7-point (degree 5) quadrature of ∬|u|^p; the 3-point rule is used for the
/// error estimate.
double lp_norm_p(const Mesh& mesh, const DiscreteField& u, double p, bool three_point = false);

RayleighValue rayleigh_eval(const Mesh& mesh, const DiscreteField& u, const Anisotropy& h, double p);

/// Gradient of the quotient with respect to the interior values (zero on the boundary).
std::vector<double> rayleigh_gradient(const Mesh& mesh, const DiscreteField& u, const Anisotropy& h, double p);

/// Whether the p = 2 problem for H reduces to a generalized eigenproblem.
bool has_linear_path(const Anisotropy& h, double p);

MinimizeResult rayleigh_minimize(const Mesh& mesh, const Anisotropy& h, double p, const SolverOptions& opts = {});

/// Meshes the membrane at opts.h and minimizes; with opts.richardson the 2h
/// value feeds the error estimate.
MinimizeResult solve_membrane(const Membrane& m, const Anisotropy& h, double p, const SolverOptions& opts = {});

struct SliceOptions {
  double target = 0.0;  // expected 1D quotient on nontrivial slices
  double tol = 0.02;    // relative
  int n_slices = 64;
  double near_zero = 1e-6;  // relative to max |u|
};

struct SliceReport {
  int n_slices = 0;
  int near_zero = 0;
  int nontrivial = 0;
  int within = 0;
  double fraction = 0.0;  // within / nontrivial
  std::vector<double> positions;
  std::vector<double> quotients;  // NaN for near-zero slices
};

/// Restricts u to lines of direction θ and compares each 1D Rayleigh quotient
/// with opts.target.
SliceReport slice_check(const Mesh& mesh, const DiscreteField& u, double theta, double p, const SliceOptions& opts);

struct ConvergenceRow {
  double h = 0.0;
  std::size_t dofs = 0;
  double lambda = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  double extrapolated = 0.0;
  double order = 0.0;
};

ConvergenceTable convergence_study(const Membrane& m, const Anisotropy& h, double p, const std::vector<double>& h_list,
                                   const SolverOptions& opts = {});

/// CSV "x,y,u".
void write_field_csv(std::ostream& os, const Mesh& mesh, const DiscreteField& u);

}  // namespace anisospec
