#pragma once

#include "anisospec/anisotropy.hpp"
#include "anisospec/geometry.hpp"
#include "anisospec/result.hpp"
#include "anisospec/solver.hpp"

#include <utility>
#include <vector>

namespace anisospec {

/// Directional(1, θᵢ) extremizers of λ_min. `complete` is false when the
/// width function has no global maximum or its maxima form a continuum.
struct ExtremizerSet {
  std::vector<Anisotropy> anisotropies;
  bool complete = false;
};

struct MinimumResult {
  SpectralResult result;
  ExtremizerSet extremizers;
  WidthProfile profile;
};

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
};

struct BlowupEntry {
  int k = 0;
  double area = 0.0;
  SpectralResult bound;
};

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  bool equality = false;
};

struct IsodiametricCheck {
  double area = 0.0;
  double bound = 0.0;
  bool holds = false;
};

inline constexpr int kProfileSamples = 1024;

double pi_p(double p);
/// First Dirichlet eigenvalue of the one-dimensional p-Laplacian on (0, L).
SpectralResult lambda_1d(double p, double length);

/// c^p·λ_1d(p, L_θ) for H = Directional(c, θ) up to classification. The zero
/// anisotropy gives an explicit zero result.
SpectralResult lambda_degenerate(const Membrane& m, const Anisotropy& h, double p);

MinimumResult lambda_min(const Membrane& m, double p, int n_theta = kProfileSamples);
/// Same, reusing an already computed width profile.
MinimumResult lambda_min(const WidthProfile& profile, double p);

/// FEM value for the Euclidean anisotropy.
SpectralResult lambda_max(const Membrane& m, double p, const SolverOptions& opts = {});

/// (λ_min·‖H‖^p, λ_max·‖H‖^p).
Bounds u_estimate_bounds(const Membrane& m, const Anisotropy& h, double p, const SolverOptions& opts = {});
/// Same with precomputed λ_min and λ_max values.
Bounds u_estimate_bounds(double lambda_min_value, double lambda_max_value, const Anisotropy& h, double p);

/// Unit-area rectangles aligned with the dominating degenerate minorant of H
/// and the lower bounds c^p·λ_1d(p, 1/k), k = 1..k_max.
std::vector<BlowupEntry> blowup_sequence(const Anisotropy& h, double p, int k_max);

/// λ_min ≥ λ_1d(p,1)·diam^{-p}.
InequalityCheck id_min_bound(const Membrane& m, double p, double eq_tol = 1e-6);
InequalityCheck id_min_bound(const Membrane& m, const WidthProfile& profile, double p, double eq_tol = 1e-6);
/// λ_min ≤ λ_1d(p, 2/√π)·|Ω|^{-p/2} for convex membranes, since the widest
/// chord of a convex set is at least the diameter of the equal-area disk.
InequalityCheck ip_min_bound(const Membrane& m, double p, double eq_tol = 1e-6);
InequalityCheck ip_min_bound(const Membrane& m, const WidthProfile& profile, double p, double eq_tol = 1e-6);
/// |Ω| ≤ π(diam/2)².
IsodiametricCheck isodiametric_check(const Membrane& m);

}  // namespace anisospec
