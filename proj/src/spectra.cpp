#include "anisospec/spectra.hpp"

#include "anisospec/errors.hpp"
#include "anisospec/numerics.hpp"
#include "anisospec/shapes.hpp"

#include <cmath>
#include <sstream>

namespace anisospec {

namespace {

// Relative resolution of the width computations (event snapping and
// golden-section refinement).
constexpr double kWidthResolution = 1e-9;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

double pi_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidExponent("p must be a finite number above 1");
  return 2.0 * kPi / (p * std::sin(kPi / p));
}

SpectralResult lambda_1d(double p, double length) {
  const double pp = pi_p(p);
  if (!(length > 0.0) || !std::isfinite(length)) throw InvalidLength("interval length must be positive");
  SpectralResult r;
  r.value = (p - 1.0) * std::pow(pp / length, p);
  r.method = "closed_form";
  r.p = p;
  r.provenance = "(p-1)(pi_p/L)^p with L=" + fmt(length);
  return r;
}

SpectralResult lambda_degenerate(const Membrane& m, const Anisotropy& h, double p) {
  pi_p(p);
  const AnisotropyClass cls = classify(h);
  if (cls.is_zero()) {
    SpectralResult r;
    r.method = "closed_form";
    r.p = p;
    r.provenance = "zero anisotropy";
    return r;
  }
  if (!cls.is_degenerate()) throw NotDegenerate("anisotropy " + h.describe() + " is not degenerate");
  const double width = chord_width(m, cls.theta);
  SpectralResult r = lambda_1d(p, width);
  r.value *= std::pow(cls.c, p);
  r.error_estimate = p * kWidthResolution * r.value;
  r.provenance = "c^p lambda_1d(p, L_theta) with c=" + fmt(cls.c) + ", theta=" + fmt(cls.theta) + ", L=" + fmt(width);
  return r;
}

MinimumResult lambda_min(const WidthProfile& profile, double p) {
  MinimumResult out;
  out.profile = profile;
  out.result = lambda_1d(p, profile.sup_width);
  out.result.error_estimate = p * kWidthResolution * out.result.value;
  out.result.provenance = "lambda_1d(p, sup L_theta) with sup=" + fmt(profile.sup_width);
  switch (profile.attained) {
    case TriState::NotAttained: break;
    case TriState::Attained:
    case TriState::Unresolved:
      if (profile.continuum) {
        // A flat profile has a continuum of maximizers; report one.
        const auto& th = profile.thetas;
        const auto it = std::max_element(profile.values.begin(), profile.values.end());
        out.extremizers.anisotropies.push_back(Anisotropy::directional(1.0, th[it - profile.values.begin()]));
      } else {
        for (const auto& mx : profile.maxima) out.extremizers.anisotropies.push_back(Anisotropy::directional(1.0, mx.theta));
        out.extremizers.complete = profile.attained == TriState::Attained;
      }
      break;
  }
  return out;
}

MinimumResult lambda_min(const Membrane& m, double p, int n_theta) {
  pi_p(p);
  return lambda_min(width_profile(m, n_theta), p);
}

SpectralResult lambda_max(const Membrane& m, double p, const SolverOptions& opts) {
  SolverOptions o = opts;
  o.richardson = true;
  return solve_membrane(m, Anisotropy::euclidean(), p, o).result;
}

Bounds u_estimate_bounds(double lambda_min_value, double lambda_max_value, const Anisotropy& h, double p) {
  const double n = sup_norm(h);
  if (!(n > kClassifyTol)) throw ZeroAnisotropy("bounds are undefined for the zero anisotropy");
  const double s = std::pow(n, p);
  return {lambda_min_value * s, lambda_max_value * s};
}

Bounds u_estimate_bounds(const Membrane& m, const Anisotropy& h, double p, const SolverOptions& opts) {
  if (!(sup_norm(h) > kClassifyTol)) throw ZeroAnisotropy("bounds are undefined for the zero anisotropy");
  return u_estimate_bounds(lambda_min(m, p).result.value, lambda_max(m, p, opts).value, h, p);
}

std::vector<BlowupEntry> blowup_sequence(const Anisotropy& h, double p, int k_max) {
  if (classify(h).is_zero()) throw ZeroAnisotropy("the zero anisotropy has no positive lower bound");
  if (k_max < 2) throw InvalidParams("blowup_sequence needs k_max >= 2");
  const Anisotropy h0 = dominating_degenerate(h);
  // The short side of (0,k)x(0,1/k) points along π/2; turn it onto θ0.
  const double phi = h0.node().b - kPi / 2.0;
  std::vector<BlowupEntry> out;
  for (int k = 1; k <= k_max; ++k) {
    const Membrane r = shapes::rotated_rect(k, 1.0 / k, phi);
    BlowupEntry e;
    e.k = k;
    e.area = area(r);
    e.bound = lambda_degenerate(r, h0, p);
    out.push_back(e);
  }
  return out;
}

InequalityCheck id_min_bound(const Membrane& m, const WidthProfile& profile, double p, double eq_tol) {
  InequalityCheck c;
  c.lhs = lambda_min(profile, p).result.value;
  c.rhs = lambda_1d(p, diameter(m)).value;
  c.holds = c.lhs >= c.rhs * (1.0 - eq_tol);
  c.equality = std::abs(c.lhs - c.rhs) <= eq_tol * c.rhs;
  return c;
}

InequalityCheck id_min_bound(const Membrane& m, double p, double eq_tol) {
  return id_min_bound(m, width_profile(m, kProfileSamples), p, eq_tol);
}

InequalityCheck ip_min_bound(const Membrane& m, const WidthProfile& profile, double p, double eq_tol) {
  if (!is_convex(m)) throw NotConvex("the area bound is stated for convex membranes");
  InequalityCheck c;
  c.lhs = lambda_min(profile, p).result.value;
  c.rhs = lambda_1d(p, 2.0 * std::sqrt(area(m) / kPi)).value;
  c.holds = c.lhs <= c.rhs * (1.0 + eq_tol);
  c.equality = std::abs(c.lhs - c.rhs) <= eq_tol * c.rhs;
  return c;
}

InequalityCheck ip_min_bound(const Membrane& m, double p, double eq_tol) {
  if (!is_convex(m)) throw NotConvex("the area bound is stated for convex membranes");
  return ip_min_bound(m, width_profile(m, kProfileSamples), p, eq_tol);
}

IsodiametricCheck isodiametric_check(const Membrane& m) {
  IsodiametricCheck c;
  c.area = area(m);
  const double d = diameter(m);
  c.bound = kPi * d * d / 4.0;
  c.holds = c.area <= c.bound * (1.0 + 1e-12);
  return c;
}

}  // namespace anisospec
