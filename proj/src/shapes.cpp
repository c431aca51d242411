#include "anisospec/shapes.hpp"

#include "anisospec/errors.hpp"
#include "anisospec/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace anisospec::shapes {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw InvalidParams(msg);
}

Vec2 polar(double r, double a) { return {r * std::cos(a), r * std::sin(a)}; }

Ring regular(double r, int n) {
  Ring out;
  for (int k = 0; k < n; ++k) out.push_back(polar(r, 2.0 * kPi * k / n));
  return out;
}

// Sutherland-Hodgman against the half-plane s·y <= h.
Ring clip_y(const Ring& in, double h, double s) {
  Ring out;
  for (std::size_t i = 0; i < in.size(); ++i) {
    const Vec2& a = in[i];
    const Vec2& b = in[(i + 1) % in.size()];
    const double fa = s * a.y() - h, fb = s * b.y() - h;
    if (fa <= 0) out.push_back(a);
    if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0)) {
      const double t = fa / (fa - fb);
      Vec2 q = a + t * (b - a);
      q.y() = s * h;
      out.push_back(q);
    }
  }
  return out;
}

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace

Membrane rect(double a, double b) {
  require(a > 0 && b > 0, "rect needs positive sides");
  return Membrane({{0, 0}, {a, 0}, {a, b}, {0, b}});
}

Membrane rotated_rect(double a, double b, double phi) { return rect(a, b).rotated(phi); }

Membrane disk(double r, int n) {
  require(r > 0, "disk needs a positive radius");
  require(n >= 16, "disk needs n >= 16");
  return Membrane(regular(r, n));
}

Membrane annulus(double outer_r, double inner_r, int n) {
  require(outer_r > 0 && inner_r > 0 && inner_r < outer_r, "annulus needs 0 < r < R");
  require(n >= 16, "annulus needs n >= 16");
  return Membrane(regular(outer_r, n), {regular(inner_r, n)});
}

Membrane cropped_disk(double r, double h, int n) {
  require(r > 0 && h > 0 && h < r, "cropped_disk needs 0 < h < r");
  require(n >= 16, "cropped_disk needs n >= 16");
  return Membrane(clip_y(clip_y(regular(r, n), h, 1.0), h, -1.0));
}

Membrane asterisk(int m, double len, double wid, double shear) {
  require(m >= 1, "asterisk needs m >= 1");
  require(len > 0 && wid > 0 && wid < len, "asterisk needs 0 < wid < len");
  require(std::abs(shear) < 1.0, "asterisk shear must be below 1");

  struct Arm {
    Vec2 u, v;
    std::array<Vec2, 4> p;
  };
  std::vector<Arm> arms;
  const double hl = len / 2, hw = wid / 2;
  for (int j = 0; j < m; ++j) {
    const double a = kPi * j / m;
    Arm arm;
    arm.u = {std::cos(a), std::sin(a)};
    arm.v = {-std::sin(a), std::cos(a)};
    const double st[4][2] = {{hl - shear * hw, -hw}, {hl + shear * hw, hw}, {-hl + shear * hw, hw}, {-hl - shear * hw, -hw}};
    for (int i = 0; i < 4; ++i) arm.p[i] = st[i][0] * arm.u + st[i][1] * arm.v;
    arms.push_back(arm);
  }
  const double eps = 1e-12 * len;
  auto strictly_inside = [&](const Arm& arm, const Vec2& q) {
    const double s = q.dot(arm.u), t = q.dot(arm.v);
    return std::abs(t) < hw - eps && std::abs(s - shear * t) < hl - eps;
  };
  auto covered = [&](const Vec2& q) {
    return std::any_of(arms.begin(), arms.end(), [&](const Arm& a) { return strictly_inside(a, q); });
  };

  // Every arm contains the origin, so the union is star-shaped about it and
  // its boundary vertices, sorted by angle, describe it completely.
  std::vector<Vec2> pts;
  for (const auto& arm : arms)
    for (const auto& q : arm.p)
      if (!covered(q)) pts.push_back(q);
  for (std::size_t i = 0; i < arms.size(); ++i)
    for (std::size_t j = i + 1; j < arms.size(); ++j)
      for (int e = 0; e < 4; ++e)
        for (int f = 0; f < 4; ++f) {
          const Vec2 a = arms[i].p[e], b = arms[i].p[(e + 1) % 4];
          const Vec2 c = arms[j].p[f], d = arms[j].p[(f + 1) % 4];
          const double den = cross(b - a, d - c);
          if (std::abs(den) < 1e-15) continue;
          const double t = cross(c - a, d - c) / den;
          const double s = cross(c - a, b - a) / den;
          if (t <= 0 || t >= 1 || s <= 0 || s >= 1) continue;
          const Vec2 q = a + t * (b - a);
          if (!covered(q)) pts.push_back(q);
        }
  std::sort(pts.begin(), pts.end(),
            [](const Vec2& a, const Vec2& b) { return std::atan2(a.y(), a.x()) < std::atan2(b.y(), b.x()); });
  Ring ring;
  for (const auto& q : pts)
    if (ring.empty() || (q - ring.back()).norm() > eps) ring.push_back(q);
  return Membrane(ring);
}

Membrane star(int m, double big_r, double small_r, int arc_segments) {
  require(m >= 2, "star needs m >= 2");
  require(small_r > 0 && small_r < big_r, "star needs 0 < r < R");
  require(arc_segments >= 2, "star needs at least two segments per edge");
  const int tips = 2 * m;
  const double beta = kPi / tips;  // half the angle between tips
  require(2.0 * small_r > big_r * std::cos(beta), "star inner radius too small for its tip count");

  // Each edge is the parabolic arc from tip to tip through the inner point at
  // radius r, so no two boundary pieces are parallel segments.
  Ring ring;
  for (int k = 0; k < tips; ++k) {
    const double a0 = 2.0 * beta * k;
    const Vec2 tip0 = polar(big_r, a0);
    const Vec2 tip1 = polar(big_r, a0 + 2.0 * beta);
    const Vec2 ctrl = 2.0 * polar(small_r, a0 + beta) - 0.5 * (tip0 + tip1);
    ring.push_back(tip0);
    for (int i = 1; i < arc_segments; ++i) {
      const double t = static_cast<double>(i) / arc_segments;
      ring.push_back((1 - t) * (1 - t) * tip0 + 2 * t * (1 - t) * ctrl + t * t * tip1);
    }
  }
  return Membrane(ring);
}

Membrane s_chain(int k, int n) {
  require(k >= 1, "s_chain needs k >= 1");
  require(n >= 16, "s_chain needs n >= 16");
  const int pieces = 24 * k * k;
  const double r1 = 1.0 / (6.0 * k * std::sqrt(kPi));
  const double r2 = 2.0 * r1;
  const int seg = std::max(4, n / 2);
  auto center = [&](int i) { return Vec2(i * (r1 + r2), 0.0); };
  // Appends the half arc of piece i with radius r, from angle a0 to a1,
  // without its first point.
  Ring ring;
  auto arc = [&](int i, double r, double a0, double a1) {
    for (int s = 1; s <= seg; ++s) ring.push_back(center(i) + polar(r, a0 + (a1 - a0) * s / seg));
  };
  ring.push_back(center(0) + Vec2(-r2, 0));
  for (int i = 0; i < pieces; ++i) {
    if (i % 2 == 0)
      arc(i, r2, kPi, 0.0);
    else
      arc(i, r1, kPi, 2.0 * kPi);
  }
  ring.push_back(center(pieces - 1) + Vec2(r2, 0));
  for (int i = pieces - 1; i >= 0; --i) {
    if (i % 2 == 0)
      arc(i, r1, 0.0, kPi);
    else
      arc(i, r2, 2.0 * kPi, kPi);
  }
  // Snap the feet exactly onto y = 0.
  for (auto& q : ring)
    if (std::abs(q.y()) < 1e-15) q.y() = 0.0;
  return Membrane(ring);
}

Membrane s_counterexample() {
  // Band from (0,0) to (4,0) with notches touching (1,0) from below and (3,0)
  // from above, so no segment joins the two end tips, plus two thin spikes
  // that push the diameter above the width supremum 4.
  Ring ring{{0, 0},         {0.5, 0.5},  {2.75, 0.5},  {3, 0},         {3.25, 0.5},    {3.3, 0.5},
            {3.375, 1.7},   {3.45, 0.5}, {3.5, 0.5},   {4, 0},         {3.5, -0.5},    {1.25, -0.5},
            {1, 0},         {0.75, -0.5}, {0.7, -0.5}, {0.625, -1.7},  {0.55, -0.5},   {0.5, -0.5}};
  return Membrane(ring);
}

Membrane by_name(const std::string& name, const std::vector<double>& p) {
  auto arg = [&](std::size_t i, double def) { return i < p.size() ? p[i] : def; };
  auto iarg = [&](std::size_t i, int def) { return static_cast<int>(std::lround(arg(i, def))); };
  if (name == "rect") return rect(arg(0, 1), arg(1, 1));
  if (name == "rotated_rect") return rotated_rect(arg(0, 1), arg(1, 1), arg(2, 0));
  if (name == "disk") return disk(arg(0, 1), iarg(1, 256));
  if (name == "annulus") return annulus(arg(0, 0.5), arg(1, 0.25), iarg(2, 1024));
  if (name == "cropped_disk") return cropped_disk(arg(0, 1), arg(1, 0.6), iarg(2, 256));
  if (name == "asterisk") return asterisk(iarg(0, 9), arg(1, 1), arg(2, 0.12), arg(3, 0.3));
  if (name == "star") return star(iarg(0, 10), arg(1, 1), arg(2, 0.5), iarg(3, 24));
  if (name == "s_chain") return s_chain(iarg(0, 1), iarg(1, 512));
  if (name == "s_counterexample") return s_counterexample();
  throw InvalidParams("unknown shape '" + name + "'");
}

}  // namespace anisospec::shapes
