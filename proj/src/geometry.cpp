#include "anisospec/geometry.hpp"

#include "anisospec/errors.hpp"
#include "anisospec/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace anisospec {

namespace {

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }
double orient(const Vec2& a, const Vec2& b, const Vec2& c) { return cross(b - a, c - a); }

Vec2 rotate_point(const Vec2& p, double c, double s) { return {c * p.x() - s * p.y(), s * p.x() + c * p.y()}; }

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) && std::min(a.y(), b.y()) <= p.y() &&
         p.y() <= std::max(a.y(), b.y());
}

bool segments_touch(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double o1 = orient(a, b, c);
  const double o2 = orient(a, b, d);
  const double o3 = orient(c, d, a);
  const double o4 = orient(c, d, b);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

// Crossing-number test against one ring; the point is assumed off the ring.
bool inside_ring(const Ring& r, const Vec2& p) {
  bool in = false;
  for (std::size_t i = 0, j = r.size() - 1; i < r.size(); j = i++) {
    const Vec2& a = r[i];
    const Vec2& b = r[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) in = !in;
    }
  }
  return in;
}

bool on_ring(const Ring& r, const Vec2& p) {
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Vec2& a = r[i];
    const Vec2& b = r[(i + 1) % r.size()];
    if (orient(a, b, p) == 0.0 && on_segment(a, b, p)) return true;
  }
  return false;
}

Ring clean_ring(Ring r) {
  Ring out;
  out.reserve(r.size());
  for (const auto& p : r) {
    if (!p.allFinite()) throw InvalidRing("ring coordinates must be finite");
    if (out.empty() || (p - out.back()).norm() > 0.0) out.push_back(p);
  }
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  if (out.size() < 3) throw InvalidRing("ring needs at least three distinct vertices");
  return out;
}

struct SegRef {
  Vec2 a, b;
  int ring;
  int index;
  double xmin, xmax;
};

void check_simple(const std::vector<const Ring*>& rings) {
  std::vector<SegRef> segs;
  for (int r = 0; r < static_cast<int>(rings.size()); ++r) {
    const Ring& ring = *rings[r];
    for (int i = 0; i < static_cast<int>(ring.size()); ++i) {
      const Vec2& a = ring[i];
      const Vec2& b = ring[(i + 1) % ring.size()];
      segs.push_back({a, b, r, i, std::min(a.x(), b.x()), std::max(a.x(), b.x())});
    }
  }
  std::sort(segs.begin(), segs.end(), [](const SegRef& s, const SegRef& t) { return s.xmin < t.xmin; });
  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (std::size_t j = i + 1; j < segs.size() && segs[j].xmin <= segs[i].xmax; ++j) {
      const SegRef& s = segs[i];
      const SegRef& t = segs[j];
      if (std::max(std::min(s.a.y(), s.b.y()), std::min(t.a.y(), t.b.y())) >
          std::min(std::max(s.a.y(), s.b.y()), std::max(t.a.y(), t.b.y())))
        continue;
      if (s.ring == t.ring) {
        const int n = static_cast<int>(rings[s.ring]->size());
        const bool adjacent = (s.index + 1) % n == t.index || (t.index + 1) % n == s.index;
        if (adjacent) {
          // Adjacent edges may only share their common vertex.
          const Vec2& shared = (s.index + 1) % n == t.index ? s.b : s.a;
          const Vec2& s_other = (s.index + 1) % n == t.index ? s.a : s.b;
          const Vec2& t_other = (s.index + 1) % n == t.index ? t.b : t.a;
          if (orient(shared, s_other, t_other) == 0.0 && (s_other - shared).dot(t_other - shared) > 0.0)
            throw InvalidRing("ring folds back on itself");
          continue;
        }
      }
      if (segments_touch(s.a, s.b, t.a, t.b)) throw InvalidRing("rings must be simple and pairwise disjoint");
    }
  }
}

// ---------------------------------------------------------------------------
// Section sweep in a frame where the chord direction is vertical. Between
// consecutive vertex abscissae every section component is bounded below and
// above by fixed edges, so its length is affine in x.

struct SweepEdge {
  double x0, y0, x1, y1;
  double at(double x) const { return y0 + (x - x0) * (y1 - y0) / (x1 - x0); }
};

struct SweepSlab {
  double x0, x1;
  std::vector<std::pair<int, int>> comps;  // (lower edge, upper edge)
};

struct Sweep {
  std::vector<SweepEdge> edges;
  std::vector<SweepSlab> slabs;
  double len(int comp_lo, int comp_hi, double x) const { return edges[comp_hi].at(x) - edges[comp_lo].at(x); }
};

Sweep build_sweep(const std::vector<Ring>& rings, double scale) {
  Sweep sw;
  std::vector<std::pair<double, std::pair<int, int>>> xs;
  std::size_t total = 0;
  for (const auto& r : rings) total += r.size();
  xs.reserve(total);
  for (int r = 0; r < static_cast<int>(rings.size()); ++r)
    for (int i = 0; i < static_cast<int>(rings[r].size()); ++i) xs.push_back({rings[r][i].x(), {r, i}});
  std::sort(xs.begin(), xs.end());
  const double eps = 1e-13 * scale;
  std::vector<std::vector<double>> snapped(rings.size());
  for (std::size_t r = 0; r < rings.size(); ++r) snapped[r].resize(rings[r].size());
  std::vector<double> events;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (events.empty() || xs[k].first - events.back() > eps) events.push_back(xs[k].first);
    snapped[xs[k].second.first][xs[k].second.second] = events.back();
  }
  for (std::size_t r = 0; r < rings.size(); ++r) {
    const Ring& ring = rings[r];
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const std::size_t j = (i + 1) % ring.size();
      double xa = snapped[r][i], xb = snapped[r][j];
      if (xa == xb) continue;
      double ya = ring[i].y(), yb = ring[j].y();
      if (xa > xb) {
        std::swap(xa, xb);
        std::swap(ya, yb);
      }
      sw.edges.push_back({xa, ya, xb, yb});
    }
  }
  std::vector<int> order(sw.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return sw.edges[a].x0 < sw.edges[b].x0; });

  std::vector<int> active;
  std::size_t next = 0;
  std::vector<std::pair<double, int>> ys;
  sw.slabs.reserve(events.size());
  for (std::size_t k = 0; k + 1 < events.size(); ++k) {
    const double x0 = events[k], x1 = events[k + 1];
    active.erase(std::remove_if(active.begin(), active.end(), [&](int e) { return sw.edges[e].x1 <= x0; }),
                 active.end());
    while (next < order.size() && sw.edges[order[next]].x0 <= x0) active.push_back(order[next++]);
    const double xm = 0.5 * (x0 + x1);
    ys.clear();
    for (int e : active) ys.push_back({sw.edges[e].at(xm), e});
    std::sort(ys.begin(), ys.end());
    SweepSlab slab{x0, x1, {}};
    for (std::size_t i = 0; i + 1 < ys.size(); i += 2) slab.comps.push_back({ys[i].second, ys[i + 1].second});
    sw.slabs.push_back(std::move(slab));
  }
  return sw;
}

std::vector<Ring> rotated_rings(const Membrane& m, double psi) {
  const double c = std::cos(psi), s = std::sin(psi);
  std::vector<Ring> out;
  for (const Ring* r : m.rings()) {
    Ring q;
    q.reserve(r->size());
    for (const auto& p : *r) q.push_back(rotate_point(p, c, s));
    out.push_back(std::move(q));
  }
  return out;
}

// Frame rotation taking direction θ to the vertical.
double frame_angle(double theta) { return kPi / 2.0 - theta; }

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  if (pts.size() < 3) return pts;
  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && orient(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && orient(h[k - 2], h[k - 1], pts[i - 1]) <= 0) --k;
    h[k++] = pts[i - 1];
  }
  h.resize(k - 1);
  return h;
}

Chord longest_in_frame(const Sweep& sw, double* flat_x0 = nullptr) {
  (void)flat_x0;
  Chord best;
  for (const auto& slab : sw.slabs) {
    for (const auto& [lo, hi] : slab.comps) {
      for (double x : {slab.x0, slab.x1}) {
        const double l = sw.len(lo, hi, x);
        if (l > best.length) best = {l, Vec2(x, sw.edges[lo].at(x)), Vec2(x, sw.edges[hi].at(x))};
      }
    }
  }
  return best;
}

Chord unrotate(const Chord& c, double psi) {
  const double co = std::cos(-psi), si = std::sin(-psi);
  return {c.length, rotate_point(c.a, co, si), rotate_point(c.b, co, si)};
}

std::optional<AttainmentWitness> attainment_impl(const Membrane& m, double theta, double diam,
                                                 const AttainmentOptions& opts) {
  const double psi = frame_angle(theta);
  const Sweep sw = build_sweep(rotated_rings(m, psi), m.scale());
  const Chord best = longest_in_frame(sw);
  if (best.length <= 0.0) return std::nullopt;
  const double tol = opts.flat_tol * m.scale();
  const double big = best.length - tol;

  AttainmentWitness out;
  out.theta = wrap_angle(theta);
  out.width = best.length;
  double best_run = 0.0;

  // Walk slabs, chaining flat maximal components that continue across events.
  bool have = false;
  double run_lo = 0.0, run_hi = 0.0;
  double prev_lo_y = 0.0, prev_hi_y = 0.0;
  std::vector<Vec2> run_lower;
  for (const auto& slab : sw.slabs) {
    bool continued = false;
    for (const auto& [lo, hi] : slab.comps) {
      const double l0 = sw.len(lo, hi, slab.x0);
      const double l1 = sw.len(lo, hi, slab.x1);
      if (std::abs(l0 - l1) > tol || std::min(l0, l1) < big) continue;
      const double ylo0 = sw.edges[lo].at(slab.x0);
      const double yhi0 = sw.edges[hi].at(slab.x0);
      if (have && run_hi == slab.x0 && std::abs(ylo0 - prev_lo_y) <= tol && std::abs(yhi0 - prev_hi_y) <= tol) {
        run_hi = slab.x1;
        run_lower.push_back({slab.x1, sw.edges[lo].at(slab.x1)});
      } else {
        if (have && run_hi - run_lo > best_run) {
          best_run = run_hi - run_lo;
          out.strip = {run_lo, run_hi};
          out.lower = run_lower;
        }
        have = true;
        run_lo = slab.x0;
        run_hi = slab.x1;
        run_lower = {{slab.x0, ylo0}, {slab.x1, sw.edges[lo].at(slab.x1)}};
      }
      prev_lo_y = sw.edges[lo].at(slab.x1);
      prev_hi_y = sw.edges[hi].at(slab.x1);
      continued = true;
      break;
    }
    if (!continued && have && run_hi == slab.x0) {
      // run ends here
    }
  }
  if (have && run_hi - run_lo > best_run) {
    best_run = run_hi - run_lo;
    out.strip = {run_lo, run_hi};
    out.lower = run_lower;
  }
  if (best_run < opts.min_strip_fraction * diam || best_run <= 0.0) return std::nullopt;
  return out;
}

std::vector<double> attainment_candidates(const Membrane& m, int n_theta) {
  std::vector<double> cand;
  for (int k = 0; k < n_theta; ++k) cand.push_back(kPi * k / n_theta);
  std::vector<Vec2> verts;
  for (const Ring* r : m.rings()) {
    for (std::size_t i = 0; i < r->size(); ++i) {
      const Vec2 d = (*r)[(i + 1) % r->size()] - (*r)[i];
      cand.push_back(wrap_angle(std::atan2(d.y(), d.x())));
      verts.push_back((*r)[i]);
    }
  }
  if (verts.size() <= 64) {
    for (std::size_t i = 0; i < verts.size(); ++i)
      for (std::size_t j = i + 1; j < verts.size(); ++j) {
        const Vec2 d = verts[j] - verts[i];
        cand.push_back(wrap_angle(std::atan2(d.y(), d.x())));
      }
  }
  std::sort(cand.begin(), cand.end());
  std::vector<double> out;
  for (double t : cand)
    if (out.empty() || t - out.back() > 1e-12) out.push_back(t);
  if (out.size() > 1 && kPi - out.back() + out.front() <= 1e-12) out.pop_back();
  return out;
}

template <class F>
void parallel_for(int n, bool parallel, F&& f) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (!parallel || hw == 1 || n < 64) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  const int chunk = (n + static_cast<int>(hw) - 1) / static_cast<int>(hw);
  for (unsigned t = 0; t < hw; ++t) {
    const int lo = static_cast<int>(t) * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &f] {
      for (int i = lo; i < hi; ++i) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

// ---------------------------------------------------------------------------

const char* to_string(TriState t) {
  switch (t) {
    case TriState::Attained: return "attained";
    case TriState::NotAttained: return "not_attained";
    case TriState::Unresolved: return "unresolved";
  }
  return "unresolved";
}

Membrane::Membrane(Ring outer, std::vector<Ring> holes) {
  outer_ = clean_ring(std::move(outer));
  if (polygon_area(outer_) < 0) std::reverse(outer_.begin(), outer_.end());
  if (polygon_area(outer_) <= 0) throw InvalidRing("outer ring has zero area");
  for (auto& h : holes) {
    Ring r = clean_ring(std::move(h));
    if (polygon_area(r) > 0) std::reverse(r.begin(), r.end());
    if (polygon_area(r) >= 0) throw InvalidRing("hole has zero area");
    holes_.push_back(std::move(r));
  }
  check_simple(rings());
  for (std::size_t i = 0; i < holes_.size(); ++i) {
    if (!inside_ring(outer_, holes_[i].front())) throw InvalidRing("hole lies outside the outer ring");
    for (std::size_t j = 0; j < holes_.size(); ++j)
      if (i != j && inside_ring(holes_[j], holes_[i].front())) throw InvalidRing("holes must be disjoint");
  }
}

std::vector<const Ring*> Membrane::rings() const {
  std::vector<const Ring*> r{&outer_};
  for (const auto& h : holes_) r.push_back(&h);
  return r;
}

std::size_t Membrane::vertex_count() const {
  std::size_t n = outer_.size();
  for (const auto& h : holes_) n += h.size();
  return n;
}

double Membrane::scale() const {
  Vec2 lo = outer_.front(), hi = outer_.front();
  for (const auto& p : outer_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

bool Membrane::contains(const Vec2& p) const {
  for (const Ring* r : rings())
    if (on_ring(*r, p)) return false;
  if (!inside_ring(outer_, p)) return false;
  for (const auto& h : holes_)
    if (inside_ring(h, p)) return false;
  return true;
}

Membrane Membrane::rotated(double phi) const {
  const double c = std::cos(phi), s = std::sin(phi);
  auto rot = [&](const Ring& r) {
    Ring q;
    for (const auto& p : r) q.push_back(rotate_point(p, c, s));
    return q;
  };
  std::vector<Ring> hs;
  for (const auto& h : holes_) hs.push_back(rot(h));
  return Membrane(rot(outer_), std::move(hs));
}

Membrane Membrane::scaled(double s) const {
  if (!(s > 0)) throw InvalidParams("scale factor must be positive");
  auto sc = [&](const Ring& r) {
    Ring q;
    for (const auto& p : r) q.push_back(s * p);
    return q;
  };
  std::vector<Ring> hs;
  for (const auto& h : holes_) hs.push_back(sc(h));
  return Membrane(sc(outer_), std::move(hs));
}

Membrane Membrane::translated(const Vec2& t) const {
  auto tr = [&](const Ring& r) {
    Ring q;
    for (const auto& p : r) q.push_back(p + t);
    return q;
  };
  std::vector<Ring> hs;
  for (const auto& h : holes_) hs.push_back(tr(h));
  return Membrane(tr(outer_), std::move(hs));
}

double area(const Membrane& m) {
  double a = polygon_area(m.outer());
  for (const auto& h : m.holes()) a += polygon_area(h);  // holes are clockwise
  return a;
}

double diameter(const Membrane& m) {
  // Holes cannot increase the diameter; rotating calipers on the hull.
  const std::vector<Vec2> h = convex_hull(m.outer());
  const std::size_t n = h.size();
  if (n < 2) return 0.0;
  if (n == 2) return (h[0] - h[1]).norm();
  double best = 0.0;
  std::size_t j = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = h[i];
    const Vec2& b = h[(i + 1) % n];
    while (std::abs(orient(a, b, h[(j + 1) % n])) > std::abs(orient(a, b, h[j]))) j = (j + 1) % n;
    best = std::max({best, (h[j] - a).norm(), (h[j] - b).norm()});
  }
  return best;
}

bool is_convex(const Membrane& m) {
  if (!m.holes().empty()) return false;
  const Ring& r = m.outer();
  const double tol = 1e-14 * m.scale() * m.scale();
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (orient(r[i], r[(i + 1) % r.size()], r[(i + 2) % r.size()]) < -tol) return false;
  }
  return true;
}

SectionComponents vertical_components(const Membrane& m, double x) {
  // Boundary points and vertical boundary segments on the line split it into
  // open pieces; a piece belongs to the section when its midpoint is inside.
  std::vector<Interval> blocked;
  for (const Ring* r : m.rings()) {
    for (std::size_t i = 0; i < r->size(); ++i) {
      const Vec2& a = (*r)[i];
      const Vec2& b = (*r)[(i + 1) % r->size()];
      if (a.x() == x && b.x() == x) {
        blocked.push_back({std::min(a.y(), b.y()), std::max(a.y(), b.y())});
      } else if (a.x() == x) {
        blocked.push_back({a.y(), a.y()});
      } else if ((a.x() - x) * (b.x() - x) < 0) {
        const double y = a.y() + (x - a.x()) * (b.y() - a.y()) / (b.x() - a.x());
        blocked.push_back({y, y});
      }
    }
  }
  SectionComponents out{x, {}};
  if (blocked.empty()) return out;
  std::sort(blocked.begin(), blocked.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  double reach = blocked.front().hi;
  for (std::size_t i = 1; i < blocked.size(); ++i) {
    const double lo = blocked[i].lo;
    if (lo > reach) {
      const Vec2 mid(x, 0.5 * (reach + lo));
      if (m.contains(mid)) out.intervals.push_back({reach, lo});
    }
    reach = std::max(reach, blocked[i].hi);
  }
  return out;
}

Chord longest_chord(const Membrane& m, double theta) {
  const double psi = frame_angle(theta);
  return unrotate(longest_in_frame(build_sweep(rotated_rings(m, psi), m.scale())), psi);
}

double chord_width(const Membrane& m, double theta) { return longest_chord(m, theta).length; }

WidthProfile width_profile(const Membrane& m, int n_theta, const ProfileOptions& opts) {
  if (n_theta < 4) throw InvalidParams("width_profile needs at least four directions");
  WidthProfile prof;
  prof.thetas.resize(n_theta);
  prof.values.resize(n_theta);
  for (int k = 0; k < n_theta; ++k) prof.thetas[k] = kPi * k / n_theta;
  parallel_for(n_theta, opts.parallel, [&](int k) { prof.values[k] = chord_width(m, prof.thetas[k]); });

  const double vmax = *std::max_element(prof.values.begin(), prof.values.end());
  const double vmin = *std::min_element(prof.values.begin(), prof.values.end());
  prof.sup_width = vmax;
  const double step = kPi / n_theta;

  if (vmax - vmin <= opts.cluster_tol * vmax) {
    prof.continuum = true;
    const int k = static_cast<int>(std::max_element(prof.values.begin(), prof.values.end()) - prof.values.begin());
    if (opts.refine) {
      auto [t, v] = golden_maximize([&](double th) { return chord_width(m, th); }, prof.thetas[k] - step,
                                    prof.thetas[k] + step);
      prof.sup_width = std::max(prof.sup_width, v);
    }
    prof.attained = has_optimal_design(m, prof);
    return prof;
  }

  // Local maxima of the samples. A cheap scan of each neighbourhood comes
  // first; golden refinement is spent only on those near the best scan value.
  std::vector<WidthMaximum> cand;
  for (int k = 0; k < n_theta; ++k) {
    const double v = prof.values[k];
    const double prev = prof.values[(k + n_theta - 1) % n_theta];
    const double next = prof.values[(k + 1) % n_theta];
    if (!(v >= prev && v >= next)) continue;
    if (v < 0.5 * vmax) continue;
    cand.push_back({prof.thetas[k], v, {}});
  }
  if (opts.refine) {
    constexpr int kScan = 8;
    parallel_for(static_cast<int>(cand.size()), opts.parallel, [&](int i) {
      const double t0 = cand[i].theta;
      for (int j = -kScan; j <= kScan; ++j) {
        if (j == 0) continue;
        const double t = t0 + step * j / kScan;
        const double w = chord_width(m, t);
        if (w > cand[i].width) {
          cand[i].width = w;
          cand[i].theta = t;
        }
      }
    });
    double best = 0.0;
    for (const auto& c : cand) best = std::max(best, c.width);
    for (auto& c : cand) {
      if (c.width < 0.98 * best) continue;
      const double h = step / kScan;
      auto [tr, vr] = golden_maximize([&](double th) { return chord_width(m, th); }, c.theta - h, c.theta + h);
      if (vr > c.width) {
        c.theta = tr;
        c.width = vr;
      }
    }
  }
  for (auto& c : cand) c.theta = wrap_angle(c.theta);
  for (const auto& c : cand) prof.sup_width = std::max(prof.sup_width, c.width);
  std::sort(cand.begin(), cand.end(), [](const WidthMaximum& a, const WidthMaximum& b) { return a.theta < b.theta; });
  for (const auto& c : cand) {
    if (c.width < prof.sup_width * (1.0 - opts.cluster_tol)) continue;
    if (!prof.maxima.empty() && angle_distance(c.theta, prof.maxima.back().theta) <= 1e-6) {
      if (c.width > prof.maxima.back().width) prof.maxima.back() = c;
      continue;
    }
    prof.maxima.push_back(c);
  }
  if (prof.maxima.size() > 1 && angle_distance(prof.maxima.front().theta, prof.maxima.back().theta) <= 1e-6) {
    if (prof.maxima.back().width > prof.maxima.front().width) prof.maxima.front() = prof.maxima.back();
    prof.maxima.pop_back();
  }
  for (auto& mx : prof.maxima) mx.witness = longest_chord(m, mx.theta);
  prof.attained = has_optimal_design(m, prof);
  return prof;
}

std::optional<AttainmentWitness> attainment_check(const Membrane& m, double theta, const AttainmentOptions& opts) {
  return attainment_impl(m, theta, diameter(m), opts);
}

std::vector<double> attainment_directions(const Membrane& m, int n_theta, const AttainmentOptions& opts) {
  if (n_theta < 16) throw InvalidParams("attainment_multiplicity needs a denser direction grid");
  const double diam = diameter(m);
  const std::vector<double> cand = attainment_candidates(m, n_theta);
  std::vector<char> ok(cand.size());
  parallel_for(static_cast<int>(cand.size()), true,
               [&](int i) { ok[i] = attainment_impl(m, cand[i], diam, opts).has_value(); });
  // Attained directions form open θ-intervals (shearing a flat strip keeps it
  // flat); count cyclic runs of consecutive attained candidates.
  const std::size_t n = cand.size();
  std::vector<double> reps;
  if (std::all_of(ok.begin(), ok.end(), [](char c) { return c; })) return {cand.front()};
  std::size_t start = 0;
  while (ok[start]) ++start;  // a non-attained anchor
  for (std::size_t k = 1; k <= n; ++k) {
    const std::size_t i = (start + k) % n;
    const std::size_t prev = (start + k - 1) % n;
    if (ok[i] && !ok[prev]) reps.push_back(cand[i]);
  }
  return reps;
}

int attainment_multiplicity(const Membrane& m, int n_theta, const AttainmentOptions& opts) {
  return static_cast<int>(attainment_directions(m, n_theta, opts).size());
}

TriState has_optimal_design(const Membrane& m, const WidthProfile& profile) {
  const double lbar = profile.sup_width;
  const double scale = m.scale();
  const double snap_tol = 1e-7 * scale;

  std::vector<Vec2> verts;
  for (const Ring* r : m.rings()) verts.insert(verts.end(), r->begin(), r->end());
  auto nearest = [&](const Vec2& p) {
    double best = std::numeric_limits<double>::infinity();
    Vec2 q = p;
    for (const auto& v : verts) {
      const double d = (v - p).norm();
      if (d < best) {
        best = d;
        q = v;
      }
    }
    return std::make_pair(q, best);
  };

  std::vector<WidthMaximum> cands = profile.maxima;
  if (cands.empty()) {
    const auto it = std::max_element(profile.values.begin(), profile.values.end());
    const double step = kPi / static_cast<double>(profile.thetas.size());
    const double t0 = profile.thetas[it - profile.values.begin()];
    const auto [t, v] = golden_maximize([&](double th) { return chord_width(m, th); }, t0 - step, t0 + step);
    cands.push_back({wrap_angle(t), v, longest_chord(m, t)});
  }

  bool all_gapped = true;
  for (const auto& c : cands) {
    const Chord& w = c.witness.length > 0 ? c.witness : longest_chord(m, c.theta);
    const auto [va, da] = nearest(w.a);
    const auto [vb, db] = nearest(w.b);
    if (da <= snap_tol && db <= snap_tol && (va - vb).norm() > 0) {
      // The maximizing chords converge to a segment between two vertices:
      // the width function either reaches L̄ in that exact direction or not.
      const Vec2 d = vb - va;
      const double ts = wrap_angle(std::atan2(d.y(), d.x()));
      const double ls = chord_width(m, ts);
      if (ls >= lbar * (1.0 - 1e-9)) return TriState::Attained;
      if (ls >= lbar * (1.0 - 1e-6)) all_gapped = false;
      continue;
    }
    all_gapped = false;
    // One-sided neighbourhood test: parallel sections on one side of the
    // witness line are connected.
    const double psi = frame_angle(c.theta);
    const Membrane rot = m.rotated(psi);
    const Chord wf = longest_chord(rot, kPi / 2.0);
    if (wf.length < lbar * (1.0 - 1e-9)) continue;
    const double xs = wf.a.x();
    for (int side : {-1, 1}) {
      bool connected = true;
      for (double f : {1e-6, 1e-5, 1e-4}) {
        const auto sec = vertical_components(rot, xs + side * f * scale);
        if (sec.intervals.size() != 1) {
          connected = false;
          break;
        }
      }
      if (connected) return TriState::Attained;
    }
  }
  if (all_gapped) return TriState::NotAttained;
  return TriState::Unresolved;
}

TriState has_optimal_design(const Membrane& m) { return width_profile(m, 512).attained; }

}  // namespace anisospec
