#include "anisospec/mesh.hpp"

#include "anisospec/errors.hpp"
#include "anisospec/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace anisospec {

namespace {

using LD = long double;

LD orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (LD(b.x()) - a.x()) * (LD(c.y()) - a.y()) - (LD(b.y()) - a.y()) * (LD(c.x()) - a.x());
}

// > 0 when d lies inside the circumcircle of the counterclockwise a, b, c.
LD incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const LD adx = LD(a.x()) - d.x(), ady = LD(a.y()) - d.y();
  const LD bdx = LD(b.x()) - d.x(), bdy = LD(b.y()) - d.y();
  const LD cdx = LD(c.x()) - d.x(), cdy = LD(c.y()) - d.y();
  const LD ad = adx * adx + ady * ady, bd = bdx * bdx + bdy * bdy, cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

struct Tri {
  int v[3];
  int n[3];  // n[i] is across the edge opposite v[i]
  bool alive;
};

class Delaunay {
 public:
  explicit Delaunay(const std::vector<Vec2>& pts) {
    Vec2 lo = pts.front(), hi = pts.front();
    for (const auto& p : pts) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const Vec2 c = 0.5 * (lo + hi);
    const double r = 20.0 * std::max((hi - lo).norm(), 1e-9);
    p_.push_back(c + Vec2(-r, -r));
    p_.push_back(c + Vec2(r, -r));
    p_.push_back(c + Vec2(0, r));
    p_.insert(p_.end(), pts.begin(), pts.end());
    tris_.push_back({{0, 1, 2}, {-1, -1, -1}, true});
    mark_.assign(1, 0);

    // Insert along a serpentine walk over grid cells for short point location walks.
    std::vector<int> order(pts.size());
    const double cell = std::max((hi - lo).maxCoeff() / std::max(1.0, std::sqrt(pts.size() / 4.0)), 1e-12);
    std::vector<std::pair<long long, int>> key;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const long long cx = static_cast<long long>((pts[i].x() - lo.x()) / cell);
      long long cy = static_cast<long long>((pts[i].y() - lo.y()) / cell);
      if (cx % 2) cy = 1000000 - cy;
      key.push_back({cx * 2000000 + cy, static_cast<int>(i)});
    }
    std::sort(key.begin(), key.end());
    for (std::size_t i = 0; i < key.size(); ++i) order[i] = key[i].second;
    for (int i : order) insert(i + 3);
  }

  // Triangles not touching the super vertices, with indices into the input.
  std::vector<std::array<int, 3>> triangles() const {
    std::vector<std::array<int, 3>> out;
    for (const auto& t : tris_) {
      if (!t.alive || t.v[0] < 3 || t.v[1] < 3 || t.v[2] < 3) continue;
      out.push_back({t.v[0] - 3, t.v[1] - 3, t.v[2] - 3});
    }
    return out;
  }

 private:
  bool inside_circle(int t, const Vec2& p) const {
    const Tri& tr = tris_[t];
    return incircle(p_[tr.v[0]], p_[tr.v[1]], p_[tr.v[2]], p) > 0;
  }

  int locate(const Vec2& p) {
    int t = last_;
    if (t < 0 || !tris_[t].alive) t = static_cast<int>(tris_.size()) - 1;
    while (!tris_[t].alive) --t;
    for (std::size_t steps = 0; steps < 4 * tris_.size() + 16; ++steps) {
      const Tri& tr = tris_[t];
      int next = -1;
      for (int k = 0; k < 3; ++k) {
        const int i = (k + static_cast<int>(steps)) % 3;
        if (orient(p_[tr.v[(i + 1) % 3]], p_[tr.v[(i + 2) % 3]], p) < 0) {
          next = tr.n[i];
          break;
        }
      }
      if (next < 0) return t;
      t = next;
    }
    for (std::size_t i = 0; i < tris_.size(); ++i) {
      const Tri& tr = tris_[i];
      if (!tr.alive) continue;
      if (orient(p_[tr.v[0]], p_[tr.v[1]], p) >= 0 && orient(p_[tr.v[1]], p_[tr.v[2]], p) >= 0 &&
          orient(p_[tr.v[2]], p_[tr.v[0]], p) >= 0)
        return static_cast<int>(i);
    }
    throw MeshFailure("point location failed");
  }

  void insert(int pi) {
    const Vec2& p = p_[pi];
    const int t0 = locate(p);
    ++stamp_;
    std::vector<int> cav{t0};
    mark_[t0] = stamp_;
    for (std::size_t k = 0; k < cav.size(); ++k) {
      for (int nb : tris_[cav[k]].n) {
        if (nb < 0 || mark_[nb] == stamp_) continue;
        if (inside_circle(nb, p)) {
          mark_[nb] = stamp_;
          cav.push_back(nb);
        }
      }
    }
    // Keep the cavity star-shaped with respect to p.
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t k = 0; k < cav.size() && !changed; ++k) {
        const int t = cav[k];
        if (t == t0) continue;
        const Tri& tr = tris_[t];
        for (int i = 0; i < 3; ++i) {
          const int nb = tr.n[i];
          if (nb >= 0 && mark_[nb] == stamp_) continue;
          if (orient(p_[tr.v[(i + 1) % 3]], p_[tr.v[(i + 2) % 3]], p) <= 0) {
            mark_[t] = 0;
            cav.erase(cav.begin() + static_cast<long>(k));
            changed = true;
            break;
          }
        }
      }
    }
    struct NewTri {
      int a, b, id;
    };
    std::vector<NewTri> made;
    for (int t : cav) {
      const Tri tr = tris_[t];
      for (int i = 0; i < 3; ++i) {
        const int nb = tr.n[i];
        if (nb >= 0 && mark_[nb] == stamp_) continue;
        const int a = tr.v[(i + 1) % 3], b = tr.v[(i + 2) % 3];
        const int id = static_cast<int>(tris_.size());
        tris_.push_back({{a, b, pi}, {-1, -1, nb}, true});
        mark_.push_back(0);
        if (nb >= 0) {
          for (int j = 0; j < 3; ++j)
            if (tris_[nb].n[j] == t) tris_[nb].n[j] = id;
        }
        made.push_back({a, b, id});
      }
    }
    for (int t : cav) tris_[t].alive = false;
    for (const auto& x : made) {
      for (const auto& y : made) {
        if (y.a == x.b) tris_[x.id].n[0] = y.id;  // edge (b, p)
        if (y.b == x.a) tris_[x.id].n[1] = y.id;  // edge (p, a)
      }
    }
    last_ = made.back().id;
  }

  std::vector<Vec2> p_;
  std::vector<Tri> tris_;
  std::vector<int> mark_;
  int stamp_ = 0;
  int last_ = 0;
};

struct RingSample {
  std::vector<Vec2> pts;
  std::vector<char> sharp;
};

// Resamples a ring at spacing about h. Vertices turning by more than 15° are
// kept as anchors.
RingSample resample(const Ring& r, double h) {
  const std::size_t n = r.size();
  std::vector<std::size_t> anchors;
  std::vector<double> interior(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 d0 = r[i] - r[(i + n - 1) % n];
    const Vec2 d1 = r[(i + 1) % n] - r[i];
    const double turn = std::atan2(d0.x() * d1.y() - d0.y() * d1.x(), d0.dot(d1));
    interior[i] = kPi - turn;
    if (std::abs(turn) > 15.0 * kPi / 180.0) anchors.push_back(i);
  }
  const bool smooth = anchors.empty();
  if (smooth) anchors.push_back(0);
  RingSample out;
  for (std::size_t k = 0; k < anchors.size(); ++k) {
    const std::size_t i0 = anchors[k];
    const std::size_t i1 = anchors[(k + 1) % anchors.size()];
    std::vector<Vec2> poly{r[i0]};
    for (std::size_t i = (i0 + 1) % n;; i = (i + 1) % n) {
      poly.push_back(r[i]);
      if (i == i1) break;
    }
    std::vector<double> cum{0.0};
    for (std::size_t i = 1; i < poly.size(); ++i) cum.push_back(cum.back() + (poly[i] - poly[i - 1]).norm());
    const double len = cum.back();
    int segs = std::max(1, static_cast<int>(std::lround(len / h)));
    if (smooth) segs = std::max(segs, 6);
    out.pts.push_back(r[i0]);
    out.sharp.push_back(!smooth && interior[i0] < kPi / 4.0);
    std::size_t j = 1;
    for (int s = 1; s < segs; ++s) {
      const double target = len * s / segs;
      while (j + 1 < cum.size() && cum[j] < target) ++j;
      const double t = (target - cum[j - 1]) / std::max(cum[j] - cum[j - 1], 1e-300);
      out.pts.push_back(poly[j - 1] + t * (poly[j] - poly[j - 1]));
      out.sharp.push_back(0);
    }
  }
  return out;
}

bool inside_rings(const std::vector<RingSample>& rings, const Vec2& p) {
  bool in = false;
  for (const auto& rs : rings) {
    const auto& r = rs.pts;
    for (std::size_t i = 0, j = r.size() - 1; i < r.size(); j = i++) {
      if ((r[i].y() > p.y()) != (r[j].y() > p.y())) {
        const double x = r[i].x() + (p.y() - r[i].y()) * (r[j].x() - r[i].x()) / (r[j].y() - r[i].y());
        if (p.x() < x) in = !in;
      }
    }
  }
  return in;
}

double seg_dist(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  const double t = std::clamp((p - a).dot(d) / std::max(d.squaredNorm(), 1e-300), 0.0, 1.0);
  return (p - a - t * d).norm();
}

class SegmentHash {
 public:
  SegmentHash(const std::vector<RingSample>& rings, double cell) : cell_(cell) {
    for (const auto& rs : rings) {
      const auto& r = rs.pts;
      for (std::size_t i = 0; i < r.size(); ++i) {
        const Vec2& a = r[i];
        const Vec2& b = r[(i + 1) % r.size()];
        segs_.push_back({a, b});
        const auto [x0, y0] = key(a.cwiseMin(b));
        const auto [x1, y1] = key(a.cwiseMax(b));
        for (long long x = x0; x <= x1; ++x)
          for (long long y = y0; y <= y1; ++y) grid_[pack(x, y)].push_back(static_cast<int>(segs_.size() - 1));
      }
    }
  }

  double distance(const Vec2& p) const {
    const auto [cx, cy] = key(p);
    double best = std::numeric_limits<double>::infinity();
    for (long long x = cx - 1; x <= cx + 1; ++x)
      for (long long y = cy - 1; y <= cy + 1; ++y) {
        const auto it = grid_.find(pack(x, y));
        if (it == grid_.end()) continue;
        for (int s : it->second) best = std::min(best, seg_dist(p, segs_[s].first, segs_[s].second));
      }
    return best;
  }

 private:
  std::pair<long long, long long> key(const Vec2& p) const {
    return {static_cast<long long>(std::floor(p.x() / cell_)), static_cast<long long>(std::floor(p.y() / cell_))};
  }
  static long long pack(long long x, long long y) { return (x + (1LL << 30)) * (1LL << 31) + (y + (1LL << 30)); }

  double cell_;
  std::vector<std::pair<Vec2, Vec2>> segs_;
  std::unordered_map<long long, std::vector<int>> grid_;
};

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double tri_min_angle(const Vec2& a, const Vec2& b, const Vec2& c) {
  auto ang = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    const Vec2 u = q - p, v = r - p;
    return std::atan2(std::abs(u.x() * v.y() - u.y() * v.x()), u.dot(v));
  };
  return std::min({ang(a, b, c), ang(b, c, a), ang(c, a, b)}) * 180.0 / kPi;
}

}  // namespace

std::size_t Mesh::interior_count() const {
  return static_cast<std::size_t>(std::count(boundary.begin(), boundary.end(), 0));
}

double Mesh::triangle_area(std::size_t t) const {
  const auto& tr = triangles[t];
  const Vec2 u = vertices[tr[1]] - vertices[tr[0]], v = vertices[tr[2]] - vertices[tr[0]];
  return 0.5 * (u.x() * v.y() - u.y() * v.x());
}

double Mesh::min_angle_deg() const {
  double best = 180.0;
  for (const auto& t : triangles) best = std::min(best, tri_min_angle(vertices[t[0]], vertices[t[1]], vertices[t[2]]));
  return best;
}

double Mesh::min_angle_deg_away_from_tips() const {
  double best = 180.0;
  for (const auto& t : triangles) {
    if (sharp[t[0]] || sharp[t[1]] || sharp[t[2]]) continue;
    if (boundary[t[0]] && boundary[t[1]] && boundary[t[2]]) continue;
    best = std::min(best, tri_min_angle(vertices[t[0]], vertices[t[1]], vertices[t[2]]));
  }
  return best;
}

std::size_t Mesh::edge_count() const {
  std::unordered_set<std::uint64_t> edges;
  for (const auto& t : triangles)
    for (int i = 0; i < 3; ++i) edges.insert(edge_key(t[i], t[(i + 1) % 3]));
  return edges.size();
}

Mesh triangulate(const Membrane& m, double h) {
  const double diag = m.scale();
  if (!(h > 0) || h >= diag / 8.0) throw InvalidParams("mesh size h must be below the bounding-box diagonal / 8");

  std::vector<RingSample> rings;
  for (const Ring* r : m.rings()) rings.push_back(resample(*r, h));

  Vec2 lo = m.outer().front(), hi = lo;
  for (const auto& p : m.outer()) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double w = hi.x() - lo.x(), ht = hi.y() - lo.y();
  const double dx = w / std::max(1.0, std::round(w / h));
  const double dy = ht / std::max(1.0, std::round(ht / (h * std::sqrt(3.0) / 2.0)));
  std::vector<Vec2> lattice;
  {
    const SegmentHash hash(rings, h);
    const int nx = static_cast<int>(std::round(w / dx)), ny = static_cast<int>(std::round(ht / dy));
    for (int j = 1; j < ny; ++j) {
      const double shift = (j % 2) ? 0.5 * dx : 0.0;
      for (int i = 0; i <= nx; ++i) {
        const Vec2 q(lo.x() + i * dx + shift, lo.y() + j * dy);
        if (q.x() <= lo.x() || q.x() >= hi.x()) continue;
        if (!inside_rings(rings, q)) continue;
        if (hash.distance(q) < 0.6 * h) continue;
        lattice.push_back(q);
      }
    }
  }

  for (int round = 0; round < 20; ++round) {
    std::vector<Vec2> pts;
    std::vector<int> ring_start;
    for (const auto& rs : rings) {
      ring_start.push_back(static_cast<int>(pts.size()));
      pts.insert(pts.end(), rs.pts.begin(), rs.pts.end());
    }
    const int nb = static_cast<int>(pts.size());
    pts.insert(pts.end(), lattice.begin(), lattice.end());
    const auto tris = Delaunay(pts).triangles();

    std::unordered_set<std::uint64_t> edges;
    for (const auto& t : tris)
      for (int i = 0; i < 3; ++i) edges.insert(edge_key(t[i], t[(i + 1) % 3]));

    bool missing = false;
    std::vector<RingSample> next_rings;
    std::vector<Vec2> encroach_c;
    std::vector<double> encroach_r;
    for (std::size_t r = 0; r < rings.size(); ++r) {
      const auto& rs = rings[r];
      RingSample out;
      const int n = static_cast<int>(rs.pts.size());
      for (int i = 0; i < n; ++i) {
        out.pts.push_back(rs.pts[i]);
        out.sharp.push_back(rs.sharp[i]);
        const int a = ring_start[r] + i, b = ring_start[r] + (i + 1) % n;
        if (!edges.count(edge_key(a, b))) {
          missing = true;
          const Vec2 mid = 0.5 * (rs.pts[i] + rs.pts[(i + 1) % n]);
          out.pts.push_back(mid);
          out.sharp.push_back(0);
          encroach_c.push_back(mid);
          encroach_r.push_back(0.5 * (rs.pts[(i + 1) % n] - rs.pts[i]).norm());
        }
      }
      next_rings.push_back(std::move(out));
    }
    if (missing) {
      rings = std::move(next_rings);
      std::vector<Vec2> kept;
      for (const auto& q : lattice) {
        bool bad = false;
        for (std::size_t k = 0; k < encroach_c.size() && !bad; ++k)
          bad = (q - encroach_c[k]).norm() < 1.0001 * encroach_r[k];
        if (!bad) kept.push_back(q);
      }
      lattice = std::move(kept);
      continue;
    }

    Mesh mesh;
    mesh.h = h;
    std::vector<int> remap(pts.size(), -1);
    for (const auto& t : tris) {
      const Vec2 c = (pts[t[0]] + pts[t[1]] + pts[t[2]]) / 3.0;
      if (!inside_rings(rings, c)) continue;
      std::array<int, 3> nt{};
      for (int i = 0; i < 3; ++i) {
        if (remap[t[i]] < 0) {
          remap[t[i]] = static_cast<int>(mesh.vertices.size());
          mesh.vertices.push_back(pts[t[i]]);
          mesh.boundary.push_back(t[i] < nb);
          mesh.sharp.push_back(0);
        }
        nt[i] = remap[t[i]];
      }
      mesh.triangles.push_back(nt);
    }
    for (std::size_t r = 0; r < rings.size(); ++r)
      for (std::size_t i = 0; i < rings[r].pts.size(); ++i) {
        const int g = remap[ring_start[r] + static_cast<int>(i)];
        if (g >= 0) mesh.sharp[g] = rings[r].sharp[i];
      }
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
      if (mesh.triangle_area(t) <= 1e-12 * h * h) throw MeshFailure("degenerate triangle near a feature thinner than h");
    if (mesh.interior_count() == 0) throw MeshFailure("no interior vertices; the membrane is thinner than h");
    return mesh;
  }
  throw MeshFailure("boundary recovery did not converge; the membrane has a slit thinner than h");
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  os.precision(17);
  os << "anisospec-mesh 1\n" << mesh.vertices.size() << ' ' << mesh.triangles.size() << ' ' << mesh.h << '\n';
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    os << mesh.vertices[i].x() << ' ' << mesh.vertices[i].y() << ' ' << int(mesh.boundary[i]) << '\n';
  for (const auto& t : mesh.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

Mesh read_mesh(std::istream& is) {
  std::string tag;
  int version = 0;
  if (!(is >> tag >> version) || tag != "anisospec-mesh" || version != 1) throw ParseError("not an anisospec mesh file");
  std::size_t nv = 0, nt = 0;
  Mesh mesh;
  if (!(is >> nv >> nt >> mesh.h)) throw ParseError("bad mesh header");
  mesh.vertices.resize(nv);
  mesh.boundary.resize(nv);
  mesh.sharp.assign(nv, 0);
  for (std::size_t i = 0; i < nv; ++i) {
    int b = 0;
    if (!(is >> mesh.vertices[i].x() >> mesh.vertices[i].y() >> b)) throw ParseError("bad mesh vertex");
    mesh.boundary[i] = static_cast<char>(b != 0);
  }
  mesh.triangles.resize(nt);
  for (auto& t : mesh.triangles) {
    if (!(is >> t[0] >> t[1] >> t[2])) throw ParseError("bad mesh triangle");
    for (int v : t)
      if (v < 0 || static_cast<std::size_t>(v) >= nv) throw ParseError("mesh triangle index out of range");
  }
  return mesh;
}

}  // namespace anisospec
