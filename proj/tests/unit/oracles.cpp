#include "oracles.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace oracle {

namespace {

constexpr double kPi = 3.14159265358979323846;

double phi(double x, double p) { return std::copysign(std::pow(std::abs(x), p - 1.0), x); }

struct Fd {
  double p, dx;
  int n;  // intervals; unknowns are the n-1 interior nodes

  double quotient(const Eigen::VectorXd& u, Eigen::VectorXd* grad) const {
    const int m = n - 1;
    auto at = [&](int i) { return (i == 0 || i == n) ? 0.0 : u[i - 1]; };
    double e = 0.0, mass = 0.0;
    for (int j = 0; j < n; ++j) e += std::pow(std::abs((at(j + 1) - at(j)) / dx), p) * dx;
    for (int i = 0; i < m; ++i) mass += std::pow(std::abs(u[i]), p) * dx;
    const double q = e / mass;
    if (grad) {
      grad->resize(m);
      for (int i = 1; i <= m; ++i) {
        const double dl = (at(i) - at(i - 1)) / dx, dr = (at(i + 1) - at(i)) / dx;
        const double de = p * (phi(dl, p) - phi(dr, p));
        const double dm = p * dx * phi(at(i), p);
        (*grad)[i - 1] = (de - q * dm) / mass;
      }
    }
    return q;
  }
};

}  // namespace

double rayleigh_1d(double p, double length, int n) {
  const Fd fd{p, length / n, n};
  Eigen::VectorXd u(n - 1);
  for (int i = 1; i < n; ++i) u[i - 1] = std::sin(kPi * i / n);
  Eigen::VectorXd g;
  double q = fd.quotient(u, &g);

  // L-BFGS with backtracking.
  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> mem;
  int stalls = 0;
  for (int it = 0; it < 20000 && stalls < 5; ++it) {
    Eigen::VectorXd d = -g;
    std::vector<double> alpha(mem.size());
    for (int k = static_cast<int>(mem.size()) - 1; k >= 0; --k) {
      const auto& [s, y] = mem[k];
      alpha[k] = s.dot(d) / y.dot(s);
      d -= alpha[k] * y;
    }
    if (!mem.empty()) d *= mem.back().first.dot(mem.back().second) / mem.back().second.squaredNorm();
    for (std::size_t k = 0; k < mem.size(); ++k) {
      const auto& [s, y] = mem[k];
      const double beta = y.dot(d) / y.dot(s);
      d += (alpha[k] - beta) * s;
    }
    if (d.dot(g) >= 0) {
      d = -g;
      mem.clear();
    }
    double t = mem.empty() ? 1e-3 * u.norm() / std::max(g.norm(), 1e-300) : 1.0;
    Eigen::VectorXd un, gn;
    double qn = q;
    bool ok = false;
    for (int ls = 0; ls < 60; ++ls) {
      un = u + t * d;
      qn = fd.quotient(un, &gn);
      if (qn <= q + 1e-4 * t * g.dot(d)) {
        ok = true;
        break;
      }
      t *= 0.5;
    }
    if (!ok) break;
    const Eigen::VectorXd s = un - u, y = gn - g;
    if (y.dot(s) > 1e-300) {
      mem.emplace_back(s, y);
      if (mem.size() > 10) mem.pop_front();
    }
    stalls = (q - qn <= 1e-15 * q) ? stalls + 1 : 0;
    // The quotient is scale invariant; keep u near unit size.
    const double scale = un.norm();
    u = un / scale;
    g = gn * scale;
    for (auto& [sv, yv] : mem) {
      sv /= scale;
      yv *= scale;
    }
    q = qn;
  }
  return q;
}

double rayleigh_1d_extrapolated(double p, double length, int n) {
  const double a = rayleigh_1d(p, length, n), b = rayleigh_1d(p, length, 2 * n);
  return (4.0 * b - a) / 3.0;
}

double tridiagonal_p2(double length, int n) {
  const int m = n - 1;
  const double dx = length / n, diag = 2.0 / (dx * dx), off = -1.0 / (dx * dx);
  std::vector<double> x(m, 1.0), c(m), d(m);
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    // Thomas algorithm for A y = x.
    c[0] = off / diag;
    d[0] = x[0] / diag;
    for (int i = 1; i < m; ++i) {
      const double den = diag - off * c[i - 1];
      c[i] = off / den;
      d[i] = (x[i] - off * d[i - 1]) / den;
    }
    std::vector<double> y(m);
    y[m - 1] = d[m - 1];
    for (int i = m - 2; i >= 0; --i) y[i] = d[i] - c[i] * y[i + 1];
    double num = 0.0, den = 0.0;
    for (int i = 0; i < m; ++i) {
      num += x[i] * y[i];
      den += y[i] * y[i];
    }
    const double next = num / den;  // xᵀy/yᵀy with y = A⁻¹x
    double nrm = std::sqrt(den);
    for (int i = 0; i < m; ++i) x[i] = y[i] / nrm;
    if (it > 5 && std::abs(next - lambda) <= 1e-15 * next) return next;
    lambda = next;
  }
  return lambda;
}

double tridiagonal_p2_extrapolated(double length, int n) {
  const double a = tridiagonal_p2(length, n / 2), b = tridiagonal_p2(length, n);
  return (4.0 * b - a) / 3.0;
}

double radial_disk_p2(double radius, int n) {
  // A u = λ M u with M = diag(r_i); symmetrized as M^{-1/2} A M^{-1/2}.
  const double dr = radius / n;
  std::vector<double> r(n), diag(n), off(n, 0.0);
  for (int i = 0; i < n; ++i) r[i] = (i + 0.5) * dr;
  for (int i = 0; i < n; ++i) {
    const double left = i * dr;  // zero flux through the center
    const double right = (i + 1) * dr;
    diag[i] = (left + (i == n - 1 ? 2.0 * right : right)) / (dr * dr) / r[i];
    if (i + 1 < n) off[i] = -right / (dr * dr) / std::sqrt(r[i] * r[i + 1]);
  }
  std::vector<double> x(n, 1.0), c(n), d(n), y(n);
  double lambda = 0.0;
  for (int it = 0; it < 500; ++it) {
    c[0] = off[0] / diag[0];
    d[0] = x[0] / diag[0];
    for (int i = 1; i < n; ++i) {
      const double den = diag[i] - off[i - 1] * c[i - 1];
      c[i] = off[i] / den;
      d[i] = (x[i] - off[i - 1] * d[i - 1]) / den;
    }
    y[n - 1] = d[n - 1];
    for (int i = n - 2; i >= 0; --i) y[i] = d[i] - c[i] * y[i + 1];
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
      num += x[i] * y[i];
      den += y[i] * y[i];
    }
    const double next = num / den;
    const double nrm = std::sqrt(den);
    for (int i = 0; i < n; ++i) x[i] = y[i] / nrm;
    if (it > 5 && std::abs(next - lambda) <= 1e-15 * next) return next;
    lambda = next;
  }
  return lambda;
}

namespace {

bool inside(const anisospec::Membrane& m, const anisospec::Vec2& q) {
  bool in = false;
  for (const auto* ring : m.rings())
    for (std::size_t i = 0, j = ring->size() - 1; i < ring->size(); j = i++) {
      const auto& a = (*ring)[i];
      const auto& b = (*ring)[j];
      if ((a.y() > q.y()) != (b.y() > q.y()) && q.x() < (b.x() - a.x()) * (q.y() - a.y()) / (b.y() - a.y()) + a.x())
        in = !in;
    }
  return in;
}

}  // namespace

double chord_width(const anisospec::Membrane& m, double theta, int offsets) {
  using anisospec::Vec2;
  const Vec2 d(std::cos(theta), std::sin(theta)), nrm(-std::sin(theta), std::cos(theta));
  std::vector<double> levels;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto* ring : m.rings())
    for (const auto& v : *ring) {
      levels.push_back(nrm.dot(v));
      lo = std::min(lo, levels.back());
      hi = std::max(hi, levels.back());
    }
  for (int k = 1; k < offsets; ++k) levels.push_back(lo + (hi - lo) * k / offsets);
  double best = 0.0;
  for (double s : levels) {
    std::vector<double> ts;
    for (const auto* ring : m.rings())
      for (std::size_t i = 0; i < ring->size(); ++i) {
        const Vec2 a = (*ring)[i], b = (*ring)[(i + 1) % ring->size()];
        const double fa = nrm.dot(a) - s, fb = nrm.dot(b) - s;
        if (fa == 0.0) ts.push_back(d.dot(a));
        if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0)) {
          const Vec2 q = a + fa / (fa - fb) * (b - a);
          ts.push_back(d.dot(q));
        }
      }
    std::sort(ts.begin(), ts.end());
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
      if (ts[i + 1] - ts[i] <= best) continue;
      const Vec2 mid = s * nrm + 0.5 * (ts[i] + ts[i + 1]) * d;
      if (inside(m, mid)) best = ts[i + 1] - ts[i];
    }
  }
  return best;
}

double diameter(const anisospec::Membrane& m) {
  double best = 0.0;
  const auto& r = m.outer();
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = i + 1; j < r.size(); ++j) best = std::max(best, (r[i] - r[j]).norm());
  return best;
}

std::pair<double, double> circle_min(const anisospec::Anisotropy& h, int samples) {
  double best = std::numeric_limits<double>::infinity(), at = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double t = kPi * k / samples;
    const double v = h.eval({std::cos(t), std::sin(t)});
    if (v < best) {
      best = v;
      at = t;
    }
  }
  return {best, at};
}

}  // namespace oracle
