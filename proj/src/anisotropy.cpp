#include "anisospec/anisotropy.hpp"

#include "anisospec/errors.hpp"
#include "anisospec/numerics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace anisospec {

namespace {

Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

Mat2 rotation(double phi) {
  Mat2 r;
  r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return r;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidAnisotropy(what);
}

double weighted_lq_eval(double q, double wx, double wy, const Vec2& xi) {
  const double ax = std::abs(xi.x());
  const double ay = std::abs(xi.y());
  const double s = std::max(ax, ay);
  if (s == 0.0) return 0.0;
  const double v = wx * std::pow(ax / s, q) + wy * std::pow(ay / s, q);
  return s * std::pow(v, 1.0 / q);
}

// max over the unit circle of (wx|cos|^q + wy|sin|^q)^{1/q}
double weighted_lq_sup(double q, double wx, double wy) {
  if (q >= 2.0 || wx == 0.0 || wy == 0.0) return std::pow(std::max(wx, wy), 1.0 / q);
  // Interior stationary point of wx t^a + wy (1-t)^a, a = q/2 < 1, t = cos².
  const double a = q / 2.0;
  const double ratio = std::pow(wx / wy, 1.0 / (1.0 - a));
  const double t = ratio / (1.0 + ratio);
  const double v = wx * std::pow(t, a) + wy * std::pow(1.0 - t, a);
  return std::pow(v, 1.0 / q);
}

double closed_sup(const Anisotropy& h) {
  const auto& n = h.node();
  switch (n.kind) {
    case Anisotropy::Kind::Euclidean: return 1.0;
    case Anisotropy::Kind::Directional: return n.a;
    case Anisotropy::Kind::Quadratic: {
      Eigen::SelfAdjointEigenSolver<Mat2> es(n.m);
      return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    }
    case Anisotropy::Kind::WeightedLq: return weighted_lq_sup(n.a, n.b, n.c);
    case Anisotropy::Kind::Scaled: return n.a * closed_sup(n.children.front());
    case Anisotropy::Kind::Rotated: return closed_sup(n.children.front());
    case Anisotropy::Kind::MaxOf: {
      double m = 0.0;
      for (const auto& c : n.children) m = std::max(m, closed_sup(c));
      return m;
    }
    case Anisotropy::Kind::Zero: return 0.0;
    case Anisotropy::Kind::LpSum: break;
  }
  return circle_max(h).value;
}

template <class F>
CircleExtremum circle_extremum(F&& f) {
  // Dense sampling on [0, 2π) followed by golden-section refinement of the
  // best few local extrema; h(θ) is piecewise smooth for every grammar node.
  const int n = kCircleSamples;
  const double step = 2.0 * kPi / n;
  std::vector<double> vals(n);
  for (int k = 0; k < n; ++k) vals[k] = f(k * step);
  std::vector<int> peaks;
  for (int k = 0; k < n; ++k) {
    const double prev = vals[(k + n - 1) % n];
    const double next = vals[(k + 1) % n];
    if (vals[k] >= prev && vals[k] >= next) peaks.push_back(k);
  }
  std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return vals[a] > vals[b]; });
  if (peaks.size() > 6) peaks.resize(6);
  CircleExtremum best{vals[peaks.empty() ? 0 : peaks.front()], (peaks.empty() ? 0 : peaks.front()) * step};
  for (int k : peaks) {
    auto [x, v] = golden_maximize(f, (k - 1) * step, (k + 1) * step, 120);
    if (v > best.value) best = {v, wrap_angle(x, 2.0 * kPi)};
  }
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// construction

Anisotropy Anisotropy::euclidean() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Euclidean;
  return Anisotropy(n);
}

Anisotropy Anisotropy::directional(double c, double theta) {
  require(std::isfinite(c) && c >= 0.0, "directional scale must be finite and nonnegative");
  require(std::isfinite(theta), "directional angle must be finite");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Directional;
  n->a = c;
  n->b = wrap_angle(theta);
  return Anisotropy(n);
}

Anisotropy Anisotropy::quadratic(const Mat2& a) {
  require(a.allFinite(), "quadratic matrix must be finite");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  require(std::abs(a(0, 1) - a(1, 0)) <= 1e-12 * scale, "quadratic matrix must be symmetric");
  Mat2 s = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Mat2> es(s);
  require(es.eigenvalues().minCoeff() >= -1e-12 * scale, "quadratic matrix must be positive-semidefinite");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Quadratic;
  n->m = s;
  return Anisotropy(n);
}

Anisotropy Anisotropy::weighted_lq(double q, double wx, double wy) {
  require(std::isfinite(q) && q >= 1.0, "weighted_lq exponent must be >= 1");
  require(std::isfinite(wx) && std::isfinite(wy) && wx >= 0.0 && wy >= 0.0,
          "weighted_lq weights must be nonnegative");
  auto n = std::make_shared<Node>();
  n->kind = Kind::WeightedLq;
  n->a = q;
  n->b = wx;
  n->c = wy;
  return Anisotropy(n);
}

Anisotropy Anisotropy::scaled(double alpha, Anisotropy child) {
  require(std::isfinite(alpha) && alpha >= 0.0, "scale factor must be nonnegative");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Scaled;
  n->a = alpha;
  n->children.push_back(std::move(child));
  return Anisotropy(n);
}

Anisotropy Anisotropy::rotated(double phi, Anisotropy child) {
  require(std::isfinite(phi), "rotation angle must be finite");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Rotated;
  n->a = phi;
  n->m = rotation(phi);
  n->children.push_back(std::move(child));
  return Anisotropy(n);
}

Anisotropy Anisotropy::max_of(std::vector<Anisotropy> children) {
  require(!children.empty(), "max_of needs at least one child");
  auto n = std::make_shared<Node>();
  n->kind = Kind::MaxOf;
  n->children = std::move(children);
  return Anisotropy(n);
}

Anisotropy Anisotropy::lp_sum(double p, std::vector<Anisotropy> children) {
  require(std::isfinite(p) && p >= 1.0, "lp_sum exponent must be >= 1");
  require(!children.empty(), "lp_sum needs at least one child");
  auto n = std::make_shared<Node>();
  n->kind = Kind::LpSum;
  n->a = p;
  n->children = std::move(children);
  return Anisotropy(n);
}

Anisotropy Anisotropy::zero() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Zero;
  return Anisotropy(n);
}

Anisotropy::Kind Anisotropy::kind() const { return node_->kind; }

// ---------------------------------------------------------------------------
// evaluation

double Anisotropy::eval(const Vec2& xi) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Euclidean: return xi.norm();
    case Kind::Directional: return n.a * std::abs(std::cos(n.b) * xi.x() + std::sin(n.b) * xi.y());
    case Kind::Quadratic: return std::sqrt(std::abs(xi.dot(n.m * xi)));
    case Kind::WeightedLq: return weighted_lq_eval(n.a, n.b, n.c, xi);
    case Kind::Scaled: return n.a * n.children.front().eval(xi);
    case Kind::Rotated: return n.children.front().eval(n.m * xi);
    case Kind::MaxOf: {
      double m = 0.0;
      for (const auto& c : n.children) m = std::max(m, c.eval(xi));
      return m;
    }
    case Kind::LpSum: {
      double s = 0.0;
      double big = 0.0;
      std::vector<double> v;
      v.reserve(n.children.size());
      for (const auto& c : n.children) {
        v.push_back(c.eval(xi));
        big = std::max(big, v.back());
      }
      if (big == 0.0) return 0.0;
      for (double x : v) s += std::pow(x / big, n.a);
      return big * std::pow(s, 1.0 / n.a);
    }
    case Kind::Zero: return 0.0;
  }
  return 0.0;
}

Vec2 Anisotropy::gradient(const Vec2& xi) const {
  const Node& n = *node_;
  if (xi.x() == 0.0 && xi.y() == 0.0) return Vec2::Zero();
  switch (n.kind) {
    case Kind::Euclidean: return xi / xi.norm();
    case Kind::Directional: {
      const Vec2 e = unit(n.b);
      const double s = e.dot(xi);
      return n.a * (s > 0 ? 1.0 : (s < 0 ? -1.0 : 0.0)) * e;
    }
    case Kind::Quadratic: {
      const double v = eval(xi);
      if (v == 0.0) return Vec2::Zero();
      return n.m * xi / v;
    }
    case Kind::WeightedLq: {
      const double v = eval(xi);
      if (v == 0.0) return Vec2::Zero();
      const double q = n.a;
      auto part = [&](double w, double t) {
        if (t == 0.0) return 0.0;
        return w * std::pow(std::abs(t) / v, q - 1.0) * (t > 0 ? 1.0 : -1.0);
      };
      return {part(n.b, xi.x()), part(n.c, xi.y())};
    }
    case Kind::Scaled: return n.a * n.children.front().gradient(xi);
    case Kind::Rotated: return n.m.transpose() * n.children.front().gradient(n.m * xi);
    case Kind::MaxOf: {
      std::size_t arg = 0;
      double m = -1.0;
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        const double v = n.children[i].eval(xi);
        if (v > m) { m = v; arg = i; }
      }
      return n.children[arg].gradient(xi);
    }
    case Kind::LpSum: {
      const double v = eval(xi);
      if (v == 0.0) return Vec2::Zero();
      Vec2 g = Vec2::Zero();
      for (const auto& c : n.children) {
        const double cv = c.eval(xi);
        if (cv == 0.0) continue;
        g += std::pow(cv / v, n.a - 1.0) * c.gradient(xi);
      }
      return g;
    }
    case Kind::Zero: return Vec2::Zero();
  }
  return Vec2::Zero();
}

std::optional<Mat2> Anisotropy::quadratic_form() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Euclidean: return Mat2::Identity();
    case Kind::Directional: {
      const Vec2 e = unit(n.b);
      return Mat2(n.a * n.a * e * e.transpose());
    }
    case Kind::Quadratic: return n.m;
    case Kind::WeightedLq:
      if (n.a == 2.0) return Mat2(Eigen::Vector2d(n.b, n.c).asDiagonal());
      if (n.b == 0.0 || n.c == 0.0) {
        // single-axis seminorm: w^{1/q}|ξᵢ|
        const double w = std::pow(n.b == 0.0 ? n.c : n.b, 2.0 / n.a);
        return n.b == 0.0 ? Mat2(Eigen::Vector2d(0.0, w).asDiagonal()) : Mat2(Eigen::Vector2d(w, 0.0).asDiagonal());
      }
      return std::nullopt;
    case Kind::Scaled: {
      auto c = n.children.front().quadratic_form();
      if (!c) return std::nullopt;
      return Mat2(n.a * n.a * *c);
    }
    case Kind::Rotated: {
      auto c = n.children.front().quadratic_form();
      if (!c) return std::nullopt;
      return Mat2(n.m.transpose() * *c * n.m);
    }
    case Kind::LpSum: {
      if (n.a != 2.0) return std::nullopt;
      Mat2 s = Mat2::Zero();
      for (const auto& c : n.children) {
        auto q = c.quadratic_form();
        if (!q) return std::nullopt;
        s += *q;
      }
      return s;
    }
    case Kind::MaxOf:
      if (n.children.size() == 1) return n.children.front().quadratic_form();
      return std::nullopt;
    case Kind::Zero: return Mat2::Zero();
  }
  return std::nullopt;
}

bool Anisotropy::has_closed_form_norm() const {
  const Node& n = *node_;
  if (n.kind == Kind::LpSum) return false;
  return std::all_of(n.children.begin(), n.children.end(),
                     [](const Anisotropy& c) { return c.has_closed_form_norm(); });
}

bool Anisotropy::is_smooth_positive() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Euclidean: return true;
    case Kind::Quadratic: {
      Eigen::SelfAdjointEigenSolver<Mat2> es(n.m);
      return es.eigenvalues().minCoeff() > 0.0;
    }
    case Kind::WeightedLq: return n.a > 1.0 && n.b > 0.0 && n.c > 0.0;
    case Kind::Scaled: return n.a > 0.0 && n.children.front().is_smooth_positive();
    case Kind::Rotated: return n.children.front().is_smooth_positive();
    default: return false;
  }
}

std::string Anisotropy::describe() const {
  const Node& n = *node_;
  std::ostringstream os;
  os.precision(6);
  auto list = [&](const char* name) {
    os << name << "(";
    for (std::size_t i = 0; i < n.children.size(); ++i) os << (i ? ", " : "") << n.children[i].describe();
    os << ")";
  };
  switch (n.kind) {
    case Kind::Euclidean: os << "euclidean"; break;
    case Kind::Directional: os << "directional(c=" << n.a << ", theta=" << n.b << ")"; break;
    case Kind::Quadratic:
      os << "quadratic([[" << n.m(0, 0) << ", " << n.m(0, 1) << "], [" << n.m(1, 0) << ", " << n.m(1, 1) << "]])";
      break;
    case Kind::WeightedLq: os << "weighted_lq(q=" << n.a << ", " << n.b << ", " << n.c << ")"; break;
    case Kind::Scaled: os << "scaled(" << n.a << ", " << n.children.front().describe() << ")"; break;
    case Kind::Rotated: os << "rotated(" << n.a << ", " << n.children.front().describe() << ")"; break;
    case Kind::MaxOf: list("max_of"); break;
    case Kind::LpSum:
      os << "lp_sum(p=" << n.a << "; ";
      for (std::size_t i = 0; i < n.children.size(); ++i) os << (i ? ", " : "") << n.children[i].describe();
      os << ")";
      break;
    case Kind::Zero: os << "zero"; break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// operations

CircleExtremum circle_max(const Anisotropy& h) {
  return circle_extremum([&](double t) { return h.eval(unit(t)); });
}

CircleExtremum circle_min(const Anisotropy& h) {
  auto r = circle_extremum([&](double t) { return -h.eval(unit(t)); });
  return {-r.value, r.angle};
}

double sup_norm(const Anisotropy& h) {
  if (h.has_closed_form_norm()) return closed_sup(h);
  return circle_max(h).value;
}

AnisotropyClass classify(const Anisotropy& h, double tol) {
  if (!(tol > 0.0)) throw InvalidParams("classification tolerance must be positive");
  const double norm = sup_norm(h);
  if (norm <= tol) return {};
  const CircleExtremum mn = circle_min(h);
  if (mn.value <= tol * norm) {
    const double theta = wrap_angle(mn.angle + kPi / 2.0);
    const double c = norm;
    const int n = kCircleSamples;
    for (int k = 0; k < n; ++k) {
      const Vec2 u = unit(2.0 * kPi * k / n);
      const double model = c * std::abs(std::cos(theta) * u.x() + std::sin(theta) * u.y());
      if (std::abs(h.eval(u) - model) > tol * norm)
        throw ClassificationAmbiguous("circle minimum vanishes but H is not of the form c|cos θ x + sin θ y|");
    }
    return {AnisotropyClass::Type::Degenerate, c, theta < kPi - 1e-14 ? theta : 0.0};
  }
  if (mn.value < 10.0 * tol * norm)
    throw ClassificationAmbiguous("circle minimum " + std::to_string(mn.value) + " lies in the ambiguity band");
  return {AnisotropyClass::Type::Positive, 0.0, 0.0};
}

Anisotropy rotate(const Anisotropy& h, double phi) { return Anisotropy::rotated(phi, h); }

Anisotropy dominating_degenerate(const Anisotropy& h) {
  const double norm = sup_norm(h);
  if (norm <= kClassifyTol) throw ZeroAnisotropy("dominating_degenerate needs a nonzero anisotropy");

  AnisotropyClass cls;
  try {
    cls = classify(h);
  } catch (const ClassificationAmbiguous&) {
    cls.type = AnisotropyClass::Type::Positive;
  }
  if (cls.is_degenerate()) return Anisotropy::directional(cls.c, cls.theta);

  const int n = kCircleSamples;
  std::vector<double> hv(n);
  for (int k = 0; k < n; ++k) hv[k] = h.eval(unit(2.0 * kPi * k / n));
  auto slack = [&](double theta) {
    double worst = 1e300;
    for (int k = 0; k < n; ++k) {
      const double phi = 2.0 * kPi * k / n;
      worst = std::min(worst, hv[k] - norm * std::abs(std::cos(phi - theta)));
    }
    return worst;
  };

  // The unit disk lies in {H <= ‖H‖} and touches its boundary at the
  // maximizing direction u0, so the supporting line there has normal u0.
  double theta = wrap_angle(circle_max(h).angle);
  const double tol = 1e-9 * std::max(1.0, norm);
  if (slack(theta) < -tol) {
    const int grid = 1024;
    double best = -1e300;
    for (int k = 0; k < grid; ++k) {
      const double t = kPi * k / grid;
      const double s = slack(t);
      if (s > best) { best = s; theta = t; }
    }
    auto refined = golden_maximize(slack, theta - kPi / grid, theta + kPi / grid, 80);
    theta = wrap_angle(refined.first);
    if (refined.second < -tol)
      throw DominationFailed("no degenerate minorant with the same norm found for " + h.describe());
  }
  return Anisotropy::directional(norm, theta);
}

ConvexBodyPoly unit_ball_poly(const Anisotropy& h, int n) {
  if (n < 4 || n % 2 != 0) throw InvalidParams("unit_ball_poly needs an even vertex count >= 4");
  if (!classify(h).is_positive()) throw DegenerateBody("unit ball of a non-positive anisotropy is unbounded");
  ConvexBodyPoly b;
  b.vertices.reserve(n);
  for (int i = 0; i < n; ++i) {
    const Vec2 u = unit(2.0 * kPi * i / n);
    b.vertices.push_back(u / h.eval(u));
  }
  return b;
}

ConvexBodyPoly polar_body(const ConvexBodyPoly& body) {
  const auto& v = body.vertices;
  const std::size_t n = v.size();
  if (n < 3) throw OriginNotInterior("polar_body needs at least three vertices");
  double scale = 0.0;
  for (const auto& p : v) scale = std::max(scale, p.norm());
  ConvexBodyPoly out;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = v[i];
    const Vec2& b = v[(i + 1) % n];
    const double cross = a.x() * b.y() - a.y() * b.x();  // twice the area of (0, a, b)
    if (cross <= 1e-14 * scale * scale) throw OriginNotInterior("origin is not interior to the body");
    // w·a = 1, w·b = 1
    const Vec2 w((b.y() - a.y()) / cross, (a.x() - b.x()) / cross);
    if (!out.vertices.empty() && (w - out.vertices.back()).norm() <= 1e-12 * std::max(1.0, w.norm())) continue;
    out.vertices.push_back(w);
  }
  if (out.vertices.size() > 1 &&
      (out.vertices.front() - out.vertices.back()).norm() <= 1e-12 * std::max(1.0, out.vertices.front().norm()))
    out.vertices.pop_back();
  return out;
}

double inradius(const ConvexBodyPoly& body) {
  const auto& v = body.vertices;
  double r = 1e300;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& a = v[i];
    const Vec2& b = v[(i + 1) % v.size()];
    const double len = (b - a).norm();
    if (len == 0.0) continue;
    r = std::min(r, std::abs(a.x() * b.y() - a.y() * b.x()) / len);
  }
  return r;
}

double polygon_area(const std::vector<Vec2>& ring) {
  double s = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Vec2& a = ring[i];
    const Vec2& b = ring[(i + 1) % ring.size()];
    s += a.x() * b.y() - a.y() * b.x();
  }
  return 0.5 * s;
}

}  // namespace anisospec
