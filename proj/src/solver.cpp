#include "anisospec/solver.hpp"

#include "anisospec/errors.hpp"
#include "anisospec/numerics.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <random>

namespace anisospec {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using VecX = Eigen::VectorXd;

// Dunavant degree-5 rule; barycentric coordinates and weights (sum 1).
struct QPoint {
  double l0, l1, l2, w;
};
const std::array<QPoint, 7> kQ7 = {{
    {1.0 / 3, 1.0 / 3, 1.0 / 3, 0.225},
    {0.059715871789770, 0.470142064105115, 0.470142064105115, 0.132394152788506},
    {0.470142064105115, 0.059715871789770, 0.470142064105115, 0.132394152788506},
    {0.470142064105115, 0.470142064105115, 0.059715871789770, 0.132394152788506},
    {0.797426985353087, 0.101286507323456, 0.101286507323456, 0.125939180544827},
    {0.101286507323456, 0.797426985353087, 0.101286507323456, 0.125939180544827},
    {0.101286507323456, 0.101286507323456, 0.797426985353087, 0.125939180544827},
}};
const std::array<QPoint, 3> kQ3 = {{
    {2.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 3},
    {1.0 / 6, 2.0 / 3, 1.0 / 6, 1.0 / 3},
    {1.0 / 6, 1.0 / 6, 2.0 / 3, 1.0 / 3},
}};

// |a|^p with fast paths for the exponents used most.
inline double powp(double a, double p) {
  if (p == 2.0) return a * a;
  if (p == 3.0) return a * a * a;
  if (p == 1.5) return a * std::sqrt(a);
  if (p == 4.0) return (a * a) * (a * a);
  return std::pow(a, p);
}

struct Element {
  double area;
  std::array<Vec2, 3> grad;  // gradients of the three hat functions
};

std::vector<Element> elements(const Mesh& mesh) {
  std::vector<Element> out(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tr = mesh.triangles[t];
    const Vec2& a = mesh.vertices[tr[0]];
    const Vec2& b = mesh.vertices[tr[1]];
    const Vec2& c = mesh.vertices[tr[2]];
    const double twice = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    out[t].area = 0.5 * twice;
    out[t].grad[0] = Vec2(b.y() - c.y(), c.x() - b.x()) / twice;
    out[t].grad[1] = Vec2(c.y() - a.y(), a.x() - c.x()) / twice;
    out[t].grad[2] = Vec2(a.y() - b.y(), b.x() - a.x()) / twice;
  }
  return out;
}

struct Dofs {
  std::vector<int> index;  // vertex -> dof or -1
  std::vector<int> vertex;  // dof -> vertex
};

Dofs interior_dofs(const Mesh& mesh) {
  Dofs d;
  d.index.assign(mesh.vertices.size(), -1);
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (mesh.boundary[v]) continue;
    d.index[v] = static_cast<int>(d.vertex.size());
    d.vertex.push_back(static_cast<int>(v));
  }
  return d;
}

SpMat assemble(const Mesh& mesh, const std::vector<Element>& el, const Dofs& dofs, const Mat2& a, double mass_coef) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh.triangles.size() * 9);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tr = mesh.triangles[t];
    for (int i = 0; i < 3; ++i) {
      const int di = dofs.index[tr[i]];
      if (di < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int dj = dofs.index[tr[j]];
        if (dj < 0) continue;
        double v = el[t].area * el[t].grad[i].dot(a * el[t].grad[j]);
        if (mass_coef != 0.0) v += mass_coef * el[t].area / 12.0 * (i == j ? 2.0 : 1.0);
        trip.emplace_back(di, dj, v);
      }
    }
  }
  SpMat m(static_cast<long>(dofs.vertex.size()), static_cast<long>(dofs.vertex.size()));
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

VecX restrict_field(const DiscreteField& u, const Dofs& dofs) {
  VecX x(static_cast<long>(dofs.vertex.size()));
  for (std::size_t i = 0; i < dofs.vertex.size(); ++i) x[static_cast<long>(i)] = u.values[dofs.vertex[i]];
  return x;
}

DiscreteField extend_field(const VecX& x, const Dofs& dofs, std::size_t nv) {
  DiscreteField u;
  u.values.assign(nv, 0.0);
  for (std::size_t i = 0; i < dofs.vertex.size(); ++i) u.values[dofs.vertex[i]] = x[static_cast<long>(i)];
  return u;
}

DiscreteField initial_field(const Mesh& mesh, int restart, std::uint64_t seed) {
  Vec2 lo = mesh.vertices.front(), hi = lo;
  for (const auto& v : mesh.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  std::mt19937_64 rng(seed + static_cast<std::uint64_t>(restart));
  std::uniform_real_distribution<double> noise(-0.5, 0.5);
  DiscreteField u;
  u.values.assign(mesh.vertices.size(), 0.0);
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (mesh.boundary[v]) continue;
    const Vec2& q = mesh.vertices[v];
    double val = (q.x() - lo.x()) * (hi.x() - q.x()) * (q.y() - lo.y()) * (hi.y() - q.y());
    if (restart > 0) val *= 1.0 + noise(rng);
    u.values[v] = std::max(val, 1e-12);
  }
  return u;
}

Vec2 field_gradient(const Mesh& mesh, const Element& e, std::size_t t, const DiscreteField& u) {
  const auto& tr = mesh.triangles[t];
  return u.values[tr[0]] * e.grad[0] + u.values[tr[1]] * e.grad[1] + u.values[tr[2]] * e.grad[2];
}

// Quadratic surrogate of H² used to precondition the descent path.
Mat2 surrogate(const Anisotropy& h) {
  if (auto q = h.quadratic_form()) return *q;
  const double n = sup_norm(h);
  return n * n * Mat2::Identity();
}

double energy(const Mesh& mesh, const std::vector<Element>& el, const DiscreteField& u, const Anisotropy& h, double p) {
  double e = 0.0;
  for (std::size_t t = 0; t < el.size(); ++t) e += el[t].area * powp(h(field_gradient(mesh, el[t], t, u)), p);
  return e;
}

template <std::size_t N>
double norm_rule(const Mesh& mesh, const std::vector<Element>& el, const DiscreteField& u, double p,
                 const std::array<QPoint, N>& rule) {
  double s = 0.0;
  for (std::size_t t = 0; t < el.size(); ++t) {
    const auto& tr = mesh.triangles[t];
    const double u0 = u.values[tr[0]], u1 = u.values[tr[1]], u2 = u.values[tr[2]];
    if (u0 == 0.0 && u1 == 0.0 && u2 == 0.0) continue;
    double acc = 0.0;
    for (const auto& q : rule) acc += q.w * powp(std::abs(q.l0 * u0 + q.l1 * u1 + q.l2 * u2), p);
    s += el[t].area * acc;
  }
  return s;
}

struct Evaluation {
  double q = 0.0;
  double e = 0.0;
  double n = 0.0;
  VecX grad;
};

Evaluation evaluate(const Mesh& mesh, const std::vector<Element>& el, const Dofs& dofs, const DiscreteField& u,
                    const Anisotropy& h, double p) {
  Evaluation ev;
  std::vector<double> de(mesh.vertices.size(), 0.0), dn(mesh.vertices.size(), 0.0);
  for (std::size_t t = 0; t < el.size(); ++t) {
    const auto& tr = mesh.triangles[t];
    const Vec2 g = field_gradient(mesh, el[t], t, u);
    const double hv = h(g);
    const double hp = powp(hv, p);
    ev.e += el[t].area * hp;
    if (hv > 0.0) {
      const Vec2 dg = el[t].area * p * (hp / hv) * h.gradient(g);
      for (int i = 0; i < 3; ++i) de[tr[i]] += dg.dot(el[t].grad[i]);
    }
    const double u0 = u.values[tr[0]], u1 = u.values[tr[1]], u2 = u.values[tr[2]];
    for (const auto& q : kQ7) {
      const double uq = q.l0 * u0 + q.l1 * u1 + q.l2 * u2;
      const double a = std::abs(uq);
      if (a == 0.0) continue;
      const double w = el[t].area * q.w;
      const double ap = powp(a, p);
      ev.n += w * ap;
      const double d = w * p * ap / uq;
      dn[tr[0]] += d * q.l0;
      dn[tr[1]] += d * q.l1;
      dn[tr[2]] += d * q.l2;
    }
  }
  if (!(ev.n > 0.0)) throw ZeroField("field vanishes identically");
  ev.q = ev.e / ev.n;
  ev.grad.resize(static_cast<long>(dofs.vertex.size()));
  for (std::size_t i = 0; i < dofs.vertex.size(); ++i) {
    const int v = dofs.vertex[i];
    ev.grad[static_cast<long>(i)] = (de[v] - ev.q * dn[v]) / ev.n;
  }
  return ev;
}

void normalize(VecX& x, const Mesh& mesh, const std::vector<Element>& el, const Dofs& dofs, double p) {
  const double n = norm_rule(mesh, el, extend_field(x, dofs, mesh.vertices.size()), p, kQ7);
  if (!(n > 0.0)) throw ZeroField("field vanishes identically");
  x /= std::pow(n, 1.0 / p);
  if (x.sum() < 0) x = -x;
}

MinimizeResult inverse_iteration(const Mesh& mesh, const std::vector<Element>& el, const Dofs& dofs, const Mat2& a,
                                 const SolverOptions& opts) {
  const SpMat k = assemble(mesh, el, dofs, a, 0.0);
  SpMat mass = assemble(mesh, el, dofs, Mat2::Zero(), 1.0);
  // Sparse Cholesky without any shift: a non-positive pivot means the
  // stiffness form is singular on the constrained space.
  Eigen::SimplicialLDLT<SpMat> chol(k);
  if (chol.info() != Eigen::Success || !(chol.vectorD().minCoeff() > 0.0))
    throw SingularStiffness("stiffness matrix is not positive definite on the interior nodes");

  VecX x = restrict_field(initial_field(mesh, 0, opts.seed), dofs);
  x /= std::sqrt(x.dot(mass * x));
  double lambda = x.dot(k * x);
  MinimizeResult out;
  out.path = "inverse_iteration";
  bool converged = false;
  int it = 0;
  for (; it < std::min(opts.max_iter, 2000); ++it) {
    const VecX rhs = mass * x;
    VecX y = chol.solve(rhs);
    const double my = y.dot(mass * y);
    const double next = y.dot(k * y) / my;
    x = y / std::sqrt(my);
    const bool done = std::abs(next - lambda) <= 1e-10 * std::abs(next);
    lambda = next;
    if (done) {
      converged = true;
      break;
    }
  }
  if (!(lambda > 0.0)) throw SingularStiffness("smallest Ritz value is not positive");
  if (x.sum() < 0) x = -x;
  out.u = extend_field(x, dofs, mesh.vertices.size());
  out.iterations = it + 1;
  out.result.value = lambda;
  out.result.method = "fem";
  out.result.p = 2.0;
  out.result.converged = converged;
  out.restart_values = {lambda};
  return out;
}

MinimizeResult descent(const Mesh& mesh, const std::vector<Element>& el, const Dofs& dofs, const Anisotropy& h,
                       double p, const SolverOptions& opts) {
  const Mat2 a = surrogate(h);
  const SpMat prec_m = assemble(mesh, el, dofs, a, 1.0);
  Eigen::SimplicialLDLT<SpMat> prec(prec_m);
  if (prec.info() != Eigen::Success) throw SingularStiffness("preconditioner factorization failed");

  MinimizeResult best;
  best.path = "descent";
  best.result.value = std::numeric_limits<double>::infinity();
  const std::size_t nv = mesh.vertices.size();
  bool all_converged = true;
  int total_iter = 0;

  for (int r = 0; r < std::max(1, opts.restarts); ++r) {
    VecX x = restrict_field(initial_field(mesh, r, opts.seed), dofs);
    normalize(x, mesh, el, dofs, p);
    Evaluation ev = evaluate(mesh, el, dofs, extend_field(x, dofs, nv), h, p);
    VecX d = prec.solve(ev.grad);
    double alpha = 0.05 * std::sqrt(x.dot(prec_m * x)) / std::max(std::sqrt(d.dot(prec_m * d)), 1e-300);
    std::deque<double> recent{ev.q};
    std::vector<double> history{ev.q};
    bool converged = false;
    int it = 0;
    for (; it < opts.max_iter; ++it) {
      const double slope = ev.grad.dot(d);
      if (!(slope > 0.0)) {
        converged = true;
        break;
      }
      const double ref = *std::max_element(recent.begin(), recent.end());
      VecX xn;
      Evaluation evn;
      bool accepted = false;
      for (int ls = 0; ls < 40; ++ls) {
        xn = x - alpha * d;
        normalize(xn, mesh, el, dofs, p);
        evn = evaluate(mesh, el, dofs, extend_field(xn, dofs, nv), h, p);
        if (evn.q <= ref - 1e-4 * alpha * slope) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) {
        converged = true;  // no further decrease at working precision
        break;
      }
      const VecX s = xn - x;
      const VecX dn = prec.solve(evn.grad);
      const VecX yv = evn.grad - ev.grad;
      const double sy = s.dot(yv);
      // Two-point step size in the preconditioned metric.
      alpha = sy > 0.0 ? s.dot(prec_m * s) / sy : 2.0 * alpha;
      x = xn;
      ev = evn;
      d = dn;
      recent.push_back(ev.q);
      if (recent.size() > 10) recent.pop_front();
      history.push_back(ev.q);
      const int w = opts.window;
      if (static_cast<int>(history.size()) > w) {
        const double old = history[history.size() - 1 - static_cast<std::size_t>(w)];
        if (old - ev.q <= opts.tol * ev.q) {
          converged = true;
          break;
        }
      }
    }
    total_iter += it;
    all_converged = all_converged && converged;
    best.restart_values.push_back(ev.q);
    if (ev.q < best.result.value) {
      best.result.value = ev.q;
      best.u = extend_field(x, dofs, nv);
    }
  }
  best.iterations = total_iter;
  best.result.method = "fem";
  best.result.p = p;
  best.result.converged = all_converged;
  const auto [mn, mx] = std::minmax_element(best.restart_values.begin(), best.restart_values.end());
  const double n7 = norm_rule(mesh, el, best.u, p, kQ7);
  const double n3 = norm_rule(mesh, el, best.u, p, kQ3);
  best.result.error_estimate = (*mx - *mn) + best.result.value * std::abs(n7 - n3) / n7;
  return best;
}

}  // namespace

double lp_norm_p(const Mesh& mesh, const DiscreteField& u, double p, bool three_point) {
  const auto el = elements(mesh);
  return three_point ? norm_rule(mesh, el, u, p, kQ3) : norm_rule(mesh, el, u, p, kQ7);
}

RayleighValue rayleigh_eval(const Mesh& mesh, const DiscreteField& u, const Anisotropy& h, double p) {
  if (u.values.size() != mesh.vertices.size()) throw InvalidParams("field size does not match the mesh");
  const auto el = elements(mesh);
  RayleighValue r;
  r.energy = energy(mesh, el, u, h, p);
  r.norm = norm_rule(mesh, el, u, p, kQ7);
  if (!(r.norm > 0.0)) throw ZeroField("field vanishes identically");
  r.quotient = r.energy / r.norm;
  return r;
}

std::vector<double> rayleigh_gradient(const Mesh& mesh, const DiscreteField& u, const Anisotropy& h, double p) {
  const auto el = elements(mesh);
  const Dofs dofs = interior_dofs(mesh);
  const Evaluation ev = evaluate(mesh, el, dofs, u, h, p);
  std::vector<double> g(mesh.vertices.size(), 0.0);
  for (std::size_t i = 0; i < dofs.vertex.size(); ++i) g[dofs.vertex[i]] = ev.grad[static_cast<long>(i)];
  return g;
}

bool has_linear_path(const Anisotropy& h, double p) { return p == 2.0 && h.quadratic_form().has_value(); }

MinimizeResult rayleigh_minimize(const Mesh& mesh, const Anisotropy& h, double p, const SolverOptions& opts) {
  if (!(p > 1.0)) throw InvalidExponent("p must exceed 1");
  if (classify(h).is_zero()) throw ZeroAnisotropy("the least level of the zero anisotropy is 0");
  if (mesh.interior_count() == 0) throw MeshFailure("mesh has no interior vertices");
  const auto el = elements(mesh);
  const Dofs dofs = interior_dofs(mesh);
  MinimizeResult r = has_linear_path(h, p) ? inverse_iteration(mesh, el, dofs, *h.quadratic_form(), opts)
                                           : descent(mesh, el, dofs, h, p, opts);
  r.result.provenance = "P1 FEM, " + r.path + ", h=" + std::to_string(mesh.h) + ", " +
                        std::to_string(dofs.vertex.size()) + " dofs";
  return r;
}

MinimizeResult solve_membrane(const Membrane& m, const Anisotropy& h, double p, const SolverOptions& opts) {
  MinimizeResult fine = rayleigh_minimize(triangulate(m, opts.h), h, p, opts);
  if (opts.richardson) {
    SolverOptions coarse_opts = opts;
    coarse_opts.richardson = false;
    const MinimizeResult coarse = rayleigh_minimize(triangulate(m, 2.0 * opts.h), h, p, coarse_opts);
    const double rich = std::abs(fine.result.value - coarse.result.value) / 3.0;
    fine.result.error_estimate = std::max(fine.result.error_estimate, rich);
    fine.result.converged = fine.result.converged && coarse.result.converged;
  }
  return fine;
}

SliceReport slice_check(const Mesh& mesh, const DiscreteField& u, double theta, double p, const SliceOptions& opts) {
  if (!(opts.target > 0.0)) throw InvalidParams("slice_check needs a positive target quotient");
  if (opts.n_slices < 1) throw InvalidParams("slice_check needs at least one slice");
  const double psi = kPi / 2.0 - theta;
  const double c = std::cos(psi), s = std::sin(psi);
  std::vector<Vec2> pts(mesh.vertices.size());
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, umax = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec2& v = mesh.vertices[i];
    pts[i] = Vec2(c * v.x() - s * v.y(), s * v.x() + c * v.y());
    xmin = std::min(xmin, pts[i].x());
    xmax = std::max(xmax, pts[i].x());
    umax = std::max(umax, std::abs(u.values[i]));
  }
  SliceReport rep;
  rep.n_slices = opts.n_slices;
  // Gauss-Legendre 5 on [0,1] for ∫|linear|^p.
  const double gx[5] = {0.046910077030668, 0.230765344947158, 0.5, 0.769234655052842, 0.953089922969332};
  const double gw[5] = {0.118463442528095, 0.239314335249683, 0.284444444444444, 0.239314335249683, 0.118463442528095};
  for (int j = 0; j < opts.n_slices; ++j) {
    const double x = xmin + (xmax - xmin) * (j + 0.5 + 0.0137) / (opts.n_slices + 0.0274);
    double e = 0.0, n = 0.0, smax = 0.0;
    for (const auto& tr : mesh.triangles) {
      Vec2 hit[3];
      double uv[3];
      int k = 0;
      for (int i = 0; i < 3 && k < 2; ++i) {
        const Vec2& a = pts[tr[i]];
        const Vec2& b = pts[tr[(i + 1) % 3]];
        if ((a.x() - x) * (b.x() - x) > 0 || a.x() == b.x()) continue;
        const double t = (x - a.x()) / (b.x() - a.x());
        if (t < 0 || t > 1) continue;
        hit[k] = a + t * (b - a);
        uv[k] = u.values[tr[i]] + t * (u.values[tr[(i + 1) % 3]] - u.values[tr[i]]);
        ++k;
      }
      if (k < 2) continue;
      const double len = std::abs(hit[1].y() - hit[0].y());
      if (len <= 1e-14) continue;
      e += std::pow(std::abs(uv[1] - uv[0]) / len, p) * len;
      for (int g = 0; g < 5; ++g) n += gw[g] * len * std::pow(std::abs(uv[0] + gx[g] * (uv[1] - uv[0])), p);
      smax = std::max({smax, std::abs(uv[0]), std::abs(uv[1])});
    }
    rep.positions.push_back(x);
    if (smax < opts.near_zero * umax || n <= 0.0) {
      ++rep.near_zero;
      rep.quotients.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double q = e / n;
    rep.quotients.push_back(q);
    ++rep.nontrivial;
    if (std::abs(q - opts.target) <= opts.tol * opts.target) ++rep.within;
  }
  rep.fraction = rep.nontrivial ? static_cast<double>(rep.within) / rep.nontrivial : 0.0;
  return rep;
}

ConvergenceTable convergence_study(const Membrane& m, const Anisotropy& h, double p, const std::vector<double>& h_list,
                                   const SolverOptions& opts) {
  if (h_list.size() < 3) throw InvalidParams("convergence_study needs at least three mesh sizes");
  for (std::size_t i = 1; i < h_list.size(); ++i)
    if (!(h_list[i] < h_list[i - 1])) throw InvalidParams("mesh sizes must decrease");
  ConvergenceTable tab;
  for (double hh : h_list) {
    const Mesh mesh = triangulate(m, hh);
    SolverOptions o = opts;
    o.h = hh;
    const MinimizeResult r = rayleigh_minimize(mesh, h, p, o);
    tab.rows.push_back({hh, mesh.interior_count(), r.result.value});
  }
  const auto n = tab.rows.size();
  const auto& r1 = tab.rows[n - 3];
  const auto& r2 = tab.rows[n - 2];
  const auto& r3 = tab.rows[n - 1];
  const double d12 = r1.lambda - r2.lambda, d23 = r2.lambda - r3.lambda;
  tab.order = std::log(std::abs(d12 / d23)) / std::log(r2.h / r3.h);
  const double ratio = std::pow(r2.h / r3.h, tab.order);
  tab.extrapolated = r3.lambda - d23 / (ratio - 1.0);
  return tab;
}

void write_field_csv(std::ostream& os, const Mesh& mesh, const DiscreteField& u) {
  os.precision(17);
  os << "x,y,u\n";
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    os << mesh.vertices[i].x() << ',' << mesh.vertices[i].y() << ',' << u.values[i] << '\n';
}

}  // namespace anisospec
