#pragma once

#include <Eigen/Core>

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace anisospec {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// A planar anisotropy: a nonnegative, convex, 1-homogeneous function built
/// from a closed constructor grammar. Values are immutable and cheap to copy
/// (the tree is shared).
class Anisotropy {
 public:
  enum class Kind { Euclidean, Directional, Quadratic, WeightedLq, Scaled, Rotated, MaxOf, LpSum, Zero };

  struct Node;

  static Anisotropy euclidean();
  /// c·|cos(theta)·x + sin(theta)·y|
  static Anisotropy directional(double c, double theta);
  /// |ξᵀAξ|^{1/2}; A must be symmetric positive-semidefinite.
  static Anisotropy quadratic(const Mat2& a);
  /// (wx|x|^q + wy|y|^q)^{1/q}
  static Anisotropy weighted_lq(double q, double wx, double wy);
  static Anisotropy scaled(double alpha, Anisotropy child);
  /// Evaluates child(R_phi ξ).
  static Anisotropy rotated(double phi, Anisotropy child);
  static Anisotropy max_of(std::vector<Anisotropy> children);
  /// (Σ childᵢ^p)^{1/p}
  static Anisotropy lp_sum(double p, std::vector<Anisotropy> children);
  static Anisotropy zero();

  Kind kind() const;
  const Node& node() const { return *node_; }

  double eval(const Vec2& xi) const;
  double operator()(const Vec2& xi) const { return eval(xi); }

  /// An element of the (a.e. defined) gradient. Zero at the origin.
  Vec2 gradient(const Vec2& xi) const;

  /// H(ξ)² = ξᵀAξ for some A when the tree is a quadratic form; empty otherwise.
  std::optional<Mat2> quadratic_form() const;

  /// True when sup_norm has an exact expression for every node in the tree.
  bool has_closed_form_norm() const;

  /// Smooth (C¹ away from the origin) and positive: Euclidean, positive-definite
  /// Quadratic, WeightedLq with 1 < q < ∞ and positive weights, and
  /// Scaled/Rotated wrappers of those.
  bool is_smooth_positive() const;

  std::string describe() const;

 private:
  explicit Anisotropy(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Anisotropy::Node {
  Kind kind = Kind::Zero;
  double a = 0.0;  // c | q | alpha | phi | p
  double b = 0.0;  // theta | wx
  double c = 0.0;  // wy
  Mat2 m = Mat2::Zero();
  std::vector<Anisotropy> children;
};

/// Result of the positive / degenerate / zero classification.
struct AnisotropyClass {
  enum class Type { Positive, Degenerate, Zero };
  Type type = Type::Zero;
  double c = 0.0;      // Degenerate only
  double theta = 0.0;  // Degenerate only, in [0, π)

  bool is_positive() const { return type == Type::Positive; }
  bool is_degenerate() const { return type == Type::Degenerate; }
  bool is_zero() const { return type == Type::Zero; }
};

/// Convex polygon symmetric about the origin, counterclockwise.
struct ConvexBodyPoly {
  std::vector<Vec2> vertices;
};

inline constexpr int kCircleSamples = 4096;
inline constexpr double kClassifyTol = 1e-9;

/// max of H over the unit circle.
double sup_norm(const Anisotropy& h);

/// Minimum of H over the unit circle and the direction where it is attained.
struct CircleExtremum {
  double value = 0.0;
  double angle = 0.0;
};
CircleExtremum circle_min(const Anisotropy& h);
CircleExtremum circle_max(const Anisotropy& h);

AnisotropyClass classify(const Anisotropy& h, double tol = kClassifyTol);

/// H_A with A the rotation by phi: eval(rotate(H, φ), ξ) = H(Aξ).
Anisotropy rotate(const Anisotropy& h, double phi);

/// Directional(‖H‖, θ*) lying below H everywhere with the same norm.
Anisotropy dominating_degenerate(const Anisotropy& h);

ConvexBodyPoly unit_ball_poly(const Anisotropy& h, int n);
ConvexBodyPoly polar_body(const ConvexBodyPoly& body);
double inradius(const ConvexBodyPoly& body);
double polygon_area(const std::vector<Vec2>& ring);

}  // namespace anisospec
