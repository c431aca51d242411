#pragma once

#include "anisospec/anisotropy.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace anisospec {

using Ring = std::vector<Vec2>;

/// Open polygonal region with holes. The outer ring is stored counterclockwise
/// and holes clockwise; the constructor normalizes orientation and rejects
/// self-intersecting, overlapping or misplaced rings.
class Membrane {
 public:
  Membrane() = default;
  explicit Membrane(Ring outer, std::vector<Ring> holes = {});

  const Ring& outer() const { return outer_; }
  const std::vector<Ring>& holes() const { return holes_; }

  /// All rings, outer first.
  std::vector<const Ring*> rings() const;
  std::size_t vertex_count() const;

  /// Bounding-box diagonal.
  double scale() const;

  /// Strict interior test (points on the boundary are outside).
  bool contains(const Vec2& p) const;

  Membrane rotated(double phi) const;
  Membrane scaled(double s) const;
  Membrane translated(const Vec2& t) const;

 private:
  Ring outer_;
  std::vector<Ring> holes_;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// Section of a membrane by the vertical line at abscissa x.
struct SectionComponents {
  double x = 0.0;
  std::vector<Interval> intervals;  // sorted, disjoint, open
};

/// Longest segment of a given direction inside the membrane.
struct Chord {
  double length = 0.0;
  Vec2 a = Vec2::Zero();
  Vec2 b = Vec2::Zero();
};

struct WidthMaximum {
  double theta = 0.0;
  double width = 0.0;
  Chord witness;
};

enum class TriState { Attained, NotAttained, Unresolved };

const char* to_string(TriState t);

struct WidthProfile {
  std::vector<double> thetas;
  std::vector<double> values;
  double sup_width = 0.0;
  std::vector<WidthMaximum> maxima;
  /// The sampled profile is flat to within the cluster tolerance: the maxima
  /// form a continuum and no discrete clusters are reported.
  bool continuum = false;
  TriState attained = TriState::Unresolved;
};

struct AttainmentWitness {
  double theta = 0.0;
  double width = 0.0;     // L: length of every section over the strip
  Interval strip;         // I', abscissae in the frame where θ is vertical
  /// Lower endpoints g(x) of the attaining sections, as polyline breakpoints
  /// (x, g(x)) in the same frame.
  std::vector<Vec2> lower;
};

struct AttainmentOptions {
  /// Minimum strip width, relative to the membrane diameter, for a flat
  /// section family to count. Polygonal stand-ins for curved arcs create
  /// flat strips as wide as one edge; those stay below this resolution.
  double min_strip_fraction = 0.02;
  double flat_tol = 1e-9;  // relative to the membrane scale
};

struct ProfileOptions {
  bool refine = true;
  double cluster_tol = 1e-6;
  bool parallel = true;
};

double area(const Membrane& m);
double diameter(const Membrane& m);
bool is_convex(const Membrane& m);

SectionComponents vertical_components(const Membrane& m, double x);

/// L_θ: supremum of the lengths of connected open segments of direction
/// (cos θ, sin θ) inside the membrane.
double chord_width(const Membrane& m, double theta);
Chord longest_chord(const Membrane& m, double theta);

WidthProfile width_profile(const Membrane& m, int n_theta, const ProfileOptions& opts = {});

/// Whether the sections in direction θ attain their supremum along a strip
/// of positive width (flat piece of the section-length function).
std::optional<AttainmentWitness> attainment_check(const Membrane& m, double theta,
                                                  const AttainmentOptions& opts = {});

/// Number of connected clusters of directions θ ∈ [0, π) passing attainment_check.
int attainment_multiplicity(const Membrane& m, int n_theta, const AttainmentOptions& opts = {});

/// Attained directions examined by attainment_multiplicity, one per cluster.
std::vector<double> attainment_directions(const Membrane& m, int n_theta, const AttainmentOptions& opts = {});

/// Whether θ ↦ L_θ has a global maximum point.
TriState has_optimal_design(const Membrane& m, const WidthProfile& profile);
TriState has_optimal_design(const Membrane& m);

}  // namespace anisospec
