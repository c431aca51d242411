#pragma once

#include "anisospec/geometry.hpp"

#include <string>

namespace anisospec::shapes {

/// [0,a]×[0,b]
Membrane rect(double a, double b);
/// rect(a,b) rotated by phi about the origin.
Membrane rotated_rect(double a, double b, double phi);
/// Regular n-gon inscribed in the circle of radius r about the origin.
Membrane disk(double r, int n);
Membrane annulus(double outer_r, double inner_r, int n);
/// disk(r, n) clipped to the band |y| < h.
Membrane cropped_disk(double r, double h, int n);
/// Union of m parallelogram arms through the origin at angles jπ/m. Each arm
/// has side lengths len (along the axis) and wid, with the short sides
/// sheared by `shear` so that the long diagonal is unique.
Membrane asterisk(int m, double len = 1.0, double wid = 0.12, double shear = 0.3);
/// Centrally symmetric star with 2m tips at radius R joined by concave
/// parabolic edges passing through radius r (requires 2r > R cos(π/2m)).
Membrane star(int m, double big_r = 1.0, double small_r = 0.5, int arc_segments = 24);
/// Serpentine of 24k² half-annuli (12k² S pieces), total area 1. n is the
/// number of segments of a full circle.
Membrane s_chain(int k, int n);
/// Notched band whose width function has a supremum (4) that is never
/// attained; its diameter is larger.
Membrane s_counterexample();

/// Builds a generator by name from a parameter list, e.g. "disk" {1, 256}.
Membrane by_name(const std::string& name, const std::vector<double>& params);

}  // namespace anisospec::shapes
