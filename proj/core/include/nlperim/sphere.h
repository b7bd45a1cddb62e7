#pragma once

#include <vector>

#include "nlperim/types.h"

namespace nlperim {

// Resolution of the product quadrature on S^{d-1}. In d=2 `circle_points`
// equally spaced angles starting at 0 are used; in d=3 a Gauss-Legendre rule
// in z with `polar_points` nodes times `azimuth_points` uniform angles.
struct SphereResolution {
  int circle_points = 512;
  int polar_points = 64;
  int azimuth_points = 128;
};

// A node of the rule. `weight` integrates against the surface measure of
// S^{d-1}; `coarse_weight` is the weight of the same node in the rule with half
// the angular resolution (zero for nodes that are not part of it), so the two
// sums give an error estimate.
struct SphereNode {
  Point theta{};
  double weight = 0.0;
  double coarse_weight = 0.0;
};

std::vector<SphereNode> sphere_grid(int d, const SphereResolution& res = {});

// Volume of the unit ball in R^d (d >= 0).
double unit_ball_volume(int d);

// Surface area of S^{d-1}; equals d times the unit ball volume.
double sphere_area(int d);

}  // namespace nlperim
