#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nlperim/sphere.h"
#include "nlperim/types.h"

namespace nlperim {

// Finite union of disjoint closed intervals in R, sorted by left endpoint.
struct IntervalUnion {
  std::vector<std::pair<double, double>> intervals;
};

struct Ball {
  int d = 2;
  Point center{};
  double radius = 1.0;
};

// Axis-aligned box [lo, hi].
struct Box {
  int d = 2;
  Point lo{};
  Point hi{};
};

// Simple polygon in the plane, vertices counter-clockwise.
struct Polygon {
  std::vector<std::array<double, 2>> vertices;
};

// Union of axis-aligned boxes with pairwise disjoint interiors (L-shapes,
// staircases). Faces shared by two boxes are interior.
struct BoxUnion {
  int d = 2;
  std::vector<Box> boxes;
};

// Occupancy mask on a regular grid; cell (i, j, k) covers
// origin + h * [i, i+1) x [j, j+1) x [k, k+1). x is the fastest index.
struct VoxelSet {
  int d = 2;
  std::array<int, 3> dims{1, 1, 1};
  double h = 1.0;
  Point origin{};
  std::vector<std::uint8_t> mask;

  std::size_t index(int i, int j = 0, int k = 0) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims[1]) * k);
  }
  bool at(int i, int j = 0, int k = 0) const { return mask[index(i, j, k)] != 0; }
  std::size_t count() const;
};

using Shape = std::variant<IntervalUnion, Ball, Box, Polygon, BoxUnion>;
using SetGeometry = std::variant<IntervalUnion, Ball, Box, Polygon, BoxUnion, VoxelSet>;

// Validating constructors. All throw ValidationError on malformed input.
IntervalUnion make_interval_union(std::vector<std::pair<double, double>> intervals);
Ball make_ball(int d, double radius, Point center = {});
Box make_box(int d, Point lo, Point hi);
Polygon make_polygon(std::vector<std::array<double, 2>> vertices);
BoxUnion make_box_union(int d, std::vector<Box> boxes);
void validate(const VoxelSet& v);

// [1, 1 + 2^-1] u [2, 2 + 2^-2] u ... u [n_max, n_max + 2^-n_max].
IntervalUnion dyadic_set(int n_max = 40);

int dimension(const SetGeometry& s);
double volume(const SetGeometry& s);
double classical_perimeter(const SetGeometry& s);
std::pair<Point, Point> bounding_box(const SetGeometry& s);
std::string describe(const SetGeometry& s);

bool contains(const Shape& s, const Point& x);

// Parameter intervals [t0, t1) with t >= 0 for which x + t*theta lies in the
// shape, starting with the segment that contains t = 0 (x must be inside).
std::vector<std::pair<double, double>> ray_segments(const Shape& s, const Point& x, const Point& theta);

// A flat piece of the reduced boundary: (d-1)-measure and outer unit normal.
struct Facet {
  double measure = 0.0;
  Point normal{};
};

// Per-edge (length, outward normal) of a simple counter-clockwise polygon.
std::vector<Facet> boundary_decomposition(const Polygon& p);

// Facets of any set whose reduced boundary is a finite union of flat pieces:
// intervals (points with normals -1/+1), boxes, polygons, box unions in d <= 2
// and voxel sets in d <= 2. Balls throw UnsupportedError.
std::vector<Facet> boundary_facets(const SetGeometry& s);

// Integral over the reduced boundary of f(n_E(x)). Balls are handled on the
// spherical grid, everything else through boundary_facets.
double boundary_integral(const SetGeometry& s, const std::function<double(const Point&)>& f,
                         const SphereResolution& res = {});

// Cells whose centres lie in the shape. Cell corners sit on multiples of h and
// the grid keeps `margin` empty cells around the shape's bounding box.
VoxelSet rasterize(const Shape& s, double h, int margin = 2);

// Text header followed by one byte per cell:
//   NLPVOX 1\ndims <nx> <ny> <nz>\nd <d>\nh <h>\norigin <x> <y> <z>\ndata\n<bytes>
void write_voxels(const VoxelSet& v, const std::string& path);
VoxelSet read_voxels(const std::string& path);

// Same mask translated by a whole number of cells (grid grows as needed).
VoxelSet shift_voxels(const VoxelSet& v, std::array<int, 3> offset);

}  // namespace nlperim
