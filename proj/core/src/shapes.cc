#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "nlperim/geometry.h"

namespace nlperim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double box_volume(const Box& b) {
  double v = 1.0;
  for (int i = 0; i < b.d; ++i) v *= b.hi[i] - b.lo[i];
  return v;
}

double cross2(const std::array<double, 2>& o, const std::array<double, 2>& a,
              const std::array<double, 2>& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double polygon_area(const Polygon& p) {
  double a = 0.0;
  const std::size_t n = p.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& u = p.vertices[i];
    const auto& v = p.vertices[(i + 1) % n];
    a += u[0] * v[1] - u[1] * v[0];
  }
  return 0.5 * a;
}

bool segments_cross(const std::array<double, 2>& a, const std::array<double, 2>& b,
                    const std::array<double, 2>& c, const std::array<double, 2>& d) {
  const double d1 = cross2(c, d, a);
  const double d2 = cross2(c, d, b);
  const double d3 = cross2(a, b, c);
  const double d4 = cross2(a, b, d);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

// Slab intersection of the ray with a box, clipped to t >= 0.
bool ray_box(const Box& b, const Point& x, const Point& th, double& t0, double& t1) {
  t0 = 0.0;
  t1 = kInf;
  for (int i = 0; i < b.d; ++i) {
    if (th[i] == 0.0) {
      if (x[i] < b.lo[i] || x[i] > b.hi[i]) return false;
      continue;
    }
    double a = (b.lo[i] - x[i]) / th[i];
    double c = (b.hi[i] - x[i]) / th[i];
    if (a > c) std::swap(a, c);
    t0 = std::max(t0, a);
    t1 = std::min(t1, c);
  }
  return t1 > t0;
}

std::vector<std::pair<double, double>> merge(std::vector<std::pair<double, double>> segs) {
  std::sort(segs.begin(), segs.end());
  std::vector<std::pair<double, double>> out;
  for (const auto& s : segs) {
    if (!out.empty() && s.first <= out.back().second * (1 + 1e-14) + 1e-300) {
      out.back().second = std::max(out.back().second, s.second);
    } else {
      out.push_back(s);
    }
  }
  return out;
}

// Exposed part of the face of box `i` on side `side` (0 low, 1 high) of axis
// `axis`, for d = 2: the face segment minus faces of touching boxes.
double exposed_length(const BoxUnion& u, std::size_t i, int axis, int side) {
  const Box& b = u.boxes[i];
  const int other = 1 - axis;
  const double plane = side == 0 ? b.lo[axis] : b.hi[axis];
  const double tol = 1e-12 * (std::abs(plane) + 1.0);
  std::vector<std::pair<double, double>> covered;
  for (std::size_t j = 0; j < u.boxes.size(); ++j) {
    if (j == i) continue;
    const Box& c = u.boxes[j];
    const double opposite = side == 0 ? c.hi[axis] : c.lo[axis];
    if (std::abs(opposite - plane) > tol) continue;
    const double lo = std::max(b.lo[other], c.lo[other]);
    const double hi = std::min(b.hi[other], c.hi[other]);
    if (hi > lo) covered.emplace_back(lo, hi);
  }
  double len = b.hi[other] - b.lo[other];
  for (const auto& s : merge(covered)) len -= s.second - s.first;
  return std::max(0.0, len);
}

void check_point(const Point& p, int d, const char* what) {
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(p[i])) throw ValidationError(std::string(what) + " is not finite");
    if (i >= d && p[i] != 0.0) {
      throw ValidationError(std::string(what) + " has nonzero coordinate beyond dimension");
    }
  }
}

}  // namespace

std::size_t VoxelSet::count() const {
  return static_cast<std::size_t>(
      std::count_if(mask.begin(), mask.end(), [](std::uint8_t c) { return c != 0; }));
}

IntervalUnion make_interval_union(std::vector<std::pair<double, double>> intervals) {
  if (intervals.empty()) throw ValidationError("interval union is empty");
  std::sort(intervals.begin(), intervals.end());
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto [a, b] = intervals[i];
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
      throw ValidationError("interval [" + std::to_string(a) + ", " + std::to_string(b) +
                            "] must satisfy a < b with finite endpoints");
    }
    if (i > 0 && intervals[i - 1].second >= a) {
      throw ValidationError("intervals overlap or touch at " + std::to_string(a));
    }
  }
  return IntervalUnion{std::move(intervals)};
}

Ball make_ball(int d, double radius, Point center) {
  check_dimension(d);
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ValidationError("ball radius must be positive and finite");
  }
  check_point(center, d, "ball center");
  return Ball{d, center, radius};
}

Box make_box(int d, Point lo, Point hi) {
  check_dimension(d);
  check_point(lo, d, "box corner");
  check_point(hi, d, "box corner");
  for (int i = 0; i < d; ++i) {
    if (!(lo[i] < hi[i])) throw ValidationError("box must have lo < hi in every coordinate");
  }
  return Box{d, lo, hi};
}

Polygon make_polygon(std::vector<std::array<double, 2>> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) throw ValidationError("polygon needs at least 3 vertices");
  Polygon p{std::move(vertices)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = p.vertices[i];
    const auto& b = p.vertices[(i + 1) % n];
    if (!std::isfinite(a[0]) || !std::isfinite(a[1])) {
      throw ValidationError("polygon vertex is not finite");
    }
    if (std::hypot(b[0] - a[0], b[1] - a[1]) == 0.0) {
      throw ValidationError("polygon has a zero-length edge at vertex " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_cross(p.vertices[i], p.vertices[(i + 1) % n], p.vertices[j], p.vertices[(j + 1) % n])) {
        throw ValidationError("polygon is not simple: edges " + std::to_string(i) + " and " +
                              std::to_string(j) + " intersect");
      }
    }
  }
  if (!(polygon_area(p) > 0.0)) {
    throw ValidationError("polygon vertices must be counter-clockwise");
  }
  return p;
}

BoxUnion make_box_union(int d, std::vector<Box> boxes) {
  check_dimension(d);
  if (boxes.empty()) throw ValidationError("box union is empty");
  for (auto& b : boxes) b = make_box(d, b.lo, b.hi);
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      double overlap = 1.0;
      for (int k = 0; k < d; ++k) {
        overlap *= std::max(
            0.0, std::min(boxes[i].hi[k], boxes[j].hi[k]) - std::max(boxes[i].lo[k], boxes[j].lo[k]));
      }
      if (overlap > 0.0) {
        throw ValidationError("boxes " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
      }
    }
  }
  return BoxUnion{d, std::move(boxes)};
}

void validate(const VoxelSet& v) {
  check_dimension(v.d);
  for (int i = 0; i < 3; ++i) {
    if (v.dims[i] < 1 || (i >= v.d && v.dims[i] != 1)) {
      throw ValidationError("voxel dims must be positive and 1 beyond the dimension");
    }
  }
  if (!(v.h > 0.0) || !std::isfinite(v.h)) throw ValidationError("voxel spacing must be positive");
  const std::size_t n = static_cast<std::size_t>(v.dims[0]) * v.dims[1] * v.dims[2];
  if (v.mask.size() != n) throw ValidationError("voxel mask size does not match dims");
  if (v.count() == 0) throw ValidationError("voxel set is empty");
  for (int k = 0; k < v.dims[2]; ++k) {
    for (int j = 0; j < v.dims[1]; ++j) {
      for (int i = 0; i < v.dims[0]; ++i) {
        if (!v.at(i, j, k)) continue;
        const std::array<int, 3> c{i, j, k};
        for (int a = 0; a < v.d; ++a) {
          if (c[a] == 0 || c[a] == v.dims[a] - 1) {
            throw ValidationError("voxel set touches the grid border; keep a one-cell margin");
          }
        }
      }
    }
  }
}

IntervalUnion dyadic_set(int n_max) {
  if (n_max < 1 || n_max > 1000) throw ValidationError("dyadic n_max must be in [1, 1000]");
  std::vector<std::pair<double, double>> iv;
  for (int n = 1; n <= n_max; ++n) iv.emplace_back(n, n + std::ldexp(1.0, -n));
  return IntervalUnion{std::move(iv)};
}

int dimension(const SetGeometry& s) {
  return std::visit(overloaded{[](const IntervalUnion&) { return 1; }, [](const Polygon&) { return 2; },
                               [](const auto& x) { return x.d; }},
                    s);
}

double volume(const SetGeometry& s) {
  return std::visit(
      overloaded{[](const IntervalUnion& u) {
                   double v = 0.0;
                   for (const auto& [a, b] : u.intervals) v += b - a;
                   return v;
                 },
                 [](const Ball& b) { return unit_ball_volume(b.d) * std::pow(b.radius, b.d); },
                 [](const Box& b) { return box_volume(b); }, [](const Polygon& p) { return polygon_area(p); },
                 [](const BoxUnion& u) {
                   double v = 0.0;
                   for (const auto& b : u.boxes) v += box_volume(b);
                   return v;
                 },
                 [](const VoxelSet& v) { return std::pow(v.h, v.d) * static_cast<double>(v.count()); }},
      s);
}

double classical_perimeter(const SetGeometry& s) {
  if (const auto* b = std::get_if<Ball>(&s)) {
    return sphere_area(b->d) * std::pow(b->radius, b->d - 1);
  }
  if (const auto* b = std::get_if<Box>(&s)) {
    double per = 0.0;
    for (int i = 0; i < b->d; ++i) {
      double face = 1.0;
      for (int j = 0; j < b->d; ++j) {
        if (j != i) face *= b->hi[j] - b->lo[j];
      }
      per += 2.0 * face;
    }
    return per;
  }
  if (const auto* u = std::get_if<IntervalUnion>(&s)) {
    return 2.0 * static_cast<double>(u->intervals.size());
  }
  double per = 0.0;
  for (const auto& f : boundary_facets(s)) per += f.measure;
  return per;
}

std::pair<Point, Point> bounding_box(const SetGeometry& s) {
  return std::visit(overloaded{[](const IntervalUnion& u) {
                                 return std::pair<Point, Point>{{u.intervals.front().first, 0, 0},
                                                                {u.intervals.back().second, 0, 0}};
                               },
                               [](const Ball& b) {
                                 Point lo = b.center, hi = b.center;
                                 for (int i = 0; i < b.d; ++i) {
                                   lo[i] -= b.radius;
                                   hi[i] += b.radius;
                                 }
                                 return std::pair<Point, Point>{lo, hi};
                               },
                               [](const Box& b) { return std::pair<Point, Point>{b.lo, b.hi}; },
                               [](const Polygon& p) {
                                 Point lo{kInf, kInf, 0}, hi{-kInf, -kInf, 0};
                                 for (const auto& v : p.vertices) {
                                   for (int i = 0; i < 2; ++i) {
                                     lo[i] = std::min(lo[i], v[i]);
                                     hi[i] = std::max(hi[i], v[i]);
                                   }
                                 }
                                 return std::pair<Point, Point>{lo, hi};
                               },
                               [](const BoxUnion& u) {
                                 Point lo = u.boxes[0].lo, hi = u.boxes[0].hi;
                                 for (const auto& b : u.boxes) {
                                   for (int i = 0; i < u.d; ++i) {
                                     lo[i] = std::min(lo[i], b.lo[i]);
                                     hi[i] = std::max(hi[i], b.hi[i]);
                                   }
                                 }
                                 return std::pair<Point, Point>{lo, hi};
                               },
                               [](const VoxelSet& v) {
                                 std::array<int, 3> mn{v.dims}, mx{-1, -1, -1};
                                 for (int k = 0; k < v.dims[2]; ++k) {
                                   for (int j = 0; j < v.dims[1]; ++j) {
                                     for (int i = 0; i < v.dims[0]; ++i) {
                                       if (!v.at(i, j, k)) continue;
                                       const std::array<int, 3> c{i, j, k};
                                       for (int a = 0; a < 3; ++a) {
                                         mn[a] = std::min(mn[a], c[a]);
                                         mx[a] = std::max(mx[a], c[a]);
                                       }
                                     }
                                   }
                                 }
                                 Point lo{}, hi{};
                                 for (int a = 0; a < v.d; ++a) {
                                   lo[a] = v.origin[a] + v.h * mn[a];
                                   hi[a] = v.origin[a] + v.h * (mx[a] + 1);
                                 }
                                 return std::pair<Point, Point>{lo, hi};
                               }},
                    s);
}

std::string describe(const SetGeometry& s) {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{[&](const IntervalUnion& u) {
                          os << "intervals";
                          for (const auto& [a, b] : u.intervals) os << " [" << a << "," << b << "]";
                        },
                        [&](const Ball& b) {
                          os << "ball d=" << b.d << " r=" << b.radius << " c=(" << b.center[0] << ","
                             << b.center[1] << "," << b.center[2] << ")";
                        },
                        [&](const Box& b) {
                          os << "box d=" << b.d;
                          for (int i = 0; i < b.d; ++i) os << " [" << b.lo[i] << "," << b.hi[i] << "]";
                        },
                        [&](const Polygon& p) {
                          os << "polygon";
                          for (const auto& v : p.vertices) os << " (" << v[0] << "," << v[1] << ")";
                        },
                        [&](const BoxUnion& u) { os << "box_union d=" << u.d << " n=" << u.boxes.size(); },
                        [&](const VoxelSet& v) {
                          os << "voxels d=" << v.d << " dims=" << v.dims[0] << "x" << v.dims[1] << "x"
                             << v.dims[2] << " h=" << v.h << " cells=" << v.count();
                        }},
             s);
  return os.str();
}

bool contains(const Shape& s, const Point& x) {
  return std::visit(overloaded{[&](const IntervalUnion& u) {
                                 for (const auto& [a, b] : u.intervals) {
                                   if (x[0] >= a && x[0] <= b) return true;
                                 }
                                 return false;
                               },
                               [&](const Ball& b) { return norm(x - b.center) <= b.radius; },
                               [&](const Box& b) {
                                 for (int i = 0; i < b.d; ++i) {
                                   if (x[i] < b.lo[i] || x[i] > b.hi[i]) return false;
                                 }
                                 return true;
                               },
                               [&](const Polygon& p) {
                                 bool in = false;
                                 const std::size_t n = p.vertices.size();
                                 for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
                                   const auto& a = p.vertices[i];
                                   const auto& b = p.vertices[j];
                                   if ((a[1] > x[1]) != (b[1] > x[1]) &&
                                       x[0] < (b[0] - a[0]) * (x[1] - a[1]) / (b[1] - a[1]) + a[0]) {
                                     in = !in;
                                   }
                                 }
                                 return in;
                               },
                               [&](const BoxUnion& u) {
                                 for (const auto& b : u.boxes) {
                                   if (contains(Shape{b}, x)) return true;
                                 }
                                 return false;
                               }},
                    s);
}

std::vector<std::pair<double, double>> ray_segments(const Shape& s, const Point& x, const Point& th) {
  return std::visit(overloaded{[&](const IntervalUnion& u) {
                                 std::vector<std::pair<double, double>> segs;
                                 for (const auto& [a, b] : u.intervals) {
                                   double t0 = (a - x[0]) / th[0];
                                   double t1 = (b - x[0]) / th[0];
                                   if (t0 > t1) std::swap(t0, t1);
                                   t0 = std::max(t0, 0.0);
                                   if (t1 > t0) segs.emplace_back(t0, t1);
                                 }
                                 std::sort(segs.begin(), segs.end());
                                 return segs;
                               },
                               [&](const Ball& b) {
                                 const Point p = x - b.center;
                                 const double bb = dot(p, th);
                                 const double c = dot(p, p) - b.radius * b.radius;
                                 const double disc = std::max(0.0, bb * bb - c);
                                 return std::vector<std::pair<double, double>>{{0.0, -bb + std::sqrt(disc)}};
                               },
                               [&](const Box& b) {
                                 double t0, t1;
                                 ray_box(b, x, th, t0, t1);
                                 return std::vector<std::pair<double, double>>{{0.0, t1}};
                               },
                               [&](const Polygon& p) {
                                 std::vector<double> ts;
                                 const std::size_t n = p.vertices.size();
                                 for (std::size_t i = 0; i < n; ++i) {
                                   const auto& a = p.vertices[i];
                                   const auto& b = p.vertices[(i + 1) % n];
                                   const double ex = b[0] - a[0], ey = b[1] - a[1];
                                   const double den = th[0] * ey - th[1] * ex;
                                   if (den == 0.0) continue;
                                   const double wx = a[0] - x[0], wy = a[1] - x[1];
                                   const double t = (wx * ey - wy * ex) / den;
                                   const double u = (wx * th[1] - wy * th[0]) / den;
                                   if (t > 0.0 && u >= 0.0 && u < 1.0) ts.push_back(t);
                                 }
                                 std::sort(ts.begin(), ts.end());
                                 std::vector<std::pair<double, double>> segs;
                                 double start = 0.0;
                                 for (std::size_t i = 0; i < ts.size(); ++i) {
                                   if (i % 2 == 0) {
                                     segs.emplace_back(start, ts[i]);
                                   } else {
                                     start = ts[i];
                                   }
                                 }
                                 return segs;
                               },
                               [&](const BoxUnion& u) {
                                 std::vector<std::pair<double, double>> segs;
                                 for (const auto& b : u.boxes) {
                                   double t0, t1;
                                   if (ray_box(b, x, th, t0, t1)) segs.emplace_back(t0, t1);
                                 }
                                 return merge(std::move(segs));
                               }},
                    s);
}

std::vector<Facet> boundary_decomposition(const Polygon& p) {
  std::vector<Facet> out;
  const std::size_t n = p.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = p.vertices[i];
    const auto& b = p.vertices[(i + 1) % n];
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    if (len == 0.0) throw ValidationError("degenerate polygon edge " + std::to_string(i));
    out.push_back(Facet{len, {(b[1] - a[1]) / len, -(b[0] - a[0]) / len, 0.0}});
  }
  return out;
}

std::vector<Facet> boundary_facets(const SetGeometry& s) {
  return std::visit(
      overloaded{[](const IntervalUnion& u) {
                   std::vector<Facet> f;
                   for (std::size_t i = 0; i < u.intervals.size(); ++i) {
                     f.push_back(Facet{1.0, {-1.0, 0.0, 0.0}});
                     f.push_back(Facet{1.0, {1.0, 0.0, 0.0}});
                   }
                   return f;
                 },
                 [](const Ball&) -> std::vector<Facet> {
                   throw UnsupportedError("a ball has no flat boundary pieces; use boundary_integral");
                 },
                 [](const Box& b) {
                   std::vector<Facet> f;
                   for (int i = 0; i < b.d; ++i) {
                     double area = 1.0;
                     for (int j = 0; j < b.d; ++j) {
                       if (j != i) area *= b.hi[j] - b.lo[j];
                     }
                     Point n{};
                     n[i] = -1.0;
                     f.push_back(Facet{area, n});
                     n[i] = 1.0;
                     f.push_back(Facet{area, n});
                   }
                   return f;
                 },
                 [](const Polygon& p) { return boundary_decomposition(p); },
                 [](const BoxUnion& u) {
                   if (u.d > 2) throw UnsupportedError("box-union facets are implemented for d <= 2");
                   std::vector<Facet> f;
                   for (std::size_t i = 0; i < u.boxes.size(); ++i) {
                     if (u.d == 1) {
                       for (int side = 0; side < 2; ++side) {
                         Point n{side == 0 ? -1.0 : 1.0, 0, 0};
                         bool covered = false;
                         const double x = side == 0 ? u.boxes[i].lo[0] : u.boxes[i].hi[0];
                         for (std::size_t j = 0; j < u.boxes.size(); ++j) {
                           const double y = side == 0 ? u.boxes[j].hi[0] : u.boxes[j].lo[0];
                           if (j != i && y == x) covered = true;
                         }
                         if (!covered) f.push_back(Facet{1.0, n});
                       }
                       continue;
                     }
                     for (int axis = 0; axis < 2; ++axis) {
                       for (int side = 0; side < 2; ++side) {
                         const double len = exposed_length(u, i, axis, side);
                         if (len <= 0.0) continue;
                         Point n{};
                         n[axis] = side == 0 ? -1.0 : 1.0;
                         f.push_back(Facet{len, n});
                       }
                     }
                   }
                   return f;
                 },
                 [](const VoxelSet& v) {
                   if (v.d > 2) throw UnsupportedError("voxel facets are implemented for d <= 2");
                   std::vector<Facet> f;
                   const double area = v.d == 1 ? 1.0 : v.h;
                   for (int j = 0; j < v.dims[1]; ++j) {
                     for (int i = 0; i < v.dims[0]; ++i) {
                       if (!v.at(i, j)) continue;
                       const int nb[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
                       for (int q = 0; q < 2 * v.d; ++q) {
                         const int ii = i + nb[q][0], jj = j + nb[q][1];
                         const bool inside =
                             ii >= 0 && jj >= 0 && ii < v.dims[0] && jj < v.dims[1] && v.at(ii, jj);
                         if (!inside) {
                           f.push_back(Facet{area, {double(nb[q][0]), double(nb[q][1]), 0.0}});
                         }
                       }
                     }
                   }
                   return f;
                 }},
      s);
}

double boundary_integral(const SetGeometry& s, const std::function<double(const Point&)>& f,
                         const SphereResolution& res) {
  if (const auto* b = std::get_if<Ball>(&s)) {
    double sum = 0.0;
    for (const auto& node : sphere_grid(b->d, res)) sum += node.weight * f(node.theta);
    return sum * std::pow(b->radius, b->d - 1);
  }
  double sum = 0.0;
  for (const auto& facet : boundary_facets(s)) sum += facet.measure * f(facet.normal);
  return sum;
}

VoxelSet rasterize(const Shape& s, double h, int margin) {
  if (!(h > 0.0)) throw ValidationError("raster spacing must be positive");
  if (margin < 1) throw ValidationError("raster margin must be at least one cell");
  const int d = dimension(SetGeometry{std::visit([](const auto& x) { return SetGeometry{x}; }, s)});
  const auto [lo, hi] = std::visit([](const auto& x) { return bounding_box(SetGeometry{x}); }, s);
  VoxelSet v;
  v.d = d;
  v.h = h;
  std::array<long, 3> first{0, 0, 0};
  for (int a = 0; a < 3; ++a) {
    if (a >= d) {
      v.dims[a] = 1;
      continue;
    }
    first[a] = static_cast<long>(std::floor(lo[a] / h)) - margin;
    const long last = static_cast<long>(std::ceil(hi[a] / h)) + margin;
    const long n = last - first[a];
    if (n > (1L << 24)) throw ValidationError("raster grid too large; increase h");
    v.dims[a] = static_cast<int>(n);
    v.origin[a] = h * static_cast<double>(first[a]);
  }
  const std::size_t total = static_cast<std::size_t>(v.dims[0]) * v.dims[1] * v.dims[2];
  if (total > (std::size_t{1} << 30)) throw ValidationError("raster grid too large; increase h");
  v.mask.assign(total, 0);
  for (int k = 0; k < v.dims[2]; ++k) {
    for (int j = 0; j < v.dims[1]; ++j) {
      for (int i = 0; i < v.dims[0]; ++i) {
        Point x{};
        const std::array<int, 3> c{i, j, k};
        for (int a = 0; a < d; ++a) x[a] = h * (static_cast<double>(first[a] + c[a]) + 0.5);
        if (contains(s, x)) v.mask[v.index(i, j, k)] = 1;
      }
    }
  }
  if (v.count() == 0) throw ValidationError("rasterization is empty; decrease h");
  return v;
}

void write_voxels(const VoxelSet& v, const std::string& path) {
  validate(v);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  out.precision(17);
  out << "NLPVOX 1\n"
      << "dims " << v.dims[0] << " " << v.dims[1] << " " << v.dims[2] << "\n"
      << "d " << v.d << "\n"
      << "h " << v.h << "\n"
      << "origin " << v.origin[0] << " " << v.origin[1] << " " << v.origin[2] << "\n"
      << "data\n";
  out.write(reinterpret_cast<const char*>(v.mask.data()), static_cast<std::streamsize>(v.mask.size()));
  if (!out) throw ValidationError("failed writing " + path);
}

VoxelSet read_voxels(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open voxel file " + path);
  std::string line;
  std::getline(in, line);
  if (line != "NLPVOX 1") throw ValidationError(path + ": missing NLPVOX 1 header");
  VoxelSet v;
  bool have_dims = false, have_d = false, have_h = false;
  while (std::getline(in, line)) {
    if (line == "data") break;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "dims") {
      ls >> v.dims[0] >> v.dims[1] >> v.dims[2];
      have_dims = true;
    } else if (key == "d") {
      ls >> v.d;
      have_d = true;
    } else if (key == "h") {
      ls >> v.h;
      have_h = true;
    } else if (key == "origin") {
      ls >> v.origin[0] >> v.origin[1] >> v.origin[2];
    } else {
      throw ValidationError(path + ": unknown header key '" + key + "'");
    }
    if (!ls) throw ValidationError(path + ": malformed header line '" + line + "'");
  }
  if (line != "data" || !have_dims || !have_d || !have_h) {
    throw ValidationError(path + ": header needs dims, d, h and a data line");
  }
  for (int a = 0; a < 3; ++a) {
    if (v.dims[a] < 1) throw ValidationError(path + ": dims must be positive");
  }
  const std::size_t n = static_cast<std::size_t>(v.dims[0]) * v.dims[1] * v.dims[2];
  v.mask.resize(n);
  in.read(reinterpret_cast<char*>(v.mask.data()), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw ValidationError(path + ": truncated voxel data");
  }
  validate(v);
  return v;
}

VoxelSet shift_voxels(const VoxelSet& v, std::array<int, 3> offset) {
  VoxelSet out = v;
  for (int a = 0; a < 3; ++a) {
    if (a >= v.d) offset[a] = 0;
    out.dims[a] = v.dims[a] + std::abs(offset[a]);
  }
  out.mask.assign(static_cast<std::size_t>(out.dims[0]) * out.dims[1] * out.dims[2], 0);
  std::array<int, 3> base{};
  for (int a = 0; a < 3; ++a) {
    base[a] = std::max(offset[a], 0);
    out.origin[a] = v.origin[a] + v.h * std::min(offset[a], 0);
  }
  for (int k = 0; k < v.dims[2]; ++k) {
    for (int j = 0; j < v.dims[1]; ++j) {
      for (int i = 0; i < v.dims[0]; ++i) {
        out.mask[out.index(i + base[0], j + base[1], k + base[2])] = v.mask[v.index(i, j, k)];
      }
    }
  }
  return out;
}

}  // namespace nlperim
