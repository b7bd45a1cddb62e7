#pragma once

// Randomized property suites shared by the unit tests and the acceptance
// binary. Each suite draws its cases from a fixed seed and reports the number
// of cases run, the failures and the first failing case.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nlperim/convex.h"
#include "nlperim/covariogram.h"
#include "nlperim/geometry.h"
#include "nlperim/measures.h"
#include "nlperim/perimeter.h"

namespace props {

using namespace nlperim;

struct Suite {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;

  bool passed() const { return cases > 0 && failures == 0; }
  void record(bool ok, const std::string& what) {
    ++cases;
    if (ok) return;
    if (failures++ == 0) first_failure = what;
  }
  std::string summary() const {
    std::ostringstream os;
    os << name << ": " << cases - failures << "/" << cases << " cases";
    if (failures) os << ", first failure: " << first_failure;
    return os.str();
  }
};

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

 private:
  std::mt19937_64 rng_;
};

inline KernelSpec kernel(KernelName n, double scale, double beta = 0.0) {
  KernelSpec k;
  k.name = n;
  k.scale = scale;
  k.beta = beta;
  return k;
}

// A kernel measure with compact support of radius <= max_scale, or a gaussian
// when `allow_gaussian`.
inline MeasureSpec random_kernel(Draw& r, int d, double max_scale, bool allow_gaussian) {
  const double s = r.uniform(0.2, 1.0) * max_scale;
  switch (r.integer(allow_gaussian ? 0 : 1, 2)) {
    case 0: return MeasureSpec::kernel(d, kernel(KernelName::gaussian, s));
    case 1: return MeasureSpec::kernel(d, kernel(KernelName::indicator_ball, s));
    default:
      return MeasureSpec::kernel(d, kernel(KernelName::inverse_power_truncated, s, r.uniform(0.0, 0.9)));
  }
}

inline MeasureSpec random_measure(Draw& r, int d) {
  switch (r.integer(0, 3)) {
    case 0: return MeasureSpec::stable(d, r.uniform(0.1, 0.9));
    case 1: return MeasureSpec::fractional(d, r.uniform(0.1, 0.9));
    default: return random_kernel(r, d, r.uniform(0.1, 2.0), true);
  }
}

inline IntervalUnion random_intervals(Draw& r, int max_count = 4) {
  const int n = r.integer(1, max_count);
  std::vector<double> cuts;
  for (int i = 0; i < 2 * n; ++i) cuts.push_back(r.uniform(0.0, 3.0));
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::pair<double, double>> iv;
  for (int i = 0; i < n; ++i) {
    if (cuts[2 * i + 1] - cuts[2 * i] > 1e-3) iv.emplace_back(cuts[2 * i], cuts[2 * i + 1]);
  }
  if (iv.empty()) iv.emplace_back(0.0, 1.0);
  return make_interval_union(iv);
}

// Random occupancy inside an n x n core surrounded by `margin` empty cells.
inline VoxelSet random_voxels(Draw& r, int n, int margin, double h) {
  VoxelSet v;
  v.d = 2;
  v.h = h;
  v.dims = {n + 2 * margin, n + 2 * margin, 1};
  v.origin = {r.uniform(-1, 1), r.uniform(-1, 1), 0};
  v.mask.assign(static_cast<std::size_t>(v.dims[0]) * v.dims[1], 0);
  const double fill = r.uniform(0.2, 0.8);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) v.mask[v.index(i + margin, j + margin)] = r.uniform(0, 1) < fill ? 1 : 0;
  }
  v.mask[v.index(margin, margin)] = 1;
  return v;
}

// Piecewise constant u: a sum of random cell-aligned boxes at random heights.
inline GridFunction random_steps(Draw& r, int d, int n, int margin, double h, int levels) {
  GridFunction u;
  u.d = d;
  u.h = h;
  const int m = n + 2 * margin;
  u.dims = {m, d == 2 ? m : 1, 1};
  u.values.assign(static_cast<std::size_t>(u.dims[0]) * u.dims[1], 0.0);
  for (int l = 0; l < levels; ++l) {
    const int i0 = r.integer(0, n - 1), i1 = r.integer(i0 + 1, n);
    const int j0 = d == 2 ? r.integer(0, n - 1) : 0, j1 = d == 2 ? r.integer(j0 + 1, n) : 1;
    const double height = std::round(r.uniform(0.5, 3.0) * 8) / 8;
    for (int j = j0; j < j1; ++j) {
      for (int i = i0; i < i1; ++i) u.values[u.index(i + margin, d == 2 ? j + margin : 0)] += height;
    }
  }
  return u;
}

// Per_nu(E) = Per_nu(E^c) inside a window that every shift y in the support of
// nu keeps E inside of. 1D sets use a window of 12 kernel scales, 2D voxel sets
// a margin at least the kernel support.
inline Suite complement_symmetry(std::uint64_t seed, int n1 = 80, int n2 = 40) {
  Suite s{"complement symmetry"};
  Draw r(seed);
  for (int c = 0; c < n1; ++c) {
    const auto e = random_intervals(r);
    const auto m = random_kernel(r, 1, r.uniform(0.05, 1.0), true);
    const double reach = 12 * m.kernel_spec()->scale;
    const Window w{{-reach, 0, 0}, {3 + reach, 0, 0}};
    const auto rep = symmetry_check(e, m, w);
    s.record(!rep.inconclusive && rep.gap <= rep.tolerance,
             "1d " + describe(e) + " " + m.describe() + " gap " + std::to_string(rep.gap));
  }
  for (int c = 0; c < n2; ++c) {
    const double h = 1.0 / 16;
    const auto v = random_voxels(r, r.integer(4, 16), 8, h);
    const auto m = random_kernel(r, 2, 8 * h, false);
    const auto rep = symmetry_check(v, m, Window{});
    s.record(!rep.inconclusive && rep.gap <= rep.tolerance,
             "2d voxels " + m.describe() + " gap " + std::to_string(rep.gap));
  }
  return s;
}

// F_nu(u) against the level-set sum, both exact for piecewise constant u.
inline Suite coarea(std::uint64_t seed, int n1 = 70, int n2 = 30) {
  Suite s{"co-area identity"};
  Draw r(seed);
  for (int c = 0; c < n1 + n2; ++c) {
    const int d = c < n1 ? 1 : 2;
    const auto u = random_steps(r, d, d == 1 ? 32 : 12, 2, d == 1 ? 1.0 / 16 : 1.0 / 8, 3);
    const auto m = random_measure(r, d);
    const double f = f_nu(u, m).value;
    const double g = coarea_rhs(u, m).value;
    s.record(
        std::abs(f - g) <= 1e-8 * std::max(std::abs(g), 1e-300),
        std::to_string(d) + "d " + m.describe() + " f " + std::to_string(f) + " rhs " + std::to_string(g));
  }
  return s;
}

inline SetGeometry random_shape(Draw& r, int d) {
  if (d == 1) return random_intervals(r);
  if (r.coin()) return make_ball(2, r.uniform(0.2, 2.0), {r.uniform(-1, 1), r.uniform(-1, 1), 0});
  const double x = r.uniform(-1, 1), y = r.uniform(-1, 1);
  return make_box(2, {x, y, 0}, {x + r.uniform(0.2, 2.0), y + r.uniform(0.2, 2.0), 0});
}

inline Shape as_shape(const SetGeometry& g) {
  return std::visit(
      [](const auto& x) -> Shape {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, VoxelSet>) {
          throw ValidationError("voxel sets have no analytic shape");
        } else {
          return x;
        }
      },
      g);
}

// Per_nu(E) <= C_nu (Per(E) + |E|) with C_nu = int (1 ^ |x|) nu(dx), and
// Per_nu(E) <= (int |x| nu) Per(E) whenever the first moment is finite.
inline Suite upper_bounds(std::uint64_t seed, int n = 120) {
  Suite s{"upper bounds"};
  Draw r(seed);
  for (int c = 0; c < n; ++c) {
    const int d = r.integer(1, 2);
    const auto e = random_shape(r, d);
    const auto m = random_measure(r, d);
    const auto p = per_nu(covariogram_exact(as_shape(e)), m);
    const double lower = p.value - p.abs_error;
    const double per = classical_perimeter(e), vol = volume(e);
    const double C = m.moment(1, 0.0, 1.0) + m.mass(1.0, kInfinity);
    bool ok = lower <= C * (per + vol);
    if (m.kind() == MeasureKind::kernel) ok = ok && lower <= m.moment(1, 0.0, kInfinity) * per;
    s.record(ok, describe(e) + " " + m.describe() + " Per_nu " + std::to_string(p.value));
  }
  return s;
}

// Among sets of equal area the disk has the least Per_nu for radially
// non-increasing kernels.
inline Suite isoperimetric(std::uint64_t seed, int n = 100) {
  Suite s{"isoperimetric ordering"};
  Draw r(seed);
  for (int c = 0; c < n; ++c) {
    const double area = r.uniform(0.25, 4.0);
    const auto m = MeasureSpec::kernel(
        2, kernel(r.coin() ? KernelName::gaussian : KernelName::indicator_ball, r.uniform(0.05, 2.0)));
    const double a = std::sqrt(area), b = std::sqrt(area / 2), l = std::sqrt(area / 3);
    const std::vector<Shape> zoo{
        make_box(2, {0, 0, 0}, {a, a, 0}),
        make_box(2, {0, 0, 0}, {2 * b, b, 0}),
        make_box_union(2, {make_box(2, {0, 0, 0}, {2 * l, l, 0}), make_box(2, {0, l, 0}, {l, 2 * l, 0})}),
    };
    const auto disk = per_nu(covariogram_exact(Shape{make_ball(2, std::sqrt(area / std::numbers::pi))}), m);
    for (const auto& z : zoo) {
      const auto p = per_nu(covariogram_exact(z), m);
      s.record(disk.value <= p.value + disk.abs_error + p.abs_error,
               m.describe() + " area " + std::to_string(area) + " disk " + std::to_string(disk.value) +
                   " vs " + std::to_string(p.value));
    }
  }
  return s;
}

// Bit-identical Per_nu for voxel sets shifted by whole cells.
inline Suite translation(std::uint64_t seed, int n = 100) {
  Suite s{"translation invariance"};
  Draw r(seed);
  for (int c = 0; c < n; ++c) {
    const auto v = random_voxels(r, r.integer(3, 12), 1, 1.0 / r.integer(4, 16));
    const auto m = random_measure(r, 2);
    const std::array<int, 3> off{r.integer(-6, 6), r.integer(-6, 6), 0};
    const double a = per_nu(covariogram_grid(v), m).value;
    const double b = per_nu(covariogram_grid(shift_voxels(v, off)), m).value;
    s.record(a == b, m.describe() + " " + std::to_string(a) + " != " + std::to_string(b));
  }
  return s;
}

// g(y) = g(-y) and 0 <= g(0) - g(y) <= L |y| at random shifts.
inline Suite covariogram_shape(std::uint64_t seed, int n = 100, int shifts = 20) {
  Suite s{"covariogram symmetry and Lipschitz"};
  Draw r(seed);
  for (int c = 0; c < n; ++c) {
    const bool sampled = c % 4 == 3;
    const int d = sampled ? 2 : r.integer(1, 2);
    const Covariogram g = sampled ? covariogram_grid(random_voxels(r, r.integer(3, 10), 1, 0.125))
                                  : covariogram_exact(as_shape(random_shape(r, d)));
    const double L = g.lipschitz(), R = g.support_radius();
    bool ok = true;
    for (int k = 0; k < shifts && ok; ++k) {
      Point y{r.uniform(-R, R), d == 2 ? r.uniform(-R, R) : 0.0, 0.0};
      const Point my{-y[0], -y[1], 0.0};
      const double norm = std::hypot(y[0], y[1]);
      const double a = g.value(y), b = g.value(my);
      ok = sampled ? a == b : std::abs(a - b) <= 1e-14 * g.volume();
      const double inc = g.increment(y);
      ok = ok && inc >= -1e-14 * g.volume() && inc <= L * norm * (1 + 1e-12) + 1e-15;
    }
    s.record(ok, g.describe());
  }
  return s;
}

// Random centrally symmetric bodies: the bipolar gauge is the gauge and the
// support function sits between the in- and out-radius.
inline Suite gauge_duality(std::uint64_t seed, int n = 100, int points = 10) {
  Suite s{"gauge duality"};
  Draw r(seed);
  for (int c = 0; c < n; ++c) {
    const int d = r.integer(2, 3);
    ConvexBody K = ConvexBody::ball(2);
    switch (c % 4) {
      case 0: {
        std::vector<double> ax(d);
        for (auto& a : ax) a = r.uniform(0.2, 3.0);
        K = ConvexBody::ellipsoid(ax);
        break;
      }
      case 1: {
        std::vector<double> ax(d);
        for (auto& a : ax) a = r.uniform(0.2, 3.0);
        K = ConvexBody::box(ax);
        break;
      }
      case 2: K = ConvexBody::lp_ball(d, r.uniform(1.2, 6.0), r.uniform(0.5, 2.0)); break;
      default: {
        // Affine image of a regular hexagon with positive determinant.
        const double a = r.uniform(0.5, 2), b = r.uniform(-0.5, 0.5), e = r.uniform(0.5, 2);
        std::vector<std::array<double, 2>> verts;
        for (int k = 0; k < 6; ++k) {
          const double t = k * std::numbers::pi / 3;
          verts.push_back({a * std::cos(t) + b * std::sin(t), e * std::sin(t)});
        }
        K = ConvexBody::polygon_sym(verts);
      }
    }
    const ConvexBody bipolar = K.polar().polar();
    bool ok = true;
    for (int k = 0; k < points && ok; ++k) {
      Point x{r.uniform(-2, 2), r.uniform(-2, 2), K.dimension() == 3 ? r.uniform(-2, 2) : 0.0};
      const double norm = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
      const double gk = gauge_norm(K, x);
      ok = std::abs(gauge_norm(bipolar, x) - gk) <= 1e-10 * std::max(gk, 1.0);
      const double sup = polar_gauge(K, x);
      ok = ok && sup >= K.inradius() * norm * (1 - 1e-12) && sup <= K.outradius() * norm * (1 + 1e-12);
    }
    s.record(ok, K.describe());
  }
  return s;
}

}  // namespace props
