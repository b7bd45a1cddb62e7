#include <algorithm>
#include <cmath>
#include <set>

#include "nlperim/perimeter.h"

namespace nlperim {

void validate(const GridFunction& u) {
  check_dimension(u.d);
  if (!(u.h > 0.0) || !std::isfinite(u.h)) throw ValidationError("grid spacing must be positive");
  std::size_t n = 1;
  for (int a = 0; a < 3; ++a) {
    if (u.dims[a] < 1 || (a >= u.d && u.dims[a] != 1)) {
      throw ValidationError("grid extents do not match the dimension");
    }
    n *= static_cast<std::size_t>(u.dims[a]);
  }
  if (u.values.size() != n) throw ValidationError("grid function has the wrong number of values");
  for (int k = 0; k < u.dims[2]; ++k) {
    for (int j = 0; j < u.dims[1]; ++j) {
      for (int i = 0; i < u.dims[0]; ++i) {
        const double v = u.values[u.index(i, j, k)];
        if (!std::isfinite(v)) throw ValidationError("grid function has non-finite values");
        const bool border = i == 0 || i == u.dims[0] - 1 || (u.d >= 2 && (j == 0 || j == u.dims[1] - 1)) ||
                            (u.d >= 3 && (k == 0 || k == u.dims[2] - 1));
        if (border && v != 0.0) {
          throw ValidationError("grid function must vanish on the grid border (compact support)");
        }
      }
    }
  }
}

VoxelSet superlevel_set(const GridFunction& u, double t) {
  VoxelSet v;
  v.d = u.d;
  v.dims = u.dims;
  v.h = u.h;
  v.origin = u.origin;
  v.mask.resize(u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i) v.mask[i] = u.values[i] > t ? 1 : 0;
  return v;
}

GridFunction indicator(const VoxelSet& e, double c) {
  GridFunction u;
  u.d = e.d;
  u.dims = e.dims;
  u.h = e.h;
  u.origin = e.origin;
  u.values.resize(e.mask.size());
  for (std::size_t i = 0; i < e.mask.size(); ++i) u.values[i] = e.mask[i] ? c : 0.0;
  return u;
}

PerimeterResult f_nu(const GridFunction& u, const MeasureSpec& m, const QuadratureSpec& q) {
  validate(u);
  if (u.d != m.dimension()) throw ValidationError("function and measure dimensions differ");
  // Crop to the support so the shift lattice is as small as possible.
  std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
  for (int a = 0; a < 3; ++a) {
    lo[a] = u.dims[a];
    hi[a] = -1;
  }
  double l1 = 0.0;
  for (int k = 0; k < u.dims[2]; ++k) {
    for (int j = 0; j < u.dims[1]; ++j) {
      for (int i = 0; i < u.dims[0]; ++i) {
        const double v = u.values[u.index(i, j, k)];
        if (v == 0.0) continue;
        l1 += std::abs(v);
        const int c[3] = {i, j, k};
        for (int a = 0; a < 3; ++a) {
          lo[a] = std::min(lo[a], c[a]);
          hi[a] = std::max(hi[a], c[a]);
        }
      }
    }
  }
  const double cell = std::pow(u.h, u.d);
  PerimeterResult zero;
  zero.method = "shifted_differences";
  if (l1 == 0.0) return zero;
  l1 *= cell;

  std::array<int, 3> n{1, 1, 1};
  for (int a = 0; a < u.d; ++a) n[a] = hi[a] - lo[a] + 1;
  auto val = [&](int i, int j, int k) -> double {
    if (i < 0 || j < 0 || k < 0 || i >= n[0] || j >= n[1] || k >= n[2]) return 0.0;
    return u.values[u.index(i + lo[0], j + lo[1], k + lo[2])];
  };
  std::array<int, 3> m2{1, 1, 1};
  for (int a = 0; a < u.d; ++a) m2[a] = 2 * n[a] - 1;
  std::vector<double> half_diff(static_cast<std::size_t>(m2[0]) * m2[1] * m2[2]);
  std::size_t idx = 0;
  for (int sk = -(n[2] - 1); sk <= n[2] - 1; ++sk) {
    for (int sj = -(n[1] - 1); sj <= n[1] - 1; ++sj) {
      for (int si = -(n[0] - 1); si <= n[0] - 1; ++si) {
        double acc = 0.0;
        for (int k = std::min(0, -sk); k < std::max(n[2], n[2] - sk); ++k) {
          for (int j = std::min(0, -sj); j < std::max(n[1], n[1] - sj); ++j) {
            for (int i = std::min(0, -si); i < std::max(n[0], n[0] - si); ++i) {
              acc += std::abs(val(i + si, j + sj, k + sk) - val(i, j, k));
            }
          }
        }
        half_diff[idx++] = 0.5 * acc * cell;
      }
    }
  }
  double radius = 0.0;
  for (int a = 0; a < u.d; ++a) radius += std::pow(n[a] * u.h, 2);
  const Covariogram inc = sampled_increment(LatticeFunction(u.d, n, u.h, std::move(half_diff), l1, true), l1,
                                            std::sqrt(radius), "shifted_differences");
  PerimeterResult r = per_nu(inc, m, q);
  r.method = "shifted_differences";
  return r;
}

PerimeterResult coarea_rhs(const GridFunction& u, const MeasureSpec& m, const QuadratureSpec& q,
                           std::span<const double> t_nodes) {
  validate(u);
  std::set<double> values;
  for (double v : u.values) {
    if (v < 0.0) throw ValidationError("coarea_rhs expects a nonnegative function");
    values.insert(v);
  }
  std::vector<double> levels;
  if (t_nodes.empty()) {
    levels.assign(values.begin(), values.end());
  } else {
    levels.assign(t_nodes.begin(), t_nodes.end());
    std::sort(levels.begin(), levels.end());
    for (double v : values) {
      const bool found = std::any_of(levels.begin(), levels.end(),
                                     [&](double t) { return std::abs(t - v) <= 1e-12 * (1 + std::abs(v)); });
      if (!found) throw ValidationError("t_nodes must contain every value of u");
    }
  }
  if (levels.empty() || levels.front() > 0.0) levels.insert(levels.begin(), 0.0);
  PerimeterResult res;
  res.method = "coarea";
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    const double gap = levels[i + 1] - levels[i];
    if (gap <= 0.0 || levels[i] < 0.0) continue;
    const VoxelSet s = superlevel_set(u, levels[i]);
    if (s.count() == 0) continue;
    const PerimeterResult p = per_nu(covariogram_grid(s), m, q);
    res.value += gap * p.value;
    res.abs_error += gap * p.abs_error;
    res.breakdown.near += gap * p.breakdown.near;
    res.breakdown.bulk += gap * p.breakdown.bulk;
    res.breakdown.tail += gap * p.breakdown.tail;
  }
  res.rel_error = res.value > 0.0 ? res.abs_error / res.value : 0.0;
  return res;
}

}  // namespace nlperim
