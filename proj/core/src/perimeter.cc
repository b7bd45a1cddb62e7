#include "nlperim/perimeter.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlperim {

namespace {

double default_r_min(const Covariogram& cov, const RadialProfile& rho) {
  return 1e-6 * std::min(cov.min_feature(), rho.length_scale());
}

// Increment of a difference-type set function along the complement side of a
// window: h(y) = |(W \ E) ∩ (E - y)| for interval unions, all pieces exact.
class ComplementOverlapModel final : public Covariogram::Model {
 public:
  ComplementOverlapModel(std::vector<std::pair<double, double>> comp,
                         std::vector<std::pair<double, double>> set, double width)
      : comp_(std::move(comp)), set_(std::move(set)), width_(width) {
    std::vector<double> ends;
    for (const auto& [a, b] : comp_) {
      ends.push_back(a);
      ends.push_back(b);
    }
    for (const auto& [a, b] : set_) {
      ends.push_back(a);
      ends.push_back(b);
    }
    feature_ = width_;
    for (std::size_t i = 0; i < ends.size(); ++i) {
      for (std::size_t j = i + 1; j < ends.size(); ++j) {
        const double dd = std::abs(ends[i] - ends[j]);
        if (dd > 0.0) {
          feature_ = std::min(feature_, dd);
          diffs_.push_back(dd);
        }
      }
    }
    std::sort(diffs_.begin(), diffs_.end());
    diffs_.erase(std::unique(diffs_.begin(), diffs_.end()), diffs_.end());
  }
  int dimension() const override { return 1; }
  double volume() const override { return 0.0; }
  double increment(const Point& y) const override {
    double h = 0.0;
    for (const auto& [c0, c1] : comp_) {
      for (const auto& [e0, e1] : set_) {
        h += std::max(0.0, std::min(c1, e1 - y[0]) - std::max(c0, e0 - y[0]));
      }
    }
    return h;
  }
  double support_radius() const override { return width_; }
  double lipschitz() const override { return 2.0 * static_cast<double>(set_.size()); }
  double min_feature() const override { return feature_; }
  std::vector<double> breakpoints(const Point&, double rmax) const override {
    std::vector<double> out;
    for (double r : diffs_) {
      if (r < rmax) out.push_back(r);
    }
    return out;
  }
  std::string describe() const override { return "complement_overlap"; }

 private:
  std::vector<std::pair<double, double>> comp_;
  std::vector<std::pair<double, double>> set_;
  double width_;
  double feature_ = 0.0;
  std::vector<double> diffs_;
};

}  // namespace

PerimeterResult per_nu(const Covariogram& cov, const MeasureSpec& m, const QuadratureSpec& q) {
  if (cov.dimension() != m.dimension()) {
    throw ValidationError("covariogram is " + std::to_string(cov.dimension()) +
                          "-dimensional but the measure is " + std::to_string(m.dimension()) +
                          "-dimensional");
  }
  if (!(q.rel_tol > 0.0)) throw ValidationError("quadrature tolerance must be positive");
  const Admissibility adm = admissibility_check(m);
  if (!adm.admissible) throw ValidationError("measure is not admissible: " + adm.diagnostic);

  const RadialProfile& rho = m.radial();
  const double support = cov.support_radius();
  const double r_max = q.r_max > 0.0 ? q.r_max : support;
  if (r_max < support * (1.0 - 1e-12)) {
    throw ValidationError("r_max = " + std::to_string(r_max) + " is below the covariogram support radius " +
                          std::to_string(support) + " and no decay information is available beyond it");
  }
  const double r_min = q.r_min > 0.0 ? q.r_min : default_r_min(cov, rho);
  if (!(r_min < r_max)) throw ValidationError("r_min must be below r_max");
  const double g0 = cov.volume();
  const double tail_mass_rho = rho.mass(r_max, kInfinity);
  const bool discrete = rho.kind() == RadialKind::atoms;
  const double near_moment1 = discrete ? 0.0 : rho.moment(1, 0.0, r_min);
  const double near_moment2 = discrete ? 0.0 : rho.moment(2, 0.0, r_min);
  const double probe = std::min(1e-2 * cov.min_feature(), 0.5 * r_max);

  PerimeterResult res;
  res.method = "covariogram_quadrature";
  double coarse = 0.0;
  double radial_err = 0.0;
  for (const auto& node : m.sphere().nodes(q.sphere)) {
    const Point th = node.theta;
    auto inc = [&](double r) { return cov.increment(r * th); };
    double near = 0.0, bulk = 0.0, tail = 0.0, err = 0.0;
    if (discrete) {
      const Integral all = rho.integrate(inc, 0.0, kInfinity, {}, q.rel_tol);
      bulk = all.value;
    } else {
      const double s = cov.slope(th);
      near = s * near_moment1;
      const double c2 = std::abs(inc(probe) - s * probe) / (probe * probe);
      err += c2 * near_moment2;
      const auto br = cov.breakpoints(th, r_max);
      const Integral b = rho.integrate(inc, r_min, r_max, br, 0.1 * q.rel_tol, q.panels_per_decade);
      bulk = b.value;
      err += b.error;
      tail = g0 * tail_mass_rho;
    }
    const double I = near + bulk + tail;
    res.breakdown.near += node.weight * near;
    res.breakdown.bulk += node.weight * bulk;
    res.breakdown.tail += node.weight * tail;
    res.value += node.weight * I;
    coarse += node.coarse_weight * I;
    radial_err += node.weight * err;
  }
  res.abs_error = radial_err + std::abs(res.value - coarse);
  res.rel_error = res.value > 0.0 ? res.abs_error / res.value : 0.0;
  if (res.rel_error > q.rel_tol) {
    std::ostringstream os;
    os << "estimated relative error " << res.rel_error << " exceeds requested " << q.rel_tol;
    res.warnings.push_back(os.str());
  }
  return res;
}

PerimeterResult frac_perimeter(const Covariogram& cov, double alpha, const QuadratureSpec& q) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("frac_perimeter needs 0 < alpha < 1, got " + std::to_string(alpha));
  }
  const int d = cov.dimension();
  PerimeterResult r = per_nu(cov, MeasureSpec::stable(d, alpha), q);
  const double factor = sphere_area(d) / alpha;
  r.value *= factor;
  r.abs_error *= factor;
  r.breakdown.near *= factor;
  r.breakdown.bulk *= factor;
  r.breakdown.tail *= factor;
  r.method = "frac_perimeter";
  return r;
}

PerimeterResult j_perimeter(const Covariogram& cov, const KernelSpec& J, const QuadratureSpec& q) {
  PerimeterResult r = per_nu(cov, MeasureSpec::kernel(cov.dimension(), J), q);
  r.method = "j_perimeter";
  return r;
}

SymmetryReport symmetry_check(const SetGeometry& s, const MeasureSpec& m, const Window& w,
                              const QuadratureSpec& q) {
  const int d = dimension(s);
  if (d != m.dimension()) throw ValidationError("set and measure dimensions differ");
  const double vol = volume(s);
  if (!std::isfinite(vol) || !(vol > 0.0)) {
    throw ValidationError("complement symmetry needs 0 < |E| < infinity");
  }
  SymmetryReport rep;
  Covariogram lhs_cov = covariogram_exact(Shape{Ball{}});
  std::optional<Covariogram> rhs_cov;
  double dist = 0.0;

  if (const auto* u = std::get_if<IntervalUnion>(&s)) {
    const double a = w.lo[0], b = w.hi[0];
    const double e0 = u->intervals.front().first, e1 = u->intervals.back().second;
    if (!(a < e0 && e1 < b)) throw ValidationError("window must contain the set strictly");
    dist = std::min(e0 - a, b - e1);
    std::vector<std::pair<double, double>> comp;
    double cur = a;
    for (const auto& [x0, x1] : u->intervals) {
      comp.emplace_back(cur, x0);
      cur = x1;
    }
    comp.emplace_back(cur, b);
    lhs_cov = covariogram_exact(Shape{*u});
    rhs_cov = Covariogram(std::make_shared<ComplementOverlapModel>(comp, u->intervals, b - a));
  } else {
    VoxelSet v;
    if (const auto* vs = std::get_if<VoxelSet>(&s)) {
      v = *vs;
    } else {
      const Shape shape = std::visit(
          [](const auto& x) -> Shape {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, VoxelSet>) {
              throw ValidationError("unreachable");
            } else {
              return x;
            }
          },
          s);
      double ext = 0.0;
      for (int i = 0; i < d; ++i) ext = std::max(ext, w.hi[i] - w.lo[i]);
      v = rasterize(shape, ext / 128.0, 1);
    }
    validate(v);
    // The window is the voxel grid itself.
    const auto [lo, hi] = bounding_box(SetGeometry{v});
    dist = kInfinity;
    for (int i = 0; i < d; ++i) {
      dist = std::min(dist, lo[i] - v.origin[i]);
      dist = std::min(dist, v.origin[i] + v.h * v.dims[i] - hi[i]);
    }
    std::vector<std::uint8_t> comp(v.mask.size());
    for (std::size_t i = 0; i < comp.size(); ++i) comp[i] = v.mask[i] ? 0 : 1;
    std::vector<double> counts = cross_correlation_counts(comp, v.mask, v.dims, d);
    const double cell = std::pow(v.h, d);
    for (double& c : counts) c *= cell;
    double radius = 0.0;
    for (int i = 0; i < d; ++i) radius += std::pow(v.h * v.dims[i], 2);
    rhs_cov = sampled_increment(LatticeFunction(d, v.dims, v.h, std::move(counts), 0.0), 0.0,
                                std::sqrt(radius), "complement_cross_correlation");
    lhs_cov = covariogram_grid(v);
  }
  const PerimeterResult l = per_nu(lhs_cov, m, q);
  QuadratureSpec qr = q;
  qr.r_max = 0.0;
  const PerimeterResult r = per_nu(*rhs_cov, m, qr);
  rep.lhs = l.value;
  rep.rhs = r.value;
  rep.gap = std::abs(l.value - r.value);
  rep.tail_bound = vol * m.mass(dist, kInfinity);
  rep.tolerance = l.abs_error + r.abs_error + std::max(q.rel_tol * l.value, 0.0);
  rep.inconclusive = rep.tail_bound > q.rel_tol * l.value;
  return rep;
}

}  // namespace nlperim
