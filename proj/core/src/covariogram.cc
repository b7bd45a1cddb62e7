#include "nlperim/covariogram.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nlperim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void push_if(std::vector<double>& out, double r, double rmax) {
  if (r > 0.0 && r < rmax && std::isfinite(r)) out.push_back(r);
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end(), [](double a, double b) { return b - a <= 1e-13 * b; }), v.end());
  return v;
}

class IntervalModel final : public Covariogram::Model {
 public:
  explicit IntervalModel(IntervalUnion u) : u_(std::move(u)) {
    for (const auto& [a, b] : u_.intervals) {
      len_.push_back(b - a);
      right_.push_back(b);
      vol_ += b - a;
    }
    feature_ = *std::min_element(len_.begin(), len_.end());
    for (std::size_t i = 1; i < len_.size(); ++i) {
      feature_ = std::min(feature_, u_.intervals[i].first - u_.intervals[i - 1].second);
    }
    std::vector<double> ends;
    for (const auto& [a, b] : u_.intervals) {
      ends.push_back(a);
      ends.push_back(b);
    }
    for (std::size_t i = 0; i < ends.size(); ++i) {
      for (std::size_t j = i + 1; j < ends.size(); ++j) diffs_.push_back(ends[j] - ends[i]);
    }
    diffs_ = sorted_unique(std::move(diffs_));
  }
  int dimension() const override { return 1; }
  double volume() const override { return vol_; }
  double increment(const Point& y) const override {
    const double s = std::abs(y[0]);
    double inc = 0.0;
    for (double l : len_) inc += std::min(s, l);
    if (s == 0.0) return 0.0;
    const auto& iv = u_.intervals;
    for (std::size_t j = 0; j < iv.size(); ++j) {
      const double lo = iv[j].first + s;
      const double hi = iv[j].second + s;
      auto it = std::upper_bound(right_.begin(), right_.end(), lo);
      for (std::size_t i = static_cast<std::size_t>(it - right_.begin()); i < iv.size() && iv[i].first < hi;
           ++i) {
        if (i == j) continue;
        inc -= std::max(0.0, std::min(hi, iv[i].second) - std::max(lo, iv[i].first));
      }
    }
    return std::max(0.0, inc);
  }
  double slope(const Point&) const override { return static_cast<double>(len_.size()); }
  double support_radius() const override { return u_.intervals.back().second - u_.intervals.front().first; }
  double lipschitz() const override { return static_cast<double>(len_.size()); }
  double min_feature() const override { return feature_; }
  std::vector<double> breakpoints(const Point&, double rmax) const override {
    std::vector<double> out;
    for (double r : diffs_) push_if(out, r, rmax);
    return out;
  }
  std::string describe() const override { return "interval_union(" + std::to_string(len_.size()) + ")"; }

 private:
  IntervalUnion u_;
  std::vector<double> len_;
  std::vector<double> right_;
  std::vector<double> diffs_;
  double vol_ = 0.0;
  double feature_ = 0.0;
};

class BoxModel final : public Covariogram::Model {
 public:
  explicit BoxModel(const Box& b) : d_(b.d) {
    for (int i = 0; i < d_; ++i) side_[i] = b.hi[i] - b.lo[i];
  }
  int dimension() const override { return d_; }
  double volume() const override {
    double v = 1.0;
    for (int i = 0; i < d_; ++i) v *= side_[i];
    return v;
  }
  // prod a_i - prod (a_i - b_i) as a telescoping sum of nonnegative terms.
  double increment(const Point& y) const override {
    double inc = 0.0;
    for (int i = 0; i < d_; ++i) {
      double term = std::min(std::abs(y[i]), side_[i]);
      for (int j = 0; j < i; ++j) term *= std::max(0.0, side_[j] - std::abs(y[j]));
      for (int j = i + 1; j < d_; ++j) term *= side_[j];
      inc += term;
    }
    return inc;
  }
  double slope(const Point& th) const override {
    double s = 0.0;
    for (int i = 0; i < d_; ++i) {
      double face = 1.0;
      for (int j = 0; j < d_; ++j) {
        if (j != i) face *= side_[j];
      }
      s += std::abs(th[i]) * face;
    }
    return s;
  }
  double support_radius() const override {
    double r = 0.0;
    for (int i = 0; i < d_; ++i) r += side_[i] * side_[i];
    return std::sqrt(r);
  }
  double lipschitz() const override {
    double per = 0.0;
    for (int i = 0; i < d_; ++i) {
      double face = 1.0;
      for (int j = 0; j < d_; ++j) {
        if (j != i) face *= side_[j];
      }
      per += 2.0 * face;
    }
    return 0.5 * per;
  }
  double min_feature() const override { return *std::min_element(side_.begin(), side_.begin() + d_); }
  std::vector<double> breakpoints(const Point& th, double rmax) const override {
    std::vector<double> out;
    for (int i = 0; i < d_; ++i) {
      if (th[i] != 0.0) push_if(out, side_[i] / std::abs(th[i]), rmax);
    }
    return sorted_unique(std::move(out));
  }
  std::string describe() const override { return "box(d=" + std::to_string(d_) + ")"; }

 private:
  int d_;
  std::array<double, 3> side_{1, 1, 1};
};

class BallModel final : public Covariogram::Model {
 public:
  explicit BallModel(const Ball& b) : d_(b.d), r_(b.radius) {}
  int dimension() const override { return d_; }
  double volume() const override { return unit_ball_volume(d_) * std::pow(r_, d_); }
  double increment(const Point& y) const override {
    const double s = std::min(norm(y), 2.0 * r_);
    switch (d_) {
      case 1: return s;
      case 2:
        return 2.0 * r_ * r_ * std::asin(s / (2.0 * r_)) +
               0.5 * s * std::sqrt(std::max(0.0, 4.0 * r_ * r_ - s * s));
      default: return std::numbers::pi * (r_ * r_ * s - s * s * s / 12.0);
    }
  }
  double slope(const Point&) const override { return unit_ball_volume(d_ - 1) * std::pow(r_, d_ - 1); }
  double support_radius() const override { return 2.0 * r_; }
  double lipschitz() const override { return slope(Point{1, 0, 0}); }
  double min_feature() const override { return 2.0 * r_; }
  std::vector<double> breakpoints(const Point&, double rmax) const override {
    std::vector<double> out;
    push_if(out, 2.0 * r_, rmax);
    return out;
  }
  std::string describe() const override { return "ball(d=" + std::to_string(d_) + ")"; }

 private:
  int d_;
  double r_;
};

class BoxUnionModel final : public Covariogram::Model {
 public:
  explicit BoxUnionModel(const BoxUnion& u) : u_(u) {
    for (const auto& b : u_.boxes) self_.emplace_back(b);
    feature_ = std::numeric_limits<double>::infinity();
    for (int k = 0; k < u_.d; ++k) {
      std::vector<double> c;
      for (const auto& b : u_.boxes) {
        c.push_back(b.lo[k]);
        c.push_back(b.hi[k]);
      }
      for (std::size_t i = 0; i < c.size(); ++i) {
        for (std::size_t j = 0; j < c.size(); ++j) {
          const double diff = std::abs(c[i] - c[j]);
          if (diff > 0.0) {
            feature_ = std::min(feature_, diff);
            diffs_[k].push_back(diff);
          }
        }
      }
      diffs_[k] = sorted_unique(std::move(diffs_[k]));
    }
    const auto [lo, hi] = bounding_box(SetGeometry{u_});
    radius_ = norm(hi - lo);
    if (u_.d <= 2) {
      lip_ = 0.5 * classical_perimeter(SetGeometry{u_});
    } else {
      for (const auto& m : self_) lip_ += m.lipschitz();
    }
  }
  int dimension() const override { return u_.d; }
  double volume() const override {
    double v = 0.0;
    for (const auto& m : self_) v += m.volume();
    return v;
  }
  double increment(const Point& y) const override {
    double inc = 0.0;
    for (const auto& m : self_) inc += m.increment(y);
    const auto& bx = u_.boxes;
    for (std::size_t i = 0; i < bx.size(); ++i) {
      for (std::size_t j = 0; j < bx.size(); ++j) {
        if (i == j) continue;
        double ov = 1.0;
        for (int k = 0; k < u_.d && ov > 0.0; ++k) {
          ov *= std::max(
              0.0, std::min(bx[i].hi[k], bx[j].hi[k] + y[k]) - std::max(bx[i].lo[k], bx[j].lo[k] + y[k]));
        }
        inc -= ov;
      }
    }
    return std::max(0.0, inc);
  }
  double support_radius() const override { return radius_; }
  double lipschitz() const override { return lip_; }
  double min_feature() const override { return feature_; }
  std::vector<double> breakpoints(const Point& th, double rmax) const override {
    std::vector<double> out;
    for (int k = 0; k < u_.d; ++k) {
      if (th[k] == 0.0) continue;
      for (double c : diffs_[k]) push_if(out, c / std::abs(th[k]), rmax);
    }
    return sorted_unique(std::move(out));
  }
  std::string describe() const override { return "box_union(" + std::to_string(u_.boxes.size()) + ")"; }

 private:
  BoxUnion u_;
  std::vector<BoxModel> self_;
  std::array<std::vector<double>, 3> diffs_;
  double feature_ = 0.0;
  double radius_ = 0.0;
  double lip_ = 0.0;
};

class LatticeModel final : public Covariogram::Model {
 public:
  LatticeModel(LatticeFunction inc, double far, double radius, std::string what)
      : inc_(std::move(inc)), far_(far), radius_(radius), what_(std::move(what)) {
    lip_ = inc_.max_gradient();
  }
  int dimension() const override { return inc_.dimension(); }
  double volume() const override { return far_; }
  double increment(const Point& y) const override { return inc_(y); }
  double support_radius() const override { return radius_; }
  double lipschitz() const override { return lip_; }
  double min_feature() const override { return inc_.spacing(); }
  std::vector<double> breakpoints(const Point& th, double rmax) const override {
    // Cell crossings; only worth passing when there are few of them.
    std::vector<double> out;
    const double h = inc_.spacing();
    for (int a = 0; a < inc_.dimension(); ++a) {
      if (th[a] == 0.0) continue;
      const double step = h / std::abs(th[a]);
      if (rmax / step > 64) return {};
      for (double r = step; r < rmax; r += step) out.push_back(r);
    }
    return sorted_unique(std::move(out));
  }
  bool sampled() const override { return true; }
  double spacing() const override { return inc_.spacing(); }
  std::string describe() const override { return what_; }

 private:
  LatticeFunction inc_;
  double far_;
  double radius_;
  double lip_ = 0.0;
  std::string what_;
};

}  // namespace

// Richardson extrapolation of increment(r theta)/r from r, 2r, 4r; exact when
// the increment is a polynomial of degree <= 3 on [0, 4r].
double Covariogram::Model::slope(const Point& theta) const {
  const double r = 1e-3 * min_feature();
  auto q = [&](double t) { return increment(t * theta) / t; };
  const double q1 = q(r), q2 = q(2 * r), q4 = q(4 * r);
  const double r1 = 2 * q1 - q2;
  const double r2 = 2 * q2 - q4;
  return std::max(0.0, (4 * r1 - r2) / 3.0);
}

Covariogram covariogram_exact(const Shape& s) {
  return std::visit(
      overloaded{[](const IntervalUnion& u) {
                   return Covariogram(std::make_shared<IntervalModel>(make_interval_union(u.intervals)));
                 },
                 [](const Ball& b) { return Covariogram(std::make_shared<BallModel>(b)); },
                 [](const Box& b) { return Covariogram(std::make_shared<BoxModel>(b)); },
                 [](const Polygon&) -> Covariogram {
                   throw UnsupportedError(
                       "no closed-form covariogram for polygons; rasterize and use covariogram_grid");
                 },
                 [](const BoxUnion& u) { return Covariogram(std::make_shared<BoxUnionModel>(u)); }},
      s);
}

LatticeFunction::LatticeFunction(int d, std::array<int, 3> n, double h, std::vector<double> values,
                                 double outside, bool even)
    : d_(d), n_(n), h_(h), outside_(outside), even_(even), v_(std::move(values)) {
  std::size_t total = 1;
  for (int a = 0; a < 3; ++a) {
    if (a >= d) n_[a] = 1;
    total *= static_cast<std::size_t>(2 * n_[a] - 1);
  }
  if (v_.size() != total) throw ValidationError("lattice function size does not match extent");
}

double LatticeFunction::at(int i, int j, int k) const {
  if (std::abs(i) >= n_[0] || std::abs(j) >= n_[1] || std::abs(k) >= n_[2]) return outside_;
  const std::size_t w0 = 2 * n_[0] - 1, w1 = 2 * n_[1] - 1;
  return v_[static_cast<std::size_t>(i + n_[0] - 1) +
            w0 * (static_cast<std::size_t>(j + n_[1] - 1) + w1 * static_cast<std::size_t>(k + n_[2] - 1))];
}

double LatticeFunction::operator()(const Point& y_in) const {
  Point y = y_in;
  if (even_) {
    // Evaluate f(-y) as f(y) so the interpolation weights round identically.
    for (int a = 0; a < d_; ++a) {
      if (y[a] == 0.0) continue;
      if (y[a] < 0.0) {
        for (int b = 0; b < d_; ++b) y[b] = -y[b];
      }
      break;
    }
  }
  std::array<int, 3> i0{0, 0, 0};
  std::array<double, 3> f{0, 0, 0};
  for (int a = 0; a < d_; ++a) {
    const double u = y[a] / h_;
    if (std::abs(u) >= n_[a]) return outside_;
    const double fl = std::floor(u);
    i0[a] = static_cast<int>(fl);
    f[a] = u - fl;
  }
  double sum = 0.0;
  const int corners = 1 << d_;
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    std::array<int, 3> k{0, 0, 0};
    for (int a = 0; a < d_; ++a) {
      const int bit = (c >> a) & 1;
      w *= bit ? f[a] : 1.0 - f[a];
      k[a] = i0[a] + bit;
    }
    if (w != 0.0) sum += w * at(k[0], k[1], k[2]);
  }
  return sum;
}

// Exact Lipschitz constant of the multilinear interpolant. Inside a cell each
// partial derivative is affine in the other coordinates, so |grad|^2 is convex
// there and peaks at a corner, where the partials are the incident edge
// differences.
double LatticeFunction::max_gradient() const {
  double g2 = 0.0;
  const int corners = 1 << d_;
  const int jr = d_ >= 2 ? n_[1] : 0, kr = d_ >= 3 ? n_[2] : 0;
  for (int k = -kr; k <= std::max(kr - 1, 0); ++k) {
    for (int j = -jr; j <= std::max(jr - 1, 0); ++j) {
      for (int i = -n_[0]; i <= n_[0] - 1; ++i) {
        const std::array<int, 3> base{i, j, k};
        for (int c = 0; c < corners; ++c) {
          double norm2 = 0.0;
          for (int a = 0; a < d_; ++a) {
            std::array<int, 3> lo = base, hi = base;
            for (int b = 0; b < d_; ++b) {
              if (b != a && ((c >> b) & 1)) {
                ++lo[b];
                ++hi[b];
              }
            }
            ++hi[a];
            const double diff = (at(hi[0], hi[1], hi[2]) - at(lo[0], lo[1], lo[2])) / h_;
            norm2 += diff * diff;
          }
          g2 = std::max(g2, norm2);
        }
      }
    }
  }
  return std::sqrt(g2);
}

Covariogram sampled_increment(const LatticeFunction& inc, double far_value, double support_radius,
                              std::string description) {
  return Covariogram(std::make_shared<LatticeModel>(inc, far_value, support_radius, std::move(description)));
}

Covariogram covariogram_grid(const VoxelSet& v, const GridOptions& opt) {
  validate(v);
  // Crop to the occupied bounding box so that translated copies of a set give
  // bit-identical lattices.
  std::array<int, 3> lo{v.dims}, hi{-1, -1, -1};
  for (int k = 0; k < v.dims[2]; ++k) {
    for (int j = 0; j < v.dims[1]; ++j) {
      for (int i = 0; i < v.dims[0]; ++i) {
        if (!v.at(i, j, k)) continue;
        const std::array<int, 3> c{i, j, k};
        for (int a = 0; a < 3; ++a) {
          lo[a] = std::min(lo[a], c[a]);
          hi[a] = std::max(hi[a], c[a]);
        }
      }
    }
  }
  std::array<int, 3> n{};
  for (int a = 0; a < 3; ++a) n[a] = hi[a] - lo[a] + 1;
  std::vector<std::uint8_t> crop(static_cast<std::size_t>(n[0]) * n[1] * n[2]);
  for (int k = 0; k < n[2]; ++k) {
    for (int j = 0; j < n[1]; ++j) {
      for (int i = 0; i < n[0]; ++i) {
        crop[i + static_cast<std::size_t>(n[0]) * (j + static_cast<std::size_t>(n[1]) * k)] =
            v.at(i + lo[0], j + lo[1], k + lo[2]) ? 1 : 0;
      }
    }
  }
  std::vector<double> counts = autocorrelation_counts(crop, n, v.d, opt.method, opt.max_cells);
  const double cell = std::pow(v.h, v.d);
  const double total = static_cast<double>(v.count());
  for (double& c : counts) c = (total - c) * cell;
  double radius = 0.0;
  for (int a = 0; a < v.d; ++a) radius += std::pow(v.h * n[a], 2);
  std::ostringstream what;
  what << "grid(d=" << v.d << ",h=" << v.h << ",cells=" << v.count() << ")";
  return sampled_increment(LatticeFunction(v.d, n, v.h, std::move(counts), total * cell, true), total * cell,
                           std::sqrt(radius), what.str());
}

}  // namespace nlperim
