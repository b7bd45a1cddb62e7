#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <thread>

#include "nlperim/perimeter.h"

namespace nlperim {

namespace {

constexpr std::uint64_t kChunk = 1u << 14;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Boundary-biased proposals never place a point closer to the boundary than
// this fraction of the piece size, which keeps every density finite.
constexpr double kStrip = 1e-300;

// t^-g density on [a, b], 0 <= g < 1, by inverse CDF; returns t and its pdf.
template <class Rng>
double draw_power(Rng& rng, double a, double b, double g, double& pdf) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double e = 1.0 - g;
  const double A = std::pow(a, e), B = std::pow(b, e);
  double t;
  do {
    t = std::pow(A + (1.0 - U(rng)) * (B - A), 1.0 / e);
  } while (!(t > 0.0));
  pdf = e * std::pow(t, -g) / (B - A);
  return t;
}

// A sample point stored relative to an anchor on the nearest faces, so that
// distances to those faces stay exact however small they are.
struct Sample {
  Point local{};  // x - anchor
  Point anchor{};
  double pdf = 0.0;
  // Balls: distance to the sphere and unit radial direction.
  double depth = 0.0;
  Point dir{};
};

Shape translated(const Shape& s, const Point& v) {
  return std::visit(
      [&](const auto& x) -> Shape {
        using T = std::decay_t<decltype(x)>;
        T y = x;
        if constexpr (std::is_same_v<T, IntervalUnion>) {
          for (auto& [a, b] : y.intervals) {
            a -= v[0];
            b -= v[0];
          }
        } else if constexpr (std::is_same_v<T, Box>) {
          y.lo = y.lo - v;
          y.hi = y.hi - v;
        } else if constexpr (std::is_same_v<T, BoxUnion>) {
          for (auto& b : y.boxes) {
            b.lo = b.lo - v;
            b.hi = b.hi - v;
          }
        } else if constexpr (std::is_same_v<T, Ball>) {
          y.center = y.center - v;
        } else {
          for (auto& p : y.vertices) {
            p[0] -= v[0];
            p[1] -= v[1];
          }
        }
        return y;
      },
      s);
}

class PointSampler {
 public:
  PointSampler(const Shape& s, double gamma) : shape_(s), gamma_(gamma) {
    if (const auto* u = std::get_if<IntervalUnion>(&s)) {
      for (const auto& [a, b] : u->intervals) add_piece(b - a);
    } else if (const auto* bu = std::get_if<BoxUnion>(&s)) {
      for (const auto& b : bu->boxes) add_piece(volume(SetGeometry{b}));
    } else if (const auto* p = std::get_if<Polygon>(&s)) {
      bbox_ = bounding_box(SetGeometry{*p});
      vol_ = volume(SetGeometry{*p});
    }
  }

  template <class Rng>
  Sample draw(Rng& rng) const {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    Sample out;
    if (const auto* u = std::get_if<IntervalUnion>(&shape_)) {
      const std::size_t i = pick(U(rng));
      const auto [a, b] = u->intervals[i];
      coordinate(a, b, 0, rng, out);
      out.pdf *= prob_[i];
      return out;
    }
    if (const auto* b = std::get_if<Box>(&shape_)) {
      draw_box(*b, rng, out);
      return out;
    }
    if (const auto* bu = std::get_if<BoxUnion>(&shape_)) {
      const std::size_t i = pick(U(rng));
      draw_box(bu->boxes[i], rng, out);
      out.pdf *= prob_[i];
      return out;
    }
    if (const auto* b = std::get_if<Ball>(&shape_)) {
      draw_ball(*b, rng, out);
      return out;
    }
    const auto& poly = std::get<Polygon>(shape_);
    for (;;) {
      const Point x{bbox_.first[0] + U(rng) * (bbox_.second[0] - bbox_.first[0]),
                    bbox_.first[1] + U(rng) * (bbox_.second[1] - bbox_.first[1]), 0.0};
      if (contains(Shape{poly}, x)) {
        out.local = x;
        out.pdf = 1.0 / vol_;
        return out;
      }
    }
  }

  // Width of the boundary layer the proposal never visits.
  double strip() const {
    if (!(gamma_ > 0.0)) return 0.0;
    if (const auto* b = std::get_if<Ball>(&shape_)) return kStrip * b->radius;
    double w = 0.0;
    auto widths = [&](const Box& b) {
      for (int i = 0; i < b.d; ++i) w = std::max(w, 0.5 * kStrip * (b.hi[i] - b.lo[i]));
    };
    if (const auto* u = std::get_if<IntervalUnion>(&shape_)) {
      for (const auto& [a, b] : u->intervals) w = std::max(w, 0.5 * kStrip * (b - a));
    } else if (const auto* b = std::get_if<Box>(&shape_)) {
      widths(*b);
    } else if (const auto* bu = std::get_if<BoxUnion>(&shape_)) {
      for (const auto& b : bu->boxes) widths(b);
    }
    return w;
  }

 private:
  void add_piece(double v) {
    vol_ += v;
    cum_.push_back(vol_);
    prob_.assign(cum_.size(), 0.0);
    for (std::size_t i = 0; i < cum_.size(); ++i) {
      prob_[i] = (cum_[i] - (i ? cum_[i - 1] : 0.0)) / vol_;
    }
  }
  std::size_t pick(double u) const {
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), u * vol_);
    return std::min<std::size_t>(it - cum_.begin(), cum_.size() - 1);
  }
  // Coordinate i in [lo, hi]: distance t to the nearer end has density ~ t^-g
  // on (0, L/2], the end is a fair coin and becomes the anchor.
  template <class Rng>
  void coordinate(double lo, double hi, int i, Rng& rng, Sample& out) const {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double half = 0.5 * (hi - lo);
    double p;
    const double t = draw_power(rng, gamma_ > 0.0 ? kStrip * half : 0.0, half, gamma_, p);
    const bool low = U(rng) < 0.5;
    out.anchor[i] = low ? lo : hi;
    out.local[i] = low ? t : -t;
    out.pdf = (out.pdf == 0.0 ? 1.0 : out.pdf) * 0.5 * p;
  }
  template <class Rng>
  void draw_box(const Box& b, Rng& rng, Sample& out) const {
    out.pdf = 0.0;
    for (int i = 0; i < b.d; ++i) coordinate(b.lo[i], b.hi[i], i, rng, out);
  }
  template <class Rng>
  void draw_ball(const Ball& b, Rng& rng, Sample& out) const {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::normal_distribution<double> N(0.0, 1.0);
    for (;;) {
      Point dir{};
      double n2 = 0.0;
      if (b.d == 1) {
        dir[0] = U(rng) < 0.5 ? -1.0 : 1.0;
        n2 = 1.0;
      } else {
        for (int i = 0; i < b.d; ++i) {
          dir[i] = N(rng);
          n2 += dir[i] * dir[i];
        }
      }
      if (!(n2 > 0.0)) continue;
      dir = (1.0 / std::sqrt(n2)) * dir;
      const double R = b.radius;
      double pt;
      const double t = draw_power(rng, gamma_ > 0.0 ? kStrip * R : 0.0, R, gamma_, pt);
      const double rho = R - t;
      if (!(rho > 0.0)) continue;
      out.pdf = pt / (sphere_area(b.d) * std::pow(rho, b.d - 1));
      out.anchor = b.center;
      out.local = rho * dir;
      out.depth = t;
      out.dir = dir;
      return;
    }
  }

  Shape shape_;
  double gamma_;
  double vol_ = 0.0;
  std::vector<double> prob_, cum_;
  std::pair<Point, Point> bbox_;
};

// Radial nu-mass of the part of the ray x + r theta, r > 0, outside E.
double outside_mass(const Shape& s, const Sample& x, const Point& th, const RadialProfile& rho) {
  if (const auto* b = std::get_if<Ball>(&s)) {
    // Exit distance from depth t below the sphere without cancellation:
    // r = -rho c + sqrt(t (2R - t) + rho^2 c^2), c = dir.theta.
    const double R = b->radius, t = x.depth, rr = R - t;
    const double c = dot(x.dir, th);
    const double disc = std::sqrt(t * (2.0 * R - t) + rr * rr * c * c);
    const double exit = c > 0.0 ? t * (2.0 * R - t) / (rr * c + disc) : disc - rr * c;
    return rho.mass(exit, kInfinity);
  }
  const Shape local = std::holds_alternative<Polygon>(s) ? s : translated(s, x.anchor);
  const auto segs = ray_segments(local, x.local, th);
  double f = 0.0;
  double start = segs.empty() ? 0.0 : segs.front().second;
  for (std::size_t i = 1; i < segs.size(); ++i) {
    if (segs[i].first > start) f += rho.mass(start, segs[i].first);
    start = std::max(start, segs[i].second);
  }
  return f + rho.mass(start, kInfinity);
}

std::string format_strip(double w) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1e", w);
  return buf;
}

struct ChunkStats {
  double sum = 0.0;
  double sum2 = 0.0;
  std::uint64_t n = 0;
};

}  // namespace

PerimeterResult per_nu_mc_oracle(const Shape& s, const MeasureSpec& m, const OracleOptions& o) {
  const int d = dimension(SetGeometry{std::visit([](const auto& x) -> SetGeometry { return x; }, s)});
  if (d != m.dimension()) throw ValidationError("shape and measure dimensions differ");
  if (o.samples == 0) throw ValidationError("oracle needs at least one sample");
  const Admissibility adm = admissibility_check(m);
  if (!adm.admissible) throw ValidationError("measure is not admissible: " + adm.diagnostic);

  PerimeterResult res;
  res.method = "monte_carlo";
  const RadialProfile& rho = m.radial();

  // Boundary bias: the inner radial mass behaves like t^-a near the boundary,
  // sampling t with density ~ t^-a keeps the variance finite for a < 1.
  double gamma = 0.0;
  if (const auto a = rho.alpha()) {
    gamma = std::min(*a, 0.98);
    if (2.0 * *a - gamma >= 1.0) {
      res.warnings.push_back(
          "alpha too close to 1 for the boundary-biased proposal; "
          "variance may be infinite and error bars understate");
    }
  } else if (const auto& k = m.kernel_spec(); k && k->name == KernelName::inverse_power_truncated) {
    gamma = std::clamp(k->beta, 0.0, 0.98);
  }
  if (std::holds_alternative<Polygon>(s) && gamma > 0.0) {
    res.warnings.push_back("polygons are sampled uniformly; error bars may be unreliable");
  }
  const PointSampler sampler(s, std::holds_alternative<Polygon>(s) ? 0.0 : gamma);

  const SphericalMeasure& eta = m.sphere();
  const bool atomic = eta.kind() == SphericalKind::atoms;
  std::vector<double> atom_cum;
  double atom_total = 0.0;
  if (atomic) {
    for (const auto& [th, w] : eta.atom_list()) {
      atom_total += w;
      atom_cum.push_back(atom_total);
    }
  }
  const double area = sphere_area(d);

  const std::uint64_t chunks = (o.samples + kChunk - 1) / kChunk;
  std::vector<ChunkStats> stats(chunks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= chunks) return;
      std::mt19937_64 rng(splitmix64(o.seed + c));
      std::uniform_real_distribution<double> U(0.0, 1.0);
      std::normal_distribution<double> N(0.0, 1.0);
      const std::uint64_t n = std::min(kChunk, o.samples - c * kChunk);
      ChunkStats st;
      for (std::uint64_t k = 0; k < n; ++k) {
        const Sample x = sampler.draw(rng);
        const double px = x.pdf;
        Point th{};
        double wdir;
        if (atomic) {
          const double u = U(rng) * atom_total;
          const std::size_t i = std::min<std::size_t>(
              std::upper_bound(atom_cum.begin(), atom_cum.end(), u) - atom_cum.begin(), atom_cum.size() - 1);
          th = eta.atom_list()[i].first;
          wdir = atom_total;
        } else {
          if (d == 1) {
            th[0] = U(rng) < 0.5 ? -1.0 : 1.0;
          } else {
            double n2;
            do {
              n2 = 0.0;
              for (int i = 0; i < d; ++i) {
                th[i] = N(rng);
                n2 += th[i] * th[i];
              }
            } while (!(n2 > 0.0));
            th = (1.0 / std::sqrt(n2)) * th;
          }
          wdir = eta.density(th) * area;
        }
        const double f = wdir > 0.0 ? outside_mass(s, x, th, rho) : 0.0;
        const double z = f * wdir / px;
        st.sum += z;
        st.sum2 += z * z;
      }
      st.n = n;
      stats[c] = st;
    }
  };
  const int threads =
      o.threads > 0 ? o.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  double sum = 0.0, sum2 = 0.0;
  for (const auto& st : stats) {
    sum += st.sum;
    sum2 += st.sum2;
  }
  const double n = static_cast<double>(o.samples);
  res.value = sum / n;
  const double var = std::max(0.0, sum2 / n - res.value * res.value);
  res.abs_error = std::sqrt(var / n);
  res.rel_error = res.value > 0.0 ? res.abs_error / res.value : 0.0;
  res.samples = o.samples;
  if (!std::isfinite(res.value)) throw NumericalError("Monte Carlo estimate is not finite");
  if (sampler.strip() > 0.0) {
    // For x within t of the boundary, nu(E^c - x) <= nu(|y| > t); the strip
    // has volume at most Per(E) t, so its share is at most
    // Per(E) eta(S) int_0^strip rho(t, inf) dt.
    const double w = sampler.strip();
    const double bound = classical_perimeter(std::visit([](const auto& x) -> SetGeometry { return x; }, s)) *
                         m.angular_mass() * (rho.moment(1, 0.0, w) + w * rho.mass(w, kInfinity));
    res.abs_error += bound;
    res.rel_error = res.value > 0.0 ? res.abs_error / res.value : 0.0;
    if (bound > res.abs_error - bound) {
      res.warnings.push_back("boundary layer below " + format_strip(w) +
                             " dominates the error bar; the estimate is a lower bound");
    }
  }
  return res;
}

}  // namespace nlperim
