#include "nlperim/convex.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "nlperim/quadrature.h"

namespace nlperim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lp_norm(const Point& x, const std::vector<double>& r, double p) {
  const int d = static_cast<int>(r.size());
  double m = 0.0;
  for (int i = 0; i < d; ++i) m = std::max(m, std::abs(x[i]) / r[i]);
  if (m == 0.0 || std::isinf(p)) return m;
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += std::pow(std::abs(x[i]) / r[i] / m, p);
  return m * std::pow(s, 1.0 / p);
}

double conjugate(double p) {
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

void check_radii(const std::vector<double>& r) {
  if (r.empty() || r.size() > 3) throw ValidationError("convex body dimension must be 1, 2 or 3");
  for (double x : r) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw ValidationError("convex body radii must be positive and finite");
    }
  }
}

}  // namespace

ConvexBody ConvexBody::ellipsoid(std::vector<double> semi_axes) {
  ConvexBody k = lp_ball(2.0, std::move(semi_axes));
  k.kind_ = BodyKind::ellipsoid;
  return k;
}

ConvexBody ConvexBody::box(std::vector<double> half_widths) {
  ConvexBody k = lp_ball(kInf, std::move(half_widths));
  k.kind_ = BodyKind::box;
  return k;
}

ConvexBody ConvexBody::lp_ball(int d, double p, double radius) {
  check_dimension(d);
  return lp_ball(p, std::vector<double>(d, radius));
}

ConvexBody ConvexBody::lp_ball(double p, std::vector<double> radii) {
  check_radii(radii);
  if (!(p >= 1.0)) throw ValidationError("l^p body needs p >= 1");
  ConvexBody k;
  k.d_ = static_cast<int>(radii.size());
  k.kind_ = BodyKind::lp_ball;
  k.p_ = p;
  k.r_ = std::move(radii);
  return k;
}

ConvexBody ConvexBody::polygon_sym(std::vector<std::array<double, 2>> v) {
  const std::size_t n = v.size();
  if (n < 4 || n % 2 != 0) {
    throw ValidationError("symmetric polygon needs an even number (>= 4) of vertices");
  }
  double scale = 0.0;
  for (const auto& x : v) scale = std::max(scale, std::hypot(x[0], x[1]));
  for (std::size_t k = 0; k < n / 2; ++k) {
    const auto& a = v[k];
    const auto& b = v[k + n / 2];
    if (std::hypot(a[0] + b[0], a[1] + b[1]) > 1e-9 * scale) {
      throw ValidationError("polygon body is not origin-symmetric (vertex " + std::to_string(k) +
                            " has no antipode at index " + std::to_string(k + n / 2) + ")");
    }
  }
  ConvexBody k;
  k.d_ = 2;
  k.kind_ = BodyKind::polygon_sym;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % n];
    const auto& c = v[(i + 2) % n];
    const double turn = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
    if (!(turn > 0.0)) {
      throw ValidationError("polygon body must be strictly convex and counter-clockwise");
    }
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    const double nx = (b[1] - a[1]) / len, ny = -(b[0] - a[0]) / len;
    const double hdist = nx * a[0] + ny * a[1];
    if (!(hdist > 0.0)) throw ValidationError("polygon body must contain the origin");
    k.facets_.push_back({nx, ny, hdist});
  }
  k.verts_ = std::move(v);
  return k;
}

double ConvexBody::gauge(const Point& x) const {
  if (kind_ != BodyKind::polygon_sym) return lp_norm(x, r_, p_);
  double g = 0.0;
  for (const auto& f : facets_) g = std::max(g, (f[0] * x[0] + f[1] * x[1]) / f[2]);
  return g;
}

double ConvexBody::support(const Point& y) const {
  if (kind_ != BodyKind::polygon_sym) {
    std::vector<double> inv(r_.size());
    for (std::size_t i = 0; i < r_.size(); ++i) inv[i] = 1.0 / r_[i];
    return lp_norm(y, inv, conjugate(p_));
  }
  double s = 0.0;
  for (const auto& v : verts_) s = std::max(s, v[0] * y[0] + v[1] * y[1]);
  return s;
}

double ConvexBody::volume() const {
  if (kind_ == BodyKind::polygon_sym) {
    double a = 0.0;
    for (std::size_t i = 0; i < verts_.size(); ++i) {
      const auto& u = verts_[i];
      const auto& v = verts_[(i + 1) % verts_.size()];
      a += u[0] * v[1] - u[1] * v[0];
    }
    return 0.5 * a;
  }
  double prod = 1.0;
  for (double r : r_) prod *= r;
  if (std::isinf(p_)) return std::pow(2.0, d_) * prod;
  return std::pow(2.0 * std::tgamma(1.0 + 1.0 / p_), d_) / std::tgamma(1.0 + d_ / p_) * prod;
}

double ConvexBody::inradius() const {
  if (kind_ == BodyKind::polygon_sym) {
    double r = kInf;
    for (const auto& f : facets_) r = std::min(r, f[2]);
    return r;
  }
  const double c =
      std::isinf(p_) ? std::sqrt(static_cast<double>(d_)) : std::pow(static_cast<double>(d_), 0.5 - 1.0 / p_);
  return *std::min_element(r_.begin(), r_.end()) * std::min(1.0, c);
}

double ConvexBody::outradius() const {
  if (kind_ == BodyKind::polygon_sym) {
    double r = 0.0;
    for (const auto& v : verts_) r = std::max(r, std::hypot(v[0], v[1]));
    return r;
  }
  const double c =
      std::isinf(p_) ? std::sqrt(static_cast<double>(d_)) : std::pow(static_cast<double>(d_), 0.5 - 1.0 / p_);
  return *std::max_element(r_.begin(), r_.end()) * std::max(1.0, c);
}

ConvexBody ConvexBody::polar() const {
  if (kind_ == BodyKind::polygon_sym) {
    std::vector<std::array<double, 2>> v;
    for (const auto& f : facets_) v.push_back({f[0] / f[2], f[1] / f[2]});
    return polygon_sym(std::move(v));
  }
  std::vector<double> inv(r_.size());
  for (std::size_t i = 0; i < r_.size(); ++i) inv[i] = 1.0 / r_[i];
  const double q = conjugate(p_);
  if (q == 2.0) return ellipsoid(std::move(inv));
  if (std::isinf(q)) return box(std::move(inv));
  return lp_ball(q, std::move(inv));
}

ConvexBody ConvexBody::scaled(double t) const {
  if (!(t > 0.0)) throw ValidationError("body scale must be positive");
  ConvexBody k = *this;
  for (double& r : k.r_) r *= t;
  for (auto& v : k.verts_) {
    v[0] *= t;
    v[1] *= t;
  }
  for (auto& f : k.facets_) f[2] *= t;
  return k;
}

std::vector<double> ConvexBody::kink_angles() const {
  std::vector<double> a;
  if (d_ != 2) return a;
  auto add = [&](double x, double y) {
    double t = std::atan2(y, x);
    if (t < 0) t += 2.0 * std::numbers::pi;
    a.push_back(t);
  };
  if (kind_ == BodyKind::polygon_sym) {
    for (const auto& v : verts_) add(v[0], v[1]);
  } else if (std::isinf(p_)) {
    for (int sx : {-1, 1}) {
      for (int sy : {-1, 1}) add(sx * r_[0], sy * r_[1]);
    }
  } else if (p_ != 2.0) {
    for (int k = 0; k < 4; ++k) a.push_back(k * 0.5 * std::numbers::pi);
  }
  std::sort(a.begin(), a.end());
  return a;
}

std::string ConvexBody::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case BodyKind::ellipsoid: os << "ellipsoid"; break;
    case BodyKind::box: os << "box"; break;
    case BodyKind::lp_ball: os << "lp_ball p=" << p_; break;
    case BodyKind::polygon_sym: os << "polygon_sym n=" << verts_.size(); break;
  }
  for (double r : r_) os << " " << r;
  for (const auto& v : verts_) os << " (" << v[0] << "," << v[1] << ")";
  return os.str();
}

double gauge_norm(const ConvexBody& K, const Point& x) { return K.gauge(x); }
double polar_gauge(const ConvexBody& K, const Point& y) { return K.support(y); }
double body_volume(const ConvexBody& K) { return K.volume(); }

double moment_body_norm(const ConvexBody& K, const Point& y, double tol) {
  if (!(tol > 0.0)) throw ValidationError("moment_body_norm: tol must be positive");
  const double ny = norm(y);
  if (ny == 0.0) return 0.0;
  const int d = K.dimension();
  if (d == 1) {
    const double g = K.gauge(Point{1.0, 0.0, 0.0});
    return std::abs(y[0]) / (g * g);
  }
  if (d == 2) {
    std::vector<double> cuts = K.kink_angles();
    double phi_y = std::atan2(y[1], y[0]);
    for (double s : {0.5, 1.5}) {
      double t = std::fmod(phi_y + s * std::numbers::pi + 4.0 * std::numbers::pi, 2.0 * std::numbers::pi);
      cuts.push_back(t);
    }
    cuts.push_back(0.0);
    cuts.push_back(2.0 * std::numbers::pi);
    std::sort(cuts.begin(), cuts.end());
    auto f = [&](double phi) {
      const Point th{std::cos(phi), std::sin(phi), 0.0};
      const double g = K.gauge(th);
      return std::abs(dot(y, th)) / (g * g * g);
    };
    double sum = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const Integral piece = integrate(f, cuts[i], cuts[i + 1], tol * 1e-2);
      sum += piece.value;
      err += piece.error;
    }
    if (err > tol * std::abs(sum) * 10.0) {
      throw NumericalError("moment_body_norm did not converge: residual " + std::to_string(err));
    }
    return 0.5 * sum;
  }
  // d = 3: spherical coordinates about the y axis.
  const Point e = (1.0 / ny) * y;
  Point a = std::abs(e[0]) < 0.9 ? Point{1, 0, 0} : Point{0, 1, 0};
  a = a - dot(a, e) * e;
  a = (1.0 / norm(a)) * a;
  const Point b{e[1] * a[2] - e[2] * a[1], e[2] * a[0] - e[0] * a[2], e[0] * a[1] - e[1] * a[0]};
  double err_total = 0.0;
  auto inner = [&](double t) {
    const double ct = std::cos(t), st = std::sin(t);
    auto g = [&](double phi) {
      const Point th = ct * e + (st * std::cos(phi)) * a + (st * std::sin(phi)) * b;
      const double gg = K.gauge(th);
      return 1.0 / (gg * gg * gg * gg);
    };
    double s = 0.0;
    for (int q = 0; q < 4; ++q) {
      const Integral piece =
          integrate(g, q * 0.5 * std::numbers::pi, (q + 1) * 0.5 * std::numbers::pi, tol * 1e-2);
      s += piece.value;
      err_total += piece.error * ny * std::abs(ct) * st;
    }
    return ny * std::abs(ct) * st * s;
  };
  const Integral top = integrate(inner, 0.0, 0.5 * std::numbers::pi, tol);
  const Integral bottom = integrate(inner, 0.5 * std::numbers::pi, std::numbers::pi, tol);
  const double total = top.value + bottom.value;
  if (top.error + bottom.error > tol * total * 10.0) {
    throw NumericalError("moment_body_norm did not converge: residual " +
                         std::to_string(top.error + bottom.error));
  }
  return 0.5 * total;
}

double anisotropic_perimeter(const SetGeometry& s, const ConvexBody& K, const SphereResolution& res) {
  if (std::holds_alternative<VoxelSet>(s)) {
    throw UnsupportedError(
        "anisotropic perimeter needs a reduced boundary; approximate the voxel set by a polygon");
  }
  if (dimension(s) != K.dimension()) throw ValidationError("set and body dimensions differ");
  return boundary_integral(s, [&](const Point& n) { return K.support(n); }, res);
}

double perimeter_wrt_moment_body(const SetGeometry& s, const ConvexBody& K, double tol,
                                 const SphereResolution& res) {
  if (dimension(s) != K.dimension()) throw ValidationError("set and body dimensions differ");
  // Facet normals repeat a lot (boxes, voxel faces); evaluate each once.
  std::map<std::array<double, 3>, double> cache;
  return boundary_integral(
      s,
      [&](const Point& n) {
        const std::array<double, 3> key{n[0], n[1], n[2]};
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        const double v = moment_body_norm(K, n, tol);
        cache.emplace(key, v);
        return v;
      },
      res);
}

}  // namespace nlperim
