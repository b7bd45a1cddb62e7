#include "nlperim/measures.h"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nlperim {

class RadialProfile::Model {
 public:
  virtual ~Model() = default;
  virtual RadialKind kind() const = 0;
  virtual double mass(double a, double b) const = 0;
  virtual double moment(int k, double a, double b) const = 0;
  virtual double density_at(double r) const = 0;
  virtual double support() const { return kInfinity; }
  virtual double length_scale() const { return 1.0; }
  virtual std::vector<double> breakpoints() const { return {}; }
  virtual std::shared_ptr<const Model> pushforward(double s) const = 0;
  virtual std::optional<double> alpha() const { return std::nullopt; }
  virtual std::shared_ptr<const Model> with_alpha(double) const {
    throw UnsupportedError("profile has no stability index");
  }
  virtual const std::vector<std::pair<double, double>>& atom_list() const {
    static const std::vector<std::pair<double, double>> none;
    return none;
  }
  virtual std::string describe() const = 0;
};

namespace {

// x^e - y^e for 0 <= y <= x without cancellation.
double pow_diff(double x, double y, double e) {
  if (y == 0.0) return e > 0 ? std::pow(x, e) : kInfinity;
  return -std::pow(x, e) * std::expm1(e * std::log(y / x));
}

class PowerModel final : public RadialProfile::Model {
 public:
  PowerModel(double alpha, double prefactor, bool weighted)
      : alpha_(alpha), prefactor_(prefactor), weighted_(weighted) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw ValidationError("power profile needs 0 < alpha < 1, got " + std::to_string(alpha));
    }
    if (!(prefactor > 0.0) || !std::isfinite(prefactor)) {
      throw ValidationError("power profile prefactor must be positive");
    }
  }
  double c() const { return prefactor_ * (weighted_ ? alpha_ : 1.0); }
  RadialKind kind() const override { return RadialKind::power; }
  double mass(double a, double b) const override {
    if (!(b > a)) return 0.0;
    if (a == 0.0) return kInfinity;
    if (std::isinf(b)) return c() * std::pow(a, -alpha_) / alpha_;
    return c() * pow_diff(a, b, -alpha_) / alpha_;
  }
  double moment(int k, double a, double b) const override {
    if (!(b > a)) return 0.0;
    if (std::isinf(b)) return kInfinity;
    const double e = k - alpha_;
    return c() * pow_diff(b, a, e) / e;
  }
  double density_at(double r) const override { return c() * std::pow(r, -1.0 - alpha_); }
  std::shared_ptr<const Model> pushforward(double s) const override {
    return std::make_shared<PowerModel>(alpha_, prefactor_ * std::pow(s, alpha_), weighted_);
  }
  std::optional<double> alpha() const override { return alpha_; }
  std::shared_ptr<const Model> with_alpha(double a) const override {
    return std::make_shared<PowerModel>(a, prefactor_, weighted_);
  }
  std::string describe() const override {
    std::ostringstream os;
    os.precision(17);
    os << "power(alpha=" << alpha_ << ",c=" << c() << ")";
    return os.str();
  }

 private:
  double alpha_;
  double prefactor_;
  bool weighted_;
};

class DensityModel final : public RadialProfile::Model {
 public:
  DensityModel(std::function<double(double)> f, std::vector<double> breaks, double support)
      : f_(std::move(f)), breaks_(std::move(breaks)), support_(support) {
    if (!f_) throw ValidationError("density profile needs a function");
    if (!(support_ > 0.0)) throw ValidationError("density support must be positive");
    std::sort(breaks_.begin(), breaks_.end());
  }
  RadialKind kind() const override { return RadialKind::density; }
  double mass(double a, double b) const override {
    return weighted([](double) { return 1.0; }, a, b);
  }
  double moment(int k, double a, double b) const override {
    return weighted([k](double r) { return std::pow(r, k); }, a, b);
  }
  double density_at(double r) const override {
    if (r >= support_) return 0.0;
    const double v = f_(r);
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ValidationError("density profile is negative or not finite at r=" + std::to_string(r));
    }
    return v;
  }
  double support() const override { return support_; }
  std::vector<double> breakpoints() const override { return breaks_; }
  std::shared_ptr<const Model> pushforward(double s) const override {
    auto f = f_;
    std::vector<double> br;
    for (double b : breaks_) br.push_back(b * s);
    return std::make_shared<DensityModel>([f, s](double r) { return f(r / s) / s; }, br, support_ * s);
  }
  std::string describe() const override { return "density"; }

 private:
  // int_a^b w(r) f(r) dr with decade series towards 0 and infinity.
  double weighted(const std::function<double(double)>& w, double a, double b) const {
    b = std::min(b, support_);
    if (!(b > a)) return 0.0;
    auto g = [&](double r) { return w(r) * density_at(r); };
    const double pivot_lo = a > 0.0 ? a : std::min(b, 1.0);
    const double pivot_hi = std::isfinite(b) ? b : std::max(pivot_lo, 1.0);
    double total = 0.0;
    if (a == 0.0) {
      const SeriesSum s = sum_geometric_tail(
          [&](int k) {
            const double hi = pivot_lo * std::pow(10.0, -k);
            return integrate_log(g, hi / 10.0, hi, breaks_, 1e-11).value;
          },
          1e-12);
      total += s.value;
    }
    if (pivot_hi > pivot_lo) total += integrate_log(g, pivot_lo, pivot_hi, breaks_, 1e-11).value;
    if (std::isinf(b)) {
      const SeriesSum s = sum_geometric_tail(
          [&](int k) {
            const double lo = pivot_hi * std::pow(10.0, k);
            return integrate_log(g, lo, lo * 10.0, breaks_, 1e-11).value;
          },
          1e-12);
      total += s.value;
    }
    return total;
  }

  std::function<double(double)> f_;
  std::vector<double> breaks_;
  double support_;
};

class AtomModel final : public RadialProfile::Model {
 public:
  explicit AtomModel(std::vector<std::pair<double, double>> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw ValidationError("atom profile is empty");
    for (const auto& [r, w] : atoms_) {
      if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("atom radius must be positive");
      if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("atom weight must be >= 0");
    }
    std::sort(atoms_.begin(), atoms_.end());
  }
  RadialKind kind() const override { return RadialKind::atoms; }
  double mass(double a, double b) const override {
    double m = 0.0;
    for (const auto& [r, w] : atoms_) {
      if (r > a && r <= b) m += w;
    }
    return m;
  }
  double moment(int k, double a, double b) const override {
    double m = 0.0;
    for (const auto& [r, w] : atoms_) {
      if (r > a && r <= b) m += w * std::pow(r, k);
    }
    return m;
  }
  double density_at(double) const override { return 0.0; }
  double support() const override { return atoms_.back().first * (1 + 1e-15); }
  double length_scale() const override { return atoms_.front().first; }
  std::shared_ptr<const Model> pushforward(double s) const override {
    auto a = atoms_;
    for (auto& x : a) x.first *= s;
    return std::make_shared<AtomModel>(std::move(a));
  }
  const std::vector<std::pair<double, double>>& atom_list() const override { return atoms_; }
  std::string describe() const override { return "atoms(" + std::to_string(atoms_.size()) + ")"; }

 private:
  std::vector<std::pair<double, double>> atoms_;
};

class KernelModel final : public RadialProfile::Model {
 public:
  KernelModel(int d, KernelSpec k) : d_(d), k_(std::move(k)) {
    check_dimension(d);
    if (!(k_.amplitude > 0.0) || !std::isfinite(k_.amplitude)) {
      throw ValidationError("kernel amplitude must be positive");
    }
    if (!(k_.scale > 0.0) || !std::isfinite(k_.scale)) {
      throw ValidationError("kernel scale must be positive");
    }
    if (k_.name == KernelName::inverse_power_truncated && !(k_.beta < 1.0)) {
      throw ValidationError("inverse_power_truncated needs beta < 1 for admissibility");
    }
  }
  RadialKind kind() const override { return RadialKind::density; }
  double mass(double a, double b) const override { return moment(0, a, b); }
  double moment(int k, double a, double b) const override {
    if (!(b > a)) return 0.0;
    const double len = k_.scale;
    return k_.amplitude * std::pow(len, d_ + k) * unit_moment(k, a / len, b / len);
  }
  double density_at(double r) const override {
    const double s = r / k_.scale;
    return k_.amplitude * j(s) * std::pow(r, d_ - 1);
  }
  double support() const override { return k_.name == KernelName::gaussian ? kInfinity : k_.scale; }
  double length_scale() const override { return k_.scale; }
  std::vector<double> breakpoints() const override {
    if (k_.name == KernelName::gaussian) return {};
    return {k_.scale};
  }
  std::shared_ptr<const Model> pushforward(double s) const override {
    KernelSpec k = k_;
    k.amplitude *= std::pow(s, -d_);
    k.scale *= s;
    return std::make_shared<KernelModel>(d_, k);
  }
  std::string describe() const override {
    std::ostringstream os;
    os.precision(17);
    os << to_string(k_.name) << "(amp=" << k_.amplitude << ",scale=" << k_.scale;
    if (k_.name == KernelName::inverse_power_truncated) os << ",beta=" << k_.beta;
    os << ")";
    return os.str();
  }

 private:
  double j(double s) const {
    switch (k_.name) {
      case KernelName::indicator_ball: return s < 1.0 ? 1.0 : 0.0;
      case KernelName::gaussian: return std::pow(2.0 * std::numbers::pi, -0.5 * d_) * std::exp(-0.5 * s * s);
      case KernelName::inverse_power_truncated: return s < 1.0 ? std::pow(s, -d_ - k_.beta) : 0.0;
    }
    return 0.0;
  }
  // int_a^b j(s) s^{d-1+k} ds.
  double unit_moment(int k, double a, double b) const {
    const double n = d_ + k;
    switch (k_.name) {
      case KernelName::indicator_ball: {
        const double hi = std::min(b, 1.0), lo = std::min(a, 1.0);
        return hi > lo ? pow_diff(hi, lo, n) / n : 0.0;
      }
      case KernelName::gaussian: {
        using boost::math::gamma_p;
        using boost::math::gamma_q;
        const double h = 0.5 * n;
        const double x = 0.5 * a * a;
        const double y = std::isinf(b) ? kInfinity : 0.5 * b * b;
        double frac;
        if (x > h) {
          frac = gamma_q(h, x) - (std::isinf(y) ? 0.0 : gamma_q(h, y));
        } else {
          frac = (std::isinf(y) ? 1.0 : gamma_p(h, y)) - gamma_p(h, x);
        }
        return std::pow(2.0 * std::numbers::pi, -0.5 * d_) * std::pow(2.0, h - 1.0) * std::tgamma(h) * frac;
      }
      case KernelName::inverse_power_truncated: {
        const double hi = std::min(b, 1.0), lo = std::min(a, 1.0);
        if (!(hi > lo)) return 0.0;
        const double e = k - k_.beta;
        if (lo == 0.0 && e <= 0.0) return kInfinity;
        if (e == 0.0) return std::log(hi / lo);
        if (e > 0.0) return pow_diff(hi, lo, e) / e;
        return pow_diff(lo, hi, e) / -e;
      }
    }
    return 0.0;
  }

  int d_;
  KernelSpec k_;
};

}  // namespace

KernelName kernel_from_string(const std::string& s) {
  if (s == "indicator_ball" || s == "indicator-ball") return KernelName::indicator_ball;
  if (s == "gaussian") return KernelName::gaussian;
  if (s == "inverse_power_truncated" || s == "inverse-power-truncated") {
    return KernelName::inverse_power_truncated;
  }
  throw ValidationError("unknown kernel '" + s +
                        "' (expected indicator_ball, gaussian, inverse_power_truncated)");
}

std::string to_string(KernelName k) {
  switch (k) {
    case KernelName::indicator_ball: return "indicator_ball";
    case KernelName::gaussian: return "gaussian";
    case KernelName::inverse_power_truncated: return "inverse_power_truncated";
  }
  return "?";
}

RadialProfile RadialProfile::power(double alpha, double prefactor, bool alpha_weighted) {
  return RadialProfile(std::make_shared<PowerModel>(alpha, prefactor, alpha_weighted));
}
RadialProfile RadialProfile::density(std::function<double(double)> f, std::vector<double> breakpoints,
                                     double support) {
  return RadialProfile(std::make_shared<DensityModel>(std::move(f), std::move(breakpoints), support));
}
RadialProfile RadialProfile::atoms(std::vector<std::pair<double, double>> radius_weight) {
  return RadialProfile(std::make_shared<AtomModel>(std::move(radius_weight)));
}
RadialProfile RadialProfile::kernel(int d, const KernelSpec& k) {
  return RadialProfile(std::make_shared<KernelModel>(d, k));
}

RadialKind RadialProfile::kind() const { return m_->kind(); }
double RadialProfile::mass(double a, double b) const { return m_->mass(a, b); }
double RadialProfile::moment(int k, double a, double b) const { return m_->moment(k, a, b); }
double RadialProfile::density_at(double r) const { return m_->density_at(r); }
const std::vector<std::pair<double, double>>& RadialProfile::atom_list() const { return m_->atom_list(); }
double RadialProfile::support() const { return m_->support(); }
double RadialProfile::length_scale() const { return m_->length_scale(); }
std::vector<double> RadialProfile::breakpoints() const { return m_->breakpoints(); }
RadialProfile RadialProfile::pushforward(double s) const {
  if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("pushforward scale must be positive");
  return RadialProfile(m_->pushforward(s));
}
std::optional<double> RadialProfile::alpha() const { return m_->alpha(); }
RadialProfile RadialProfile::with_alpha(double a) const { return RadialProfile(m_->with_alpha(a)); }
std::string RadialProfile::describe() const { return m_->describe(); }

Integral RadialProfile::integrate(const ScalarFn& f, double a, double b, std::span<const double> breaks,
                                  double rel_tol, int panels_per_decade) const {
  if (kind() == RadialKind::atoms) {
    Integral out;
    for (const auto& [r, w] : atom_list()) {
      if (r > a && r <= b) out.value += w * f(r);
    }
    return out;
  }
  b = std::min(b, support());
  if (!(b > a)) return {};
  std::vector<double> br(breaks.begin(), breaks.end());
  for (double x : breakpoints()) br.push_back(x);
  return integrate_log([&](double r) { return f(r) * density_at(r); }, a, b, br, rel_tol, panels_per_decade);
}

// ---------------------------------------------------------------------------

SphericalMeasure SphericalMeasure::uniform(int d) {
  check_dimension(d);
  SphericalMeasure s;
  s.d_ = d;
  s.kind_ = SphericalKind::uniform;
  return s;
}

SphericalMeasure SphericalMeasure::surface(int d) {
  SphericalMeasure s = uniform(d);
  s.kind_ = SphericalKind::surface;
  return s;
}

SphericalMeasure SphericalMeasure::atoms(int d, std::vector<std::pair<Point, double>> atoms) {
  check_dimension(d);
  if (atoms.empty()) throw ValidationError("spherical atom list is empty");
  double total = 0.0;
  for (const auto& [th, w] : atoms) {
    if (std::abs(norm(th) - 1.0) > 1e-12) {
      throw ValidationError("spherical atom is not a unit vector");
    }
    for (int i = d; i < 3; ++i) {
      if (th[i] != 0.0) throw ValidationError("spherical atom has coordinates beyond dimension");
    }
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("spherical atom weight must be >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw ValidationError("spherical measure must have positive mass");
  SphericalMeasure s;
  s.d_ = d;
  s.kind_ = SphericalKind::atoms;
  s.atoms_ = std::move(atoms);
  return s;
}

SphericalMeasure SphericalMeasure::gauge_weighted(const ConvexBody& K, double p) {
  if (!std::isfinite(p)) throw ValidationError("gauge weight exponent must be finite");
  SphericalMeasure s;
  s.d_ = K.dimension();
  s.kind_ = SphericalKind::gauge_weighted;
  s.p_ = p;
  s.body_ = K;
  return s;
}

SphericalMeasure SphericalMeasure::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("spherical scale must be positive");
  SphericalMeasure s = *this;
  s.scale_ *= c;
  return s;
}

SphericalMeasure SphericalMeasure::restricted_to_cone(const Point& axis, double half_angle) const {
  const double n = norm(axis);
  if (!(n > 0.0)) throw ValidationError("cone axis must be nonzero");
  if (!(half_angle > 0.0 && half_angle <= std::numbers::pi)) {
    throw ValidationError("cone half angle must be in (0, pi]");
  }
  SphericalMeasure s = *this;
  s.cone_axis_ = (1.0 / n) * axis;
  s.cone_half_angle_ = half_angle;
  return s;
}

SphericalMeasure SphericalMeasure::with_exponent(double p) const {
  SphericalMeasure s = *this;
  s.p_ = p;
  return s;
}

bool SphericalMeasure::in_cone(const Point& theta) const {
  if (!cone_axis_) return true;
  const double c = std::clamp(dot(theta, *cone_axis_), -1.0, 1.0);
  return std::acos(c) <= cone_half_angle_ + 1e-12;
}

double SphericalMeasure::density(const Point& theta) const {
  double w = scale_;
  switch (kind_) {
    case SphericalKind::uniform: w /= sphere_area(d_); break;
    case SphericalKind::surface: break;
    case SphericalKind::gauge_weighted: w *= std::pow(body_->gauge(theta), -p_); break;
    case SphericalKind::atoms: throw UnsupportedError("atomic spherical measure has no density");
  }
  if (cone_axis_) {
    const double c = std::clamp(dot(theta, *cone_axis_), -1.0, 1.0);
    const double ang = std::acos(c);
    if (std::abs(ang - cone_half_angle_) <= 1e-12) return 0.5 * w;
    if (ang > cone_half_angle_) return 0.0;
  }
  return w;
}

std::vector<SphereNode> SphericalMeasure::nodes(const SphereResolution& res) const {
  std::vector<SphereNode> out;
  if (kind_ == SphericalKind::atoms) {
    for (const auto& [th, w] : atoms_) {
      if (!in_cone(th)) continue;
      out.push_back(SphereNode{th, w * scale_, w * scale_});
    }
    return out;
  }
  for (auto node : sphere_grid(d_, res)) {
    const double rho = density(node.theta);
    if (rho == 0.0) continue;
    node.weight *= rho;
    node.coarse_weight *= rho;
    out.push_back(node);
  }
  return out;
}

double SphericalMeasure::total_mass(const SphereResolution& res) const {
  if (!cone_axis_) {
    switch (kind_) {
      case SphericalKind::uniform: return scale_;
      case SphericalKind::surface: return scale_ * sphere_area(d_);
      case SphericalKind::atoms: {
        double t = 0.0;
        for (const auto& a : atoms_) t += a.second;
        return t * scale_;
      }
      case SphericalKind::gauge_weighted:
        if (p_ == d_) return scale_ * d_ * body_->volume();
        break;
    }
  }
  double t = 0.0;
  for (const auto& n : nodes(res)) t += n.weight;
  return t;
}

std::string SphericalMeasure::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case SphericalKind::uniform: os << "uniform"; break;
    case SphericalKind::surface: os << "surface"; break;
    case SphericalKind::atoms: os << "atoms(" << atoms_.size() << ")"; break;
    case SphericalKind::gauge_weighted: os << "gauge(p=" << p_ << "," << body_->describe() << ")"; break;
  }
  if (scale_ != 1.0) os << "*" << scale_;
  if (cone_axis_) {
    os << " cone(" << (*cone_axis_)[0] << "," << (*cone_axis_)[1] << "," << (*cone_axis_)[2] << ";"
       << cone_half_angle_ << ")";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

MeasureSpec MeasureSpec::radial_spherical(RadialProfile rho, SphericalMeasure eta) {
  return MeasureSpec(MeasureKind::radial_spherical, std::move(rho), std::move(eta));
}

MeasureSpec MeasureSpec::kernel(int d, const KernelSpec& k) {
  SphericalMeasure eta = SphericalMeasure::surface(d);
  if (k.cone_axis) eta = eta.restricted_to_cone(*k.cone_axis, k.cone_half_angle);
  MeasureSpec m(MeasureKind::kernel, RadialProfile::kernel(d, k), std::move(eta));
  m.kernel_ = k;
  return m;
}

MeasureSpec MeasureSpec::anisotropic_stable(const ConvexBody& K, double alpha, double prefactor) {
  const int d = K.dimension();
  return MeasureSpec(MeasureKind::anisotropic_stable, RadialProfile::power(alpha, prefactor),
                     SphericalMeasure::gauge_weighted(K, d + alpha));
}

MeasureSpec MeasureSpec::fractional(int d, double alpha) {
  return MeasureSpec(MeasureKind::radial_spherical, RadialProfile::power(alpha),
                     SphericalMeasure::surface(d));
}

MeasureSpec MeasureSpec::stable(int d, double alpha) {
  return MeasureSpec(MeasureKind::radial_spherical, RadialProfile::power(alpha, 1.0, true),
                     SphericalMeasure::uniform(d));
}

double MeasureSpec::mass(double a, double b) const {
  const double r = rho_.mass(a, b);
  return r == 0.0 ? 0.0 : angular_mass() * r;
}

double MeasureSpec::moment(int k, double a, double b) const {
  const double r = rho_.moment(k, a, b);
  return r == 0.0 ? 0.0 : angular_mass() * r;
}

MeasureSpec MeasureSpec::pushforward(double s) const {
  MeasureSpec m = *this;
  m.rho_ = rho_.pushforward(s);
  if (m.kernel_) {
    m.kernel_->amplitude *= std::pow(s, -dimension());
    m.kernel_->scale *= s;
  }
  return m;
}

MeasureSpec MeasureSpec::with_alpha(double alpha) const {
  MeasureSpec m = *this;
  m.rho_ = rho_.with_alpha(alpha);
  if (kind_ == MeasureKind::anisotropic_stable) m.eta_ = eta_.with_exponent(dimension() + alpha);
  return m;
}

std::string MeasureSpec::describe() const {
  std::string k;
  switch (kind_) {
    case MeasureKind::radial_spherical: k = "radial_spherical"; break;
    case MeasureKind::kernel: k = "kernel"; break;
    case MeasureKind::anisotropic_stable: k = "anisotropic_stable"; break;
  }
  return k + "[" + rho_.describe() + " x " + eta_.describe() + "] d=" + std::to_string(dimension());
}

Admissibility admissibility_check(const MeasureSpec& m, double tol) {
  if (!(tol > 0.0)) throw ValidationError("admissibility tolerance must be positive");
  Admissibility out;
  double near = 0.0, far = 0.0;
  try {
    near = m.moment(1, 0.0, 1.0);
  } catch (const NumericalError& e) {
    out.diagnostic = std::string("int_{|x|<1} |x| nu(dx) diverges near 0: ") + e.what();
    return out;
  }
  try {
    far = m.mass(1.0, kInfinity);
  } catch (const NumericalError& e) {
    out.diagnostic = std::string("nu(|x|>1) diverges near infinity: ") + e.what();
    return out;
  }
  out.value = near + far;
  if (!std::isfinite(near)) {
    out.diagnostic = "int_{|x|<1} |x| nu(dx) diverges near 0";
  } else if (!std::isfinite(far)) {
    out.diagnostic = "nu(|x|>1) diverges near infinity";
  } else {
    out.admissible = true;
  }
  return out;
}

double tail_mass(const MeasureSpec& m, double s) {
  if (!(s > 0.0)) throw ValidationError("tail_mass needs s > 0");
  const double v = m.mass(s, kInfinity);
  if (!std::isfinite(v)) {
    throw NumericalError("nu(|x| > " + std::to_string(s) + ") is infinite");
  }
  return v;
}

}  // namespace nlperim
