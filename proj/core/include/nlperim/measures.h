#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlperim/convex.h"
#include "nlperim/quadrature.h"
#include "nlperim/sphere.h"

namespace nlperim {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RadialKind { power, density, atoms };

enum class KernelName { indicator_ball, gaussian, inverse_power_truncated };

// Radially symmetric kernel profile j(s) on (0, inf), used as
// J(x) = amplitude * j(|x| / scale):
//   indicator_ball            j = 1_{s<1}
//   gaussian                  j = (2 pi)^{-d/2} exp(-s^2/2)
//   inverse_power_truncated   j = s^{-d-beta} 1_{s<1}, beta < 1
struct KernelSpec {
  KernelName name = KernelName::gaussian;
  double beta = 0.0;
  double amplitude = 1.0;
  double scale = 1.0;
  // Optional restriction to the cone {x : angle(x, axis) <= half_angle}.
  std::optional<Point> cone_axis;
  double cone_half_angle = 0.0;
};

KernelName kernel_from_string(const std::string& s);
std::string to_string(KernelName k);

// Radial part rho(dr) of a measure on (0, inf).
class RadialProfile {
 public:
  class Model;

  // c r^{-1-alpha} dr with 0 < alpha < 1; with `alpha_weighted` the density
  // is c alpha r^{-1-alpha}.
  static RadialProfile power(double alpha, double prefactor = 1.0, bool alpha_weighted = false);
  // f(r) dr for a user density, nonnegative and locally bounded on (0, inf).
  // `breakpoints` are radii where f is not smooth; f vanishes beyond `support`.
  static RadialProfile density(std::function<double(double)> f, std::vector<double> breakpoints = {},
                               double support = kInfinity);
  static RadialProfile atoms(std::vector<std::pair<double, double>> radius_weight);
  // amplitude * j(r/scale) r^{d-1} dr for a registry kernel.
  static RadialProfile kernel(int d, const KernelSpec& k);

  RadialKind kind() const;
  // rho((a, b)), b may be infinite.
  double mass(double a, double b) const;
  // int_a^b r^k rho(dr) for k = 1, 2.
  double moment(int k, double a, double b) const;
  // int_a^b f(r) rho(dr); log-spaced panels for continuous profiles.
  Integral integrate(const ScalarFn& f, double a, double b, std::span<const double> breaks, double rel_tol,
                     int panels_per_decade = 1) const;
  double density_at(double r) const;
  const std::vector<std::pair<double, double>>& atom_list() const;
  // Radius beyond which rho vanishes (infinite if unbounded).
  double support() const;
  // Natural length scale of the profile (kernel scale, 1 for power laws).
  double length_scale() const;
  std::vector<double> breakpoints() const;
  // Image of rho under r -> s r.
  RadialProfile pushforward(double s) const;
  std::optional<double> alpha() const;
  RadialProfile with_alpha(double alpha) const;
  std::string describe() const;

  explicit RadialProfile(std::shared_ptr<const Model> m) : m_(std::move(m)) {}

 private:
  std::shared_ptr<const Model> m_;
};

enum class SphericalKind { uniform, atoms, gauge_weighted, surface };

// Angular part eta on S^{d-1}. `uniform` is the normalized surface measure,
// `surface` the unnormalized one, `gauge_weighted` has density
// ||theta||_K^{-p} with respect to surface measure. Any kind may be scaled and
// restricted to a cone.
class SphericalMeasure {
 public:
  static SphericalMeasure uniform(int d);
  static SphericalMeasure surface(int d);
  static SphericalMeasure atoms(int d, std::vector<std::pair<Point, double>> atoms);
  static SphericalMeasure gauge_weighted(const ConvexBody& K, double p);

  int dimension() const { return d_; }
  SphericalKind kind() const { return kind_; }
  double exponent() const { return p_; }
  const std::optional<ConvexBody>& body() const { return body_; }
  const std::vector<std::pair<Point, double>>& atom_list() const { return atoms_; }

  SphericalMeasure scaled(double c) const;
  SphericalMeasure restricted_to_cone(const Point& axis, double half_angle) const;
  SphericalMeasure with_exponent(double p) const;

  // Quadrature nodes; weights integrate against this measure.
  std::vector<SphereNode> nodes(const SphereResolution& res = {}) const;
  // Exact where available (uniform, surface, atoms, gauge p = d), else by
  // quadrature at `res`.
  double total_mass(const SphereResolution& res = {}) const;
  // Density with respect to surface measure (not for atoms).
  double density(const Point& theta) const;
  bool in_cone(const Point& theta) const;
  std::string describe() const;

 private:
  int d_ = 1;
  SphericalKind kind_ = SphericalKind::uniform;
  double p_ = 0.0;
  double scale_ = 1.0;
  std::optional<ConvexBody> body_;
  std::vector<std::pair<Point, double>> atoms_;
  std::optional<Point> cone_axis_;
  double cone_half_angle_ = 0.0;
};

enum class MeasureKind { radial_spherical, kernel, anisotropic_stable };

// nu = rho ⊗ eta in polar coordinates: nu(A) = int eta(dtheta) int rho(dr) 1_A(r theta).
class MeasureSpec {
 public:
  static MeasureSpec radial_spherical(RadialProfile rho, SphericalMeasure eta);
  static MeasureSpec kernel(int d, const KernelSpec& k);
  // Density c ||x||_K^{-d-alpha}.
  static MeasureSpec anisotropic_stable(const ConvexBody& K, double alpha, double prefactor = 1.0);
  // |x|^{-d-alpha} dx, the kernel of the alpha-perimeter.
  static MeasureSpec fractional(int d, double alpha);
  // alpha dx / (kappa_{d-1} |x|^{d+alpha}), the rotation invariant stable measure.
  static MeasureSpec stable(int d, double alpha);

  int dimension() const { return eta_.dimension(); }
  MeasureKind kind() const { return kind_; }
  const RadialProfile& radial() const { return rho_; }
  const SphericalMeasure& sphere() const { return eta_; }
  const std::optional<KernelSpec>& kernel_spec() const { return kernel_; }
  const std::optional<ConvexBody>& body() const { return eta_.body(); }
  std::optional<double> alpha() const { return rho_.alpha(); }

  double angular_mass(const SphereResolution& res = {}) const { return eta_.total_mass(res); }
  // nu({a < |x| < b}).
  double mass(double a, double b) const;
  // int_{a<|x|<b} |x|^k nu(dx).
  double moment(int k, double a, double b) const;
  // Image under x -> s x.
  MeasureSpec pushforward(double s) const;
  MeasureSpec with_alpha(double alpha) const;
  std::string describe() const;

 private:
  MeasureSpec(MeasureKind k, RadialProfile rho, SphericalMeasure eta)
      : kind_(k), rho_(std::move(rho)), eta_(std::move(eta)) {}
  MeasureKind kind_;
  RadialProfile rho_;
  SphericalMeasure eta_;
  std::optional<KernelSpec> kernel_;
};

struct Admissibility {
  bool admissible = false;
  double value = 0.0;
  std::string diagnostic;
};

// int (1 ∧ |x|) nu(dx), with divergence detection near 0 and near infinity.
Admissibility admissibility_check(const MeasureSpec& m, double tol = 1e-8);

// l(s) = nu({|x| > s}).
double tail_mass(const MeasureSpec& m, double s);

enum class ScalingRule { kernel_shrink, set_shrink, kernel_stretch, alpha_family };

// cap_at_R: int (R ∧ |x|) nu_eps; cap_at_one: int (1 ∧ R|x|) nu_eps;
// total_mass: nu_eps(R^d); tail_mass: nu_eps(|x| > R);
// one_minus_alpha, alpha, epsilon: the explicit factors 1/(1-alpha), 1/alpha, eps.
enum class Normalization { cap_at_R, cap_at_one, total_mass, tail_mass, one_minus_alpha, alpha, epsilon };

ScalingRule scaling_rule_from_string(const std::string& s);
Normalization normalization_from_string(const std::string& s);
std::string to_string(ScalingRule r);
std::string to_string(Normalization n);

struct ScalingFamily {
  MeasureSpec base;
  ScalingRule rule = ScalingRule::set_shrink;
  Normalization normalization = Normalization::cap_at_R;
  // Weight used for lambda_eps; either cap_at_R or cap_at_one.
  Normalization lambda_mode = Normalization::cap_at_R;
  std::function<double(double)> R_rule = [](double) { return 1.0; };

  // nu_eps (or nu_alpha for alpha_family).
  MeasureSpec at(double param) const;
};

double normalization_constant(const ScalingFamily& fam, double param);
double lambda_tail(const ScalingFamily& fam, double param, double R);
SphericalMeasure sphere_projection(const ScalingFamily& fam, double param, const SphereResolution& res = {});

}  // namespace nlperim
