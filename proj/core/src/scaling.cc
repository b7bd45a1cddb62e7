#include <algorithm>
#include <cmath>

#include "nlperim/measures.h"

namespace nlperim {

ScalingRule scaling_rule_from_string(const std::string& s) {
  if (s == "kernel_shrink") return ScalingRule::kernel_shrink;
  if (s == "set_shrink") return ScalingRule::set_shrink;
  if (s == "kernel_stretch") return ScalingRule::kernel_stretch;
  if (s == "alpha_family" || s == "alpha_up" || s == "alpha_down") return ScalingRule::alpha_family;
  throw ValidationError("unknown scaling rule '" + s + "'");
}

Normalization normalization_from_string(const std::string& s) {
  if (s == "cap_at_R") return Normalization::cap_at_R;
  if (s == "cap_at_one") return Normalization::cap_at_one;
  if (s == "total_mass") return Normalization::total_mass;
  if (s == "tail_mass") return Normalization::tail_mass;
  if (s == "one_minus_alpha") return Normalization::one_minus_alpha;
  if (s == "alpha") return Normalization::alpha;
  if (s == "epsilon") return Normalization::epsilon;
  throw ValidationError("unknown normalization '" + s + "'");
}

std::string to_string(ScalingRule r) {
  switch (r) {
    case ScalingRule::kernel_shrink: return "kernel_shrink";
    case ScalingRule::set_shrink: return "set_shrink";
    case ScalingRule::kernel_stretch: return "kernel_stretch";
    case ScalingRule::alpha_family: return "alpha_family";
  }
  return "?";
}

std::string to_string(Normalization n) {
  switch (n) {
    case Normalization::cap_at_R: return "cap_at_R";
    case Normalization::cap_at_one: return "cap_at_one";
    case Normalization::total_mass: return "total_mass";
    case Normalization::tail_mass: return "tail_mass";
    case Normalization::one_minus_alpha: return "one_minus_alpha";
    case Normalization::alpha: return "alpha";
    case Normalization::epsilon: return "epsilon";
  }
  return "?";
}

MeasureSpec ScalingFamily::at(double param) const {
  if (!(param > 0.0) || !std::isfinite(param)) {
    throw ValidationError("scaling parameter must be positive, got " + std::to_string(param));
  }
  switch (rule) {
    case ScalingRule::alpha_family:
      if (!(param < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
      return base.with_alpha(param);
    case ScalingRule::set_shrink: return base.pushforward(param);
    case ScalingRule::kernel_shrink:
    case ScalingRule::kernel_stretch:
      if (base.kind() != MeasureKind::kernel) {
        throw ValidationError(to_string(rule) + " needs a kernel measure");
      }
      return base.pushforward(rule == ScalingRule::kernel_shrink ? param : 1.0 / param);
  }
  throw ValidationError("bad scaling rule");
}

namespace {

double finite_or_throw(double near, double far, const std::string& what) {
  if (!std::isfinite(near)) throw NumericalError(what + " diverges near 0");
  if (!std::isfinite(far)) throw NumericalError(what + " diverges near infinity");
  const double c = near + far;
  if (!(c > 0.0)) throw NumericalError(what + " is zero");
  return c;
}

double weighted_total(const MeasureSpec& m, Normalization mode, double R) {
  if (!(R > 0.0)) throw ValidationError("R_eps must be positive");
  switch (mode) {
    case Normalization::cap_at_R:
      if (std::isinf(R)) return finite_or_throw(m.moment(1, 0.0, kInfinity), 0.0, "int |x| nu");
      return finite_or_throw(m.moment(1, 0.0, R), R * m.mass(R, kInfinity), "int (R ∧ |x|) nu");
    case Normalization::cap_at_one:
      if (std::isinf(R)) return finite_or_throw(m.mass(0.0, kInfinity), 0.0, "nu(R^d)");
      return finite_or_throw(R * m.moment(1, 0.0, 1.0 / R), m.mass(1.0 / R, kInfinity), "int (1 ∧ R|x|) nu");
    default: break;
  }
  throw ValidationError("lambda weight must be cap_at_R or cap_at_one");
}

}  // namespace

double normalization_constant(const ScalingFamily& fam, double param) {
  const MeasureSpec m = fam.at(param);
  const double R = fam.R_rule(param);
  switch (fam.normalization) {
    case Normalization::cap_at_R:
    case Normalization::cap_at_one: return weighted_total(m, fam.normalization, R);
    case Normalization::total_mass:
      return finite_or_throw(m.mass(0.0, 1.0), m.mass(1.0, kInfinity), "nu_eps(R^d)");
    case Normalization::tail_mass:
      if (!(R > 0.0) || std::isinf(R)) throw ValidationError("tail_mass needs finite R_eps > 0");
      return finite_or_throw(0.0, m.mass(R, kInfinity), "nu_eps(|x| > R)");
    case Normalization::one_minus_alpha:
    case Normalization::alpha: {
      if (fam.rule != ScalingRule::alpha_family) {
        throw ValidationError(to_string(fam.normalization) + " needs the alpha family");
      }
      return fam.normalization == Normalization::alpha ? 1.0 / param : 1.0 / (1.0 - param);
    }
    case Normalization::epsilon: return param;
  }
  throw ValidationError("bad normalization");
}

double lambda_tail(const ScalingFamily& fam, double param, double R) {
  if (!(R > 0.0)) throw ValidationError("lambda_tail needs R > 0");
  const MeasureSpec m = fam.at(param);
  const double Re = fam.R_rule(param);
  const double C = weighted_total(m, fam.lambda_mode, Re);
  double tail = 0.0;
  if (fam.lambda_mode == Normalization::cap_at_R) {
    if (std::isinf(Re)) {
      tail = m.moment(1, R, kInfinity);
    } else {
      const double cut = std::max(R, Re);
      tail = m.moment(1, R, cut) + Re * m.mass(cut, kInfinity);
    }
  } else {
    if (std::isinf(Re)) {
      tail = m.mass(R, kInfinity);
    } else {
      const double cut = std::max(R, 1.0 / Re);
      tail = Re * m.moment(1, R, cut) + m.mass(cut, kInfinity);
    }
  }
  return std::clamp(tail / C, 0.0, 1.0);
}

SphericalMeasure sphere_projection(const ScalingFamily& fam, double param, const SphereResolution& res) {
  const MeasureSpec m = fam.at(param);
  const SphericalMeasure& eta = m.sphere();
  if (fam.lambda_mode == Normalization::cap_at_R && std::isinf(fam.R_rule(param))) {
    if (!std::isfinite(m.radial().moment(1, 0.0, kInfinity))) {
      throw NumericalError("projection needs int |x| nu(dx) < infinity");
    }
  }
  // nu = rho ⊗ eta with the same rho in every direction, so the projection of
  // lambda_eps is eta normalized, whatever the weight.
  if (eta.kind() == SphericalKind::uniform && eta.total_mass() == 1.0) return eta;
  double total = 0.0;
  const auto nodes = eta.nodes(res);
  for (const auto& n : nodes) total += n.weight;
  if (!(total > 0.0)) throw NumericalError("spherical part has zero mass");
  if (eta.kind() == SphericalKind::gauge_weighted) return eta.scaled(1.0 / total);
  std::vector<std::pair<Point, double>> atoms;
  for (const auto& n : nodes) atoms.emplace_back(n.theta, n.weight / total);
  return SphericalMeasure::atoms(eta.dimension(), std::move(atoms));
}

}  // namespace nlperim
