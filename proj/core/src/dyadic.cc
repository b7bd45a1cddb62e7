#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "nlperim/perimeter.h"

namespace nlperim {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
}

}  // namespace

double dyadic_example_inner(double alpha) {
  check_alpha(alpha);
  const double q = std::exp2(alpha - 1.0);
  return alpha / (1.0 - alpha) * q / (1.0 - q) + std::exp2(alpha) * (1.0 - std::exp2(-alpha)) / (1.0 - q);
}

double interval_per_stable(double length, double alpha) {
  check_alpha(alpha);
  if (!(length > 0.0)) throw ValidationError("interval length must be positive");
  return std::pow(length, 1.0 - alpha) / (1.0 - alpha);
}

// With nu = (alpha/2)|y|^{-1-alpha}, int_J nu(y - x) dy = (1/2)[(c-x)^-a - (d-x)^-a]
// for x left of J = [c, d].
double interval_interaction_stable(std::pair<double, double> I, std::pair<double, double> J, double alpha) {
  check_alpha(alpha);
  const auto [a, b] = I;
  const auto [c, d] = J;
  if (!(a < b && b <= c && c < d)) {
    throw ValidationError("interaction needs intervals I = [a, b] left of J = [c, d]");
  }
  const double gap = c - b;
  if (gap < 10.0 * std::max(b - a, d - c)) {
    const double e = 1.0 - alpha;
    const double F = std::pow(c - a, e) - std::pow(c - b, e) - std::pow(d - a, e) + std::pow(d - b, e);
    return 0.5 * F / e;
  }
  const auto inner = [&](double x) {
    const double s = c - x;
    return -0.5 * std::pow(s, -alpha) * std::expm1(-alpha * std::log1p((d - c) / s));
  };
  // The nearest singularity is at least ten interval lengths away, so a fixed
  // 20-point Gauss rule is at machine precision.
  return boost::math::quadrature::gauss<double, 20>::integrate(inner, a, b);
}

double dyadic_truncated_closed_form(double alpha, int n_max) {
  check_alpha(alpha);
  if (n_max < 1) throw ValidationError("n_max must be at least 1");
  const double q = std::exp2(alpha - 1.0);
  // sum_{n > N} (2^-n)^{1-alpha} / (1-alpha)
  const double tail = std::pow(q, n_max + 1) / (1.0 - q) / (1.0 - alpha);
  double cross = 0.0;
  for (int i = 1; i <= n_max; ++i) {
    for (int j = i + 1; j <= n_max; ++j) {
      cross += interval_interaction_stable({i, i + std::ldexp(1.0, -i)}, {j, j + std::ldexp(1.0, -j)}, alpha);
    }
  }
  return dyadic_example_inner(alpha) + 1.0 - tail - 2.0 * cross;
}

}  // namespace nlperim
