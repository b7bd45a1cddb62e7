#include "nlperim/quadrature.h"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <string>

#include "nlperim/types.h"

namespace nlperim {

namespace {
constexpr unsigned kMaxDepth = 18;
}

Integral integrate(const ScalarFn& f, double a, double b, double rel_tol) {
  if (!(a < b)) return {};
  double error = 0.0;
  double l1 = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, kMaxDepth, rel_tol, &error, &l1);
  if (!std::isfinite(value)) {
    throw NumericalError("quadrature produced a non-finite value on [" + std::to_string(a) + ", " +
                         std::to_string(b) + "]");
  }
  return {value, error};
}

Integral integrate_log(const ScalarFn& f, double a, double b, std::span<const double> breakpoints,
                       double rel_tol, int panels_per_decade) {
  if (!(a > 0.0) || !(a < b) || !std::isfinite(b)) return {};
  std::vector<double> knots{std::log(a), std::log(b)};
  for (double r : breakpoints) {
    if (r > a && r < b) knots.push_back(std::log(r));
  }
  const int per = std::max(1, panels_per_decade);
  const double step = std::log(10.0) / per;
  for (long k = static_cast<long>(std::ceil(knots[0] / step));
       k <= static_cast<long>(std::floor(knots[1] / step)); ++k) {
    const double t = static_cast<double>(k) * step;
    if (t > knots[0] && t < knots[1]) knots.push_back(t);
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end(), [](double x, double y) { return y - x < 1e-14; }),
              knots.end());

  const auto g = [&f](double t) {
    const double r = std::exp(t);
    return f(r) * r;
  };
  // The tolerance is relative to the whole integral: a first unrefined pass
  // gives each panel's L1 share, so tiny panels are not refined below the
  // rounding floor of the error estimate.
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const std::size_t n = knots.size() - 1;
  std::vector<double> l1(n, 0.0);
  double total_l1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double err = 0.0;
    GK::integrate(g, knots[i], knots[i + 1], 0, rel_tol, &err, &l1[i]);
    total_l1 += l1[i];
  }
  Integral total;
  if (!(total_l1 > 0.0)) return total;
  if (!std::isfinite(total_l1)) throw NumericalError("integrand is not finite on a log panel");
  for (std::size_t i = 0; i < n; ++i) {
    double tol = rel_tol;
    if (l1[i] > 0.0) tol = std::clamp(rel_tol * total_l1 / (l1[i] * n), rel_tol, 1.0);
    const Integral piece = integrate(g, knots[i], knots[i + 1], tol);
    total.value += piece.value;
    total.error += piece.error;
  }
  return total;
}

SeriesSum sum_geometric_tail(const std::function<double(int)>& term, double rel_tol, int max_terms) {
  SeriesSum s;
  double prev = 0.0;
  int growing = 0;
  for (int k = 0; k < max_terms; ++k) {
    const double t = term(k);
    if (!std::isfinite(t)) {
      throw NumericalError("series term " + std::to_string(k) + " is not finite");
    }
    s.value += t;
    s.terms = k + 1;
    if (k >= 3 && prev != 0.0) {
      s.ratio = t / prev;
      // Decade sums of a divergent integral stop shrinking (ratio >= 1 for
      // power and logarithmic singularities alike).
      growing = std::abs(s.ratio) >= 1.0 ? growing + 1 : 0;
      if (growing >= 6) {
        throw NumericalError("series diverges: term ratio " + std::to_string(s.ratio));
      }
      if (t == 0.0) {
        s.remainder = 0.0;
        return s;
      }
      if (std::abs(s.ratio) < 1.0) {
        const double rem = t * s.ratio / (1.0 - s.ratio);
        if (std::abs(rem) <= rel_tol * std::abs(s.value)) {
          s.value += rem;
          s.remainder = std::abs(rem);
          return s;
        }
      }
    } else if (k >= 3 && t == 0.0) {
      return s;
    }
    prev = t;
  }
  throw NumericalError("series does not converge: term ratio " + std::to_string(s.ratio) + " after " +
                       std::to_string(max_terms) + " terms");
}

}  // namespace nlperim
