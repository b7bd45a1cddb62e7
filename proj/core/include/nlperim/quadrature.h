#pragma once

#include <functional>
#include <span>
#include <vector>

namespace nlperim {

struct Integral {
  double value = 0.0;
  double error = 0.0;
};

using ScalarFn = std::function<double(double)>;

// Adaptive Gauss-Kronrod on [a, b]; `rel_tol` is relative to the L1 norm of f.
Integral integrate(const ScalarFn& f, double a, double b, double rel_tol = 1e-10);

// Integral of f(r) dr over [a, b] with 0 < a < b < inf, evaluated in t = log r.
// Panels are split `panels_per_decade` times per decade and at the supplied
// breakpoints so that features at any scale are seen by the first refinement
// pass.
Integral integrate_log(const ScalarFn& f, double a, double b, std::span<const double> breakpoints = {},
                       double rel_tol = 1e-10, int panels_per_decade = 1);

// Sum of a series whose terms eventually decay geometrically. Terms are
// produced lazily by `term(k)`, k = 0, 1, ...; the remainder after the last
// computed term is estimated from the observed ratio. Throws NumericalError
// when the ratio does not settle below one within `max_terms`.
struct SeriesSum {
  double value = 0.0;
  double remainder = 0.0;
  double ratio = 0.0;
  int terms = 0;
};
SeriesSum sum_geometric_tail(const std::function<double(int)>& term, double rel_tol, int max_terms = 400);

}  // namespace nlperim
