#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlperim/covariogram.h"
#include "nlperim/measures.h"

namespace nlperim {

struct QuadratureSpec {
  // Initial log-spaced radial panels per decade (adaptive refinement follows).
  int panels_per_decade = 1;
  SphereResolution sphere;
  // Inner cutoff; 0 selects 1e-6 times the smallest covariogram / measure
  // length scale. Below it the increment is replaced by its first-order term.
  double r_min = 0.0;
  // Outer cutoff; 0 selects the covariogram support radius, beyond which the
  // integrand is exactly g(0) so the far field is g(0) * rho((r_max, inf)).
  double r_max = 0.0;
  double rel_tol = 1e-6;
};

struct Breakdown {
  double near = 0.0;  // r < r_min
  double bulk = 0.0;  // r_min <= r <= r_max
  double tail = 0.0;  // r > r_max
};

struct PerimeterResult {
  double value = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  Breakdown breakdown;
  std::string method;
  std::vector<std::string> warnings;
  std::uint64_t samples = 0;
};

// Per_nu(E) = int (g(0) - g(y)) nu(dy) by radial-spherical product quadrature.
PerimeterResult per_nu(const Covariogram& cov, const MeasureSpec& m, const QuadratureSpec& q = {});

// Monte Carlo estimate of int_E nu(E^c - x) dx. Points x are drawn from E with
// a density that grows towards the boundary, directions from the spherical
// part of nu, and the radial integral along each ray is exact. Results are
// reproducible for a given seed whatever the thread count.
struct OracleOptions {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: hardware concurrency
};
PerimeterResult per_nu_mc_oracle(const Shape& s, const MeasureSpec& m, const OracleOptions& o = {});

// Per_alpha(E) = int_E int_{E^c} |x-y|^{-d-alpha}, computed as
// (kappa_{d-1}/alpha) Per_{nu_alpha}(E) with the stable measure nu_alpha.
PerimeterResult frac_perimeter(const Covariogram& cov, double alpha, const QuadratureSpec& q = {});

// Per_J(E) for a registry kernel.
PerimeterResult j_perimeter(const Covariogram& cov, const KernelSpec& J, const QuadratureSpec& q = {});

// Piecewise-constant function on a regular grid (same cell layout as VoxelSet)
// with compact support: cells on the grid border must be zero.
struct GridFunction {
  int d = 1;
  std::array<int, 3> dims{1, 1, 1};
  double h = 1.0;
  Point origin{};
  std::vector<double> values;

  std::size_t index(int i, int j = 0, int k = 0) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims[1]) * k);
  }
};

void validate(const GridFunction& u);
// {x : u(x) > t} as a voxel set on the same grid.
VoxelSet superlevel_set(const GridFunction& u, double t);
// c * 1_E on the grid of E.
GridFunction indicator(const VoxelSet& e, double c = 1.0);

// F_nu(u) = 1/2 int int |u(x+y) - u(x)| nu(dy) dx from direct shifted
// differences D(y) = int |u(x+y) - u(x)| dx on the shift lattice.
PerimeterResult f_nu(const GridFunction& u, const MeasureSpec& m, const QuadratureSpec& q = {});

// int Per_nu({u > t}) dt, exact in t: the sum over consecutive levels of the
// gap times Per_nu of the superlevel set (FFT covariograms). `t_nodes`, when
// given, must contain every value taken by u.
PerimeterResult coarea_rhs(const GridFunction& u, const MeasureSpec& m, const QuadratureSpec& q = {},
                           std::span<const double> t_nodes = {});

// Complement symmetry Per_nu(E) = Per_nu(E^c) inside a window W ⊃⊃ E.
// lhs from the covariogram of E; rhs = int |(W \ E) ∩ (E - y)| nu(dy) from a
// direct overlap computation. The part of E^c outside W is bounded by
// |E| nu(|y| > dist(E, ∂W)), reported as tail_bound.
struct SymmetryReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  double tail_bound = 0.0;
  double tolerance = 0.0;
  bool inconclusive = false;
};
struct Window {
  Point lo{};
  Point hi{};
};
SymmetryReport symmetry_check(const SetGeometry& s, const MeasureSpec& m, const Window& w,
                              const QuadratureSpec& q = {});

// Dyadic example E = U_n [n, n + 2^-n] with nu_alpha = (alpha/2)|y|^{-1-alpha} dy.
// Closed form of int_{|y|<1} sum_n (|I_n| - |I_n ∩ (I_n + y)|) nu_alpha(dy),
// i.e. the self-interaction part of the inner integral.
double dyadic_example_inner(double alpha);
// Per_{nu_alpha} of a single interval of length L: L^{1-alpha}/(1-alpha).
double interval_per_stable(double length, double alpha);
// int_I int_J nu_alpha(y - x) dy dx for disjoint intervals I left of J.
double interval_interaction_stable(std::pair<double, double> I, std::pair<double, double> J, double alpha);
// Per_{nu_alpha}(E_N) assembled from closed-form pieces: the inner closed form
// plus |E| for the infinite set, minus the self terms of n > N, minus the
// pairwise interactions among the first N intervals.
double dyadic_truncated_closed_form(double alpha, int n_max);

}  // namespace nlperim
