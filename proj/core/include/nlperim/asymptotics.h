#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlperim/perimeter.h"

namespace nlperim {

struct UniversalConstants {
  double varpi = 0.0;  // |B_1| in R^d
  double kappa = 0.0;  // |S^{d-1}| = d varpi_d
  double K1d = 0.0;    // 2 varpi_{d-1}
};
UniversalConstants universal_constants(int d);

enum class Regime {
  classical_uniform,
  classical_mu,
  lebesgue,
  aniso_moment_body,
  aniso_volume,
  j_kernel,
  j_total_mass
};
Regime regime_from_string(const std::string& s);
std::string to_string(Regime r);

struct TargetPayload {
  std::optional<SetGeometry> shape;
  std::optional<ConvexBody> body;
  std::optional<SphericalMeasure> mu;
  std::optional<KernelSpec> kernel;
  // Multiplies the regime value, e.g. kappa_{d-1} when sweeping the
  // unnormalized |x|^{-d-alpha} instead of the stable measure.
  double factor = 1.0;
  SphereResolution sphere;
};

struct LimitTarget {
  Regime regime = Regime::lebesgue;
  double value = 0.0;
  std::string description;
};

// classical_uniform  K_{1,d}/(2 kappa_{d-1}) Per(E)
// classical_mu       1/2 int_{∂*E} int |n.theta| mu(dtheta)
// lebesgue           |E|
// aniso_moment_body  Per(E, ZK)
// aniso_volume       d |K| |E|
// j_kernel           (C_J/2) int_{∂*E} int |n.theta| mu_J(dtheta), C_J = int |x| J
// j_total_mass       ||J||_1 |E|
LimitTarget limit_target(Regime regime, const TargetPayload& p);

struct SweepOptions {
  QuadratureSpec q;
  int threads = 0;
  // Radii for the concentration check on lambda_eps(B_R^c).
  std::vector<double> lambda_radii{0.1, 1.0, 10.0};
  bool check_lambda = true;
  // Base voxel spacing for shapes without a closed-form covariogram; the
  // spacing used at a point is min(h0, x/4) with x the small parameter.
  double h0 = 1.0 / 128.0;
};

struct SweepRow {
  double param = 0.0;
  double small = 0.0;  // distance to the limit point in the extrapolation variable
  double C = 0.0;
  double per_nu = 0.0;
  double normalized = 0.0;
  double target = 0.0;
  double residual = 0.0;
  double err_est = 0.0;
  double runtime_ms = 0.0;
  double h = 0.0;  // voxel spacing, 0 for closed-form covariograms
  std::string error;
};

struct LambdaGate {
  // "zero" for classical regimes, "one" for Lebesgue-type ones.
  std::string direction;
  std::vector<double> radii;
  std::vector<double> first;    // lambda at the grid point farthest from the limit
  std::vector<double> extreme;  // lambda at the grid point nearest the limit
  bool passed = false;
  std::string diagnostic;
};

struct SweepResult {
  std::string regime;
  std::string small_parameter;
  std::string h_rule;
  double target = 0.0;
  std::vector<SweepRow> rows;
  std::optional<double> extrapolated;
  double residual = 0.0;  // |extrapolated - target| / |target|, NaN without extrapolation
  bool residual_decreasing = false;
  LambdaGate gate;
};

// Concentration direction expected for a regime: true when lambda -> 0.
bool concentrates_at_zero(Regime r);

// Least-squares line through the last three (x, y) pairs, evaluated at x = 0.
std::optional<double> extrapolate_linear(const std::vector<double>& x, const std::vector<double>& y);

LambdaGate check_lambda(const ScalingFamily& fam, const std::vector<double>& grid, Regime regime,
                        const std::vector<double>& radii);

// Normalized perimeters C_eps^{-1} Per_{nu_eps}(E) over `grid`, ordered toward
// the limit point. Rows that fail keep their error message and are skipped by
// the extrapolation.
SweepResult sweep(const ScalingFamily& fam, const SetGeometry& shape, const LimitTarget& target,
                  const std::vector<double>& grid, const SweepOptions& o = {});

enum class AlphaDirection { up, down };

// (1-alpha) Per_alpha(E, K) toward Per(E, ZK), or alpha Per_alpha(E, K) toward
// d |K| |E|, with the density ||x||_K^{-d-alpha}.
SweepResult aniso_sweep(const ConvexBody& K, const SetGeometry& shape, AlphaDirection dir,
                        const std::vector<double>& grid, const SweepOptions& o = {});

// (1-alpha) int int |u(x+y) - u(x)| ||y||_K^{-d-alpha} dy dx toward
// 2 sum_levels gap * Per({u > t}, ZK).
SweepResult aniso_sobolev_sweep(const GridFunction& u, const ConvexBody& K, const std::vector<double>& grid,
                                const SweepOptions& o = {});

// Per_{nu_alpha} of the full dyadic set: the inner closed form plus |E| minus
// the pairwise interactions (summed until negligible).
double dyadic_per_infinite(double alpha);

struct DyadicPoint {
  double alpha = 0.0;
  double value = 0.0;
};
std::vector<DyadicPoint> dyadic_divergence_study(const std::vector<double>& alphas);

// nu_n = nu_{1/n} + c_n nu_{1-1/n} with c_n = n^{-p}.
struct MixtureStudy {
  double p = 0.0;
  std::vector<int> n;
  std::vector<double> value;
  // "unbounded", "bounded" or "converges_to_volume"
  std::string classification;
  double growth_exponent = 0.0;
};
MixtureStudy mixture_study(double p, const std::vector<int>& ns);

}  // namespace nlperim
