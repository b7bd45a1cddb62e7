#include <gtest/gtest.h>

#include <cmath>

#include "nlperim/measures.h"
#include "oracles.h"

using namespace nlperim;

namespace {

MeasureSpec stable_uniform(int d, double alpha) {
  return MeasureSpec::radial_spherical(RadialProfile::power(alpha), SphericalMeasure::uniform(d));
}

KernelSpec kernel(KernelName n, double beta = 0.0) {
  KernelSpec k;
  k.name = n;
  k.beta = beta;
  return k;
}

}  // namespace

TEST(Admissibility, PowerHalfInOneDimension) {
  const auto a = admissibility_check(stable_uniform(1, 0.5));
  EXPECT_TRUE(a.admissible);
  EXPECT_NEAR(a.value, 1 / 0.5 + 1 / 0.5, 1e-12);
}

TEST(Admissibility, IndicatorBallKernelAgainstMonteCarlo) {
  const auto a = admissibility_check(MeasureSpec::kernel(2, kernel(KernelName::indicator_ball)));
  EXPECT_TRUE(a.admissible);
  EXPECT_NEAR(a.value, 2 * oracle::pi / 3, 1e-12);
  const auto mc = oracle::disk_mc([](double x, double y) { return std::hypot(x, y); }, 400000, 3);
  EXPECT_NEAR(a.value, mc.mean, 4 * mc.se);
}

TEST(Admissibility, PowerOutsideRangeRejected) {
  EXPECT_THROW(RadialProfile::power(1.5), ValidationError);
  EXPECT_THROW(RadialProfile::power(0.0), ValidationError);
}

TEST(Admissibility, NonIntegrableKernelReported) {
  // |x|^{-d-beta} with beta >= 1 is not integrable against |x| near 0.
  EXPECT_THROW(MeasureSpec::kernel(2, kernel(KernelName::inverse_power_truncated, 1.0)), ValidationError);
  const auto rho = RadialProfile::density([](double r) { return std::pow(r, -2.5); });
  const auto a = admissibility_check(MeasureSpec::radial_spherical(rho, SphericalMeasure::uniform(1)));
  EXPECT_FALSE(a.admissible);
  EXPECT_FALSE(a.diagnostic.empty());
}

TEST(Admissibility, SplittingTheRadialDomain) {
  for (double alpha : {0.2, 0.5, 0.8}) {
    const auto m = stable_uniform(2, alpha);
    const double whole = m.moment(1, 0.0, 1.0) + m.mass(1.0, kInfinity);
    for (double cut : {0.01, 0.3, 0.77}) {
      const double split =
          m.moment(1, 0.0, cut) + m.moment(1, cut, 1.0) + m.mass(1.0, 3.0) + m.mass(3.0, kInfinity);
      EXPECT_NEAR(split, whole, 1e-10 * whole);
    }
  }
  const auto g = MeasureSpec::kernel(2, kernel(KernelName::gaussian));
  const double whole = g.moment(1, 0.0, kInfinity);
  EXPECT_NEAR(g.moment(1, 0.0, 0.4) + g.moment(1, 0.4, 2.5) + g.moment(1, 2.5, kInfinity), whole, 1e-12);
}

TEST(Normalization, AlphaFamilyCapAtUnitRadius) {
  for (double alpha : {0.1, 0.5, 0.9}) {
    ScalingFamily fam{stable_uniform(2, 0.5)};
    fam.rule = ScalingRule::alpha_family;
    fam.normalization = Normalization::cap_at_R;
    EXPECT_NEAR(normalization_constant(fam, alpha), 1 / alpha + 1 / (1 - alpha), 1e-10);
  }
}

TEST(Normalization, KernelShrinkWithInfiniteCap) {
  ScalingFamily fam{MeasureSpec::kernel(2, kernel(KernelName::gaussian))};
  fam.rule = ScalingRule::kernel_shrink;
  fam.normalization = Normalization::cap_at_R;
  fam.R_rule = [](double) { return kInfinity; };
  // int |x| J = int_0^inf r^2 e^{-r^2/2} dr
  const double first_moment = std::sqrt(oracle::pi / 2);
  for (double eps : {1.0, 0.1, 0.003}) {
    EXPECT_NEAR(normalization_constant(fam, eps), eps * first_moment, 1e-12 * first_moment);
  }
}

TEST(Normalization, TotalMassIsConstant) {
  ScalingFamily fam{MeasureSpec::kernel(2, kernel(KernelName::indicator_ball))};
  fam.rule = ScalingRule::kernel_shrink;
  fam.normalization = Normalization::total_mass;
  for (double eps : {2.0, 1.0, 0.01}) EXPECT_NEAR(normalization_constant(fam, eps), oracle::pi, 1e-12);
}

TEST(Normalization, DivergenceIsNamed) {
  ScalingFamily fam{stable_uniform(2, 0.5)};
  fam.rule = ScalingRule::set_shrink;
  fam.normalization = Normalization::total_mass;
  try {
    normalization_constant(fam, 1.0);
    FAIL() << "expected a divergence";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("near 0"), std::string::npos) << e.what();
  }
}

TEST(Normalization, OneMinusAlphaTimesConstantTendsToOne) {
  ScalingFamily fam{stable_uniform(2, 0.5)};
  fam.rule = ScalingRule::alpha_family;
  double prev = kInfinity;
  for (double alpha : {0.9, 0.99, 0.999}) {
    const double r = std::abs(normalization_constant(fam, alpha) * (1 - alpha) - 1);
    EXPECT_LT(r, prev);
    prev = r;
  }
  EXPECT_LT(prev, 2e-3);
}

TEST(TailMass, AlphaWeightedPower) {
  for (double alpha : {0.2, 0.7}) {
    const auto m =
        MeasureSpec::radial_spherical(RadialProfile::power(alpha, 1.0, true), SphericalMeasure::uniform(2));
    for (double R : {0.5, 1.0, 4.0}) EXPECT_NEAR(tail_mass(m, R), std::pow(R, -alpha), 1e-14);
  }
}

TEST(TailMass, SlowlyVaryingKernel) {
  const auto m = MeasureSpec::kernel(2, kernel(KernelName::inverse_power_truncated, 0.0));
  for (double s : {0.5, 1e-3, 1e-9}) {
    EXPECT_NEAR(tail_mass(m, s), 2 * oracle::pi * std::log(1 / s), 1e-12 * std::log(1 / s));
  }
  EXPECT_EQ(tail_mass(m, 2.0), 0.0);
}

TEST(TailMass, MonotoneNonIncreasing) {
  const std::vector<MeasureSpec> ms{stable_uniform(1, 0.3),
                                    MeasureSpec::kernel(2, kernel(KernelName::gaussian)),
                                    MeasureSpec::kernel(3, kernel(KernelName::indicator_ball))};
  for (const auto& m : ms) {
    double prev = kInfinity;
    for (double s = 1e-3; s < 5; s *= 1.3) {
      const double v = tail_mass(m, s);
      EXPECT_LE(v, prev);
      prev = v;
    }
  }
  EXPECT_THROW(tail_mass(ms[0], 0.0), ValidationError);
}

TEST(TailMass, SetShrinkChangeOfVariables) {
  ScalingFamily fam{stable_uniform(2, 0.4)};
  fam.rule = ScalingRule::set_shrink;
  for (double eps : {0.1, 0.5, 2.0}) {
    for (double s : {0.3, 1.0, 7.0}) {
      const double lhs = tail_mass(fam.at(eps), s);
      const double rhs = tail_mass(fam.base, s / eps);
      EXPECT_NEAR(lhs, rhs, 1e-13 * rhs);
    }
  }
}

TEST(LambdaTail, AlphaFamilyClosedForm) {
  ScalingFamily fam{stable_uniform(2, 0.5)};
  fam.rule = ScalingRule::alpha_family;
  for (double alpha : {0.2, 0.6}) {
    const double C = 1 / alpha + 1 / (1 - alpha);
    for (double R : {1.5, 4.0}) {
      EXPECT_NEAR(lambda_tail(fam, alpha, R), std::pow(R, -alpha) / alpha / C, 1e-12);
    }
  }
}

TEST(LambdaTail, ShrinkingCompactKernelConcentrates) {
  ScalingFamily fam{MeasureSpec::kernel(2, kernel(KernelName::indicator_ball))};
  fam.rule = ScalingRule::kernel_shrink;
  fam.R_rule = [](double) { return kInfinity; };
  EXPECT_GT(lambda_tail(fam, 1.0, 0.5), 0.0);
  EXPECT_EQ(lambda_tail(fam, 0.4, 0.5), 0.0);
  EXPECT_EQ(lambda_tail(fam, 0.01, 0.5), 0.0);
}

TEST(LambdaTail, SmallRadiusTakesEverything) {
  ScalingFamily fam{MeasureSpec::kernel(2, kernel(KernelName::gaussian))};
  fam.rule = ScalingRule::kernel_shrink;
  EXPECT_NEAR(lambda_tail(fam, 1.0, 1e-12), 1.0, 1e-9);
  EXPECT_LE(lambda_tail(fam, 1.0, 1e-3), 1.0);
}

TEST(SphereProjection, RadialSphericalReturnsEta) {
  ScalingFamily fam{stable_uniform(3, 0.5)};
  fam.rule = ScalingRule::set_shrink;
  const auto mu = sphere_projection(fam, 0.3, {});
  EXPECT_EQ(mu.kind(), SphericalKind::uniform);
  EXPECT_DOUBLE_EQ(mu.total_mass(), 1.0);
}

TEST(SphereProjection, RadialKernelIsUniform) {
  ScalingFamily fam{MeasureSpec::kernel(2, kernel(KernelName::gaussian))};
  fam.rule = ScalingRule::kernel_shrink;
  const auto mu = sphere_projection(fam, 0.5, {});
  double total = 0.0;
  for (const auto& [theta, w] : mu.atom_list()) {
    EXPECT_NEAR(w, mu.atom_list().front().second, 1e-15);
    total += w;
  }
  EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(SphereProjection, HalfPlaneConeStaysInCone) {
  KernelSpec k = kernel(KernelName::gaussian);
  k.cone_axis = Point{1, 0, 0};
  k.cone_half_angle = oracle::pi / 2;
  ScalingFamily fam{MeasureSpec::kernel(2, k)};
  fam.rule = ScalingRule::kernel_shrink;
  const auto mu = sphere_projection(fam, 1.0, {});
  double total = 0.0, inside = 0.0;
  for (const auto& [theta, w] : mu.atom_list()) {
    total += w;
    if (theta[0] >= -1e-12) inside += w;
  }
  EXPECT_NEAR(total, 1.0, 1e-10);
  EXPECT_NEAR(inside, 1.0, 1e-10);
  // Half the directions, each with twice the uniform weight: the first moment
  // of mu is E[theta_1 | theta_1 > 0] = 2/pi, checked against sampling.
  double m1 = 0.0;
  for (const auto& [theta, w] : mu.atom_list()) m1 += w * theta[0];
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  double s = 0;
  int kept = 0;
  while (kept < 200000) {
    const double x = n(rng), y = n(rng);
    if (x <= 0) continue;
    s += x / std::hypot(x, y);
    ++kept;
  }
  EXPECT_NEAR(m1, s / kept, 5e-3);
  // The remaining gap to 2/pi is the 512-point angular grid.
  EXPECT_NEAR(m1, 2 / oracle::pi, 5e-5);
}

TEST(SphereProjection, ProbabilityForEveryKind) {
  const std::vector<MeasureSpec> ms{
      MeasureSpec::anisotropic_stable(ConvexBody::box({1.0, 0.5}), 0.5),
      MeasureSpec::kernel(3, kernel(KernelName::indicator_ball)), MeasureSpec::stable(2, 0.3),
      MeasureSpec::radial_spherical(RadialProfile::power(0.5),
                                    SphericalMeasure::atoms(2, {{{1, 0, 0}, 2.0}, {{0, 1, 0}, 3.0}}))};
  for (const auto& m : ms) {
    ScalingFamily fam{m};
    fam.rule = ScalingRule::set_shrink;
    EXPECT_NEAR(sphere_projection(fam, 0.7, {}).total_mass(), 1.0, 1e-10) << m.describe();
  }
}

TEST(Spherical, AtomsMustBeUnitVectors) {
  EXPECT_THROW(SphericalMeasure::atoms(2, {{{1.1, 0, 0}, 1.0}}), ValidationError);
  EXPECT_DOUBLE_EQ(SphericalMeasure::uniform(1).total_mass(), 1.0);
}
