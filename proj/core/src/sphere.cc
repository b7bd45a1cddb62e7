#include "nlperim/sphere.h"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <numbers>

namespace nlperim {

double unit_ball_volume(int d) {
  if (d < 0) throw ValidationError("unit_ball_volume: negative dimension");
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double sphere_area(int d) {
  if (d < 1) throw ValidationError("sphere_area: dimension must be >= 1");
  return d * unit_ball_volume(d);
}

namespace {

std::vector<SphereNode> circle(int n) {
  if (n < 4 || n % 2 != 0) {
    throw ValidationError("circle_points must be even and at least 4");
  }
  std::vector<SphereNode> nodes(n);
  const double w = 2.0 * std::numbers::pi / n;
  for (int i = 0; i < n; ++i) {
    const double phi = w * i;
    nodes[i].theta = {std::cos(phi), std::sin(phi), 0.0};
    nodes[i].weight = w;
    nodes[i].coarse_weight = (i % 2 == 0) ? 2.0 * w : 0.0;
  }
  return nodes;
}

std::vector<SphereNode> sphere3(int n_polar, int n_azimuth) {
  if (n_polar < 2 || n_azimuth < 4 || n_azimuth % 2 != 0) {
    throw ValidationError("sphere grid needs polar_points >= 2 and even azimuth_points >= 4");
  }
  // legendre_p_zeros returns the nonnegative zeros only.
  const auto pos = boost::math::legendre_p_zeros<double>(n_polar);
  std::vector<double> z;
  std::vector<double> wz;
  for (double x : pos) {
    const double dp = boost::math::legendre_p_prime(n_polar, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    z.push_back(x);
    wz.push_back(w);
    if (x != 0.0) {
      z.push_back(-x);
      wz.push_back(w);
    }
  }
  std::vector<SphereNode> nodes;
  nodes.reserve(z.size() * n_azimuth);
  const double dphi = 2.0 * std::numbers::pi / n_azimuth;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double s = std::sqrt(std::max(0.0, 1.0 - z[i] * z[i]));
    for (int j = 0; j < n_azimuth; ++j) {
      const double phi = dphi * j;
      SphereNode node;
      node.theta = {s * std::cos(phi), s * std::sin(phi), z[i]};
      node.weight = wz[i] * dphi;
      node.coarse_weight = (j % 2 == 0) ? 2.0 * node.weight : 0.0;
      nodes.push_back(node);
    }
  }
  return nodes;
}

}  // namespace

std::vector<SphereNode> sphere_grid(int d, const SphereResolution& res) {
  check_dimension(d);
  if (d == 1) {
    return {SphereNode{{1.0, 0.0, 0.0}, 1.0, 1.0}, SphereNode{{-1.0, 0.0, 0.0}, 1.0, 1.0}};
  }
  if (d == 2) return circle(res.circle_points);
  return sphere3(res.polar_points, res.azimuth_points);
}

}  // namespace nlperim
