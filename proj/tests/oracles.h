#pragma once

// Reference computations used only by the tests. Nothing here calls into the
// library's quadrature, covariogram or sampling code.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

inline double ball_volume(int d) { return std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0); }

// Per_alpha([0,1]) for the kernel |x-y|^{-1-alpha}.
inline double interval_frac(double alpha) { return 2.0 / (alpha * (1.0 - alpha)); }

// Intersection area of two disks of radius r at distance s.
inline double lens_area(double r, double s) {
  if (s >= 2.0 * r) return 0.0;
  return 2.0 * r * r * std::acos(s / (2.0 * r)) - 0.5 * s * std::sqrt(4.0 * r * r - s * s);
}

using Intervals = std::vector<std::pair<double, double>>;

// g(y) = |E ∩ (E + y)| by summing pairwise overlaps.
inline double interval_cov(const Intervals& e, double y) {
  double g = 0.0;
  for (const auto& [a, b] : e) {
    for (const auto& [c, d] : e) {
      g += std::max(0.0, std::min(b, d + y) - std::max(a, c + y));
    }
  }
  return g;
}

// int_0^{inf} (g(0) - g(y)) c y^{-1-alpha} dy for an interval union. g is
// piecewise linear with kinks at the endpoint differences, so each piece is
// integrated exactly.
inline double interval_power_integral(const Intervals& e, double alpha, double c = 1.0) {
  std::vector<double> knots{0.0};
  for (const auto& [a, b] : e) {
    for (const auto& [p, q] : e) {
      for (double u : {a - p, a - q, b - p, b - q}) {
        if (u > 0.0) knots.push_back(u);
      }
    }
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  const double g0 = interval_cov(e, 0.0);
  // int_a^b (p + s y) y^{-1-alpha} dy
  auto piece = [alpha](double p, double s, double a, double b) {
    const double t1 = a == 0.0 ? 0.0 : p * (std::pow(a, -alpha) - std::pow(b, -alpha)) / alpha;
    const double t2 = s * (std::pow(b, 1.0 - alpha) - std::pow(a, 1.0 - alpha)) / (1.0 - alpha);
    return t1 + t2;
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i], b = knots[i + 1];
    const double fa = g0 - interval_cov(e, a), fb = g0 - interval_cov(e, b);
    const double s = (fb - fa) / (b - a);
    total += piece(fa - s * a, s, a, b);
  }
  total += g0 * std::pow(knots.back(), -alpha) / alpha;
  return c * total;
}

// Per_nu for nu = c |y|^{-1-alpha} dy on the line (both half-lines).
inline double interval_per_power(const Intervals& e, double alpha, double c = 1.0) {
  return 2.0 * interval_power_integral(e, alpha, c);
}

// Cell-count autocorrelation of a 2-D mask by four nested loops.
inline std::vector<double> brute_autocorr_2d(const std::vector<std::uint8_t>& m, int nx, int ny) {
  const int wx = 2 * nx - 1, wy = 2 * ny - 1;
  std::vector<double> out(static_cast<std::size_t>(wx) * wy, 0.0);
  for (int ky = -(ny - 1); ky <= ny - 1; ++ky) {
    for (int kx = -(nx - 1); kx <= nx - 1; ++kx) {
      double c = 0.0;
      for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
          const int i2 = i + kx, j2 = j + ky;
          if (i2 < 0 || j2 < 0 || i2 >= nx || j2 >= ny) continue;
          if (m[i + nx * j] && m[i2 + nx * j2]) c += 1.0;
        }
      }
      out[(kx + nx - 1) + wx * (ky + ny - 1)] = c;
    }
  }
  return out;
}

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
};

// Plain Monte Carlo of E f(X) with X uniform on the unit disk, times pi.
template <class F>
Estimate disk_mc(F f, std::uint64_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double s = 0.0, s2 = 0.0;
  std::uint64_t k = 0;
  while (k < n) {
    const double x = u(rng), y = u(rng);
    if (x * x + y * y >= 1.0) continue;
    const double v = f(x, y);
    s += v;
    s2 += v * v;
    ++k;
  }
  const double m = s / n, var = s2 / n - m * m;
  return {pi * m, pi * std::sqrt(var / n)};
}

// Per_nu of the unit square for nu = J(|y|) dy in d = 2 by a tensor
// midpoint rule on the product covariogram in polar coordinates.
template <class J>
double square_kernel_perimeter_polar(J j, double rmax, int nr, int nt) {
  double total = 0.0;
  const double dr = rmax / nr, dt = 2.0 * pi / nt;
  for (int a = 0; a < nr; ++a) {
    const double r = (a + 0.5) * dr;
    double ang = 0.0;
    for (int b = 0; b < nt; ++b) {
      const double t = (b + 0.5) * dt;
      const double y1 = std::abs(r * std::cos(t)), y2 = std::abs(r * std::sin(t));
      const double g = std::max(0.0, 1.0 - y1) * std::max(0.0, 1.0 - y2);
      ang += 1.0 - g;
    }
    total += ang * dt * j(r) * r * dr;
  }
  return total;
}

}  // namespace oracle
