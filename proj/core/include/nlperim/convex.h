#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "nlperim/geometry.h"
#include "nlperim/types.h"

namespace nlperim {

enum class BodyKind { ellipsoid, box, lp_ball, polygon_sym };

// Origin-symmetric convex body K. Ellipsoids and boxes are stored as weighted
// l^p balls {x : ||(x_i / r_i)||_p <= 1} with p = 2 and p = inf.
class ConvexBody {
 public:
  static ConvexBody ellipsoid(std::vector<double> semi_axes);
  static ConvexBody box(std::vector<double> half_widths);
  static ConvexBody lp_ball(int d, double p, double radius);
  static ConvexBody lp_ball(double p, std::vector<double> radii);
  static ConvexBody ball(int d, double radius = 1.0) { return ellipsoid(std::vector<double>(d, radius)); }
  // Vertices counter-clockwise; must satisfy v[k + n/2] = -v[k].
  static ConvexBody polygon_sym(std::vector<std::array<double, 2>> vertices);

  int dimension() const { return d_; }
  BodyKind kind() const { return kind_; }
  double p() const { return p_; }
  const std::vector<double>& radii() const { return r_; }
  const std::vector<std::array<double, 2>>& vertices() const { return verts_; }

  // ||x||_K.
  double gauge(const Point& x) const;
  // ||y||_{K*} = sup_{x in K} x.y.
  double support(const Point& y) const;
  double volume() const;
  double inradius() const;
  double outradius() const;
  ConvexBody polar() const;
  ConvexBody scaled(double t) const;
  // Angles in [0, 2pi) at which theta -> ||theta||_K is not smooth (d = 2).
  std::vector<double> kink_angles() const;
  std::string describe() const;

 private:
  ConvexBody() = default;
  int d_ = 2;
  BodyKind kind_ = BodyKind::lp_ball;
  double p_ = 2.0;
  std::vector<double> r_;
  std::vector<std::array<double, 2>> verts_;
  std::vector<std::array<double, 3>> facets_;  // (n_x, n_y, support distance)
};

double gauge_norm(const ConvexBody& K, const Point& x);
double polar_gauge(const ConvexBody& K, const Point& y);
double body_volume(const ConvexBody& K);

// ||y||_{Z*K} = (d+1)/2 int_K |y.x| dx, evaluated as
// 1/2 int_{S^{d-1}} |y.theta| ||theta||_K^{-d-1} dtheta by adaptive quadrature.
double moment_body_norm(const ConvexBody& K, const Point& y, double tol = 1e-10);

// int_{∂*E} ||n_E||_{K*}.
double anisotropic_perimeter(const SetGeometry& s, const ConvexBody& K, const SphereResolution& res = {});

// int_{∂*E} ||n_E||_{Z*K}.
double perimeter_wrt_moment_body(const SetGeometry& s, const ConvexBody& K, double tol = 1e-10,
                                 const SphereResolution& res = {});

}  // namespace nlperim
