#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nlperim/geometry.h"

namespace nlperim {

// g_E(y) = |E ∩ (E + y)|. A value type over an immutable model; copies share
// the model. `increment(y)` returns g(0) - g(y) evaluated without forming the
// difference, so it keeps full relative accuracy as y -> 0.
class Covariogram {
 public:
  class Model {
   public:
    virtual ~Model() = default;
    virtual int dimension() const = 0;
    virtual double volume() const = 0;
    virtual double increment(const Point& y) const = 0;
    // d/dr increment(r theta) at r = 0+, i.e. half the integral of |n.theta|
    // over the reduced boundary.
    virtual double slope(const Point& theta) const;
    // g vanishes for |y| >= support_radius().
    virtual double support_radius() const = 0;
    virtual double lipschitz() const = 0;
    // Smallest length scale below which r -> increment(r theta) is a
    // polynomial of degree <= 3.
    virtual double min_feature() const = 0;
    // Radii in (0, rmax) at which r -> increment(r theta) is not smooth.
    virtual std::vector<double> breakpoints(const Point& theta, double rmax) const = 0;
    virtual bool sampled() const { return false; }
    virtual double spacing() const { return 0.0; }
    virtual std::string describe() const = 0;
  };

  explicit Covariogram(std::shared_ptr<const Model> m) : m_(std::move(m)) {}

  int dimension() const { return m_->dimension(); }
  double volume() const { return m_->volume(); }
  double value(const Point& y) const { return m_->volume() - m_->increment(y); }
  double increment(const Point& y) const { return m_->increment(y); }
  double slope(const Point& theta) const { return m_->slope(theta); }
  double support_radius() const { return m_->support_radius(); }
  double lipschitz() const { return m_->lipschitz(); }
  double min_feature() const { return m_->min_feature(); }
  std::vector<double> breakpoints(const Point& theta, double rmax) const {
    return m_->breakpoints(theta, rmax);
  }
  bool sampled() const { return m_->sampled(); }
  double spacing() const { return m_->spacing(); }
  std::string describe() const { return m_->describe(); }

 private:
  std::shared_ptr<const Model> m_;
};

// Closed forms for interval unions, balls, boxes and box unions. Polygons
// throw UnsupportedError (rasterize and use covariogram_grid).
Covariogram covariogram_exact(const Shape& s);

enum class AutocorrelationMethod { fft, direct };

struct GridOptions {
  AutocorrelationMethod method = AutocorrelationMethod::fft;
  // Upper bound on the number of cells of the zero-padded transform grid.
  std::size_t max_cells = std::size_t{1} << 27;
};

// Sampled covariogram of a voxel set: exact cell-count autocorrelation on the
// shift lattice h Z^d, multilinear in between. For sets that are unions of
// grid cells this interpolant is the exact covariogram.
Covariogram covariogram_grid(const VoxelSet& v, const GridOptions& opt = {});

// Raw integer autocorrelation counts of a 0/1 array of extent n (n[a] = 1 for
// unused axes), on the lattice [-(n-1), n-1]^d, x fastest.
std::vector<double> autocorrelation_counts(const std::vector<std::uint8_t>& mask, std::array<int, 3> n, int d,
                                           AutocorrelationMethod method,
                                           std::size_t max_cells = std::size_t{1} << 27);

// Cross-correlation counts c(k) = #{x : a(x) = 1, b(x + k) = 1} for two masks
// on the same grid, over k in [-(n-1), n-1]^d.
std::vector<double> cross_correlation_counts(const std::vector<std::uint8_t>& a,
                                             const std::vector<std::uint8_t>& b, std::array<int, 3> n, int d,
                                             std::size_t max_cells = std::size_t{1} << 27);

// A function on the lattice h Z^d, k in [-(n-1), n-1]^d, evaluated by
// multilinear interpolation and zero outside. With `even` the function is
// taken to satisfy f(-y) = f(y) and is evaluated so that this holds bit for
// bit. Shared by the sampled
// covariogram, the shifted-difference functional and the complement check.
class LatticeFunction {
 public:
  LatticeFunction() = default;
  LatticeFunction(int d, std::array<int, 3> n, double h, std::vector<double> values, double outside = 0.0,
                  bool even = false);
  double operator()(const Point& y) const;
  // Lipschitz constant of the interpolant.
  double max_gradient() const;
  int dimension() const { return d_; }
  std::array<int, 3> extent() const { return n_; }
  double spacing() const { return h_; }
  double at(int i, int j, int k) const;

 private:
  int d_ = 1;
  std::array<int, 3> n_{1, 1, 1};
  double h_ = 1.0;
  double outside_ = 0.0;
  bool even_ = false;
  std::vector<double> v_;
};

// Covariogram-like wrapper around an increment lattice function: used to feed
// arbitrary "g(0) - g(y)" data (shifted differences, complement overlaps) to
// the perimeter quadrature.
Covariogram sampled_increment(const LatticeFunction& inc, double far_value, double support_radius,
                              std::string description);

}  // namespace nlperim
