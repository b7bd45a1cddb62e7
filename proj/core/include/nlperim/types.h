#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nlperim {

// Points and directions in R^d, d <= 3. Unused trailing coordinates are zero.
using Point = std::array<double, 3>;

inline double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }
inline Point operator+(const Point& a, const Point& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Point operator-(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Point operator*(double s, const Point& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Point operator-(const Point& a) { return {-a[0], -a[1], -a[2]}; }

// Input violates a documented precondition or invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed (divergence, non-convergence, overflow).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation is not defined for the given representation.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void check_dimension(int d) {
  if (d < 1 || d > 3) {
    throw ValidationError("dimension must be 1, 2 or 3, got " + std::to_string(d));
  }
}

}  // namespace nlperim
