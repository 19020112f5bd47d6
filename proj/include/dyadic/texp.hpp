#pragma once

// Time-ordered exponential of a 3x3 matrix path: the propagator h(a) -> h(b)
// of dh/dt = M(t) h. Computed by product integration, composing
// exp(dt * M(midpoint)) with later factors on the left, with step halving and
// Richardson extrapolation until successive results agree.

#include <functional>
#include <vector>

#include "dyadic/linalg.hpp"

namespace dyadic {

class MatrixPath {
 public:
  /// `breakpoints` are interior points where eval may be non-smooth; both texp and the
  /// L1 quadratures split there. Throws Contract unless a < b.
  MatrixPath(double a, double b, std::function<Mat3(double)> eval, std::vector<double> breakpoints = {});

  static MatrixPath constant(double a, double b, const Mat3& m);

  double a() const { return a_; }
  double b() const { return b_; }
  Mat3 operator()(double t) const { return eval_(t); }
  const std::vector<double>& breakpoints() const { return breaks_; }

  /// Interval split at the breakpoints: a, interior breaks..., b.
  std::vector<double> pieces() const;

  /// int_a^b ||M(t)|| dt in the operator norm (adaptive quadrature).
  double l1_norm() const { return l1_; }

 private:
  double a_, b_;
  std::function<Mat3(double)> eval_;
  std::vector<double> breaks_;
  double l1_;
};

struct TexpOptions {
  int max_level = 22;  // at most 2^max_level steps per piece
};

/// Propagator of the path, converged to `tol` relative to max(1, ||B||) in operator norm.
/// Throws Numeric (with the last two iterates' norms) when the step cap is reached.
Mat3 texp(const MatrixPath& path, double tol, const TexpOptions& opt = {});

/// exp(max(L1(M1), L1(M2))) * int ||M1 - M2||: an upper bound for ||texp(M1) - texp(M2)||.
/// Throws Contract if the intervals differ. Returns +inf when the exponent overflows.
double texp_continuity_bound(const MatrixPath& p1, const MatrixPath& p2);

/// int_a^b ||M1(t) - M2(t)|| dt.
double l1_distance(const MatrixPath& p1, const MatrixPath& p2);

}  // namespace dyadic
