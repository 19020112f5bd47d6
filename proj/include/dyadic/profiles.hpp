#pragma once

// Compactly supported smooth plateau profiles c * phi_eps(tau) on (0, 1),
// used as the coefficients p, q of the three-equation system.

#include <functional>
#include <string>
#include <vector>

#include "dyadic/linalg.hpp"
#include "dyadic/params.hpp"
#include "dyadic/spectral.hpp"
#include "dyadic/texp.hpp"

namespace dyadic {

/// e^{-1/x}-based smooth step: 0 for x <= 0, 1 for x >= 1, C^infinity in between.
double smooth_step(double x);
double smooth_step_derivative(double x);

class SmoothProfile {
 public:
  /// Throws Domain unless 0 < eps < 1/2.
  SmoothProfile(double plateau, double eps);

  double plateau() const { return plateau_; }
  double ramp() const { return eps_; }

  double operator()(double tau) const { return eval(tau); }
  double eval(double tau) const;
  double deriv(double tau) const;

  /// Points in (0, 1) where the ramps meet the plateau.
  std::vector<double> breakpoints() const { return {eps_, 1.0 - eps_}; }

  /// int_0^1 |profile - plateau| by adaptive quadrature.
  double l1_distance_to_plateau() const;

 private:
  double plateau_, eps_;
};

SmoothProfile make_profile(double c, double eps);

/// Coefficient matrix M(p, q) of the three-equation system at given p, q values.
Mat3 coefficient_matrix(double p, double q, const Params& params);

/// The path tau -> M(p(tau), q(tau)) on [0, 1], split at the profile ramps.
MatrixPath coefficient_path(const SmoothProfile& p, const SmoothProfile& q, const Params& params);

struct CalibrationStep {
  double eps = 0.0;
  double apriori_bound = 0.0;  // continuity bound on ||B - B*||
  double measured_diff = 0.0;  // ||B - B*|| from the recomputed propagator
  double rho = 0.0;
  double discriminant = 0.0;
  bool passed = false;
};

struct Calibration {
  SmoothProfile p{0.0, 0.25}, q{0.0, 0.25};
  double eps = 0.0;
  Mat3 B;        // texp of the profiled coefficient path
  Mat3 B_const;  // exp(M*) at the constant coefficients
  double rho = 0.0, rho2 = 0.0;
  double y = 0.0, z = 0.0;
  double eigvec_shift = 0.0;  // |(y, z) - (y*, z*)|
  double apriori_bound = 0.0;
  double measured_diff = 0.0;
  double block_residual = 0.0;
  std::vector<CalibrationStep> trace;
};

struct CalibrationOptions {
  double eps_start = 0.05;
  double eps_min = 1e-8;
  double texp_tol = 1e-13;
};

/// Chooses eps (halving from eps_start) so that the profiled propagator's endpoint block
/// still has two distinct real eigenvalues with max |rho| > (1 + margin) R, verified by
/// recomputing texp directly. Throws Calibration when eps underflows.
Calibration calibrate_profiles(const SpectralReport& report, const Params& params, double margin,
                               const CalibrationOptions& opt = {});

}  // namespace dyadic
