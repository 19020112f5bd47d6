#pragma once

#include <cmath>

namespace dyadic {

/// Model constants of the dyadic system.
struct Params {
  double lambda = 2.0;
  double beta = 2.5;
  int n_shells = 10;
  double rho_threshold = 0.0;  // R; 0 means "use lambda^beta"
  double horizon = 1.0 / 3.0;

  /// Throws Domain on lambda <= 1, beta <= 0, n_shells < 1, horizon <= 0 or non-finite values.
  void validate() const;

  /// Stricter check used by the non-uniqueness pipeline: beta > 2, R >= lambda^beta, T = 1/(lambda^2-1).
  void validate_for_construction() const;

  double lambda_beta() const { return std::pow(lambda, beta); }
  double effective_threshold() const { return rho_threshold > 0.0 ? rho_threshold : lambda_beta(); }

  /// The construction horizon T = 1/(lambda^2 - 1).
  static double construction_horizon(double lambda) { return 1.0 / (lambda * lambda - 1.0); }

  /// Parameters for the counterexample: horizon and threshold fixed from lambda, beta.
  static Params for_construction(double lambda, double beta, int n_shells);
};

}  // namespace dyadic
