#include "dyadic/params.hpp"

#include <string>

#include "dyadic/error.hpp"

namespace dyadic {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Contract: return "contract";
    case ErrorKind::Input: return "input";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Range: return "range";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Search: return "search";
    case ErrorKind::Calibration: return "calibration";
    case ErrorKind::Divergence: return "divergence";
  }
  return "unknown";
}

void Params::validate() const {
  require(std::isfinite(lambda) && lambda > 1.0, ErrorKind::Domain,
          "lambda must be > 1 (got " + std::to_string(lambda) + ")");
  require(std::isfinite(beta) && beta > 0.0, ErrorKind::Domain,
          "beta must be > 0 (got " + std::to_string(beta) + ")");
  require(n_shells >= 1, ErrorKind::Domain, "n_shells must be >= 1");
  require(std::isfinite(horizon) && horizon > 0.0, ErrorKind::Domain, "horizon must be > 0");
  require(std::isfinite(rho_threshold) && rho_threshold >= 0.0, ErrorKind::Domain,
          "rho_threshold must be >= 0");
}

void Params::validate_for_construction() const {
  validate();
  require(beta > 2.0, ErrorKind::Domain,
          "non-uniqueness construction requires beta > 2 (got " + std::to_string(beta) + ")");
  require(effective_threshold() >= lambda_beta() * (1.0 - 1e-15), ErrorKind::Domain,
          "rho_threshold must be >= lambda^beta");
  const double t = construction_horizon(lambda);
  require(std::abs(horizon - t) <= 1e-15 * t, ErrorKind::Domain,
          "horizon must equal 1/(lambda^2 - 1) for the construction");
}

Params Params::for_construction(double lambda, double beta, int n_shells) {
  Params p;
  p.lambda = lambda;
  p.beta = beta;
  p.n_shells = n_shells;
  p.horizon = lambda > 1.0 ? construction_horizon(lambda) : 1.0;
  p.rho_threshold = lambda > 0.0 ? std::pow(lambda, beta) : 0.0;
  return p;
}

}  // namespace dyadic
