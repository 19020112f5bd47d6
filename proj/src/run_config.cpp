#include "dyadic/run_config.hpp"

#include <cmath>

#include "dyadic/error.hpp"

namespace dyadic {

namespace {

void positive(double x, const char* name) {
  require(std::isfinite(x) && x > 0.0, ErrorKind::Input, std::string(name) + " must be a positive number");
}

void nonnegative(double x, const char* name) {
  require(std::isfinite(x) && x >= 0.0, ErrorKind::Input, std::string(name) + " must be >= 0");
}

}  // namespace

void RunConfig::validate() const {
  params().validate();
  nonnegative(R, "R");
  nonnegative(q, "q");
  require(std::isfinite(eps) && eps >= 0.0 && eps < 0.5, ErrorKind::Domain, "eps must lie in [0, 1/2)");
  positive(rtol, "rtol");
  positive(atol, "atol");
  positive(tol_residual, "tol-residual");
  positive(tol_gluing, "tol-gluing");
  positive(tol_energy, "tol-energy");
  positive(tol_uniqueness, "tol-uniqueness");
  nonnegative(t_end, "t-end");
  nonnegative(perturbation, "perturbation");
  for (double a : initial) require(std::isfinite(a), ErrorKind::Input, "initial data must be finite");
  require(!shell_list.empty(), ErrorKind::Input, "shell list is empty");
  for (int n : shell_list) require(n >= 1, ErrorKind::Domain, "shell counts must be >= 1");
}

Params RunConfig::params() const {
  Params p;
  p.lambda = lambda;
  p.beta = beta;
  p.n_shells = shells;
  p.horizon = (std::isfinite(lambda) && lambda > 1.0) ? Params::construction_horizon(lambda) : 1.0;
  p.rho_threshold = R > 0.0 ? R : ((std::isfinite(lambda) && lambda > 0.0) ? std::pow(lambda, beta) : 0.0);
  return p;
}

CertifyOptions RunConfig::certify_options() const {
  CertifyOptions o;
  o.tol.residual = tol_residual;
  o.tol.gluing = tol_gluing;
  o.tol.energy = tol_energy;
  o.q = q;
  o.eps = eps;
  o.h_tol = rtol;
  return o;
}

}  // namespace dyadic
