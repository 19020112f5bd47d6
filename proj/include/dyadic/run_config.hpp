#pragma once

// Parameter bag shared by the command-line tool and the Python module.

#include <cstdint>
#include <string>
#include <vector>

#include "dyadic/params.hpp"
#include "dyadic/verify.hpp"

namespace dyadic {

struct RunConfig {
  std::string command;
  double lambda = 2.0;
  double beta = 2.5;
  int shells = 10;
  double R = 0.0;  // 0: lambda^beta
  double q = 0.0;  // 0: search
  double eps = 0.0;  // 0: calibrate
  double rtol = 1e-10;
  double atol = 1e-12;
  double tol_residual = 1e-6;
  double tol_gluing = 1e-8;
  double tol_energy = 1e-6;
  std::uint64_t seed = 0;
  // solve
  double t_end = 0.0;  // 0: the construction horizon
  std::string forcing = "zero";
  std::vector<double> initial;
  // uniqueness
  std::vector<int> shell_list{8, 12};
  double perturbation = 1e-6;
  double tol_uniqueness = 1e-5;
  // where artifacts go; recorded in metadata only
  std::string out = ".";
  std::string config_file;

  /// Throws Domain / Input on values that violate the model constraints.
  void validate() const;

  Params params() const;
  CertifyOptions certify_options() const;
};

}  // namespace dyadic
