#pragma once

// Galerkin truncation of the dyadic system: adaptive Dormand-Prince 5(4) on the
// integrating-factor form w_n = exp(lambda^{2n} t) u_n, so the stiff linear part
// is propagated exactly.

#include <functional>
#include <vector>

#include "dyadic/core.hpp"
#include "dyadic/params.hpp"

namespace dyadic {

using ForcingFn = std::function<double(int n, double t)>;  // 1-based shell index

struct SolveConfig {
  int n_shells = 1;
  double t_end = 1.0;
  double rtol = 1e-10;
  double atol = 1e-12;
  ForcingFn forcing;  // empty means zero forcing
  ShellVector initial;
  int uniform_samples = 200;         // equally spaced output points besides the geometric ones
  std::vector<double> extra_times;   // further output points, e.g. forcing discontinuities
  bool disable_nonlinear = false;    // linear part only
  double blowup = 1e12;

  /// Throws Domain / Contract on non-positive tolerances or t_end, or a mismatched initial length.
  void validate() const;
};

/// Output grid: uniform samples, t_end * lambda^{-2k} and their midpoints for k = 1..N+2,
/// and the extra times, merged and sorted.
std::vector<double> output_grid(const SolveConfig& cfg, const Params& p);

struct GalerkinResult {
  Trajectory traj;
  double err_estimate = 0.0;  // accumulated max-norm local error estimates
  long steps = 0, rejected = 0;
};

/// Integrates the N-shell system. Throws Numeric on step-size underflow and Divergence when
/// max |u_n| exceeds cfg.blowup.
GalerkinResult galerkin_solve_report(const SolveConfig& cfg, const Params& p);
Trajectory galerkin_solve(const SolveConfig& cfg, const Params& p);

/// C_N = lambda^{2N} + 3 lambda^{beta(N+1)}: |F(y) - F(z)| <= C_N (1 + |y| + |z|) |y - z|, since
/// the linear part has norm lambda^{2N} and each quadratic coefficient is at most lambda^{beta(N+1)}.
double lipschitz_constant(int n_shells, const Params& p);

/// delta_N = 1 / (2 C_N (R_N + 1)), R_N = 2|a| + 2 int_0^{t_end} |f(t)| dt.
double local_existence_interval(const SolveConfig& cfg, const Params& p);

struct EnergyInequalityReport {
  std::vector<double> t;
  std::vector<double> defect;  // lhs - rhs; the inequality asks for <= 0
  double worst = 0.0;
  double worst_t = 0.0;
  double scale = 0.0;  // max rhs, for relative statements
};

/// sum u_n(t)^2 + sum lambda^{2n} int u_n^2 <= sum a_n^2 + sum lambda^{-2n} int f_n^2 at every sample,
/// integrals by cumulative trapezoid on the trajectory grid.
EnergyInequalityReport energy_inequality_check(const Trajectory& traj, const ShellVector& initial,
                                               const Params& p);

/// max over samples of |lhs - rhs| / max(1, |rhs|) for the energy identity of the Galerkin system.
double galerkin_identity_defect(const Trajectory& traj, const ShellVector& initial, const Params& p);

}  // namespace dyadic
