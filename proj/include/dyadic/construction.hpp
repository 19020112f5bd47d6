#pragma once

// The rescaling construction: one solution h of the three-equation system on
// [0, 1], copied down the geometric time grid to produce the split fields
// v_n, g_n and the forcing f_n that both u+ = v + g and u- = v - g solve.

#include <functional>
#include <memory>
#include <vector>

#include "dyadic/linalg.hpp"
#include "dyadic/params.hpp"
#include "dyadic/profiles.hpp"
#include "dyadic/spectral.hpp"

namespace dyadic {

/// A scalar coefficient on [0, 1] with its derivative and the points where it is least smooth.
struct Coefficient {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
  std::vector<double> breakpoints;

  static Coefficient constant(double c);
  static Coefficient from_profile(const SmoothProfile& s);
};

class HSolution {
 public:
  HSolution(Coefficient p, Coefficient q, const Params& params, std::vector<double> tau, std::vector<Vec3> h,
            std::vector<Vec3> dh);

  /// Dense output (quintic Hermite between accepted steps). Clamped to [0, 1].
  Vec3 value(double tau) const;
  /// Derivative of the dense interpolant.
  Vec3 interp_derivative(double tau) const;
  /// Right-hand side of the system at (tau, h).
  Vec3 rhs(double tau, const Vec3& h) const;
  /// Right-hand side along the solution.
  Vec3 derivative(double tau) const { return rhs(tau, value(tau)); }

  Vec3 initial() const { return h_.front(); }
  Vec3 endpoints() const { return h_.back(); }
  double err_estimate() const { return err_; }
  void set_err_estimate(double e) { err_ = e; }
  const std::vector<double>& nodes() const { return tau_; }
  std::size_t steps() const { return tau_.size() - 1; }

 private:
  std::size_t segment(double tau) const;

  Coefficient p_, q_;
  double l2_, lb_;
  std::vector<double> tau_;
  std::vector<Vec3> h_, dh_, d2h_;
  double err_ = 0.0;
};

/// Solves the system from (0, y, z) with adaptive Dormand-Prince at relative tolerance `tol`;
/// the error estimate compares against a second solve at tol / 32, which is the one returned.
HSolution solve_h(const Coefficient& p, const Coefficient& q, double y, double z, const Params& params,
                  double tol);
HSolution solve_h(const SmoothProfile& p, const SmoothProfile& q, double y, double z, const Params& params,
                  double tol);

class ShellGrid {
 public:
  ShellGrid(double lambda, int n_max);
  /// t_n = 1 / ((lambda^2 - 1) lambda^{2n}) for any integer n.
  double t(int n) const;
  double horizon() const { return t(0); }
  int n_max() const { return n_max_; }
  double lambda() const { return lambda_; }
  /// t_0, ..., t_{n_max}.
  const std::vector<double>& points() const { return pts_; }

 private:
  double lambda_;
  int n_max_;
  std::vector<double> pts_;
};

/// Grid points n = 0..N+2 for the shell count in `p`.
ShellGrid time_grid(const Params& p);

struct QuadNode {
  double t, w;
};

/// Branch of the piecewise definitions containing t, with the rescaled argument.
/// 0: before activation, 1: (t_{n+1}, t_n), 2: (t_n, t_{n-1}), 3: (t_{n-1}, t_{n-2}), 4: tail.
/// Branches are closed on the left, except that T = t_0 closes the branch ending there.
/// `top` marks the pieces of shells 1 and 2 on [t_1, T].
struct BranchPoint {
  int branch;
  double tau;
  bool top = false;
};

struct RuleOptions {
  int order = 12;
  int ramp_panels = 8;
  int plateau_panels = 64;
};

class SplitFields {
 public:
  /// `h_top` solves the same system with p = 0 from the same data; it drives shells 1 and 2 on
  /// the top cell [t_1, T], where shell 0 is absent. Throws Domain unless |rho| > lambda^beta.
  SplitFields(const Params& params, std::shared_ptr<const HSolution> h, std::shared_ptr<const HSolution> h_top,
              double rho, double y, double z, SmoothProfile p, SmoothProfile q, const RuleOptions& rules = {});

  const Params& params() const { return params_; }
  const ShellGrid& grid() const { return grid_; }
  const HSolution& h() const { return *h_; }
  const HSolution& h_top() const { return *h_top_; }
  double rho() const { return rho_; }
  double y() const { return y_; }
  double z() const { return z_; }
  const SmoothProfile& p() const { return p_; }
  const SmoothProfile& q() const { return q_; }
  int n_shells() const { return params_.n_shells; }

  BranchPoint locate(int n, double t) const;

  /// Shell evaluators; throw Range unless 1 <= n <= N.
  double eval_v(int n, double t) const;
  double eval_g(int n, double t) const;
  double eval_f(int n, double t) const;
  double eval_u(int n, double t, int sign) const;

  /// Unchecked versions valid for any n >= 0 (shell 0 is identically zero).
  double v(int n, double t) const;
  double g(int n, double t) const;
  double f(int n, double t) const;
  /// Time derivatives: v from the profile derivative, g from the system right-hand side.
  double v_dot(int n, double t) const;
  double g_dot(int n, double t) const;
  /// Time derivative of g from the dense interpolant, for residual checks.
  double g_dot_interp(int n, double t) const;

  /// g_n on a given branch at rescaled argument tau (for branch 4, tau = t - t_{n-2}).
  /// Used for one-sided limits at the grid points.
  double g_branch(int n, int branch, double tau, bool top = false) const;

  /// Gauss rule on the cell [t_{k+1}, t_k], split at the profile ramps.
  const std::vector<QuadNode>& cell_rule(int k) const;
  /// Gauss rule on [t_{k+1}, t_{k+1} + tau_end (t_k - t_{k+1})].
  std::vector<QuadNode> partial_cell_rule(int k, double tau_end) const;
  /// Cells 0..n, the support of shell n inside [0, T].
  std::vector<QuadNode> support_rule(int n) const;
  /// Union of cell rules 0..N.
  std::vector<QuadNode> full_rule() const;

 private:
  double l2n(int n) const;
  double lbn(int n) const;
  double lvn(int n) const;
  double rho_pow(int n) const;  // rho^{-n}
  double g_dot_impl(int n, double t, bool interp) const;

  Params params_;
  ShellGrid grid_;
  std::shared_ptr<const HSolution> h_, h_top_;
  double rho_, y_, z_;
  SmoothProfile p_, q_;
  std::vector<double> l2n_, lbn_, lvn_, rpow_;
  std::vector<std::vector<QuadNode>> cells_;
  std::vector<double> breaks_;
  RuleOptions rules_;
};

/// Builds the fields from a calibration: solves h and assembles.
SplitFields assemble_fields(const Params& params, const Calibration& cal, double tol);

struct ForcingPartials {
  std::vector<double> terms;     // lambda^{-2n} int_0^T f_n^2, n = 1..N
  std::vector<double> partials;  // S_m
  std::vector<double> ratios;    // terms[m] / terms[m-1], m = 2..N
  double expected_ratio = 0.0;   // lambda^{4 - 2 beta}
};

/// Partial sums of the weighted forcing norm over shells 1..N. Throws Range unless 1 <= N <= n_shells.
ForcingPartials forcing_norm_partials(const SplitFields& fields, int N);

struct DecayReport {
  std::vector<double> sup_v, sup_g, sup_f;  // per shell over [0, T]
  std::vector<double> ratio_v, ratio_g;     // sup[n] / sup[n-1]
  double expected_ratio_v = 0.0;            // lambda^{2 - beta}
  double expected_ratio_g = 0.0;            // 1 / |rho|
};

DecayReport measure_decay(const SplitFields& fields);

}  // namespace dyadic
