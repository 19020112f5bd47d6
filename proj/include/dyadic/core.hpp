#pragma once

// Shell-model state and the right-hand side of the truncated dyadic system
//
//   du_n/dt = f_n - lambda^{2n} u_n + lambda^{beta n} u_{n-1}^2 - lambda^{beta(n+1)} u_n u_{n+1},
//
// with u_0 = u_{N+1} = 0 applied internally. Shell indices are 1-based in
// messages; storage is 0-based.

#include <span>
#include <utility>
#include <vector>

#include "dyadic/params.hpp"

namespace dyadic {

template <class Tag>
class ShellArray {
 public:
  ShellArray() = default;
  explicit ShellArray(std::size_t n, double fill = 0.0) : values_(n, fill) {}
  explicit ShellArray(std::vector<double> v) : values_(std::move(v)) {}

  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// 1-based shell access, matching the usual u_1..u_N notation.
  double shell(int n) const { return values_.at(static_cast<std::size_t>(n - 1)); }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& vec() const { return values_; }

  bool all_finite() const;
  double norm_sq() const;

 private:
  std::vector<double> values_;
};

struct ShellTag {};
struct ForcingTag {};
using ShellVector = ShellArray<ShellTag>;
using ForcingSample = ShellArray<ForcingTag>;

/// Precomputed lambda^{2n} and lambda^{beta n} for n = 0..N+1.
class ShellCoefficients {
 public:
  explicit ShellCoefficients(const Params& p);
  int n_shells() const { return n_; }
  double dissipation(int n) const { return diss_[n]; }  // lambda^{2n}
  double coupling(int n) const { return coup_[n]; }     // lambda^{beta n}

 private:
  int n_;
  std::vector<double> diss_, coup_;
};

/// Full right-hand side du/dt. Throws Contract on length mismatch, Input on non-finite data.
ShellVector shell_rhs(const ShellVector& u, const ForcingSample& f, const Params& p);

/// The quadratic part B(u) alone: lambda^{beta n} u_{n-1}^2 - lambda^{beta(n+1)} u_n u_{n+1}.
void shell_nonlinear(std::span<const double> u, const ShellCoefficients& c, std::span<double> out);

/// sum_n u_n (-lambda^{beta n} u_{n-1}^2 + lambda^{beta(n+1)} u_n u_{n+1}); zero by telescoping.
double nonlinear_energy_flux(const ShellVector& u, const Params& p);

/// Sum of |terms| in nonlinear_energy_flux; the natural scale for its roundoff.
double nonlinear_energy_flux_scale(const ShellVector& u, const Params& p);

struct Trajectory {
  std::vector<double> grid;
  std::vector<ShellVector> states;
  std::vector<ForcingSample> forcing;  // empty, or one sample per grid point

  std::size_t size() const { return grid.size(); }
  bool has_forcing() const { return !forcing.empty(); }

  /// Throws Contract unless grid[0] = 0, grid strictly increasing, and sizes agree.
  void validate(const Params& p) const;
};

struct EnergyBalance {
  double lhs = 0.0;  // sum u_n(t)^2 + 2 lambda^{2n} int_0^t u_n^2
  double rhs = 0.0;  // sum a_n^2 + 2 int_0^t f_n u_n
};

/// Energy balance at time t by trapezoid quadrature on the trajectory grid. States at a t
/// between samples are linearly interpolated. Throws Range for t outside the grid.
EnergyBalance energy_balance(const Trajectory& traj, double t, const Params& p,
                             const ShellVector& initial);

}  // namespace dyadic
