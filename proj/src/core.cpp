#include "dyadic/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dyadic/error.hpp"

namespace dyadic {

template <class Tag>
bool ShellArray<Tag>::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

template <class Tag>
double ShellArray<Tag>::norm_sq() const {
  double s = 0.0;
  for (double x : values_) s += x * x;
  return s;
}

template class ShellArray<ShellTag>;
template class ShellArray<ForcingTag>;

ShellCoefficients::ShellCoefficients(const Params& p) : n_(p.n_shells) {
  diss_.resize(n_ + 2);
  coup_.resize(n_ + 2);
  for (int n = 0; n <= n_ + 1; ++n) {
    diss_[n] = std::pow(p.lambda, 2.0 * n);
    coup_[n] = std::pow(p.lambda, p.beta * n);
  }
}

void shell_nonlinear(std::span<const double> u, const ShellCoefficients& c, std::span<double> out) {
  const int n_sh = static_cast<int>(u.size());
  for (int i = 0; i < n_sh; ++i) {
    const int n = i + 1;
    const double prev = i > 0 ? u[i - 1] : 0.0;
    const double next = i + 1 < n_sh ? u[i + 1] : 0.0;
    out[i] = c.coupling(n) * prev * prev - c.coupling(n + 1) * u[i] * next;
  }
}

namespace {

void check_shells(std::size_t size, const Params& p, const char* what) {
  require(size == static_cast<std::size_t>(p.n_shells), ErrorKind::Contract,
          std::string(what) + ": expected " + std::to_string(p.n_shells) + " shells, got " +
              std::to_string(size));
}

}  // namespace

ShellVector shell_rhs(const ShellVector& u, const ForcingSample& f, const Params& p) {
  check_shells(u.size(), p, "shell_rhs state");
  check_shells(f.size(), p, "shell_rhs forcing");
  require(u.all_finite() && f.all_finite(), ErrorKind::Input, "shell_rhs: non-finite input");
  const ShellCoefficients c(p);
  ShellVector out(u.size());
  shell_nonlinear(u.values(), c, out.values());
  for (std::size_t i = 0; i < u.size(); ++i)
    out[i] += f[i] - c.dissipation(static_cast<int>(i) + 1) * u[i];
  return out;
}

double nonlinear_energy_flux(const ShellVector& u, const Params& p) {
  check_shells(u.size(), p, "nonlinear_energy_flux");
  require(u.all_finite(), ErrorKind::Input, "nonlinear_energy_flux: non-finite input");
  const ShellCoefficients c(p);
  const int n_sh = p.n_shells;
  double s = 0.0;
  for (int i = 0; i < n_sh; ++i) {
    const double prev = i > 0 ? u[i - 1] : 0.0;
    const double next = i + 1 < n_sh ? u[i + 1] : 0.0;
    s += u[i] * (-c.coupling(i + 1) * prev * prev + c.coupling(i + 2) * u[i] * next);
  }
  return s;
}

double nonlinear_energy_flux_scale(const ShellVector& u, const Params& p) {
  const ShellCoefficients c(p);
  const int n_sh = p.n_shells;
  double s = 0.0;
  for (int i = 0; i < n_sh; ++i) {
    const double prev = i > 0 ? u[i - 1] : 0.0;
    const double next = i + 1 < n_sh ? u[i + 1] : 0.0;
    s += std::abs(u[i] * c.coupling(i + 1) * prev * prev) +
         std::abs(c.coupling(i + 2) * u[i] * u[i] * next);
  }
  return s;
}

void Trajectory::validate(const Params& p) const {
  require(!grid.empty(), ErrorKind::Contract, "trajectory: empty grid");
  require(grid.front() == 0.0, ErrorKind::Contract, "trajectory: grid must start at 0");
  for (std::size_t i = 1; i < grid.size(); ++i)
    require(grid[i] > grid[i - 1], ErrorKind::Contract, "trajectory: grid not strictly increasing");
  require(states.size() == grid.size(), ErrorKind::Contract, "trajectory: states/grid size mismatch");
  require(forcing.empty() || forcing.size() == grid.size(), ErrorKind::Contract,
          "trajectory: forcing/grid size mismatch");
  for (const auto& s : states) check_shells(s.size(), p, "trajectory state");
}

EnergyBalance energy_balance(const Trajectory& traj, double t, const Params& p,
                             const ShellVector& initial) {
  traj.validate(p);
  require(traj.has_forcing(), ErrorKind::Contract, "energy_balance: trajectory carries no forcing");
  check_shells(initial.size(), p, "energy_balance initial");
  require(t >= traj.grid.front() && t <= traj.grid.back(), ErrorKind::Range,
          "energy_balance: t outside trajectory grid");

  const ShellCoefficients c(p);
  const int n_sh = p.n_shells;
  EnergyBalance e;
  for (int i = 0; i < n_sh; ++i) e.rhs += initial[i] * initial[i];

  // Integrate up to t; the last panel is cut at t with linear interpolation.
  std::vector<double> u_prev(traj.states[0].vec()), f_prev(traj.forcing[0].vec());
  double t_prev = traj.grid[0];
  std::vector<double> u_now = u_prev;
  for (std::size_t k = 1; k < traj.size() && t_prev < t; ++k) {
    const double t_next = std::min(traj.grid[k], t);
    const double w = (t_next - traj.grid[k - 1]) / (traj.grid[k] - traj.grid[k - 1]);
    std::vector<double> f_now(n_sh);
    for (int i = 0; i < n_sh; ++i) {
      u_now[i] = (1.0 - w) * traj.states[k - 1][i] + w * traj.states[k][i];
      f_now[i] = (1.0 - w) * traj.forcing[k - 1][i] + w * traj.forcing[k][i];
    }
    const double dt = t_next - t_prev;
    for (int i = 0; i < n_sh; ++i) {
      e.lhs += c.dissipation(i + 1) * dt * (u_prev[i] * u_prev[i] + u_now[i] * u_now[i]);
      e.rhs += dt * (f_prev[i] * u_prev[i] + f_now[i] * u_now[i]);
    }
    u_prev = u_now;
    f_prev = f_now;
    t_prev = t_next;
  }
  for (int i = 0; i < n_sh; ++i) e.lhs += u_prev[i] * u_prev[i];
  return e;
}

}  // namespace dyadic
