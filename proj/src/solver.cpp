#include "dyadic/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dyadic/error.hpp"
#include "dyadic/ode.hpp"
#include "dyadic/quadrature.hpp"

namespace dyadic {

void SolveConfig::validate() const {
  require(n_shells >= 1, ErrorKind::Domain, "solve: n_shells must be >= 1");
  require(std::isfinite(t_end) && t_end > 0.0, ErrorKind::Domain, "solve: t_end must be > 0");
  require(rtol > 0.0 && atol > 0.0, ErrorKind::Domain, "solve: tolerances must be > 0");
  require(uniform_samples >= 1, ErrorKind::Domain, "solve: need at least one uniform sample");
  require(initial.size() == static_cast<std::size_t>(n_shells), ErrorKind::Contract,
          "solve: initial data length differs from n_shells");
  require(initial.all_finite(), ErrorKind::Input, "solve: initial data must be finite");
}

namespace {

Params with_shells(const Params& p, int n) {
  Params q = p;
  q.n_shells = n;
  return q;
}

}  // namespace

std::vector<double> output_grid(const SolveConfig& cfg, const Params& p) {
  std::vector<double> g;
  for (int i = 0; i <= cfg.uniform_samples; ++i) g.push_back(cfg.t_end * i / cfg.uniform_samples);
  const double l2 = p.lambda * p.lambda;
  double tk = cfg.t_end;
  for (int k = 1; k <= cfg.n_shells + 2; ++k) {
    const double next = tk / l2;
    g.push_back(next);
    g.push_back(0.5 * (tk + next));
    tk = next;
  }
  for (double t : cfg.extra_times)
    if (t > 0.0 && t < cfg.t_end) g.push_back(t);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  g.front() = 0.0;
  g.back() = cfg.t_end;
  return g;
}

double lipschitz_constant(int n_shells, const Params& p) {
  return std::pow(p.lambda, 2.0 * n_shells) + 3.0 * std::pow(p.lambda, p.beta * (n_shells + 1));
}

GalerkinResult galerkin_solve_report(const SolveConfig& cfg, const Params& p_in) {
  using DP = ode::DormandPrince;
  cfg.validate();
  const Params p = with_shells(p_in, cfg.n_shells);
  p.validate();
  const int N = cfg.n_shells;
  const ShellCoefficients coeffs(p);
  std::vector<double> L(N);
  for (int n = 1; n <= N; ++n) L[n - 1] = coeffs.dissipation(n);

  const std::vector<double> grid = output_grid(cfg, p);

  auto forcing_at = [&](double t, std::span<double> out) {
    for (int n = 1; n <= N; ++n) out[n - 1] = cfg.forcing ? cfg.forcing(n, t) : 0.0;
  };
  // Nonlinear part plus forcing.
  auto nonlinear = [&](double t, std::span<const double> u, std::span<double> out) {
    if (cfg.disable_nonlinear) {
      std::fill(out.begin(), out.end(), 0.0);
    } else {
      shell_nonlinear(u, coeffs, out);
    }
    std::vector<double> f(N);
    forcing_at(t, f);
    for (int i = 0; i < N; ++i) {
      require(std::isfinite(f[i]), ErrorKind::Input, "solve: forcing is not finite");
      out[i] += f[i];
    }
  };

  GalerkinResult res;
  Trajectory& tr = res.traj;
  std::vector<double> u(cfg.initial.vec());
  auto record = [&](double t) {
    tr.grid.push_back(t);
    tr.states.emplace_back(u);
    ForcingSample fs(static_cast<std::size_t>(N));
    forcing_at(t, fs.values());
    tr.forcing.push_back(std::move(fs));
  };
  record(0.0);

  std::vector<std::vector<double>> K(DP::stages, std::vector<double>(N));
  std::vector<double> U(N), unew(N), err(N);
  nonlinear(0.0, u, K[0]);

  double t = 0.0;
  double h = 1e-4 * cfg.t_end;
  std::size_t next = 1;
  while (next < grid.size()) {
    const double goal = grid[next];
    const double h_free = h;
    bool landing = false;
    if (t + h >= goal || goal - (t + h) < 1e-12 * cfg.t_end) {
      h = goal - t;
      landing = true;
    }
    for (int s = 1; s < DP::stages; ++s) {
      for (int i = 0; i < N; ++i) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j) acc += DP::a[s][j] * std::exp(-(DP::c[s] - DP::c[j]) * h * L[i]) * K[j][i];
        U[i] = std::exp(-DP::c[s] * h * L[i]) * u[i] + h * acc;
      }
      nonlinear(t + DP::c[s] * h, U, K[s]);
    }
    // With a_7 = b and c_7 = 1 the last stage state is the new solution (FSAL).
    unew = U;
    for (int i = 0; i < N; ++i) {
      double acc = 0.0;
      for (int s = 0; s < DP::stages; ++s) acc += DP::e[s] * std::exp(-(1.0 - DP::c[s]) * h * L[i]) * K[s][i];
      err[i] = h * acc;
    }
    const double en = ode::error_norm(err, u, unew, cfg.rtol, cfg.atol);
    const bool ok = std::isfinite(en) && en <= 1.0;
    if (ok) {
      t = landing ? goal : t + h;
      u = unew;
      K[0] = K[DP::stages - 1];
      ++res.steps;
      double emax = 0.0, umax = 0.0;
      for (int i = 0; i < N; ++i) {
        emax = std::max(emax, std::abs(err[i]));
        umax = std::max(umax, std::abs(u[i]));
      }
      res.err_estimate += emax;
      if (umax > cfg.blowup) {
        std::ostringstream msg;
        msg << "solve: max |u_n| = " << umax << " exceeds the blow-up threshold " << cfg.blowup << " at t = " << t;
        fail(ErrorKind::Divergence, msg.str());
      }
      if (landing) {
        record(t);
        ++next;
      }
    } else {
      ++res.rejected;
    }
    const double fac = !std::isfinite(en) ? 0.2 : en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
    if (ok && landing) {
      h = std::max(h * fac, h_free);
    } else {
      h *= ok ? fac : std::min(fac, 1.0);
    }
    if (h < 1e-14 * cfg.t_end) {
      std::ostringstream msg;
      msg << "solve: step size underflow at t = " << t;
      fail(ErrorKind::Numeric, msg.str());
    }
  }
  return res;
}

Trajectory galerkin_solve(const SolveConfig& cfg, const Params& p) { return galerkin_solve_report(cfg, p).traj; }

double local_existence_interval(const SolveConfig& cfg, const Params& p) {
  const int N = cfg.n_shells;
  double a2 = 0.0;
  for (std::size_t i = 0; i < cfg.initial.size(); ++i) a2 += cfg.initial[i] * cfg.initial[i];
  double fint = 0.0;
  if (cfg.forcing) {
    auto fnorm = [&](double t) {
      double s = 0.0;
      for (int n = 1; n <= N; ++n) {
        const double f = cfg.forcing(n, t);
        s += f * f;
      }
      return std::sqrt(s);
    };
    std::vector<double> br;
    double tk = cfg.t_end;
    for (int k = 1; k <= N + 2; ++k) br.push_back(tk /= p.lambda * p.lambda);
    br.insert(br.end(), cfg.extra_times.begin(), cfg.extra_times.end());
    fint = quad::adaptive(fnorm, 0.0, cfg.t_end, 1e-14, 1e-10, br);
  }
  const double R = 2.0 * std::sqrt(a2) + 2.0 * fint;
  return 1.0 / (2.0 * lipschitz_constant(N, p) * (R + 1.0));
}

EnergyInequalityReport energy_inequality_check(const Trajectory& traj, const ShellVector& initial,
                                               const Params& p_in) {
  require(traj.has_forcing(), ErrorKind::Contract, "energy_inequality_check: trajectory carries no forcing");
  const std::size_t N = initial.size();
  const Params p = with_shells(p_in, static_cast<int>(N));
  traj.validate(p);
  const std::size_t m = traj.size();
  std::vector<double> diss(m, 0.0), forc(m, 0.0);
  for (std::size_t n = 1; n <= N; ++n) {
    const double l2n = std::pow(p.lambda, 2.0 * n);
    std::vector<double> u2(m), f2(m);
    for (std::size_t i = 0; i < m; ++i) {
      u2[i] = traj.states[i][n - 1] * traj.states[i][n - 1];
      f2[i] = traj.forcing[i][n - 1] * traj.forcing[i][n - 1];
    }
    const auto cu = quad::cumulative_trapezoid(traj.grid, u2);
    const auto cf = quad::cumulative_trapezoid(traj.grid, f2);
    for (std::size_t i = 0; i < m; ++i) {
      diss[i] += l2n * cu[i];
      forc[i] += cf[i] / l2n;
    }
  }
  const double a2 = initial.norm_sq();
  EnergyInequalityReport r;
  r.worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const double lhs = traj.states[i].norm_sq() + diss[i];
    const double rhs = a2 + forc[i];
    r.t.push_back(traj.grid[i]);
    r.defect.push_back(lhs - rhs);
    r.scale = std::max(r.scale, rhs);
    if (lhs - rhs > r.worst) {
      r.worst = lhs - rhs;
      r.worst_t = traj.grid[i];
    }
  }
  return r;
}

double galerkin_identity_defect(const Trajectory& traj, const ShellVector& initial, const Params& p_in) {
  const Params p = with_shells(p_in, static_cast<int>(initial.size()));
  traj.validate(p);
  require(traj.has_forcing(), ErrorKind::Contract, "galerkin_identity_defect: trajectory carries no forcing");
  const ShellCoefficients c(p);
  const std::size_t N = initial.size();
  // Same trapezoid sums as energy_balance, accumulated in one pass over the grid.
  double diss = 0.0, work = 0.0, worst = 0.0;
  const double a2 = initial.norm_sq();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (k > 0) {
      const double dt = traj.grid[k] - traj.grid[k - 1];
      for (std::size_t i = 0; i < N; ++i) {
        const double u0 = traj.states[k - 1][i], u1 = traj.states[k][i];
        diss += c.dissipation(static_cast<int>(i) + 1) * dt * (u0 * u0 + u1 * u1);
        work += dt * (traj.forcing[k - 1][i] * u0 + traj.forcing[k][i] * u1);
      }
    }
    const double lhs = traj.states[k].norm_sq() + diss;
    const double rhs = a2 + work;
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  return worst;
}

}  // namespace dyadic
