#include "dyadic/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dyadic/error.hpp"
#include "dyadic/parallel.hpp"

namespace dyadic {

namespace {

double ipow(double base, double e) { return std::pow(base, e); }

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("[") + name + "] " + e.what());
  }
}

struct ShellState {
  double u_prev, u, u_next;
};

ShellState states(const SplitFields& F, int n, double t, int sign) {
  auto u = [&](int m) { return F.v(m, t) + sign * F.g(m, t); };
  return {u(n - 1), u(n), u(n + 1)};
}

}  // namespace

std::vector<double> residual_sample_grid(const SplitFields& fields, int n, int per_branch) {
  require(per_branch >= 2, ErrorKind::Domain, "residual_sample_grid: need at least 2 points per branch");
  const ShellGrid& g = fields.grid();
  const double T = g.horizon();
  const double off = std::ldexp(1.0, -40);
  std::vector<double> out;
  auto fill = [&](double a, double b) {
    if (!(b > a)) return;
    const double w = b - a;
    for (int i = 0; i < per_branch; ++i) {
      const double s = off + (1.0 - 2.0 * off) * i / (per_branch - 1);
      out.push_back(a + s * w);
    }
  };
  for (int k = n + 1; k >= n - 1; --k) {
    if (k <= 0) break;  // branch starts at or beyond T
    fill(g.t(k), std::min(g.t(k - 1), T));
  }
  if (n - 2 >= 1) fill(g.t(n - 2), T);
  return out;
}

ResidualReport residual_system1(const SplitFields& fields, int sign, int per_branch) {
  require(sign == 1 || sign == -1, ErrorKind::Contract, "residual_system1: sign must be +1 or -1");
  const Params& p = fields.params();
  const int N = fields.n_shells();
  ResidualReport r;
  r.normalized.assign(N, 0.0);
  r.absolute.assign(N, 0.0);
  parallel_for(N, [&](int i) {
    const int n = i + 1;
    const double l2n = ipow(p.lambda, 2.0 * n), lbn = ipow(p.lambda, p.beta * n),
                 lbn1 = ipow(p.lambda, p.beta * (n + 1));
    double sup_r = 0.0, sup_u = 0.0;
    for (double t : residual_sample_grid(fields, n, per_branch)) {
      const ShellState s = states(fields, n, t, sign);
      const double ud = fields.v_dot(n, t) + sign * fields.g_dot_interp(n, t);
      const double res = ud + l2n * s.u - lbn * s.u_prev * s.u_prev + lbn1 * s.u * s.u_next - fields.f(n, t);
      sup_r = std::max(sup_r, std::abs(res));
      sup_u = std::max(sup_u, std::abs(s.u));
    }
    r.absolute[i] = sup_r;
    r.normalized[i] = sup_u > 0.0 ? sup_r / (l2n * sup_u) : 0.0;
  });
  for (double x : r.normalized) r.sup = std::max(r.sup, x);
  return r;
}

double g_equation_residual(const SplitFields& F, int n, double t) {
  const Params& p = F.params();
  return F.g_dot_interp(n, t) + ipow(p.lambda, 2.0 * n) * F.g(n, t) -
         2.0 * ipow(p.lambda, p.beta * n) * F.v(n - 1, t) * F.g(n - 1, t) +
         ipow(p.lambda, p.beta * (n + 1)) * (F.v(n, t) * F.g(n + 1, t) + F.v(n + 1, t) * F.g(n, t));
}

GluingReport gluing_defects(const SplitFields& F) {
  const int N = F.n_shells();
  GluingReport r;
  const Vec3 e = F.h().endpoints();
  const double rho = F.rho(), y = F.y(), z = F.z();
  const double sc = std::abs(rho * y) + std::abs(rho * z);
  r.h1_defect = std::abs(e[0] - rho * y) / sc;
  r.h2_defect = std::abs(e[1] - rho * z) / sc;
  for (int n = 1; n <= N; ++n) {
    std::array<double, 4> ab{}, rel{};
    for (int j = 0; j < 4; ++j) {
      // Size of the glued value: rho^{j-n-1} (y, z) at the first three points, the tail start at the last.
      const double norm = j < 3 ? std::pow(std::abs(rho), static_cast<double>(j - n - 1)) * (std::abs(y) + std::abs(z))
                                : std::pow(std::abs(rho), static_cast<double>(1 - n)) * std::abs(e[2]);
      const int k = n + 1 - j;  // boundary at t_k between branch j and branch j + 1
      if (k < 1) continue;      // t_0 = T closes the interval
      const double left = j == 0 ? 0.0 : F.g_branch(n, j, 1.0);
      const bool top = k == 1 && ((n == 1 && j + 1 == 2) || (n == 2 && j + 1 == 3));
      const double right = F.g_branch(n, j + 1, 0.0, top);
      ab[j] = std::abs(left - right);
      rel[j] = norm > 0.0 ? ab[j] / norm : 0.0;
      r.max_relative = std::max(r.max_relative, rel[j]);
    }
    r.absolute.push_back(ab);
    r.relative.push_back(rel);
  }
  return r;
}

namespace {

struct EnergyIntegrals {
  double diss = 0.0, work = 0.0, flux = 0.0;
};

EnergyIntegrals integrate_energy(const SplitFields& F, const std::vector<QuadNode>& rule, int sign) {
  const Params& p = F.params();
  const int N = F.n_shells();
  const double cflux = 2.0 * ipow(p.lambda, p.beta * (N + 1));
  EnergyIntegrals acc;
  for (const auto& nd : rule) {
    double d = 0.0, w = 0.0;
    for (int n = 1; n <= N; ++n) {
      const double u = F.v(n, nd.t) + sign * F.g(n, nd.t);
      d += 2.0 * ipow(p.lambda, 2.0 * n) * u * u;
      w += 2.0 * F.f(n, nd.t) * u;
    }
    const double uN = F.v(N, nd.t) + sign * F.g(N, nd.t);
    const double uN1 = F.v(N + 1, nd.t) + sign * F.g(N + 1, nd.t);
    acc.diss += nd.w * d;
    acc.work += nd.w * w;
    acc.flux += nd.w * cflux * uN * uN * uN1;
  }
  return acc;
}

double energy_at(const SplitFields& F, double t, int sign) {
  double s = 0.0;
  for (int n = 1; n <= F.n_shells(); ++n) {
    const double u = F.v(n, t) + sign * F.g(n, t);
    s += u * u;
  }
  return s;
}

}  // namespace

EnergyReport energy_equality(const SplitFields& F, int sign) {
  require(sign == 1 || sign == -1, ErrorKind::Contract, "energy_equality: sign must be +1 or -1");
  const int N = F.n_shells();
  const ShellGrid& g = F.grid();
  EnergyReport r;
  // Cells N..0 in increasing time; shells 1..N vanish below t_{N+1}.
  std::vector<EnergyIntegrals> full(N + 1), half(N + 1);
  parallel_for(N + 1, [&](int k) {
    full[k] = integrate_energy(F, F.cell_rule(k), sign);
    half[k] = integrate_energy(F, F.partial_cell_rule(k, 0.5), sign);
  });
  auto push = [&](double t, const EnergyIntegrals& c) {
    const double e = energy_at(F, t, sign);
    r.t.push_back(t);
    r.lhs.push_back(e + c.diss + c.flux);
    r.rhs.push_back(c.work);
    r.flux.push_back(c.flux);
    r.scale = std::max(r.scale, e + c.diss);
  };
  EnergyIntegrals cum;
  push(g.t(N + 1), cum);
  for (int k = N; k >= 0; --k) {
    const EnergyIntegrals& h = half[k];
    push(0.5 * (g.t(k + 1) + g.t(k)), {cum.diss + h.diss, cum.work + h.work, cum.flux + h.flux});
    cum.diss += full[k].diss;
    cum.work += full[k].work;
    cum.flux += full[k].flux;
    push(g.t(k), cum);
  }
  for (std::size_t i = 0; i < r.t.size(); ++i)
    r.max_defect = std::max(r.max_defect, r.scale > 0.0 ? std::abs(r.lhs[i] - r.rhs[i]) / r.scale : 0.0);

  // Shell N's share of the balance at T, continued geometrically with ratio lambda^{4 - 2 beta}.
  const Params& p = F.params();
  const double ratio = ipow(p.lambda, 4.0 - 2.0 * p.beta);
  double dN = 0.0;
  for (const auto& nd : F.support_rule(N)) {
    const double u = F.v(N, nd.t) + sign * F.g(N, nd.t);
    dN += nd.w * 2.0 * ipow(p.lambda, 2.0 * N) * u * u;
  }
  const double uT = F.v(N, g.horizon()) + sign * F.g(N, g.horizon());
  r.tail_estimate = ratio < 1.0 ? (uT * uT + dN) * ratio / (1.0 - ratio) : std::numeric_limits<double>::infinity();
  return r;
}

SplitFields build_fields(const Params& p, const CertifyOptions& opt, SpectralReport* spectral,
                         Calibration* calibration) {
  stage("validate", [&] {
    p.validate_for_construction();
    return 0;
  });
  const double R = p.effective_threshold();
  SpectralReport rep = stage("find_q", [&] {
    if (opt.q > 0.0) {
      // A fixed q skips the sufficient bounds; calibration still verifies |rho| > R directly.
      SpectralReport r = evaluate_q(opt.q, p, R);
      if (!r.flags.get("discriminant_positive")) {
        std::ostringstream msg;
        msg << "fixed q = " << opt.q << " gives no real eigenvalue of the endpoint block";
        fail(ErrorKind::Search, msg.str());
      }
      return r;
    }
    return find_q(p, R, opt.search);
  });
  CalibrationOptions copt = opt.calibration;
  if (opt.eps > 0.0) copt.eps_start = copt.eps_min = opt.eps;
  Calibration cal = stage("calibrate", [&] { return calibrate_profiles(rep, p, opt.margin, copt); });
  auto h = stage("solve_h", [&] {
    return std::make_shared<const HSolution>(solve_h(cal.p, cal.q, cal.y, cal.z, p, opt.h_tol));
  });
  auto top = stage("solve_h", [&] {
    return std::make_shared<const HSolution>(
        solve_h(Coefficient::constant(0.0), Coefficient::from_profile(cal.q), cal.y, cal.z, p, opt.h_tol));
  });
  if (spectral) *spectral = rep;
  if (calibration) *calibration = cal;
  return stage("assemble", [&] { return SplitFields(p, h, top, cal.rho, cal.y, cal.z, cal.p, cal.q); });
}

Certificate certify_nonuniqueness(const Params& p_in, int N, const CertifyOptions& opt,
                                  std::optional<SplitFields>* fields_out) {
  Params p = p_in;
  p.n_shells = N;
  Certificate c;
  c.params = p;
  c.options = opt;
  Calibration cal;
  const SplitFields F = build_fields(p, opt, &c.spectral, &cal);
  c.q = c.spectral.q;
  c.eps = cal.eps;
  c.rho = cal.rho;
  c.rho2 = cal.rho2;
  c.y = cal.y;
  c.z = cal.z;
  c.calibration_apriori = cal.apriori_bound;
  c.calibration_measured = cal.measured_diff;
  c.eigvec_shift = cal.eigvec_shift;
  c.calibration_trace = cal.trace;
  c.h_end = F.h().endpoints();
  c.h_top_end = F.h_top().endpoints();
  c.h_err = std::max(F.h().err_estimate(), F.h_top().err_estimate());
  c.h_steps = F.h().steps();

  stage("checks", [&] {
    const Tolerances& tol = opt.tol;
    c.residual_plus = residual_system1(F, +1, opt.per_branch);
    c.residual_minus = residual_system1(F, -1, opt.per_branch);
    c.residual_sup = std::max(c.residual_plus.sup, c.residual_minus.sup);
    c.gluing = gluing_defects(F);
    c.energy_plus = energy_equality(F, +1);
    c.energy_minus = energy_equality(F, -1);
    c.energy_defect = std::max(c.energy_plus.max_defect, c.energy_minus.max_defect);
    c.forcing = forcing_norm_partials(F, N);
    for (std::size_t i = 0; i < c.forcing.ratios.size(); ++i) {
      const int m = static_cast<int>(i) + 2;
      if (m >= 5)
        c.forcing_ratio_deviation =
            std::max(c.forcing_ratio_deviation, std::abs(c.forcing.ratios[i] / c.forcing.expected_ratio - 1.0));
    }
    c.decay = measure_decay(F);

    // Distinctness, forcing agreement, and the sup of the energy, over every quadrature node.
    std::vector<double> times;
    for (const auto& nd : F.full_rule()) times.push_back(nd.t);
    for (int k = 0; k <= N + 1; ++k) times.push_back(F.grid().t(k));
    std::vector<double> f_diff(N, 0.0), f_sup(N, 0.0);
    for (double t : times) {
      double d = 0.0, gs = 0.0, ep = 0.0, em = 0.0;
      for (int n = 1; n <= N; ++n) {
        const double gn = F.g(n, t);
        const double up = F.v(n, t) + gn, um = F.v(n, t) - gn;
        // u+ - u- = 2 g identically; forming it from the rounded u+- would lose g when |g| << |v|.
        d += 4.0 * gn * gn;
        gs += gn * gn;
        ep += up * up;
        em += um * um;
        const ShellState sp = states(F, n, t, +1), sm = states(F, n, t, -1);
        const double l2n = ipow(p.lambda, 2.0 * n), lbn = ipow(p.lambda, p.beta * n),
                     lbn1 = ipow(p.lambda, p.beta * (n + 1));
        const double fp = F.v_dot(n, t) + F.g_dot(n, t) + l2n * sp.u - lbn * sp.u_prev * sp.u_prev +
                          lbn1 * sp.u * sp.u_next;
        const double fm = F.v_dot(n, t) - F.g_dot(n, t) + l2n * sm.u - lbn * sm.u_prev * sm.u_prev +
                          lbn1 * sm.u * sm.u_next;
        f_diff[n - 1] = std::max(f_diff[n - 1], std::abs(fp - fm));
        f_sup[n - 1] = std::max(f_sup[n - 1], std::abs(F.f(n, t)));
      }
      c.distinctness = std::max(c.distinctness, d);
      c.g_sup_sq = std::max(c.g_sup_sq, gs);
      c.sup_energy_plus = std::max(c.sup_energy_plus, ep);
      c.sup_energy_minus = std::max(c.sup_energy_minus, em);
    }
    c.distinctness_relative = c.distinctness / std::max(c.sup_energy_plus, c.sup_energy_minus);
    for (int n = 0; n < N; ++n)
      if (f_sup[n] > 0.0) c.forcing_agreement = std::max(c.forcing_agreement, f_diff[n] / f_sup[n]);

    for (int n = 1; n <= N; ++n) {
      double acc = 0.0;
      for (const auto& nd : F.support_rule(n)) {
        const double u = F.v(n, nd.t) + F.g(n, nd.t);
        acc += nd.w * u * u;
      }
      c.dissipation_terms.push_back(ipow(p.lambda, 2.0 * n) * acc);
      if (n >= 2) c.dissipation_ratios.push_back(c.dissipation_terms[n - 1] / c.dissipation_terms[n - 2]);
    }

    auto tail_below_one = [](const std::vector<double>& ratios) {
      // Ratios from shell 5 on (index m - 2); all of them when the truncation is shallower.
      bool ok = !ratios.empty();
      for (std::size_t i = ratios.size() >= 4 ? 3 : 0; i < ratios.size(); ++i) ok = ok && ratios[i] < 1.0;
      return ok;
    };
    c.leray.set("energy_bounded", std::isfinite(c.sup_energy_plus) && std::isfinite(c.sup_energy_minus));
    c.leray.set("dissipation_converges", tail_below_one(c.dissipation_ratios));
    c.leray.set("forcing_norm_converges", tail_below_one(c.forcing.ratios));
    c.leray.set("energy_equality", c.energy_defect <= tol.energy);

    c.checks.set("residual_plus", c.residual_plus.sup <= tol.residual);
    c.checks.set("residual_minus", c.residual_minus.sup <= tol.residual);
    c.checks.set("gluing", c.gluing.max_relative <= tol.gluing && c.gluing.h1_defect <= tol.gluing &&
                               c.gluing.h2_defect <= tol.gluing);
    c.checks.set("energy_plus", c.energy_plus.max_defect <= tol.energy);
    c.checks.set("energy_minus", c.energy_minus.max_defect <= tol.energy);
    c.checks.set("forcing_tail_ratio", c.forcing_ratio_deviation <= tol.forcing_ratio);
    c.checks.set("forcing_agreement", c.forcing_agreement <= tol.forcing_agreement);
    c.checks.set("distinct", c.distinctness > 0.0);
    c.checks.set("leray", c.leray.all());
    return 0;
  });
  c.pass = c.checks.all();
  if (fields_out) fields_out->emplace(F);
  return c;
}

UniquenessConfig default_uniqueness_config() {
  UniquenessConfig c;
  c.initial = [](int n) { return std::ldexp(1.0, -n); };
  c.forcing = [](int n, double t) { return n == 1 ? 1.0 + 0.5 * std::sin(2.0 * std::numbers::pi * t) : 0.0; };
  return c;
}

UniquenessReport uniqueness_experiment(const Params& p, const UniquenessConfig& cfg) {
  p.validate();
  require(p.beta <= 2.0, ErrorKind::Domain, "uniqueness experiment requires beta <= 2");
  require(!cfg.n_list.empty(), ErrorKind::Domain, "uniqueness experiment needs at least one shell count");
  require(cfg.perturbation >= 0.0 && std::isfinite(cfg.perturbation), ErrorKind::Domain,
          "perturbation must be finite and >= 0");
  UniquenessReport rep;
  const std::size_t m = cfg.n_list.size();
  rep.runs.resize(m);
  parallel_for(static_cast<int>(m), [&](int i) {
    const int N = cfg.n_list[i];
    SolveConfig sc;
    sc.n_shells = N;
    sc.t_end = cfg.t_end;
    sc.rtol = cfg.rtol;
    sc.atol = cfg.atol;
    sc.forcing = cfg.forcing;
    sc.uniform_samples = 200;
    std::vector<double> a(N);
    for (int n = 1; n <= N; ++n) a[n - 1] = cfg.initial ? cfg.initial(n) : 0.0;
    auto run_with = [&](double shift) {
      SolveConfig c = sc;
      std::vector<double> b = a;
      for (double& x : b) x += shift;
      c.initial = ShellVector(b);
      return galerkin_solve(c, p);
    };
    const Trajectory base = run_with(0.0);
    const Trajectory up = run_with(cfg.perturbation);
    const Trajectory dn = run_with(-cfg.perturbation);
    UniquenessRun& r = rep.runs[i];
    r.n_shells = N;
    r.end_state = base.states.back().vec();
    std::size_t mid = 0;
    for (std::size_t k = 0; k < base.size(); ++k)
      if (std::abs(base.grid[k] - 0.5 * cfg.t_end) < std::abs(base.grid[mid] - 0.5 * cfg.t_end)) mid = k;
    r.mid_state = base.states[mid].vec();
    for (std::size_t k = 0; k < base.size(); ++k) {
      double phi = 0.0;
      for (int n = 0; n < N; ++n) {
        const double d = up.states[k][n] - dn.states[k][n];
        phi += d * d;
      }
      if (k == 0) r.phi_start = phi;
      r.phi_max = std::max(r.phi_max, phi);
      r.phi_end = phi;
    }
    r.perturbed_distance_end = std::sqrt(r.phi_end);
    r.tails.assign(N, 0.0);
    for (std::size_t k = 0; k < base.size(); ++k) {
      double s = 0.0;
      for (int n = N; n >= 1; --n) {
        s += base.states[k][n - 1] * base.states[k][n - 1];
        r.tails[n - 1] = std::max(r.tails[n - 1], s);
      }
    }
  });
  auto dist = [](const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = std::max(x.size(), y.size());
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = (i < x.size() ? x[i] : 0.0) - (i < y.size() ? y[i] : 0.0);
      s += d * d;
    }
    return std::sqrt(s);
  };
  for (std::size_t i = 0; i < m; ++i) {
    rep.max_perturbed_distance = std::max(rep.max_perturbed_distance, rep.runs[i].perturbed_distance_end);
    for (std::size_t k = 1; k < rep.runs[i].tails.size(); ++k)
      rep.tails_monotone = rep.tails_monotone && rep.runs[i].tails[k] <= rep.runs[i].tails[k - 1];
    for (std::size_t j = i + 1; j < m; ++j) {
      const double de = dist(rep.runs[i].end_state, rep.runs[j].end_state);
      const double dm = dist(rep.runs[i].mid_state, rep.runs[j].mid_state);
      rep.pairs.push_back({double(rep.runs[i].n_shells), double(rep.runs[j].n_shells), de, dm});
      rep.max_pair_distance = std::max(rep.max_pair_distance, std::max(de, dm));
    }
  }
  return rep;
}

}  // namespace dyadic
