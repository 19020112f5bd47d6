#include "dyadic/construction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dyadic/error.hpp"
#include "dyadic/ode.hpp"
#include "dyadic/quadrature.hpp"

namespace dyadic {

Coefficient Coefficient::constant(double c) {
  return {[c](double) { return c; }, [](double) { return 0.0; }, {}};
}

Coefficient Coefficient::from_profile(const SmoothProfile& s) {
  return {[s](double t) { return s.eval(t); }, [s](double t) { return s.deriv(t); }, s.breakpoints()};
}

HSolution::HSolution(Coefficient p, Coefficient q, const Params& params, std::vector<double> tau,
                     std::vector<Vec3> h, std::vector<Vec3> dh)
    : p_(std::move(p)),
      q_(std::move(q)),
      l2_(params.lambda * params.lambda),
      lb_(params.lambda_beta()),
      tau_(std::move(tau)),
      h_(std::move(h)),
      dh_(std::move(dh)) {
  require(tau_.size() >= 2 && tau_.size() == h_.size() && h_.size() == dh_.size(), ErrorKind::Contract,
          "HSolution: inconsistent node arrays");
  d2h_.resize(tau_.size());
  for (std::size_t i = 0; i < tau_.size(); ++i) {
    const double t = tau_[i];
    const double pv = p_.value(t), qv = q_.value(t);
    const double pd = p_.deriv(t), qd = q_.deriv(t);
    const Vec3& x = h_[i];
    const Vec3& dx = dh_[i];
    // d/dtau (M h) = M' h + M h'.
    d2h_[i] = {(-1.0 / l2_ + qv) * dx[0] - pv * dx[1] + qd * x[0] - pd * x[1],
               2.0 * pv * dx[0] - dx[1] + lb_ * qv * dx[2] + 2.0 * pd * x[0] + lb_ * qd * x[2],
               -2.0 * lb_ * qv * dx[1] - l2_ * dx[2] - 2.0 * lb_ * qd * x[1]};
  }
}

Vec3 HSolution::rhs(double tau, const Vec3& h) const {
  const double pv = p_.value(tau), qv = q_.value(tau);
  return {(-1.0 / l2_ + qv) * h[0] - pv * h[1], 2.0 * pv * h[0] - h[1] + lb_ * qv * h[2],
          -2.0 * lb_ * qv * h[1] - l2_ * h[2]};
}

std::size_t HSolution::segment(double tau) const {
  auto it = std::upper_bound(tau_.begin(), tau_.end(), tau);
  std::size_t i = static_cast<std::size_t>(it - tau_.begin());
  if (i == 0) return 0;
  return std::min(i - 1, tau_.size() - 2);
}

Vec3 HSolution::value(double tau) const {
  tau = std::clamp(tau, 0.0, 1.0);
  if (tau == 0.0) return h_.front();
  if (tau == 1.0) return h_.back();
  const std::size_t i = segment(tau);
  const double hs = tau_[i + 1] - tau_[i];
  const double s = (tau - tau_[i]) / hs;
  Vec3 out;
  for (int c = 0; c < 3; ++c)
    out[c] = ode::hermite5(s, hs, h_[i][c], dh_[i][c], d2h_[i][c], h_[i + 1][c], dh_[i + 1][c], d2h_[i + 1][c])
                 .value;
  return out;
}

Vec3 HSolution::interp_derivative(double tau) const {
  tau = std::clamp(tau, 0.0, 1.0);
  const std::size_t i = segment(tau);
  const double hs = tau_[i + 1] - tau_[i];
  const double s = (tau - tau_[i]) / hs;
  Vec3 out;
  for (int c = 0; c < 3; ++c)
    out[c] = ode::hermite5(s, hs, h_[i][c], dh_[i][c], d2h_[i][c], h_[i + 1][c], dh_[i + 1][c], d2h_[i + 1][c])
                 .deriv;
  return out;
}

namespace {

struct RawSolve {
  std::vector<double> tau;
  std::vector<Vec3> h, dh;
};

RawSolve integrate_h(const Coefficient& p, const Coefficient& q, double y, double z, const Params& params,
                     double tol) {
  const double l2 = params.lambda * params.lambda;
  const double lb = params.lambda_beta();
  ode::Rhs f = [&](double t, std::span<const double> h, std::span<double> dh) {
    const double pv = p.value(t), qv = q.value(t);
    dh[0] = (-1.0 / l2 + qv) * h[0] - pv * h[1];
    dh[1] = 2.0 * pv * h[0] - h[1] + lb * qv * h[2];
    dh[2] = -2.0 * lb * qv * h[1] - l2 * h[2];
  };
  std::vector<double> stops = p.breakpoints;
  stops.insert(stops.end(), q.breakpoints.begin(), q.breakpoints.end());
  ode::Options opt;
  opt.rtol = tol;
  opt.atol = tol * 1e-3 * std::max({std::abs(y), std::abs(z), 1e-300});
  const double y0[3] = {0.0, y, z};
  const auto nodes = ode::integrate(f, 0.0, 1.0, y0, opt, stops);
  RawSolve r;
  for (const auto& nd : nodes) {
    r.tau.push_back(nd.t);
    r.h.push_back({nd.y[0], nd.y[1], nd.y[2]});
    r.dh.push_back({nd.dy[0], nd.dy[1], nd.dy[2]});
  }
  // Exact initial data regardless of the integrator's bookkeeping.
  r.h.front() = {0.0, y, z};
  return r;
}

}  // namespace

HSolution solve_h(const Coefficient& p, const Coefficient& q, double y, double z, const Params& params,
                  double tol) {
  require(tol > 0.0 && std::isfinite(tol), ErrorKind::Domain, "solve_h: tol must be > 0");
  require(std::isfinite(y) && std::isfinite(z), ErrorKind::Input, "solve_h: initial data must be finite");
  const RawSolve coarse = integrate_h(p, q, y, z, params, tol);
  RawSolve fine = integrate_h(p, q, y, z, params, tol / 32.0);
  const Vec3 a = coarse.h.back(), b = fine.h.back();
  const double scale = std::max(norm2(b), 1e-300);
  const double err = norm2(Vec3{a[0] - b[0], a[1] - b[1], a[2] - b[2]}) / scale;
  require(std::isfinite(err), ErrorKind::Numeric, "solve_h: non-finite solution");
  HSolution sol(p, q, params, std::move(fine.tau), std::move(fine.h), std::move(fine.dh));
  sol.set_err_estimate(err);
  return sol;
}

HSolution solve_h(const SmoothProfile& p, const SmoothProfile& q, double y, double z, const Params& params,
                  double tol) {
  return solve_h(Coefficient::from_profile(p), Coefficient::from_profile(q), y, z, params, tol);
}

ShellGrid::ShellGrid(double lambda, int n_max) : lambda_(lambda), n_max_(n_max) {
  require(lambda > 1.0 && std::isfinite(lambda), ErrorKind::Domain, "time grid needs lambda > 1");
  require(n_max >= 0, ErrorKind::Domain, "time grid needs n_max >= 0");
  for (int n = 0; n <= n_max; ++n) pts_.push_back(t(n));
}

double ShellGrid::t(int n) const {
  return 1.0 / ((lambda_ * lambda_ - 1.0) * std::pow(lambda_, 2.0 * n));
}

ShellGrid time_grid(const Params& p) {
  p.validate();
  return ShellGrid(p.lambda, p.n_shells + 2);
}

namespace {

std::vector<QuadNode> build_cell_rule(const ShellGrid& grid, int k, const std::vector<double>& breaks,
                                      const RuleOptions& ro, double tau_end = 1.0) {
  const double t_lo = grid.t(k + 1);
  const double width = grid.t(k) - t_lo;
  const auto& gl = quad::gauss_legendre(ro.order);
  std::vector<double> cuts{0.0};
  for (double b : breaks)
    if (b > 0.0 && b < tau_end) cuts.push_back(b);
  cuts.push_back(tau_end);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<QuadNode> out;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    // The widest piece is the plateau; the short ones are ramps.
    const int panels = (b - a) > 0.25 ? ro.plateau_panels : ro.ramp_panels;
    const double hp = (b - a) / panels;
    for (int j = 0; j < panels; ++j) {
      const double c = a + (j + 0.5) * hp;
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double tau = c + 0.5 * hp * gl.nodes[i];
        out.push_back({t_lo + tau * width, 0.5 * hp * gl.weights[i] * width});
      }
    }
  }
  return out;
}

}  // namespace

SplitFields::SplitFields(const Params& params, std::shared_ptr<const HSolution> h,
                         std::shared_ptr<const HSolution> h_top, double rho, double y, double z, SmoothProfile p,
                         SmoothProfile q, const RuleOptions& rules)
    : params_(params),
      grid_(params.lambda, params.n_shells + 2),
      h_(std::move(h)),
      h_top_(std::move(h_top)),
      rho_(rho),
      y_(y),
      z_(z),
      p_(std::move(p)),
      q_(std::move(q)) {
  params_.validate();
  require(h_ != nullptr && h_top_ != nullptr, ErrorKind::Contract, "SplitFields: missing h solution");
  require(std::isfinite(rho) && std::abs(rho) > 1.0, ErrorKind::Domain,
          "SplitFields: |rho| > 1 is required for g_n to decay");
  require(std::abs(rho) > params_.lambda_beta(), ErrorKind::Domain,
          "SplitFields: |rho| > lambda^beta is required for the forcing bound");
  const int top = params_.n_shells + 4;
  for (int n = 0; n <= top; ++n) {
    l2n_.push_back(std::pow(params_.lambda, 2.0 * n));
    lbn_.push_back(std::pow(params_.lambda, params_.beta * n));
    lvn_.push_back(std::pow(params_.lambda, (2.0 - params_.beta) * n));
  }
  for (int n = -1; n <= top; ++n) rpow_.push_back(std::pow(rho_, -static_cast<double>(n)));
  auto breaks = p_.breakpoints();
  const auto bq = q_.breakpoints();
  breaks.insert(breaks.end(), bq.begin(), bq.end());
  for (int k = 0; k <= params_.n_shells + 1; ++k) cells_.push_back(build_cell_rule(grid_, k, breaks, rules));
  breaks_ = std::move(breaks);
  rules_ = rules;
}

double SplitFields::l2n(int n) const {
  return n >= 0 && n < static_cast<int>(l2n_.size()) ? l2n_[n] : std::pow(params_.lambda, 2.0 * n);
}
double SplitFields::lbn(int n) const {
  return n >= 0 && n < static_cast<int>(lbn_.size()) ? lbn_[n] : std::pow(params_.lambda, params_.beta * n);
}
double SplitFields::lvn(int n) const {
  return n >= 0 && n < static_cast<int>(lvn_.size()) ? lvn_[n]
                                                      : std::pow(params_.lambda, (2.0 - params_.beta) * n);
}
double SplitFields::rho_pow(int n) const {
  return n >= -1 && n + 1 < static_cast<int>(rpow_.size()) ? rpow_[n + 1]
                                                            : std::pow(rho_, -static_cast<double>(n));
}

BranchPoint SplitFields::locate(int n, double t) const {
  // t_0 = T belongs to the branch on its left so that values at T are left limits.
  auto before = [&](int k) {
    const double tk = grid_.t(k);
    return t < tk || (k == 0 && t == tk);
  };
  if (t < grid_.t(n + 1)) return {0, 0.0};
  if (before(n)) return {1, std::min(1.0, l2n(n + 1) * (t - grid_.t(n + 1)))};
  if (before(n - 1)) return {2, std::min(1.0, l2n(n) * (t - grid_.t(n))), n == 1};
  if (before(n - 2))
    return {3, std::min(1.0, std::pow(params_.lambda, 2.0 * (n - 1)) * (t - grid_.t(n - 1))), n == 2};
  return {4, 0.0};
}

double SplitFields::v(int n, double t) const {
  if (n <= 0) return 0.0;
  const BranchPoint b = locate(n, t);
  if (b.branch == 1) return lvn(n + 1) * p_.eval(b.tau);
  if (b.branch == 2) return -lvn(n) * q_.eval(b.tau);
  return 0.0;
}

double SplitFields::v_dot(int n, double t) const {
  if (n <= 0) return 0.0;
  const BranchPoint b = locate(n, t);
  if (b.branch == 1) return lvn(n + 1) * l2n(n + 1) * p_.deriv(b.tau);
  if (b.branch == 2) return -lvn(n) * l2n(n) * q_.deriv(b.tau);
  return 0.0;
}

double SplitFields::g_branch(int n, int branch, double tau, bool top) const {
  if (n <= 0) return 0.0;
  const HSolution& hs = top ? *h_top_ : *h_;
  switch (branch) {
    case 1: return rho_pow(n + 1) * h_->value(tau)[0];
    case 2: return rho_pow(n) * hs.value(tau)[1];
    case 3: return rho_pow(n - 1) * hs.value(tau)[2];
    case 4: return rho_pow(n - 1) * h_->endpoints()[2] * std::exp(-l2n(n) * tau);
    default: return 0.0;
  }
}

double SplitFields::g(int n, double t) const {
  if (n <= 0) return 0.0;
  const BranchPoint b = locate(n, t);
  if (b.branch == 4) return g_branch(n, 4, t - grid_.t(n - 2));
  return g_branch(n, b.branch, b.tau, b.top);
}

double SplitFields::g_dot_impl(int n, double t, bool interp) const {
  if (n <= 0) return 0.0;
  const BranchPoint b = locate(n, t);
  if (b.branch == 0) return 0.0;
  if (b.branch == 4) return -l2n(n) * g(n, t);
  const HSolution& hs = b.top ? *h_top_ : *h_;
  const Vec3 d = interp ? hs.interp_derivative(b.tau) : hs.derivative(b.tau);
  switch (b.branch) {
    case 1: return rho_pow(n + 1) * l2n(n + 1) * d[0];
    case 2: return rho_pow(n) * l2n(n) * d[1];
    default: return rho_pow(n - 1) * std::pow(params_.lambda, 2.0 * (n - 1)) * d[2];
  }
}

double SplitFields::g_dot(int n, double t) const { return g_dot_impl(n, t, false); }
double SplitFields::g_dot_interp(int n, double t) const { return g_dot_impl(n, t, true); }

double SplitFields::f(int n, double t) const {
  if (n <= 0) return 0.0;
  if (t < grid_.t(n + 1)) return 0.0;
  const double vm = v(n - 1, t), gm = g(n - 1, t);
  const double vn = v(n, t), gn = g(n, t);
  const double vp = v(n + 1, t), gp = g(n + 1, t);
  return v_dot(n, t) + l2n(n) * vn - lbn(n) * (vm * vm + gm * gm) + lbn(n + 1) * (vn * vp + gn * gp);
}

namespace {
void check_shell(int n, int N) {
  if (n < 1 || n > N) {
    std::ostringstream msg;
    msg << "shell index " << n << " outside 1.." << N;
    fail(ErrorKind::Range, msg.str());
  }
}
}  // namespace

double SplitFields::eval_v(int n, double t) const {
  check_shell(n, params_.n_shells);
  return v(n, t);
}
double SplitFields::eval_g(int n, double t) const {
  check_shell(n, params_.n_shells);
  return g(n, t);
}
double SplitFields::eval_f(int n, double t) const {
  check_shell(n, params_.n_shells);
  return f(n, t);
}
double SplitFields::eval_u(int n, double t, int sign) const {
  check_shell(n, params_.n_shells);
  require(sign == 1 || sign == -1, ErrorKind::Contract, "eval_u: sign must be +1 or -1");
  return v(n, t) + sign * g(n, t);
}

const std::vector<QuadNode>& SplitFields::cell_rule(int k) const {
  require(k >= 0 && k < static_cast<int>(cells_.size()), ErrorKind::Range, "cell index out of range");
  return cells_[k];
}

std::vector<QuadNode> SplitFields::partial_cell_rule(int k, double tau_end) const {
  require(k >= 0 && tau_end > 0.0 && tau_end <= 1.0, ErrorKind::Range, "partial_cell_rule: bad cell or tau");
  return build_cell_rule(grid_, k, breaks_, rules_, tau_end);
}

std::vector<QuadNode> SplitFields::support_rule(int n) const {
  std::vector<QuadNode> out;
  for (int k = std::min(n, static_cast<int>(cells_.size()) - 1); k >= 0; --k)
    out.insert(out.end(), cells_[k].begin(), cells_[k].end());
  return out;
}

std::vector<QuadNode> SplitFields::full_rule() const { return support_rule(params_.n_shells); }

SplitFields assemble_fields(const Params& params, const Calibration& cal, double tol) {
  auto h = std::make_shared<const HSolution>(solve_h(cal.p, cal.q, cal.y, cal.z, params, tol));
  auto top = std::make_shared<const HSolution>(
      solve_h(Coefficient::constant(0.0), Coefficient::from_profile(cal.q), cal.y, cal.z, params, tol));
  return SplitFields(params, std::move(h), std::move(top), cal.rho, cal.y, cal.z, cal.p, cal.q);
}

ForcingPartials forcing_norm_partials(const SplitFields& fields, int N) {
  require(N >= 1 && N <= fields.n_shells(), ErrorKind::Range, "forcing_norm_partials: N outside 1..n_shells");
  const double lambda = fields.params().lambda;
  ForcingPartials out;
  out.expected_ratio = std::pow(lambda, 4.0 - 2.0 * fields.params().beta);
  double s = 0.0;
  for (int n = 1; n <= N; ++n) {
    double acc = 0.0;
    for (const auto& nd : fields.support_rule(n)) {
      const double fv = fields.f(n, nd.t);
      acc += nd.w * fv * fv;
    }
    const double term = std::pow(lambda, -2.0 * n) * acc;
    out.terms.push_back(term);
    s += term;
    out.partials.push_back(s);
    if (n >= 2) out.ratios.push_back(term / out.terms[n - 2]);
  }
  return out;
}

DecayReport measure_decay(const SplitFields& fields) {
  const int N = fields.n_shells();
  DecayReport r;
  r.expected_ratio_v = std::pow(fields.params().lambda, 2.0 - fields.params().beta);
  r.expected_ratio_g = 1.0 / std::abs(fields.rho());
  for (int n = 1; n <= N; ++n) {
    double sv = 0.0, sg = 0.0, sf = 0.0;
    for (const auto& nd : fields.support_rule(n)) {
      sv = std::max(sv, std::abs(fields.v(n, nd.t)));
      sg = std::max(sg, std::abs(fields.g(n, nd.t)));
      sf = std::max(sf, std::abs(fields.f(n, nd.t)));
    }
    r.sup_v.push_back(sv);
    r.sup_g.push_back(sg);
    r.sup_f.push_back(sf);
    if (n >= 2) {
      r.ratio_v.push_back(sv / r.sup_v[n - 2]);
      r.ratio_g.push_back(sg / r.sup_g[n - 2]);
    }
  }
  return r;
}

}  // namespace dyadic
