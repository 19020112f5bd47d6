#include "dyadic/profiles.hpp"

#include <cmath>
#include <sstream>

#include "dyadic/error.hpp"
#include "dyadic/quadrature.hpp"

namespace dyadic {

namespace {

double bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
double bump_derivative(double x) { return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0; }

}  // namespace

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double s0 = bump(x), s1 = bump(1.0 - x);
  return s0 / (s0 + s1);
}

double smooth_step_derivative(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double s0 = bump(x), s1 = bump(1.0 - x);
  const double d0 = bump_derivative(x), d1 = -bump_derivative(1.0 - x);
  const double den = s0 + s1;
  return (d0 * s1 - s0 * d1) / (den * den);
}

SmoothProfile::SmoothProfile(double plateau, double eps) : plateau_(plateau), eps_(eps) {
  require(std::isfinite(plateau), ErrorKind::Input, "profile plateau must be finite");
  require(eps > 0.0 && eps < 0.5, ErrorKind::Domain, "profile ramp width must lie in (0, 1/2)");
}

double SmoothProfile::eval(double tau) const {
  if (tau <= 0.0 || tau >= 1.0) return 0.0;
  if (tau < eps_) return plateau_ * smooth_step(tau / eps_);
  if (tau > 1.0 - eps_) return plateau_ * smooth_step((1.0 - tau) / eps_);
  return plateau_;
}

double SmoothProfile::deriv(double tau) const {
  if (tau <= 0.0 || tau >= 1.0) return 0.0;
  if (tau < eps_) return plateau_ * smooth_step_derivative(tau / eps_) / eps_;
  if (tau > 1.0 - eps_) return -plateau_ * smooth_step_derivative((1.0 - tau) / eps_) / eps_;
  return 0.0;
}

double SmoothProfile::l1_distance_to_plateau() const {
  const auto br = breakpoints();
  return quad::adaptive([this](double t) { return std::abs(eval(t) - plateau_); }, 0.0, 1.0, 1e-300,
                        1e-13, br);
}

SmoothProfile make_profile(double c, double eps) { return SmoothProfile(c, eps); }

Mat3 coefficient_matrix(double p, double q, const Params& params) {
  const double lb = params.lambda_beta();
  const double l2 = params.lambda * params.lambda;
  Mat3 m;
  m(0, 0) = -1.0 / l2 + q;
  m(0, 1) = -p;
  m(1, 0) = 2.0 * p;
  m(1, 1) = -1.0;
  m(1, 2) = lb * q;
  m(2, 1) = -2.0 * lb * q;
  m(2, 2) = -l2;
  return m;
}

MatrixPath coefficient_path(const SmoothProfile& p, const SmoothProfile& q, const Params& params) {
  auto br = p.breakpoints();
  const auto bq = q.breakpoints();
  br.insert(br.end(), bq.begin(), bq.end());
  return MatrixPath(
      0.0, 1.0, [p, q, params](double t) { return coefficient_matrix(p(t), q(t), params); }, br);
}

Calibration calibrate_profiles(const SpectralReport& report, const Params& params, double margin,
                               const CalibrationOptions& opt) {
  // The inequality flags in the report are sufficient conditions only; everything calibration relies on
  // is verified again below on the profiled propagator.
  require(report.q > 0.0 && report.R > 0.0, ErrorKind::Contract, "calibrate_profiles: report needs q > 0, R > 0");
  require(margin > 0.0, ErrorKind::Domain, "calibrate_profiles: margin must be > 0");
  const double qs = report.q;
  const double R = report.R;
  const Mat3 m_const = coefficient_matrix(qs / 2.0, qs, params);
  const MatrixPath const_path = MatrixPath::constant(0.0, 1.0, m_const);
  const Mat3 B_const = texp(const_path, opt.texp_tol);

  std::vector<CalibrationStep> trace;
  for (double eps = opt.eps_start; eps >= opt.eps_min; eps *= 0.5) {
    const SmoothProfile pp(qs / 2.0, eps), qq(qs, eps);
    const MatrixPath path = coefficient_path(pp, qq, params);
    CalibrationStep step;
    step.eps = eps;
    step.apriori_bound = texp_continuity_bound(path, const_path);
    const Mat3 B = texp(path, opt.texp_tol);
    step.measured_diff = norm_op(B - B_const);

    // Eigenvalues of the 2x2 block; the small one from the determinant to avoid cancellation.
    const auto bt = endpoint_block(B);
    const double tr = bt[0] + bt[3];
    const double dt = bt[0] * bt[3] - bt[1] * bt[2];
    step.discriminant = tr * tr - 4.0 * dt;
    double rho_big = 0.0, rho_small = 0.0;
    if (step.discriminant > 0.0) {
      rho_big = 0.5 * (tr + std::copysign(std::sqrt(step.discriminant), tr));
      rho_small = rho_big != 0.0 ? dt / rho_big : 0.0;
      step.rho = select_rho(rho_big, rho_small);
      step.passed = std::abs(step.rho) > (1.0 + margin) * R && std::abs(rho_big) != std::abs(rho_small);
    }
    trace.push_back(step);
    if (!step.passed) continue;

    Calibration c;
    c.p = pp;
    c.q = qq;
    c.eps = eps;
    c.B = B;
    c.B_const = B_const;
    c.rho = step.rho;
    c.rho2 = step.rho == rho_big ? rho_small : rho_big;
    std::tie(c.y, c.z) = block_eigenvector(B, c.rho);
    c.eigvec_shift = std::hypot(c.y - report.y, c.z - report.z);
    c.apriori_bound = step.apriori_bound;
    c.measured_diff = step.measured_diff;
    const double ry = bt[0] * c.y + bt[1] * c.z - c.rho * c.y;
    const double rz = bt[2] * c.y + bt[3] * c.z - c.rho * c.z;
    c.block_residual = std::hypot(ry, rz) / std::abs(c.rho);
    c.trace = std::move(trace);
    return c;
  }
  std::ostringstream msg;
  msg << "calibrate_profiles: no eps down to " << opt.eps_min << " verifies |rho| > " << (1.0 + margin) * R
      << ";";
  for (const auto& s : trace) msg << " eps=" << s.eps << ":rho=" << s.rho;
  fail(ErrorKind::Calibration, msg.str());
}

}  // namespace dyadic
