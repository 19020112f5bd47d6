#include "dyadic/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "dyadic/error.hpp"

namespace dyadic {

using cplx = std::complex<double>;

double char_poly_A0(double alpha, const Params& p) {
  const double l2b = std::pow(p.lambda, 2.0 * p.beta);
  return ((alpha - 1.0) * alpha + (0.5 + 2.0 * l2b)) * alpha - 2.0 * l2b;
}

double char_poly_A0_derivative(double alpha, const Params& p) {
  const double l2b = std::pow(p.lambda, 2.0 * p.beta);
  return 3.0 * alpha * alpha - 2.0 * alpha + 0.5 + 2.0 * l2b;
}

Mat3 matrix_A0(const Params& p) {
  const double lb = p.lambda_beta();
  Mat3 m;
  m(0, 0) = 1.0;
  m(0, 1) = -0.5;
  m(1, 0) = 1.0;
  m(1, 2) = lb;
  m(2, 1) = -2.0 * lb;
  return m;
}

EigenBasis eig_A0(const Params& p) {
  p.validate();
  double lo = 0.75, hi = 1.0;
  require(char_poly_A0(lo, p) < 0.0 && char_poly_A0(hi, p) > 0.0, ErrorKind::Numeric,
          "eig_A0: characteristic polynomial does not change sign on (3/4, 1)");
  // chi is strictly increasing, so Newton safeguarded by the bracket converges.
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fx = char_poly_A0(x, p);
    if (fx == 0.0) break;
    (fx < 0.0 ? lo : hi) = x;
    double xn = x - fx / char_poly_A0_derivative(x, p);
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (std::abs(xn - x) <= 4e-16 * std::abs(x) || hi - lo <= 4e-16) {
      x = xn;
      break;
    }
    x = xn;
  }
  require(x > 0.75 && x < 1.0, ErrorKind::Numeric, "eig_A0: root finder did not converge");

  const double lb = p.lambda_beta();
  const double l2b = lb * lb;
  EigenBasis e;
  e.kappa = x;
  // Vieta: kappa + 2 Re w = 1 and kappa |w|^2 = 2 lambda^{2 beta}.
  const double re = 0.5 * (1.0 - x);
  const double im = std::sqrt(2.0 * l2b / x - re * re);
  e.w = {re, im};

  const double y1 = 2.0 * (1.0 - x);
  e.v1 = {1.0, y1, -2.0 * lb * y1 / x};
  const cplx yc = 2.0 * (1.0 - e.w);
  const cplx zc = 4.0 * lb * (e.w - 1.0) / e.w;
  e.v2 = {1.0, yc.real(), zc.real()};
  e.v3 = {0.0, yc.imag(), zc.imag()};
  return e;
}

Mat3 matrix_A(double q, const Params& p) {
  require(std::isfinite(q) && q > 0.0, ErrorKind::Domain, "matrix_A: q must be > 0");
  const double lb = p.lambda_beta();
  const double l2 = p.lambda * p.lambda;
  Mat3 m;
  m(0, 0) = 1.0 - 1.0 / (l2 * q);
  m(0, 1) = -0.5;
  m(1, 0) = 1.0;
  m(1, 1) = -1.0 / q;
  m(1, 2) = lb;
  m(2, 1) = -2.0 * lb;
  m(2, 2) = -l2 / q;
  return m;
}

namespace {

template <class T>
std::array<T, 3> null_vector(const Mat3& m, T mu) {
  std::array<std::array<T, 3>, 3> rows;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) rows[i][j] = T(m(i, j)) - (i == j ? mu : T(0));
  std::array<T, 3> best{};
  double best_norm = -1.0;
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (const auto& pr : pairs) {
    const auto& r = rows[pr[0]];
    const auto& s = rows[pr[1]];
    std::array<T, 3> c{r[1] * s[2] - r[2] * s[1], r[2] * s[0] - r[0] * s[2], r[0] * s[1] - r[1] * s[0]};
    const double nrm = std::abs(c[0]) + std::abs(c[1]) + std::abs(c[2]);
    if (nrm > best_norm) {
      best_norm = nrm;
      best = c;
    }
  }
  require(best_norm > 0.0, ErrorKind::Numeric, "eigenvector: null space is not one-dimensional");
  require(std::abs(best[0]) > 1e-12 * best_norm, ErrorKind::Numeric,
          "eigenvector: first component vanishes, cannot normalize x = 1");
  const T x0 = best[0];
  for (auto& c : best) c /= x0;
  return best;
}

}  // namespace

EigenBasis eig_real_complex(const Mat3& m) {
  const double c2 = -trace(m);
  const double c1 = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
                    m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  const double c0 = -det(m);
  auto poly = [&](auto x) { return ((x + c2) * x + c1) * x + c0; };
  auto dpoly = [&](auto x) { return (3.0 * x + 2.0 * c2) * x + c1; };

  const double bound = 1.0 + std::max({std::abs(c2), std::abs(c1), std::abs(c0)});
  double lo = -bound, hi = bound;
  double r = 0.0;
  for (int it = 0; it < 400; ++it) {
    r = 0.5 * (lo + hi);
    const double fr = poly(r);
    if (fr == 0.0) break;
    (fr < 0.0 ? lo : hi) = r;
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(r))) break;
  }
  for (int it = 0; it < 3; ++it) {
    const double d = dpoly(r);
    if (d != 0.0) r -= poly(r) / d;
  }

  // Deflate to x^2 + bq x + cq.
  const double bq = c2 + r;
  const double cq = c1 + r * bq;
  const double disc = bq * bq - 4.0 * cq;
  require(disc < 0.0, ErrorKind::Numeric, "eigen: spectrum is real, expected a complex pair");
  cplx w(-0.5 * bq, 0.5 * std::sqrt(-disc));
  for (int it = 0; it < 3; ++it) {
    const cplx d = dpoly(w);
    if (std::abs(d) != 0.0) w -= poly(w) / d;
  }
  require(w.imag() > 0.0 && std::abs(w - r) > 0.0, ErrorKind::Numeric, "eigen: degenerate spectrum");

  EigenBasis e;
  e.kappa = r;
  e.w = w;
  e.v1 = null_vector<double>(m, r);
  const auto vc = null_vector<cplx>(m, w);
  for (int i = 0; i < 3; ++i) {
    e.v2[i] = vc[i].real();
    e.v3[i] = vc[i].imag();
  }
  e.v2[0] = 1.0;
  e.v3[0] = 0.0;
  return e;
}

double eigen_residual(const Mat3& m, const EigenBasis& e) {
  const Vec3 r1 = m * e.v1;
  double worst = 0.0;
  {
    Vec3 d{r1[0] - e.kappa * e.v1[0], r1[1] - e.kappa * e.v1[1], r1[2] - e.kappa * e.v1[2]};
    worst = norm2(d) / norm2(e.v1);
  }
  CVec3 v{cplx(e.v2[0], e.v3[0]), cplx(e.v2[1], e.v3[1]), cplx(e.v2[2], e.v3[2])};
  const CVec3 mv = m * v;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 3; ++i) {
    num += std::norm(mv[i] - e.w * v[i]);
    den += std::norm(v[i]);
  }
  return std::max(worst, std::sqrt(num / den));
}

PlateauBounds eig_A(double q, const Params& p) {
  PlateauBounds c;
  c.basis0 = eig_A0(p);
  c.basis = eig_real_complex(matrix_A(q, p));
  const EigenBasis& e0 = c.basis0;
  const EigenBasis& e = c.basis;
  c.mu = 2.0 * (norm2(e0.v1) + norm2(e0.v2) + norm2(e0.v3));
  c.nu = std::min(e0.v3[2] / 2.0 - e0.v1[1] * e0.v3[1] / 4.0, 0.5);

  c.flags.set("spectrum_simple", e.w.imag() > 0.0 && std::abs(e.w - e.kappa) > 0.0);
  c.flags.set("kappa_in_range", e.kappa > 0.75 && e.kappa < 1.0);
  c.flags.set("re_w_below_eighth", e.w.real() < 0.125);
  c.re_w_positive = e.w.real() > 0.0;
  c.flags.set("im_w_positive", e.w.imag() > 0.0);
  c.flags.set("y1_half_bound", e.v1[1] > e0.v1[1] / 2.0);
  c.flags.set("y3_half_bound", e.v3[1] < e0.v3[1] / 2.0);
  c.flags.set("z3_half_bound", e.v3[2] > e0.v3[2] / 2.0);
  c.flags.set("mu_bound", norm2(e.v1) + norm2(e.v2) + norm2(e.v3) <= c.mu);
  c.flags.set("nu_bound", e.v3[2] - e.v1[1] * e.v3[1] >= c.nu);
  return c;
}

Mat3 exp_qA(double q, const Params& p, const EigenBasis& basis) {
  if (q * basis.kappa <= 700.0) return expm(matrix_A(q, p) * q);
  // B P = P K with K = diag(k, [[a, b], [-b, a]]) on the fixed eigenbasis.
  const double k = std::exp(q * basis.kappa);
  const cplx ab = std::exp(q * basis.w);
  require(std::isfinite(k), ErrorKind::Numeric, "exp(qA): q*kappa exceeds double range");
  Mat3 K;
  K(0, 0) = k;
  K(1, 1) = ab.real();
  K(1, 2) = ab.imag();
  K(2, 1) = -ab.imag();
  K(2, 2) = ab.real();
  const Mat3 P = basis.columns();
  return P * K * inverse(P);
}

RhoQuadratic rho_quadratic(const EigenBasis& e, double k, double a, double b) {
  const double y1 = e.v1[1], z1 = e.v1[2];
  const double y2 = e.v2[1], z2 = e.v2[2];
  const double y3 = e.v3[1], z3 = e.v3[2];
  RhoQuadratic r;
  r.U = det(e.columns());
  require(r.U != 0.0 && std::isfinite(r.U), ErrorKind::Numeric,
          "rho_quadratic: degenerate eigenbasis (det(v1, v2, v3) = 0)");
  r.V = (k - a) * (z3 - y1 * y3) + b * (y1 * y2 - y2 * y2 - y3 * y3 + z2 - z1);
  r.W = (a * a + b * b) * y3 - k * (a * y3 + b * y2 - b * y1);
  r.discriminant = r.V * r.V - 4.0 * r.U * r.W;
  if (!(r.discriminant > 0.0)) {
    r.rho1 = r.rho2 = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  const double sq = std::sqrt(r.discriminant);
  // Cancellation-free pair: the large root from the quadratic formula, the other from the product.
  const double big = (-r.V - std::copysign(sq, r.V)) / (2.0 * r.U);
  const double small = big != 0.0 ? r.W / (r.U * big) : (-r.V + std::copysign(sq, r.V)) / (2.0 * r.U);
  const bool swap = std::abs(small) > std::abs(big) ||
                    (std::abs(small) == std::abs(big) && small > big);
  r.rho1 = swap ? small : big;
  r.rho2 = swap ? big : small;
  return r;
}

double select_rho(double rho1, double rho2) {
  if (std::abs(rho1) != std::abs(rho2)) return std::abs(rho1) > std::abs(rho2) ? rho1 : rho2;
  return std::max(rho1, rho2);
}

std::array<double, 4> endpoint_block(const Mat3& B) { return {B(0, 1), B(0, 2), B(1, 1), B(1, 2)}; }

std::pair<double, double> block_eigenvector(const Mat3& B, double rho) {
  const auto bt = endpoint_block(B);
  // Either row of (Bt - rho I) annihilates the eigenvector; use the better conditioned one.
  double y1 = bt[1], z1 = rho - bt[0];
  double y2 = rho - bt[3], z2 = bt[2];
  const double n1 = std::hypot(y1, z1), n2 = std::hypot(y2, z2);
  double y = n1 >= n2 ? y1 : y2;
  double z = n1 >= n2 ? z1 : z2;
  const double n = std::max(n1, n2);
  require(n > 0.0 && std::isfinite(n), ErrorKind::Numeric, "block_eigenvector: zero eigenvector");
  y /= n;
  z /= n;
  if (y < 0.0 || (y == 0.0 && z < 0.0)) {
    y = -y;
    z = -z;
  }
  return {y, z};
}

SpectralReport evaluate_q(double q, const Params& p, double R) {
  p.validate();
  require(std::isfinite(q) && q > 0.0, ErrorKind::Domain, "q must be > 0");
  require(std::isfinite(R) && R > 0.0, ErrorKind::Domain, "R must be > 0");
  SpectralReport rep;
  rep.q = q;
  rep.R = R;
  rep.lambda = p.lambda;
  rep.beta = p.beta;

  PlateauBounds cb;
  try {
    cb = eig_A(q, p);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Numeric) throw;
    // Real or degenerate spectrum: nothing downstream is defined.
    rep.basis0 = eig_A0(p);
    rep.flags.set("spectrum_simple", false);
    for (const char* name : {"kappa_in_range", "re_w_below_eighth", "im_w_positive", "y1_half_bound",
                             "y3_half_bound", "z3_half_bound", "mu_bound", "nu_bound",
                             "k_exceeds_exp_3q_4", "k_bound", "ab_bound", "omega_bound",
                             "discriminant_positive", "rho_exceeds_R"})
      rep.flags.set(name, false);
    return rep;
  }
  rep.basis = cb.basis;
  rep.basis0 = cb.basis0;
  rep.mu = cb.mu;
  rep.nu = cb.nu;
  rep.flags = cb.flags;
  rep.re_w_positive = cb.re_w_positive;

  const EigenBasis& e = rep.basis;
  require(q * e.kappa < 709.0, ErrorKind::Numeric, "q*kappa exceeds double range");
  rep.k = std::exp(q * e.kappa);
  const cplx ab = std::exp(q * e.w);
  rep.a = ab.real();
  rep.b = ab.imag();
  rep.omega = std::exp(-5.0 * q / 8.0);
  rep.omega_limit = rep.nu * rep.nu / (100.0 * std::pow(rep.mu, 4));

  rep.flags.set("k_exceeds_exp_3q_4", rep.k > std::exp(0.75 * q));
  rep.flags.set("k_bound", rep.k > 5.0 * std::pow(rep.mu, 3) * R / (2.0 * rep.nu));
  rep.flags.set("ab_bound", std::max(std::abs(rep.a), std::abs(rep.b)) < rep.omega * rep.k);
  rep.flags.set("omega_bound", rep.omega < rep.omega_limit);

  const RhoQuadratic rq = rho_quadratic(e, rep.k, rep.a, rep.b);
  rep.U = rq.U;
  rep.V = rq.V;
  rep.W = rq.W;
  rep.discriminant = rq.discriminant;
  rep.rho1 = rq.rho1;
  rep.rho2 = rq.rho2;
  rep.flags.set("discriminant_positive", rq.real_roots());
  rep.flags.set("rho_exceeds_R", rq.real_roots() && std::max(std::abs(rq.rho1), std::abs(rq.rho2)) > R);

  rep.B = exp_qA(q, p, e);
  rep.eigen_residual = eigen_residual(matrix_A(q, p), e);
  if (rq.real_roots()) {
    rep.rho = select_rho(rq.rho1, rq.rho2);
    std::tie(rep.y, rep.z) = block_eigenvector(rep.B, rep.rho);
    const auto bt = endpoint_block(rep.B);
    const double ry = bt[0] * rep.y + bt[1] * rep.z - rep.rho * rep.y;
    const double rz = bt[2] * rep.y + bt[3] * rep.z - rep.rho * rep.z;
    rep.block_residual = std::hypot(ry, rz) / std::abs(rep.rho);
  } else {
    rep.rho = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

SpectralReport find_q(const Params& p, double R, const SearchOptions& opt) {
  p.validate();
  require(std::isfinite(R) && R > 0.0, ErrorKind::Domain, "find_q: R must be > 0");
  require(opt.q_start > 0.0 && opt.growth > 1.0, ErrorKind::Domain, "find_q: bad search grid");
  const char* plateau_flags[] = {"spectrum_simple", "kappa_in_range", "re_w_below_eighth",
                             "im_w_positive",   "y1_half_bound",  "y3_half_bound",
                             "z3_half_bound",   "mu_bound",       "nu_bound"};
  std::ostringstream trace;
  double q0 = 0.0;
  for (int j = 0;; ++j) {
    const double q = opt.q_start * std::pow(opt.growth, j);
    if (q > opt.q_cap) break;
    SpectralReport rep;
    try {
      rep = evaluate_q(q, p, R);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Numeric) throw;
      trace << " q=" << q << ":numeric";
      continue;
    }
    if (q0 == 0.0 && std::all_of(std::begin(plateau_flags), std::end(plateau_flags),
                                  [&](const char* n) { return rep.flags.get(n); }))
      q0 = q;
    if (rep.passed()) {
      rep.q0 = q0;
      return rep;
    }
    trace << " q=" << q << ":" << rep.flags.first_failure();
  }
  fail(ErrorKind::Search, "find_q: no admissible q up to " + std::to_string(opt.q_cap) + ";" + trace.str());
}

}  // namespace dyadic
