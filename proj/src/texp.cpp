#include "dyadic/texp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dyadic/error.hpp"
#include "dyadic/quadrature.hpp"

namespace dyadic {

namespace {

constexpr double kL1RelTol = 1e-12;

std::vector<double> merged_breaks(const MatrixPath& p1, const MatrixPath& p2) {
  std::vector<double> br = p1.breakpoints();
  br.insert(br.end(), p2.breakpoints().begin(), p2.breakpoints().end());
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  return br;
}

Mat3 product_integral(const MatrixPath& path, double lo, double hi, long steps) {
  const double dt = (hi - lo) / static_cast<double>(steps);
  Mat3 acc = Mat3::identity();
  for (long s = 0; s < steps; ++s) {
    const double mid = lo + (static_cast<double>(s) + 0.5) * dt;
    acc = expm(path(mid) * dt) * acc;
  }
  return acc;
}

Mat3 texp_piece(const MatrixPath& path, double lo, double hi, double tol, int max_level) {
  // The midpoint-exponential product is symmetric, so its error expands in even powers
  // of dt and one Richardson step removes the leading term.
  Mat3 coarse = product_integral(path, lo, hi, 1);
  Mat3 prev_extrap;
  bool have_prev = false;
  for (int level = 1; level <= max_level; ++level) {
    const Mat3 fine = product_integral(path, lo, hi, 1L << level);
    const Mat3 extrap = fine + (fine - coarse) * (1.0 / 3.0);
    if (have_prev) {
      const double scale = std::max(1.0, norm_op(extrap));
      if (norm_op(extrap - prev_extrap) <= tol * scale) return extrap;
    }
    if (level == max_level) {
      std::ostringstream msg;
      msg << "texp: no convergence on [" << lo << ", " << hi << "] after 2^" << max_level
          << " steps; last iterates ||B|| = " << norm_op(prev_extrap) << " and " << norm_op(extrap)
          << ", difference " << norm_op(extrap - prev_extrap);
      fail(ErrorKind::Numeric, msg.str());
    }
    prev_extrap = extrap;
    have_prev = true;
    coarse = fine;
  }
  fail(ErrorKind::Numeric, "texp: unreachable");
}

}  // namespace

MatrixPath::MatrixPath(double a, double b, std::function<Mat3(double)> eval, std::vector<double> breakpoints)
    : a_(a), b_(b), eval_(std::move(eval)) {
  require(std::isfinite(a) && std::isfinite(b) && a < b, ErrorKind::Contract, "MatrixPath: need a < b");
  for (double x : breakpoints)
    if (x > a && x < b) breaks_.push_back(x);
  std::sort(breaks_.begin(), breaks_.end());
  breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());
  l1_ = quad::adaptive([this](double t) { return norm_op(eval_(t)); }, a_, b_, 1e-300, kL1RelTol, breaks_);
  require(std::isfinite(l1_), ErrorKind::Input, "MatrixPath: L1 norm is not finite");
}

MatrixPath MatrixPath::constant(double a, double b, const Mat3& m) {
  return MatrixPath(a, b, [m](double) { return m; });
}

std::vector<double> MatrixPath::pieces() const {
  std::vector<double> out{a_};
  out.insert(out.end(), breaks_.begin(), breaks_.end());
  out.push_back(b_);
  return out;
}

Mat3 texp(const MatrixPath& path, double tol, const TexpOptions& opt) {
  require(tol > 0.0, ErrorKind::Contract, "texp: tol must be > 0");
  const auto cuts = path.pieces();
  Mat3 acc = Mat3::identity();
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    acc = texp_piece(path, cuts[i], cuts[i + 1], tol, opt.max_level) * acc;
  return acc;
}

double l1_distance(const MatrixPath& p1, const MatrixPath& p2) {
  require(p1.a() == p2.a() && p1.b() == p2.b(), ErrorKind::Contract,
          "texp_continuity_bound: paths live on different intervals");
  const auto br = merged_breaks(p1, p2);
  return quad::adaptive([&](double t) { return norm_op(p1(t) - p2(t)); }, p1.a(), p1.b(), 1e-300,
                        kL1RelTol, br);
}

double texp_continuity_bound(const MatrixPath& p1, const MatrixPath& p2) {
  const double dist = l1_distance(p1, p2);
  if (dist == 0.0) return 0.0;
  const double expo = std::max(p1.l1_norm(), p2.l1_norm());
  if (expo > 709.0) return std::numeric_limits<double>::infinity();
  return std::exp(expo) * dist;
}

}  // namespace dyadic
