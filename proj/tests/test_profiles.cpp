#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dyadic/error.hpp"
#include "dyadic/profiles.hpp"
#include "dyadic/quadrature.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace dyadic;

namespace {

Params P() { return Params::for_construction(2.0, 2.5, 10); }

const SpectralReport& search() {
  static const SpectralReport r = find_q(P(), P().lambda_beta());
  return r;
}

const Calibration& calibrated() {
  static const Calibration c = calibrate_profiles(search(), P(), 0.1);
  return c;
}

}  // namespace

TEST_CASE("smooth step") {
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(1.0) == 1.0);
  CHECK(smooth_step(-3.0) == 0.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  gen::Engine e(41);
  for (int i = 0; i < 200; ++i) {
    const double x = gen::uniform(e, 0.0, 1.0);
    CHECK(smooth_step(x) + smooth_step(1.0 - x) == doctest::Approx(1.0).epsilon(1e-15));
    const double h = 1e-6;
    const double fd = (smooth_step(x + h) - smooth_step(x - h)) / (2 * h);
    CHECK(std::abs(smooth_step_derivative(x) - fd) <= 1e-6 * (1 + std::abs(fd)));
    if (x < 0.999) CHECK(smooth_step(x + 1e-3) >= smooth_step(x));
  }
}

TEST_CASE("profile values") {
  const SmoothProfile s(3.5, 0.05);
  CHECK(s(0.5) == 3.5);
  CHECK(s(0.05) == 3.5);
  CHECK(s(0.95) == 3.5);
  CHECK(s(0.0) == 0.0);
  CHECK(s(1.0) == 0.0);
  CHECK(s.deriv(0.0) == 0.0);
  CHECK(s.deriv(1.0) == 0.0);
  CHECK(s.deriv(0.05) == 0.0);
  CHECK(s.deriv(0.95) == 0.0);
  // Flat to all orders at the joins: the value is already within roundoff of the plateau nearby.
  CHECK(std::abs(s(0.05 - 1e-4) - 3.5) <= 1e-12);
  CHECK(std::abs(s(1e-4)) <= 1e-12);
  CHECK(s(0.02) > 0.0);
  CHECK(s(0.02) < 3.5);
  const auto br = s.breakpoints();
  CHECK(br.size() == 2);
  CHECK(br[0] == 0.05);
  CHECK(br[1] == 0.95);
}

TEST_CASE("profile derivative matches finite differences") {
  gen::Engine e(42);
  for (int i = 0; i < 200; ++i) {
    const double c = gen::scalar(e), eps = gen::uniform(e, 0.01, 0.45);
    const SmoothProfile s(c, eps);
    const double x = gen::uniform(e, 0.0, 1.0), h = 1e-7;
    const double fd = (s(x + h) - s(x - h)) / (2 * h);
    CHECK(std::abs(s.deriv(x) - fd) <= 1e-5 * std::abs(c) / eps * (1 + std::abs(fd)));
  }
}

TEST_CASE("ramp width is validated") {
  for (double eps : {0.0, -0.1, 0.5, 0.7, std::nan("")}) {
    try {
      SmoothProfile s(1.0, eps);
      FAIL("expected a domain error");
    } catch (const Error& err) {
      CHECK(err.kind() == ErrorKind::Domain);
    }
  }
}

TEST_CASE("L1 distance to the plateau is eps |c|") {
  // The step is antisymmetric about 1/2, so each ramp contributes eps |c| / 2 (50-digit quadrature: 1/2).
  const double ramp_integral = 0.5;
  gen::Engine e(43);
  for (int i = 0; i < 20; ++i) {
    const double c = gen::scalar(e), eps = i == 0 ? 0.05 : gen::uniform(e, 0.001, 0.45);
    const SmoothProfile s(c, eps);
    const double l1 = s.l1_distance_to_plateau();
    CHECK(l1 > 0.0);
    CHECK(l1 <= 2.0 * eps * std::abs(c));
    CHECK(l1 == doctest::Approx(2.0 * eps * std::abs(c) * ramp_integral).epsilon(1e-10));
    const double direct =
        quad::adaptive([&](double t) { return std::abs(s(t) - c); }, 0.0, 1.0, 1e-300, 1e-13, s.breakpoints());
    CHECK(l1 == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("coefficient matrix at the plateau is q A(q)") {
  const Params p = P();
  for (double q : {1.0, 7.0, 44.0}) {
    const Mat3 m = coefficient_matrix(q / 2.0, q, p);
    CHECK(norm_op(m - matrix_A(q, p) * q) <= 1e-13 * norm_op(m));
  }
}

TEST_CASE("profiled propagator approaches the constant one") {
  const Params p = P();
  const double q = 7.0;
  const MatrixPath const_path = MatrixPath::constant(0.0, 1.0, coefficient_matrix(q / 2, q, p));
  const Mat3 B_const = texp(const_path, 1e-13);
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {0.05, 0.01, 0.001}) {
    const MatrixPath path = coefficient_path(SmoothProfile(q / 2, eps), SmoothProfile(q, eps), p);
    const double diff = norm_op(texp(path, 1e-13) - B_const);
    CHECK(diff < prev);
    CHECK(diff <= texp_continuity_bound(path, const_path));
    prev = diff;
  }
}

TEST_CASE("calibration at lambda 2, beta 5/2") {
  const Params p = P();
  const Calibration& c = calibrated();
  CHECK(c.eps > 0.0);
  CHECK(c.eps <= 0.05);
  CHECK(std::abs(c.rho) > p.lambda_beta());
  CHECK(std::abs(c.rho) > 1.1 * p.lambda_beta());
  CHECK(c.rho2 != c.rho);
  CHECK(c.y * c.y + c.z * c.z == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c.block_residual <= 1e-10);
  CHECK_FALSE(c.trace.empty());
  CHECK(c.trace.back().passed);
  CHECK(c.trace.back().eps == c.eps);
  CHECK(c.p.plateau() == doctest::Approx(search().q / 2));
  CHECK(c.q.plateau() == doctest::Approx(search().q));
}

TEST_CASE("calibrated eigen-data agree with a direct recomputation") {
  const Params p = P();
  const Calibration& c = calibrated();
  const MatrixPath path = coefficient_path(c.p, c.q, p);
  // Long double Runge-Kutta on the same path, split at the ramps.
  const auto cuts = path.pieces();
  oracle::M3 B = oracle::M3::Identity();
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const int steps = static_cast<int>(std::ceil((cuts[i + 1] - cuts[i]) * 40000));
    B = oracle::texp_rk4([&](double t) { return path(t); }, cuts[i], cuts[i + 1], steps) * B;
  }
  const long double b00 = B(0, 1), b01 = B(0, 2), b10 = B(1, 1), b11 = B(1, 2);
  const long double tr = b00 + b11, dt = b00 * b11 - b01 * b10;
  const long double big = (tr + std::copysign(std::sqrt(tr * tr - 4 * dt), tr)) / 2;
  CHECK(std::abs(static_cast<double>(big) / c.rho - 1.0) <= 1e-7);
  long double y = b01, z = big - b00;
  const long double n = std::hypot(y, z);
  y /= n;
  z /= n;
  if (y < 0) {
    y = -y;
    z = -z;
  }
  CHECK(std::abs(static_cast<double>(y) - c.y) <= 1e-8);
  CHECK(std::abs(static_cast<double>(z) - c.z) <= 1e-8);
  const double shift = std::hypot(static_cast<double>(y) - search().y, static_cast<double>(z) - search().z);
  CHECK(std::abs(shift - c.eigvec_shift) <= 1e-8);
  // Frozen from the long double recomputation above.
  CHECK(c.eigvec_shift == doctest::Approx(0.0019317758143839096).epsilon(1e-8));
}

TEST_CASE("calibration failure carries its trace") {
  CalibrationOptions opt;
  opt.eps_min = 0.01;
  try {
    calibrate_profiles(search(), P(), 1e30, opt);
    FAIL("expected a calibration error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::Calibration);
    CHECK(std::string(err.what()).find("eps=0.05") != std::string::npos);
  }
}
