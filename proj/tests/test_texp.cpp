#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dyadic/error.hpp"
#include "dyadic/quadrature.hpp"
#include "dyadic/texp.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace dyadic;

namespace {

constexpr double kTol = 1e-12;

double rel_diff(const Mat3& a, const Mat3& b) { return norm_op(a - b) / std::max(1.0, norm_op(b)); }

MatrixPath restrict(const MatrixPath& p, double a, double b) {
  return MatrixPath(a, b, [p](double t) { return p(t); });
}

}  // namespace

TEST_CASE("zero path gives the identity") {
  const Mat3 B = texp(MatrixPath::constant(0.0, 1.0, Mat3::zero()), kTol);
  CHECK(norm_op(B - Mat3::identity()) == 0.0);
}

TEST_CASE("constant path equals the matrix exponential") {
  gen::Engine e(31);
  for (int i = 0; i < 50; ++i) {
    const Mat3 m = gen::matrix(e, 2.0);
    const Mat3 B = texp(MatrixPath::constant(0.0, 1.0, m), kTol);
    CHECK(rel_diff(B, expm(m)) <= 1e-10);
    const oracle::M3 ref = oracle::expm(oracle::to_ld(m));
    CHECK(oracle::diff_norm(B, ref) <= 1e-10 * std::max<long double>(1, ref.norm()));
  }
}

TEST_CASE("diagonal time-dependent path") {
  auto s0 = [](double t) { return std::sin(3 * t); };
  auto s1 = [](double t) { return t * t - 1; };
  auto s2 = [](double t) { return std::exp(-t); };
  const MatrixPath path(0.0, 1.0, [&](double t) { return Mat3::diag(s0(t), s1(t), s2(t)); });
  const Mat3 B = texp(path, kTol);
  const double i0 = quad::adaptive(s0, 0, 1, 1e-15, 1e-15);
  const double i1 = quad::adaptive(s1, 0, 1, 1e-15, 1e-15);
  const double i2 = quad::adaptive(s2, 0, 1, 1e-15, 1e-15);
  CHECK(rel_diff(B, Mat3::diag(std::exp(i0), std::exp(i1), std::exp(i2))) <= 1e-11);
}

TEST_CASE("random paths agree with a long double Runge-Kutta reference") {
  gen::Engine e(32);
  for (int i = 0; i < 20; ++i) {
    const MatrixPath path = gen::smooth_path(e, 0.0, 1.0);
    const Mat3 B = texp(path, kTol);
    const oracle::M3 ref = oracle::texp_rk4([&](double t) { return path(t); }, 0.0L, 1.0L, 4000);
    CHECK(oracle::diff_norm(B, ref) <= 1e-10 * std::max<long double>(1, ref.norm()));
  }
}

TEST_CASE("cocycle and Liouville properties on random paths") {
  gen::Engine e(33);
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    const double a = gen::uniform(e, -1.0, 0.0), b = a + gen::uniform(e, 0.2, 1.5);
    const double c = b + gen::uniform(e, 0.2, 1.5);
    const MatrixPath full = gen::smooth_path(e, a, c);
    const Mat3 Bac = texp(full, kTol);
    const Mat3 Bab = texp(restrict(full, a, b), kTol);
    const Mat3 Bbc = texp(restrict(full, b, c), kTol);
    CHECK(rel_diff(Bbc * Bab, Bac) <= 10 * kTol * std::max(1.0, norm_op(Bbc) * norm_op(Bab) / norm_op(Bac)));
    const double int_trace = quad::adaptive([&](double t) { return trace(full(t)); }, a, c, 1e-15, 1e-15);
    CHECK(std::abs(det(Bac) / std::exp(int_trace) - 1.0) <= 10 * kTol * std::pow(norm_op(Bac), 3) / std::abs(det(Bac)));
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("continuity bound") {
  gen::Engine e(34);
  SUBCASE("identical paths") {
    const MatrixPath p = gen::smooth_path(e, 0.0, 1.0);
    CHECK(texp_continuity_bound(p, p) == 0.0);
  }
  SUBCASE("commuting shift by eps I") {
    const Mat3 m0 = gen::matrix(e);
    const double eps = 1e-3;
    const MatrixPath p1 = MatrixPath::constant(0.0, 1.0, m0);
    const MatrixPath p2 = MatrixPath::constant(0.0, 1.0, m0 + eps * Mat3::identity());
    const double actual = norm_op(expm(m0) * (std::exp(eps) - 1.0));
    CHECK(norm_op(texp(p1, kTol) - texp(p2, kTol)) == doctest::Approx(actual).epsilon(1e-6));
    const double bound = texp_continuity_bound(p1, p2);
    CHECK(bound == doctest::Approx(std::exp(std::max(norm_op(m0), norm_op(m0 + eps * Mat3::identity()))) * eps)
                       .epsilon(1e-8));
    CHECK(actual <= bound);
  }
  SUBCASE("random pairs, no violations") {
    int violations = 0;
    for (int i = 0; i < 100; ++i) {
      const MatrixPath p1 = gen::smooth_path(e, 0.0, 1.0);
      const double eps = std::pow(10.0, gen::uniform(e, -6.0, 0.0));
      const Mat3 d = gen::matrix(e, eps);
      const double w = gen::uniform(e, 1.0, 10.0);
      const MatrixPath p2(0.0, 1.0, [=](double t) { return p1(t) + std::cos(w * t) * d; });
      const double gap = norm_op(texp(p1, kTol) - texp(p2, kTol));
      if (gap > texp_continuity_bound(p1, p2)) ++violations;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("path norms") {
  const Mat3 m = Mat3::diag(3.0, -1.0, 0.5);
  const MatrixPath p = MatrixPath::constant(0.0, 2.0, m);
  CHECK(p.l1_norm() == doctest::Approx(6.0).epsilon(1e-12));
  const MatrixPath z = MatrixPath::constant(0.0, 2.0, Mat3::zero());
  CHECK(l1_distance(p, z) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("contract and numeric errors") {
  const MatrixPath p1 = MatrixPath::constant(0.0, 1.0, Mat3::identity());
  const MatrixPath p2 = MatrixPath::constant(0.0, 2.0, Mat3::identity());
  try {
    texp_continuity_bound(p1, p2);
    FAIL("expected a contract error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::Contract);
  }
  CHECK_THROWS_AS(MatrixPath::constant(1.0, 1.0, Mat3::identity()), Error);

  gen::Engine e(35);
  const MatrixPath hard = gen::smooth_path(e, 0.0, 1.0, 20.0);
  TexpOptions opt;
  opt.max_level = 2;
  try {
    texp(hard, 1e-14, opt);
    FAIL("expected a numeric error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::Numeric);
  }
}
