#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "dyadic/error.hpp"
#include "dyadic/spectral.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace dyadic;

namespace {

Params P(double lambda = 2.0, double beta = 2.5) {
  Params p;
  p.lambda = lambda;
  p.beta = beta;
  return p;
}

bool rel_close(double x, double ref, double tol) { return std::abs(x - ref) <= tol * std::abs(ref); }

}  // namespace

TEST_CASE("characteristic polynomial at 1 is one half") {
  gen::Engine e(21);
  for (int i = 0; i < 200; ++i) {
    const Params p = P(gen::uniform(e, 1.05, 4.0), gen::uniform(e, 0.2, 3.5));
    CHECK(std::abs(char_poly_A0(1.0, p) - 0.5) <= 1e-15 * std::max(1.0, 4.0 * std::pow(p.lambda, 2 * p.beta)));
  }
  CHECK(char_poly_A0(1.0, P()) == 0.5);
}

TEST_CASE("characteristic polynomial closed values") {
  // chi(3/4) = 15/64 - lambda^{2 beta} / 2 with lambda^{2 beta} = 32.
  CHECK(char_poly_A0(0.75, P()) == doctest::Approx(15.0 / 64.0 - 0.5 * 32.0).epsilon(1e-15));
  CHECK(char_poly_A0(0.75, P()) == doctest::Approx(-15.765625).epsilon(1e-15));
  CHECK(char_poly_A0(0.75, P()) < 0.0);
  CHECK(char_poly_A0(0.0, P()) == doctest::Approx(-64.0).epsilon(1e-15));
}

TEST_CASE("characteristic polynomial is increasing") {
  gen::Engine e(22);
  for (int i = 0; i < 100; ++i) {
    const Params p = P(gen::uniform(e, 1.05, 4.0), gen::uniform(e, 0.2, 3.5));
    CHECK(char_poly_A0_derivative(gen::uniform(e, -5.0, 5.0), p) > 0.0);
  }
}

TEST_CASE("spectrum of A0 at lambda 2, beta 5/2") {
  const Params p = P();
  const EigenBasis b = eig_A0(p);
  CHECK(b.kappa > 0.75);
  CHECK(b.kappa < 1.0);
  CHECK(b.w.real() > 0.0);
  CHECK(b.w.real() < 0.125);
  CHECK(b.w.imag() > 0.0);
  CHECK(std::abs(b.kappa + 2.0 * b.w.real() - 1.0) <= 1e-12);

  const long double k_bis = oracle::bisect([&](long double a) {
    const long double l2b = std::pow(2.0L, 5.0L);
    return a * a * a - a * a + (0.5L + 2 * l2b) * a - 2 * l2b;
  }, 0.75L, 1.0L);
  CHECK(std::abs(b.kappa - static_cast<double>(k_bis)) <= 1e-12);
  // 50-digit bisection, tests/oracles/derive.py
  CHECK(std::abs(b.kappa - 0.99236463889547378) <= 1e-12);
  CHECK(std::abs(b.w.real() - 3.8176805522631093e-3) <= 1e-12);
  CHECK(std::abs(b.w.imag() - 8.030716553518115) <= 1e-11);
  CHECK(eigen_residual(matrix_A0(p), b) <= 1e-12);
  CHECK(b.v1[0] == 1.0);
  CHECK(b.v2[0] == 1.0);
  CHECK(b.v3[0] == 0.0);
}

TEST_CASE("eig_A0 matches an extended precision eigensolver") {
  gen::Engine e(23);
  for (int i = 0; i < 50; ++i) {
    const Params p = P(gen::uniform(e, 1.2, 3.0), gen::uniform(e, 2.0, 3.0));
    const EigenBasis b = eig_A0(p);
    const oracle::Spectrum s = oracle::spectrum(matrix_A0(p));
    CHECK(std::abs(b.kappa - static_cast<double>(s.kappa)) <= 1e-12);
    CHECK(std::abs(b.w - std::complex<double>(s.w)) <= 1e-10 * std::abs(s.w));
    for (int r = 0; r < 3; ++r) {
      CHECK(std::abs(b.v1[r] - static_cast<double>(s.v1(r))) <= 1e-9 * (1 + std::abs(s.v1(r))));
      CHECK(std::abs(b.v2[r] - static_cast<double>(s.v2(r))) <= 1e-9 * (1 + std::abs(s.v2(r))));
      CHECK(std::abs(b.v3[r] - static_cast<double>(s.v3(r))) <= 1e-9 * (1 + std::abs(s.v3(r))));
    }
  }
}

TEST_CASE("matrix A") {
  const Params p = P();
  CHECK(matrix_A(10.0, p)(0, 0) == doctest::Approx(0.975).epsilon(1e-15));
  const Mat3 a1 = matrix_A(1.0, p);
  const double frozen[9] = {0.75, -0.5, 0.0, 1.0, -1.0, 5.6568542494923802, 0.0, -11.31370849898476, -4.0};
  for (int i = 0; i < 9; ++i) CHECK(a1.a[i] == doctest::Approx(frozen[i]).epsilon(1e-15));
  CHECK(norm_op(matrix_A(1e6, p) - matrix_A0(p)) <= 1e-5);
  CHECK_THROWS_AS(matrix_A(0.0, p), Error);
  try {
    matrix_A(-1.0, p);
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::Domain);
  }
}

TEST_CASE("A(q) approaches A0 spectrally") {
  const Params p = P();
  const PlateauBounds c = eig_A(1e6, p);
  CHECK(std::abs(c.basis.kappa - c.basis0.kappa) <= 1e-5);
  CHECK(std::abs(c.basis.w - c.basis0.w) <= 1e-5);
}

TEST_CASE("bounds at q = 50 agree with the 50-digit oracle") {
  const Params p = P();
  const SpectralReport r = evaluate_q(50.0, p, p.lambda_beta());
  CHECK(r.passed());
  for (const auto& [name, ok] : r.flags.items()) {
    INFO(name);
    CHECK(ok);
  }
  CHECK(rel_close(r.basis.kappa, 0.98680316128845155, 1e-12));
  CHECK(rel_close(r.basis.w.real(), -4.5901580644225776e-2, 1e-9));
  CHECK(rel_close(r.basis.w.imag(), 8.0306030094053385, 1e-12));
  CHECK(rel_close(r.mu, 80.114980003447973, 1e-10));
  CHECK(r.nu == 0.5);
  CHECK(rel_close(r.k, 2.6801455735801318e21, 1e-11));
  CHECK(rel_close(r.a, 8.351162861845047e-2, 1e-8));
  CHECK(rel_close(r.b, -5.6365428943565476e-2, 1e-8));
  CHECK(rel_close(r.U, 372.26538316138528, 1e-10));
  CHECK(rel_close(r.V, 8.8236283860873681e21, 1e-10));
  CHECK(rel_close(r.W, 3.9068888435567007e21, 1e-10));
  CHECK(rel_close(r.rho1, -2.3702521870700317e19, 1e-10));
  CHECK(rel_close(r.rho2, -0.44277576894748616, 1e-8));
  CHECK(r.re_w_positive == false);
}

TEST_CASE("bounds at q = 50 agree with the long double eigensolver") {
  const Params p = P();
  const PlateauBounds c = eig_A(50.0, p);
  const oracle::Spectrum s = oracle::spectrum(matrix_A(50.0, p));
  CHECK(std::abs(c.basis.kappa - static_cast<double>(s.kappa)) <= 1e-13);
  CHECK(std::abs(c.basis.w - std::complex<double>(s.w)) <= 1e-12 * std::abs(s.w));
  CHECK(eigen_residual(matrix_A(50.0, p), c.basis) <= 1e-12);
}

TEST_CASE("nu inequality at every passing q") {
  const Params p = P();
  int passing = 0;
  for (int j = 0; j <= 30; ++j) {
    const double q = std::pow(1.25, j);
    const PlateauBounds c = eig_A(q, p);
    if (!c.flags.all()) continue;
    ++passing;
    CHECK(c.basis.v3[2] - c.basis.v1[1] * c.basis.v3[1] >= c.nu);
  }
  CHECK(passing > 0);
}

TEST_CASE("Re w is below 1/8 and only positive for very large q") {
  const Params p = P();
  const PlateauBounds big = eig_A(1000.0, p);
  CHECK(big.re_w_positive);
  CHECK(big.basis.w.real() > 0.0);
  CHECK(big.basis.w.real() < 0.125);
  // Exact identity kappa + 2 Re w = trace A = 1 - (lambda^-2 + 1 + lambda^2) / q.
  for (double q : {10.0, 44.0, 1000.0}) {
    const PlateauBounds c = eig_A(q, p);
    CHECK(std::abs(c.basis.kappa + 2 * c.basis.w.real() - (1.0 - 5.25 / q)) <= 1e-12);
  }
}

TEST_CASE("Vieta relation for the rho quadratic") {
  gen::Engine e(24);
  const Params p = P();
  for (int i = 0; i < 100; ++i) {
    const double q = gen::uniform(e, 5.0, 60.0);
    const PlateauBounds c = eig_A(q, p);
    const double k = std::exp(q * c.basis.kappa);
    const auto ab = std::exp(q * c.basis.w);
    const RhoQuadratic r = rho_quadratic(c.basis, k, ab.real(), ab.imag());
    if (!r.real_roots()) continue;
    CHECK(rel_close(std::abs(r.rho1 + r.rho2), std::abs(r.V) / std::abs(r.U), 1e-10));
    CHECK(rel_close(r.rho1 * r.rho2, r.W / r.U, 1e-10));
    CHECK(std::abs(r.rho1) >= std::abs(r.rho2));
  }
}

TEST_CASE("symmetric case k = a, b = 0 has V = 0") {
  const EigenBasis b = eig_A0(P());
  const RhoQuadratic r = rho_quadratic(b, 1.0, 1.0, 0.0);
  CHECK(r.V == 0.0);
  if (r.real_roots()) {
    const double root = std::sqrt(-r.W / r.U);
    CHECK(std::abs(std::abs(r.rho1) - root) <= 1e-12 * root);
    CHECK(std::abs(r.rho1 + r.rho2) <= 1e-12 * root);
  } else {
    // Here W = y3 - y3 = 0 as well: a double root at zero, reported as degenerate.
    CHECK(r.W / r.U >= 0.0);
    CHECK(r.discriminant <= 0.0);
    CHECK(std::isnan(r.rho1));
  }
}

TEST_CASE("search at lambda 2, beta 5/2 with R = lambda^beta") {
  const Params p = P();
  const SpectralReport r = find_q(p, p.lambda_beta());
  CHECK(r.passed());
  CHECK(std::abs(r.rho) > p.lambda_beta());
  CHECK(r.k > std::exp(0.75 * r.q));
  // The 50-digit search selects 1.25^17 with these roots.
  CHECK(r.q == doctest::Approx(std::pow(1.25, 17)).epsilon(1e-15));
  CHECK(rel_close(r.rho1, -9.3085261990676273e16, 1e-9));
  CHECK(rel_close(r.rho2, -8.9518560084470987e-2, 1e-7));
  CHECK(r.rho == r.rho1);
  CHECK(r.q0 > 0.0);
  CHECK(r.q0 <= r.q);
  CHECK(r.block_residual <= 1e-12);
  CHECK(r.y * r.y + r.z * r.z == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.y >= 0.0);
}

TEST_CASE("B = exp(qA) matches the extended precision exponential") {
  const Params p = P();
  for (double q : {1.0, 7.0, 20.0, 44.0}) {
    const PlateauBounds c = eig_A(q, p);
    const Mat3 B = exp_qA(q, p, c.basis);
    const oracle::M3 ref = oracle::expm(oracle::to_ld(matrix_A(q, p) * q));
    CHECK(oracle::diff_norm(B, ref) <= 1e-12 * ref.jacobiSvd().singularValues()(0));
  }
}

TEST_CASE("eigenbasis form of B keeps v1 as eigenvector") {
  const Params p = P();
  const double q = 710.0;
  const PlateauBounds c = eig_A(q, p);
  const Mat3 B = exp_qA(q, p, c.basis);
  const Vec3 Bv = B * c.basis.v1;
  const double k = std::exp(q * c.basis.kappa);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(Bv[i] - k * c.basis.v1[i]) <= 1e-10 * k * norm2(c.basis.v1));
}

TEST_CASE("search failure names the failing flag") {
  const Params p = P();
  SearchOptions opt;
  opt.q_cap = 2.0;
  try {
    find_q(p, p.lambda_beta(), opt);
    FAIL("expected a search error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::Search);
    CHECK(std::string(err.what()).find("q=1:") != std::string::npos);
  }
}

TEST_CASE("fixed small q reports failures without throwing") {
  const Params p = P();
  SpectralReport r;
  CHECK_NOTHROW(r = evaluate_q(3.0, p, p.lambda_beta()));
  CHECK_FALSE(r.passed());
  CHECK_FALSE(r.flags.first_failure().empty());
}

TEST_CASE("degenerate spectra are numeric errors") {
  try {
    eig_real_complex(Mat3::diag(1.0, 2.0, 3.0));
    FAIL("expected a numeric error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::Numeric);
  }
}

TEST_CASE("block eigenvector and root selection") {
  gen::Engine e(25);
  for (int i = 0; i < 100; ++i) {
    Mat3 B = gen::matrix(e, 3.0);
    const auto bt = endpoint_block(B);
    const double tr = bt[0] + bt[3], dt = bt[0] * bt[3] - bt[1] * bt[2];
    const double disc = tr * tr - 4 * dt;
    if (disc <= 1e-6) continue;
    const double rho = 0.5 * (tr + std::sqrt(disc));
    const auto [y, z] = block_eigenvector(B, rho);
    CHECK(y * y + z * z == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(bt[0] * y + bt[1] * z - rho * y) <= 1e-10 * (1 + std::abs(rho)));
    CHECK(std::abs(bt[2] * y + bt[3] * z - rho * z) <= 1e-10 * (1 + std::abs(rho)));
  }
  CHECK(select_rho(-3.0, 2.0) == -3.0);
  CHECK(select_rho(2.0, -2.0) == 2.0);
}
