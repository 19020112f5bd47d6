#pragma once

// Constant-coefficient analysis of the three-equation system: the limit matrix
// A0, its finite-q perturbation A, the propagator B = exp(qA), and the 2x2
// endpoint block whose eigenvalue rho drives the decay of the cascade.

#include <complex>
#include <vector>

#include "dyadic/flags.hpp"
#include "dyadic/linalg.hpp"
#include "dyadic/params.hpp"

namespace dyadic {

/// Real eigenvalue kappa with eigenvector v1, complex pair w, conj(w) with
/// eigenvectors v2 +- i v3. Normalized so that v1[0] = v2[0] = 1 and v3[0] = 0.
struct EigenBasis {
  double kappa = 0.0;
  std::complex<double> w;
  Vec3 v1{}, v2{}, v3{};

  Mat3 columns() const { return Mat3::from_columns(v1, v2, v3); }
};

/// chi(alpha) = alpha^3 - alpha^2 + (1/2 + 2 lambda^{2 beta}) alpha - 2 lambda^{2 beta}.
double char_poly_A0(double alpha, const Params& p);
double char_poly_A0_derivative(double alpha, const Params& p);

Mat3 matrix_A0(const Params& p);

/// Spectrum of A0: kappa by safeguarded Newton on (3/4, 1), the pair from Vieta,
/// and the closed-form eigenvectors.
EigenBasis eig_A0(const Params& p);

/// A(q) = A0 + O(1/q). Throws Domain for q <= 0.
Mat3 matrix_A(double q, const Params& p);

/// Eigen-decomposition of a real 3x3 matrix with one real eigenvalue and a
/// complex pair. Throws Numeric when the spectrum is real or degenerate.
EigenBasis eig_real_complex(const Mat3& m);

/// Largest residual |m v - lambda v| / |v| over the three eigenpairs of `basis`.
double eigen_residual(const Mat3& m, const EigenBasis& basis);

struct PlateauBounds {
  EigenBasis basis;   // of A(q)
  EigenBasis basis0;  // of A0
  double mu = 0.0;    // 2 (|v1^0| + |v2^0| + |v3^0|)
  double nu = 0.0;    // min(z3^0/2 - y1^0 y3^0 / 4, 1/2)
  Flags flags;        // the simple-spectrum and half-bound inequalities
  bool re_w_positive = false;  // informational: holds only for very large q
};

/// Eigen-data of A(q) with every perturbation inequality for large q evaluated.
/// Failing bounds are reported in `flags`; only a degenerate spectrum throws.
PlateauBounds eig_A(double q, const Params& p);

/// B = exp(qA): Pade scaling and squaring, or the eigenbasis form once q*kappa > 700.
Mat3 exp_qA(double q, const Params& p, const EigenBasis& basis);

struct RhoQuadratic {
  double U = 0.0, V = 0.0, W = 0.0;
  double discriminant = 0.0;
  double rho1 = 0.0, rho2 = 0.0;  // decreasing |rho|; NaN when the discriminant is negative
  bool real_roots() const { return discriminant > 0.0; }
};

/// Coefficients of U rho^2 + V rho + W whose roots are the eigenvalues of the endpoint block.
/// Throws Numeric when det(v1, v2, v3) vanishes.
RhoQuadratic rho_quadratic(const EigenBasis& basis, double k, double a, double b);

/// Selects the root with larger |rho| (ties toward positive rho).
double select_rho(double rho1, double rho2);

/// Eigenvector (y, z) of the upper-right 2x2 block of B for eigenvalue rho,
/// normalized to y^2 + z^2 = 1 with y >= 0 (z > 0 when y = 0).
std::pair<double, double> block_eigenvector(const Mat3& B, double rho);

/// The 2x2 block [[b12, b13], [b22, b23]] in 1-based indexing.
std::array<double, 4> endpoint_block(const Mat3& B);

struct SpectralReport {
  double q = 0.0;
  double q0 = 0.0;  // first grid point where the large-q bounds hold (search only)
  double R = 0.0;
  double lambda = 0.0, beta = 0.0;
  EigenBasis basis, basis0;
  double mu = 0.0, nu = 0.0;
  double k = 0.0, a = 0.0, b = 0.0;
  double omega = 0.0;        // exp(-5q/8)
  double omega_limit = 0.0;  // nu^2 / (100 mu^4)
  double U = 0.0, V = 0.0, W = 0.0, discriminant = 0.0;
  double rho1 = 0.0, rho2 = 0.0, rho = 0.0;
  double y = 0.0, z = 0.0;
  Mat3 B;
  double eigen_residual = 0.0;
  double block_residual = 0.0;  // |Bt (y,z) - rho (y,z)| / |rho|
  Flags flags;
  bool re_w_positive = false;  // informational, not part of passed()

  bool passed() const { return flags.all(); }
};

/// Evaluates every inequality at a fixed q. Never throws for failing bounds.
SpectralReport evaluate_q(double q, const Params& p, double R);

struct SearchOptions {
  double q_start = 1.0;
  double growth = 1.25;
  double q_cap = 2000.0;
};

/// Smallest q on the grid q_start * growth^j whose report passes every flag.
/// Throws Search (with the first failing flag per candidate) when none does.
SpectralReport find_q(const Params& p, double R, const SearchOptions& opt = {});

}  // namespace dyadic
