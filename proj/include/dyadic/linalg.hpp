#pragma once

// Fixed-size 3x3 linear algebra for the coefficient matrices of the
// three-equation system. Nothing here allocates.

#include <array>
#include <complex>

namespace dyadic {

using Vec3 = std::array<double, 3>;
using CVec3 = std::array<std::complex<double>, 3>;

struct Mat3 {
  std::array<double, 9> a{};  // row major

  double& operator()(int i, int j) { return a[3 * i + j]; }
  double operator()(int i, int j) const { return a[3 * i + j]; }

  static Mat3 zero() { return Mat3{}; }
  static Mat3 identity();
  static Mat3 diag(double d0, double d1, double d2);
  static Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2);

  Mat3& operator+=(const Mat3& o);
  Mat3& operator-=(const Mat3& o);
  Mat3& operator*=(double s);
};

Mat3 operator+(Mat3 x, const Mat3& y);
Mat3 operator-(Mat3 x, const Mat3& y);
Mat3 operator*(Mat3 x, double s);
Mat3 operator*(double s, Mat3 x);
Mat3 operator*(const Mat3& x, const Mat3& y);
Vec3 operator*(const Mat3& m, const Vec3& v);
CVec3 operator*(const Mat3& m, const CVec3& v);

Mat3 transpose(const Mat3& m);
double trace(const Mat3& m);
double det(const Mat3& m);
double norm_one(const Mat3& m);
double norm_frobenius(const Mat3& m);

/// Spectral (operator 2-) norm: square root of the largest eigenvalue of m^T m.
double norm_op(const Mat3& m);

/// Eigenvalues of a symmetric matrix, ascending (cyclic Jacobi).
Vec3 symmetric_eigenvalues(const Mat3& s);

/// Solves m x = rhs column-wise by LU with partial pivoting. Throws Numeric on singular m.
Mat3 solve(const Mat3& m, const Mat3& rhs);
Mat3 inverse(const Mat3& m);

/// exp(m) by scaling and squaring with the degree-13 Pade approximant.
Mat3 expm(const Mat3& m);

double norm2(const Vec3& v);
double dot(const Vec3& x, const Vec3& y);
Vec3 cross(const Vec3& x, const Vec3& y);
CVec3 cross(const CVec3& x, const CVec3& y);

}  // namespace dyadic
