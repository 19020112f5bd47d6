#include "dyadic/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "dyadic/error.hpp"

namespace dyadic {

Mat3 Mat3::identity() { return diag(1.0, 1.0, 1.0); }

Mat3 Mat3::diag(double d0, double d1, double d2) {
  Mat3 m;
  m(0, 0) = d0;
  m(1, 1) = d1;
  m(2, 2) = d2;
  return m;
}

Mat3 Mat3::from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    m(i, 0) = c0[i];
    m(i, 1) = c1[i];
    m(i, 2) = c2[i];
  }
  return m;
}

Mat3& Mat3::operator+=(const Mat3& o) {
  for (int k = 0; k < 9; ++k) a[k] += o.a[k];
  return *this;
}
Mat3& Mat3::operator-=(const Mat3& o) {
  for (int k = 0; k < 9; ++k) a[k] -= o.a[k];
  return *this;
}
Mat3& Mat3::operator*=(double s) {
  for (auto& x : a) x *= s;
  return *this;
}

Mat3 operator+(Mat3 x, const Mat3& y) { return x += y; }
Mat3 operator-(Mat3 x, const Mat3& y) { return x -= y; }
Mat3 operator*(Mat3 x, double s) { return x *= s; }
Mat3 operator*(double s, Mat3 x) { return x *= s; }

Mat3 operator*(const Mat3& x, const Mat3& y) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j) + x(i, 2) * y(2, j);
  return r;
}

Vec3 operator*(const Mat3& m, const Vec3& v) {
  return {m(0, 0) * v[0] + m(0, 1) * v[1] + m(0, 2) * v[2],
          m(1, 0) * v[0] + m(1, 1) * v[1] + m(1, 2) * v[2],
          m(2, 0) * v[0] + m(2, 1) * v[1] + m(2, 2) * v[2]};
}

CVec3 operator*(const Mat3& m, const CVec3& v) {
  CVec3 r;
  for (int i = 0; i < 3; ++i) r[i] = m(i, 0) * v[0] + m(i, 1) * v[1] + m(i, 2) * v[2];
  return r;
}

Mat3 transpose(const Mat3& m) {
  Mat3 t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = m(j, i);
  return t;
}

double trace(const Mat3& m) { return m(0, 0) + m(1, 1) + m(2, 2); }

double det(const Mat3& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

double norm_one(const Mat3& m) {
  double best = 0.0;
  for (int j = 0; j < 3; ++j)
    best = std::max(best, std::abs(m(0, j)) + std::abs(m(1, j)) + std::abs(m(2, j)));
  return best;
}

double norm_frobenius(const Mat3& m) {
  double s = 0.0;
  for (double x : m.a) s += x * x;
  return std::sqrt(s);
}

Vec3 symmetric_eigenvalues(const Mat3& s_in) {
  Mat3 s = s_in;
  for (int sweep = 0; sweep < 64; ++sweep) {
    const double off = s(0, 1) * s(0, 1) + s(0, 2) * s(0, 2) + s(1, 2) * s(1, 2);
    const double diag = s(0, 0) * s(0, 0) + s(1, 1) * s(1, 1) + s(2, 2) * s(2, 2);
    if (off <= 1e-34 * diag || off == 0.0) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        const double apq = s(p, q);
        if (apq == 0.0) continue;
        const double theta = (s(q, q) - s(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        // S <- J^T S J with the rotation acting on rows/cols p, q.
        for (int k = 0; k < 3; ++k) {
          const double skp = s(k, p), skq = s(k, q);
          s(k, p) = c * skp - sn * skq;
          s(k, q) = sn * skp + c * skq;
        }
        for (int k = 0; k < 3; ++k) {
          const double spk = s(p, k), sqk = s(q, k);
          s(p, k) = c * spk - sn * sqk;
          s(q, k) = sn * spk + c * sqk;
        }
      }
    }
  }
  Vec3 ev{s(0, 0), s(1, 1), s(2, 2)};
  std::sort(ev.begin(), ev.end());
  return ev;
}

double norm_op(const Mat3& m) {
  const double scale = std::max(norm_one(m), norm_one(transpose(m)));
  if (scale == 0.0) return 0.0;
  if (!std::isfinite(scale)) return scale;
  const Mat3 ms = m * (1.0 / scale);
  const Vec3 ev = symmetric_eigenvalues(transpose(ms) * ms);
  return scale * std::sqrt(std::max(ev[2], 0.0));
}

Mat3 solve(const Mat3& m, const Mat3& rhs) {
  Mat3 lu = m, x = rhs;
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(lu(r, col)) > std::abs(lu(piv, col))) piv = r;
    require(lu(piv, col) != 0.0 && std::isfinite(lu(piv, col)), ErrorKind::Numeric,
            "singular 3x3 system");
    if (piv != col) {
      for (int k = 0; k < 3; ++k) {
        std::swap(lu(piv, k), lu(col, k));
        std::swap(x(piv, k), x(col, k));
      }
    }
    for (int r = col + 1; r < 3; ++r) {
      const double f = lu(r, col) / lu(col, col);
      for (int k = col; k < 3; ++k) lu(r, k) -= f * lu(col, k);
      for (int k = 0; k < 3; ++k) x(r, k) -= f * x(col, k);
    }
  }
  for (int col = 2; col >= 0; --col) {
    for (int k = 0; k < 3; ++k) {
      double s = x(col, k);
      for (int j = col + 1; j < 3; ++j) s -= lu(col, j) * x(j, k);
      x(col, k) = s / lu(col, col);
    }
  }
  return x;
}

Mat3 inverse(const Mat3& m) { return solve(m, Mat3::identity()); }

Mat3 expm(const Mat3& m) {
  // Higham (2005): degree-13 Pade with theta_13; backward error below unit roundoff.
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;
  const double nrm = norm_one(m);
  require(std::isfinite(nrm), ErrorKind::Input, "expm: non-finite matrix");
  int s = 0;
  if (nrm > theta13) s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
  const Mat3 x = m * std::ldexp(1.0, -s);
  const Mat3 id = Mat3::identity();
  const Mat3 x2 = x * x, x4 = x2 * x2, x6 = x4 * x2;
  const Mat3 u = x * (x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2) + b[7] * x6 + b[5] * x4 +
                      b[3] * x2 + b[1] * id);
  const Mat3 v = x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2) + b[6] * x6 + b[4] * x4 + b[2] * x2 +
                 b[0] * id;
  Mat3 r = solve(v - u, v + u);
  for (int k = 0; k < s; ++k) r = r * r;
  return r;
}

double norm2(const Vec3& v) { return std::hypot(v[0], v[1], v[2]); }
double dot(const Vec3& x, const Vec3& y) { return x[0] * y[0] + x[1] * y[1] + x[2] * y[2]; }

Vec3 cross(const Vec3& x, const Vec3& y) {
  return {x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]};
}

CVec3 cross(const CVec3& x, const CVec3& y) {
  return {x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]};
}

}  // namespace dyadic
