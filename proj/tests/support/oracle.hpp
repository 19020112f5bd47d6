#pragma once

// Reference computations in long double through Eigen, sharing no code with the library.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <functional>

#include "dyadic/linalg.hpp"

namespace oracle {

using LD = long double;
using M3 = Eigen::Matrix<LD, 3, 3>;
using V3 = Eigen::Matrix<LD, 3, 1>;

inline M3 to_ld(const dyadic::Mat3& m) {
  M3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = m(i, j);
  return r;
}

inline LD diff_norm(const dyadic::Mat3& a, const M3& b) {
  return (to_ld(a) - b).jacobiSvd().singularValues()(0);
}

inline M3 expm(const M3& m) { return m.exp(); }

/// Classical RK4 for the matrix ODE X' = M(t) X, X(a) = I, with `steps` equal steps.
inline M3 texp_rk4(const std::function<dyadic::Mat3(double)>& path, LD a, LD b, int steps) {
  M3 x = M3::Identity();
  const LD h = (b - a) / steps;
  for (int i = 0; i < steps; ++i) {
    const LD t = a + h * i;
    const M3 m0 = to_ld(path(static_cast<double>(t)));
    const M3 mh = to_ld(path(static_cast<double>(t + h / 2)));
    const M3 m1 = to_ld(path(static_cast<double>(t + h)));
    const M3 k1 = m0 * x;
    const M3 k2 = mh * (x + h / 2 * k1);
    const M3 k3 = mh * (x + h / 2 * k2);
    const M3 k4 = m1 * (x + h * k3);
    x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return x;
}

struct Spectrum {
  LD kappa;
  std::complex<LD> w;
  V3 v1, v2, v3;  // v1[0] = v2[0] = 1, v3[0] = 0
};

/// Eigen-decomposition with one real eigenvalue and a complex pair, normalized by first components.
inline Spectrum spectrum(const dyadic::Mat3& m) {
  Eigen::EigenSolver<M3> es(to_ld(m));
  Spectrum s{};
  for (int i = 0; i < 3; ++i) {
    const auto ev = es.eigenvalues()(i);
    const auto vec = es.eigenvectors().col(i);
    if (std::abs(ev.imag()) < 1e-14L * std::abs(ev)) {
      s.kappa = ev.real();
      for (int r = 0; r < 3; ++r) s.v1(r) = (vec(r) / vec(0)).real();
    } else if (ev.imag() > 0) {
      s.w = ev;
      for (int r = 0; r < 3; ++r) {
        const auto c = vec(r) / vec(0);
        s.v2(r) = c.real();
        s.v3(r) = c.imag();
      }
    }
  }
  return s;
}

/// Root of a strictly increasing function on [lo, hi] by plain bisection.
inline LD bisect(const std::function<LD(LD)>& f, LD lo, LD hi, int iters = 200) {
  for (int i = 0; i < iters; ++i) {
    const LD mid = (lo + hi) / 2;
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

}  // namespace oracle
