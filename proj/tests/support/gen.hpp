#pragma once

// Hand-rolled generators for property tests. Every generator takes the engine explicitly so a
// failing case is reproduced from the seed printed by the test.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "dyadic/core.hpp"
#include "dyadic/linalg.hpp"
#include "dyadic/texp.hpp"

namespace gen {

using Engine = std::mt19937_64;

inline double uniform(Engine& e, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(e); }
inline int integer(Engine& e, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(e); }

/// Mixed magnitudes: mostly O(1), sometimes tiny or large, with random sign.
inline double scalar(Engine& e) {
  const double mag = std::pow(10.0, uniform(e, -3.0, 2.0));
  return (integer(e, 0, 1) ? 1.0 : -1.0) * mag;
}

inline dyadic::ShellVector shell_vector(Engine& e, int n, bool nonnegative = false) {
  dyadic::ShellVector u(n);
  for (int i = 0; i < n; ++i) u[i] = nonnegative ? std::abs(scalar(e)) : scalar(e);
  return u;
}

inline dyadic::Mat3 matrix(Engine& e, double scale = 1.0) {
  dyadic::Mat3 m;
  for (double& x : m.a) x = scale * uniform(e, -1.0, 1.0);
  return m;
}

/// Smooth random path M(t) = M0 + sin(w1 t) M1 + t^2 M2 on [a, b].
inline dyadic::MatrixPath smooth_path(Engine& e, double a, double b, double scale = 1.0) {
  const dyadic::Mat3 m0 = matrix(e, scale), m1 = matrix(e, scale), m2 = matrix(e, scale);
  const double w = uniform(e, 0.5, 6.0);
  return dyadic::MatrixPath(a, b, [=](double t) { return m0 + std::sin(w * t) * m1 + (t * t) * m2; });
}

}  // namespace gen
