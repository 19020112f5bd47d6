#pragma once

// Dormand-Prince 5(4) tableau and an adaptive driver that keeps every accepted
// step, plus quintic Hermite interpolation for dense output.

#include <functional>
#include <span>
#include <vector>

namespace dyadic::ode {

struct DormandPrince {
  static constexpr int stages = 7;
  static constexpr double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static constexpr double b[7] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0};
  // b - bhat: weights of the embedded error estimate.
  static constexpr double e[7] = {35.0 / 384 - 5179.0 / 57600,  0.0,
                                  500.0 / 1113 - 7571.0 / 16695, 125.0 / 192 - 393.0 / 640,
                                  -2187.0 / 6784 + 92097.0 / 339200, 11.0 / 84 - 187.0 / 2100,
                                  -1.0 / 40};
};

struct Options {
  double rtol = 1e-10;
  double atol = 1e-14;
  double h_init = 0.0;  // 0: pick from the initial slope
  double h_max = 0.0;   // 0: unlimited
  long max_steps = 10'000'000;
};

struct Node {
  double t;
  std::vector<double> y, dy;
};

using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dy)>;

/// Adaptive DP5 from t0 to t1; lands exactly on every `stops` point inside (t0, t1).
/// Returns all accepted nodes including both ends. Throws Numeric on step underflow.
std::vector<Node> integrate(const Rhs& f, double t0, double t1, std::span<const double> y0,
                            const Options& opt, std::span<const double> stops = {});

/// Scaled RMS error norm used for step acceptance.
double error_norm(std::span<const double> err, std::span<const double> y0, std::span<const double> y1,
                  double rtol, double atol);

/// Quintic Hermite interpolation on [t0, t0 + h] from values, first and second derivatives.
struct Hermite5 {
  double value, deriv;
};
Hermite5 hermite5(double s, double h, double y0, double d0, double dd0, double y1, double d1, double dd1);

}  // namespace dyadic::ode
