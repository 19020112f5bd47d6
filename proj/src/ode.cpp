#include "dyadic/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dyadic/error.hpp"

namespace dyadic::ode {

double error_norm(std::span<const double> err, std::span<const double> y0, std::span<const double> y1,
                  double rtol, double atol) {
  double s = 0.0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sc;
    s += r * r;
  }
  return std::sqrt(s / static_cast<double>(err.size()));
}

std::vector<Node> integrate(const Rhs& f, double t0, double t1, std::span<const double> y0,
                            const Options& opt, std::span<const double> stops) {
  using DP = DormandPrince;
  require(t1 > t0, ErrorKind::Contract, "ode::integrate: need t1 > t0");
  const std::size_t n = y0.size();
  std::vector<double> targets;
  for (double s : stops)
    if (s > t0 && s < t1) targets.push_back(s);
  std::sort(targets.begin(), targets.end());
  targets.push_back(t1);

  std::vector<Node> nodes;
  std::vector<double> y(y0.begin(), y0.end()), dy(n);
  f(t0, y, dy);
  nodes.push_back({t0, y, dy});

  std::vector<std::vector<double>> k(DP::stages, std::vector<double>(n));
  std::vector<double> ytmp(n), ynew(n), err(n);

  double h = opt.h_init;
  if (h <= 0.0) {
    double ny = 0.0, nd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ny = std::max(ny, std::abs(y[i]));
      nd = std::max(nd, std::abs(dy[i]));
    }
    h = nd > 0.0 ? 0.01 * std::max(ny, opt.atol) / nd : 1e-3 * (t1 - t0);
    h = std::min(h, 1e-2 * (t1 - t0));
  }
  if (opt.h_max > 0.0) h = std::min(h, opt.h_max);

  double t = t0;
  std::size_t target = 0;
  long steps = 0;
  k[0] = dy;
  while (t < t1) {
    require(++steps <= opt.max_steps, ErrorKind::Numeric, "ode::integrate: step limit reached");
    const double goal = targets[target];
    bool landing = false;
    const double h_free = h;
    if (t + h >= goal || goal - (t + h) < 1e-12 * (goal - t0)) {
      h = goal - t;
      landing = true;
    }
    for (int s = 1; s < DP::stages; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j) acc += DP::a[s][j] * k[j][i];
        ytmp[i] = y[i] + h * acc;
      }
      f(t + DP::c[s] * h, ytmp, k[s]);
    }
    // Stage 7 is evaluated at y_{n+1} (FSAL), so ytmp already holds the new state.
    ynew = ytmp;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int s = 0; s < DP::stages; ++s) acc += DP::e[s] * k[s][i];
      err[i] = h * acc;
    }
    const double en = error_norm(err, y, ynew, opt.rtol, opt.atol);
    if (!std::isfinite(en)) {
      h *= 0.25;
      require(h > 1e-15 * (t1 - t0), ErrorKind::Numeric, "ode::integrate: non-finite state");
      continue;
    }
    if (en <= 1.0) {
      t = landing ? goal : t + h;
      y = ynew;
      k[0] = k[DP::stages - 1];
      nodes.push_back({t, y, k[0]});
      if (landing) ++target;
    }
    const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
    // A step shortened only to hit a stop must not shrink the next one.
    if (landing && en <= 1.0) h = std::max(h * fac, h_free);
    else h *= en <= 1.0 ? fac : std::min(fac, 1.0);
    if (opt.h_max > 0.0) h = std::min(h, opt.h_max);
    if (h < 1e-14 * std::max(std::abs(t), t1 - t0)) {
      std::ostringstream msg;
      msg << "ode::integrate: step size underflow at t = " << t;
      fail(ErrorKind::Numeric, msg.str());
    }
  }
  return nodes;
}

Hermite5 hermite5(double s, double h, double y0, double d0, double dd0, double y1, double d1, double dd1) {
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  const double h0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
  const double h1 = s - 6 * s3 + 8 * s4 - 3 * s5;
  const double h2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
  const double h3 = 0.5 * s3 - s4 + 0.5 * s5;
  const double h4 = -4 * s3 + 7 * s4 - 3 * s5;
  const double h5 = 10 * s3 - 15 * s4 + 6 * s5;
  const double g0 = -30 * s2 + 60 * s3 - 30 * s4;
  const double g1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
  const double g2 = s - 4.5 * s2 + 6 * s3 - 2.5 * s4;
  const double g3 = 1.5 * s2 - 4 * s3 + 2.5 * s4;
  const double g4 = -12 * s2 + 28 * s3 - 15 * s4;
  const double g5 = 30 * s2 - 60 * s3 + 30 * s4;
  Hermite5 r;
  r.value = h0 * y0 + h * h1 * d0 + h * h * h2 * dd0 + h5 * y1 + h * h4 * d1 + h * h * h3 * dd1;
  r.deriv = (g0 * y0 + g5 * y1) / h + g1 * d0 + g4 * d1 + h * (g2 * dd0 + g3 * dd1);
  return r;
}

}  // namespace dyadic::ode
