#pragma once

#include <functional>
#include <span>
#include <vector>

namespace dyadic::quad {

struct Rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n). Cached per n; thread-safe.
const Rule& gauss_legendre(int n);

/// Composite Gauss-Legendre: [a, b] split into `panels` equal pieces, `order` nodes each.
double composite_gauss(const std::function<double(double)>& f, double a, double b, int panels,
                       int order = 10);

/// Adaptive Gauss-Kronrod (7/15) with an absolute/relative tolerance. Interior breakpoints
/// are honoured so that kinks in the integrand never sit inside a panel.
double adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                double rel_tol, std::span<const double> breakpoints = {});

/// Trapezoid rule on a sampled function.
double trapezoid(std::span<const double> x, std::span<const double> y);

/// Running trapezoid integral: out[i] = integral from x[0] to x[i].
std::vector<double> cumulative_trapezoid(std::span<const double> x, std::span<const double> y);

}  // namespace dyadic::quad
