#pragma once

// The order-statistic kernel z(y) = y^(n-1) - y^(n-2) shared by both
// constraint settings, and exact integration of polynomials in y.

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace robust_reserve {

double z(double y, int n);
double z_prime(double y, int n);

/// z(q + h) - z(q), evaluated without cancellation for q close to 1.
double z_step(double q, double h, int n);

inline double z_diff(double y, double q, int n) { return z_step(q, y - q, n); }

/// Cdf level minimising the average-cost curve: 1 - 1/(n-1)^2.
double q_star(int n);

/// n(n-1) z(q_star(n)), the minimum of the average-cost curve.
double lambda_star(int n);

/// Gauss-Legendre rule on [0, 1]. A rule with k nodes integrates polynomials
/// of degree <= 2k - 1 exactly.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule with `points` nodes; safe to call concurrently.
const GaussLegendreRule& gauss_legendre(int points);

/// Integrates f over [0, 1] with a rule exact for polynomials of `degree`.
template <class F>
double integrate_unit(int degree, F&& f) {
  const auto& rule = gauss_legendre(degree / 2 + 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
  return sum;
}

/// Polynomial degree to request from integrate_unit for integrands built
/// from z(q + tail t) and powers of q + tail t up to y^(n-1). When
/// (n - 1) tail <= 1 these are within rounding of low-degree polynomials in t
/// and a 64-node rule already integrates them to machine precision.
inline int kernel_rule_degree(int degree, double tail, int n) {
  return (n - 1) * tail <= 1.0 ? std::min(degree, 127) : degree;
}

/// Moments of D(t) = z(q + (1-q) t) - z(q) for t uniform on [0, 1]:
/// `mean` = E D, `mean_square` = E D^2, `variance` = Var D (computed two-pass).
struct KernelTailMoments {
  double mean = 0.0;
  double mean_square = 0.0;
  double variance = 0.0;
};

/// `tail` is 1 - q, passed separately so that it keeps full precision when
/// q rounds to 1 in double.
KernelTailMoments kernel_tail_moments(double q, double tail, int n);

}  // namespace robust_reserve
