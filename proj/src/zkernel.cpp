#include "robust_reserve/zkernel.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "robust_reserve/errors.hpp"

namespace robust_reserve {

double z(double y, int n) { return std::pow(y, n - 1) - std::pow(y, n - 2); }

double z_prime(double y, int n) {
  if (n == 2) return 1.0;
  return (n - 1) * std::pow(y, n - 2) - (n - 2) * std::pow(y, n - 3);
}

double z_step(double q, double h, int n) {
  if (n == 2) return h;
  if (q < 0.5 || q + h <= 0.0) return z(q + h, n) - z(q, n);
  // y^k - q^k = q^k expm1(k log(y/q)); the two expm1 terms share the factor
  // log(y/q), so their difference keeps most significant digits.
  const double log_ratio = std::log1p(h / q);
  return std::pow(q, n - 2) *
         (q * std::expm1((n - 1) * log_ratio) - std::expm1((n - 2) * log_ratio));
}

double q_star(int n) {
  const double d = n - 1;
  return 1.0 - 1.0 / (d * d);
}

double lambda_star(int n) { return n * (n - 1) * z(q_star(n), n); }

namespace {

GaussLegendreRule make_rule(int points) {
  // Boost returns the non-negative zeros of P_points on [-1, 1].
  const auto zeros = boost::math::legendre_p_zeros<double>(points);
  GaussLegendreRule rule;
  auto push = [&](double x) {
    const double dp = boost::math::legendre_p_prime(points, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes.push_back(0.5 * (x + 1.0));
    rule.weights.push_back(0.5 * w);
  };
  for (double x : zeros) {
    push(x);
    if (x != 0.0) push(-x);
  }
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int points) {
  if (points < 1) throw DomainError("bad_rule", "Gauss-Legendre rule needs at least one node");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[points];
  if (!slot) slot = std::make_unique<GaussLegendreRule>(make_rule(points));
  return *slot;
}

KernelTailMoments kernel_tail_moments(double q, double tail, int n) {
  const int degree = kernel_rule_degree(2 * n - 2, tail, n);
  auto d = [&](double t) { return z_step(q, tail * t, n); };
  KernelTailMoments out;
  out.mean = integrate_unit(degree, d);
  out.mean_square = integrate_unit(degree, [&](double t) {
    const double v = d(t);
    return v * v;
  });
  out.variance = integrate_unit(degree, [&](double t) {
    const double v = d(t) - out.mean;
    return v * v;
  });
  return out;
}

}  // namespace robust_reserve
