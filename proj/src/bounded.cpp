#include "robust_reserve/bounded.hpp"

#include <algorithm>
#include <cmath>

#include "robust_reserve/asymptotics.hpp"
#include "robust_reserve/errors.hpp"
#include "robust_reserve/revenue.hpp"
#include "robust_reserve/zkernel.hpp"
#include "roots.hpp"

namespace robust_reserve {

std::vector<double> supply_curve(double lambda, int n) {
  if (n < 2) throw DomainError("invalid_bidders", "need at least two bidders");
  const double ls = lambda_star(n);
  if (std::abs(lambda - ls) <= 1e-12) return {0.0, q_star(n)};
  if (lambda < ls) return {0.0};
  if (lambda >= 0.0) return {1.0};
  // n(n-1) z(y) increases from lambda* to 0 on [q*, 1].
  const double k = n * (n - 1.0);
  auto f = [&](double y) { return k * z(y, n) - lambda; };
  return {detail::bisect_root(f, q_star(n), 1.0, 1e-12)};
}

double v_min_star(const AuctionSetting& setting) {
  const auto& b = setting.bounded_values();
  const int n = setting.bidders;
  if (n == 2) return 0.0;
  const double d = (n - 1.0) * (n - 1.0) - 1.0;
  return std::max(b.mean - (b.vmax - b.mean) / d, 0.0);
}

Distribution mean_preserving_binary(double low, double high, double mean) {
  return Distribution::binary(low, high, (high - mean) / (high - low));
}

Distribution worst_case_bounded(const AuctionSetting& setting) {
  setting.validate();
  const auto& b = setting.bounded_values();
  return mean_preserving_binary(std::max(v_min_star(setting), setting.cost), b.vmax, b.mean);
}

Threat threat_bounded(double r, const AuctionSetting& setting) {
  if (!(r >= 0.0)) throw DomainError("negative_reserve", "reserve price must be non-negative");
  setting.validate();
  const auto& b = setting.bounded_values();
  const double vs = v_min_star(setting);
  const double c = setting.cost;
  if (r >= b.mean) return {Distribution::point(b.mean), TieRule::NoSaleAtReserve};
  if (r < vs) return {mean_preserving_binary(vs, b.vmax, b.mean), TieRule::NoSaleAtReserve};
  // In the high-cost case the atom sits just above r on [v*, c).
  const TieRule tie = (c > vs && r < c) ? TieRule::SaleAtReserve : TieRule::NoSaleAtReserve;
  return {mean_preserving_binary(r, b.vmax, b.mean), tie};
}

double threat_revenue_bounded(double r, const AuctionSetting& setting) {
  const auto t = threat_bounded(r, setting);
  return expected_revenue(t.distribution, r, setting, t.tie);
}

BoundedSolution maxmin_bounded(const AuctionSetting& setting) {
  setting.validate();
  const auto& b = setting.bounded_values();
  const int n = setting.bidders;
  const double c = setting.cost;
  BoundedSolution s;
  s.v_min_star = v_min_star(setting);
  s.q_star = q_star(n);
  s.lambda_star = lambda_star(n);
  s.worst_case = worst_case_bounded(setting);
  s.maxmin_revenue = expected_revenue(s.worst_case, c, setting, TieRule::SaleAtReserve);
  // Boundary c = v* > 0 belongs to the non-unique branch. At v* = 0 the
  // flat threat segment below it is empty and [0, c] = {0} when c = 0.
  s.unique = s.v_min_star < c || s.v_min_star <= 0.0;
  s.price_set = s.unique ? PriceSet{c, c, false} : PriceSet{0.0, c, true};
  if (!s.unique) {
    const double closed = b.mean - alpha_n(n) * (b.vmax - b.mean);
    if (std::abs(closed - s.maxmin_revenue) > 1e-10 * std::max(1.0, b.mean))
      throw std::logic_error("maxmin revenue disagrees with m - alpha_n (vmax - m)");
  }
  return s;
}

}  // namespace robust_reserve
