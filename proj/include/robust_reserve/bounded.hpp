#pragma once

// Known mean m and upper bound vmax on values.

#include <vector>

#include "robust_reserve/distribution.hpp"
#include "robust_reserve/setting.hpp"

namespace robust_reserve {

/// A threat: a feasible distribution Nature can answer reserve r with,
/// plus how an atom exactly at r is treated.
struct Threat {
  Distribution distribution;
  TieRule tie = TieRule::NoSaleAtReserve;
};

/// Maxmin reserve prices. Either the single price c, or [0, c] together
/// with the caveat that further prices above c may also be maxmin.
struct PriceSet {
  double low = 0.0;
  double high = 0.0;
  bool may_extend_above = false;
};

struct BoundedSolution {
  double v_min_star = 0.0;
  double q_star = 0.0;
  double lambda_star = 0.0;
  Distribution worst_case = Distribution::point(0.0);
  double maxmin_revenue = 0.0;
  PriceSet price_set;
  bool unique = false;
};

/// Pointwise minimisers over F in [0, 1] of the Lagrangian integrand at
/// multiplier lambda: {0} below lambda*, {0, q*} at lambda* (within 1e-12),
/// and the larger root of lambda = n(n-1) F^(n-2) (F - 1), capped at 1,
/// above it.
std::vector<double> supply_curve(double lambda, int n);

/// Lowest support point of the worst case when r = c:
/// 0 for n = 2, otherwise max{m - (vmax - m) / ((n-1)^2 - 1), 0}.
double v_min_star(const AuctionSetting& setting);

/// Two-point law on {low, high} with mean m.
Distribution mean_preserving_binary(double low, double high, double mean);

/// Binary on {max(v_min_star, c), vmax} with mean m.
Distribution worst_case_bounded(const AuctionSetting& setting);

Threat threat_bounded(double r, const AuctionSetting& setting);

/// Revenue of the threat at its own reserve.
double threat_revenue_bounded(double r, const AuctionSetting& setting);

BoundedSolution maxmin_bounded(const AuctionSetting& setting);

}  // namespace robust_reserve
