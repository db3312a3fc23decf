#pragma once

// Expected revenue of a second-price auction with reserve r and seller
// valuation c when n values are drawn iid from F:
//
//   R(F, r) = r - (r - c) F(r)^n + int_r^inf (1 - n F^(n-1) + (n-1) F^n) dv
//
// F(r) is replaced by F(r-) when an atom sitting exactly at r trades.

#include <cstdint>
#include <optional>

#include "robust_reserve/distribution.hpp"
#include "robust_reserve/setting.hpp"

namespace robust_reserve {

/// Piecewise-exact evaluation: atoms analytically, uniform tails by
/// antiderivative, quantile tails by Gauss-Legendre in quantile space.
double expected_revenue(const Distribution& dist, double r, const AuctionSetting& setting, TieRule tie);
double expected_revenue(const Distribution& dist, double r, int bidders, double cost, TieRule tie);

/// The tail integral int_r^inf (1 - n F^(n-1) + (n-1) F^n) dv = E[(v_(2) - r)^+].
double second_order_tail(const Distribution& dist, double r, int bidders);

/// Same functional by adaptive Gauss-Kronrod in value space between the
/// distribution's breakpoints. Throws QuadratureError when the estimated
/// absolute error exceeds `abs_tol`.
double expected_revenue_quadrature(const Distribution& dist, double r, int bidders, double cost, TieRule tie,
                                   double abs_tol = 1e-9);

/// Mean and variance from the survival integrals int (1 - F) and
/// int 2 v (1 - F), by adaptive quadrature. Assumes non-negative support.
Moments moments_by_quadrature(const Distribution& dist, double abs_tol = 1e-10);

/// E[max_i v_i] over n iid draws, int_0^inf (1 - F^n) dv by adaptive
/// quadrature. Assumes non-negative support.
double expected_maximum(const Distribution& dist, int bidders, double abs_tol = 1e-10);

struct RevenueReport {
  std::optional<double> analytic;
  double quadrature = 0.0;
  double mc_estimate = 0.0;
  double mc_stderr = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

/// All three revenue routes for one (distribution, reserve) pair.
RevenueReport revenue_report(const Distribution& dist, double r, const AuctionSetting& setting, TieRule tie,
                             std::int64_t samples, std::uint64_t seed);

}  // namespace robust_reserve
