#pragma once

// Known mean m and an upper bound sigma^2 on the variance.
//
// Worst cases and threats come from the atom-plus-tail family: an atom of
// mass q(rho) at rho followed by the quantile map
//   u -> (n(n-1) z(u) - lambda1(rho)) / (2 lambda2(rho)),  u in [q(rho), 1],
// with (lambda1, lambda2, q) pinned by binding mean and variance constraints.
// The results also hold when the variance is known exactly: every
// distribution constructed here binds the variance constraint for r < m.

#include <optional>

#include "robust_reserve/bounded.hpp"
#include "robust_reserve/distribution.hpp"
#include "robust_reserve/setting.hpp"

namespace robust_reserve {

/// int_q^1 (z(y) - z(q))^2 dy / (int_q^1 (z(y) - z(q)) dy)^2.
/// Throws DomainError("phi_domain") unless q in [0, 1 - 1e-9].
double phi(double q, int n);

/// phi(q) (1 - q): second moment over squared mean of z(Y) - z(q), Y ~ U[q, 1].
double psi(double q, int n);

/// d phi / dq.
double phi_prime(double q, int n);

/// max{m - sigma / sqrt(phi(q*_n) - 1), 0}.
double v_min_star2(double mean, double sigma, int n);

/// The unique q in [q*_n, 1) with phi(q) = 1 + sigma^2 / (m - rho)^2.
/// Throws DomainError("rho_out_of_range") unless rho in [v**, m - 1e-9].
double solve_q(double rho, double mean, double sigma, int n);

/// (lambda1, lambda2, q) for the member with atom at rho.
GParams solve_g_params(double rho, double mean, double sigma, int n);

/// AtomQuantileTail for n >= 3; for n = 2 the quantile map is linear and an
/// AtomUniformTail is returned.
Distribution build_G(const GParams& params);

/// Closed-form R(G_r, r):
///   |lambda1| (m - q r) - 2 lambda2 (m^2 + sigma^2 - q r^2) - n z(q) r q + c q^n,
/// plus (r - c) q^n under SaleAtReserve.
double revenue_G_closed(double r, const AuctionSetting& setting, TieRule tie);

/// d R(G_r, r) / dr = n(n-2) q z(q) - n q^(n-1) q'(r) (r - c), with
/// q'(r) = (2 sigma^2 / (m - r)^3) / phi'(q(r)).
double revenue_G_derivative(double r, const AuctionSetting& setting);

/// G at rho = max{v**, c}.
Distribution worst_case_variance(const AuctionSetting& setting);

Threat threat_variance(double r, const AuctionSetting& setting);
double threat_revenue_variance(double r, const AuctionSetting& setting);

/// alpha_n sqrt((n-1)^2 psi(q*_n) - 1).
double gamma_n(int n);

struct VarianceSolution {
  double v_min_star2 = 0.0;
  GParams params;
  Distribution worst_case = Distribution::point(0.0);
  double maxmin_revenue = 0.0;
  /// Present only when c <= v** and v** > 0, where R* = m - gamma_n sigma.
  std::optional<double> gamma_n;
  PriceSet price_set;
  bool unique = false;
};

VarianceSolution maxmin_variance(const AuctionSetting& setting);

}  // namespace robust_reserve
