#include "robust_reserve/variance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "robust_reserve/asymptotics.hpp"
#include "robust_reserve/errors.hpp"
#include "robust_reserve/revenue.hpp"
#include "robust_reserve/zkernel.hpp"
#include "roots.hpp"

namespace robust_reserve {

namespace {

constexpr double kEdgeGuard = 1e-9;

// phi and psi with the tail 1 - q supplied separately.
double psi_tail(double q, double tail, int n) {
  const auto km = kernel_tail_moments(q, tail, n);
  return km.mean_square / (km.mean * km.mean);
}

double phi_tail(double q, double tail, int n) { return psi_tail(q, tail, n) / tail; }

double tail_star(int n) {
  const double d = n - 1.0;
  return 1.0 / (d * d);
}

void check_phi_domain(double q, int n) {
  if (n < 2) throw DomainError("invalid_bidders", "need at least two bidders");
  if (!(q >= 0.0 && q <= 1.0 - kEdgeGuard)) throw DomainError("phi_domain", "q must lie in [0, 1 - 1e-9]");
}

// Tail mass 1 - q(rho) solving psi(1 - t) / t = 1 + sigma^2 / (m - rho)^2.
double solve_tail(double rho, double m, double sigma, int n) {
  if (!(sigma > 0.0)) throw DomainError("invalid_setting", "sigma must be positive");
  const double vs = v_min_star2(m, sigma, n);
  const double slack = 1e-12 * std::max(1.0, m);
  if (!(rho >= vs - slack && rho <= m - kEdgeGuard + slack))
    throw DomainError("rho_out_of_range", "rho must lie in [v**, m - 1e-9]");
  const double gap = m - rho;
  const double target = 1.0 + (sigma * sigma) / (gap * gap);
  auto h = [&](double t) { return psi_tail(1.0 - t, t, n) / t - target; };
  const double t_max = 1.0 - q_star(n);
  const double h_max = h(t_max);
  if (h_max >= 0.0) return t_max;
  const double t_min = 1.0 / target;
  return detail::toms748_root(h, t_min, t_max, h(t_min), h_max);
}

GParams params_from_tail(double rho, double tail, double m, double sigma, int n) {
  const double q = 1.0 - tail;
  const auto km = kernel_tail_moments(q, tail, n);
  const double k = n * (n - 1.0);
  const double gap = m - rho;
  const double two_lambda2 = k * tail * km.mean / gap;
  const double z_q = -std::pow(q, n - 2) * tail;
  GParams p;
  p.rho = rho;
  p.q = q;
  p.tail_mass = tail;
  p.lambda2 = 0.5 * two_lambda2;
  p.lambda1 = k * z_q - two_lambda2 * rho;
  p.n = n;
  p.m = m;
  p.sigma = sigma;
  // The second-moment equation holds automatically once q solves phi(q) = target.
  const double lhs = k * k * tail * km.mean_square;
  const double rhs = two_lambda2 * two_lambda2 * (gap * gap + sigma * sigma);
  if (std::abs(lhs - rhs) > 1e-8 * std::abs(rhs))
    throw std::logic_error("second-moment equation violated for atom-plus-tail parameters");
  return p;
}

}  // namespace

double phi(double q, int n) {
  check_phi_domain(q, n);
  return phi_tail(q, 1.0 - q, n);
}

double psi(double q, int n) {
  check_phi_domain(q, n);
  return psi_tail(q, 1.0 - q, n);
}

double phi_prime(double q, int n) {
  check_phi_domain(q, n);
  const double tail = 1.0 - q;
  const auto km = kernel_tail_moments(q, tail, n);
  return 2.0 * z_prime(q, n) * km.variance / (tail * km.mean * km.mean * km.mean);
}

double v_min_star2(double mean, double sigma, int n) {
  if (n < 2) throw DomainError("invalid_bidders", "need at least two bidders");
  if (!(sigma > 0.0)) throw DomainError("invalid_setting", "sigma must be positive");
  const double ts = tail_star(n);
  return std::max(mean - sigma / std::sqrt(phi_tail(1.0 - ts, ts, n) - 1.0), 0.0);
}

double solve_q(double rho, double mean, double sigma, int n) { return 1.0 - solve_tail(rho, mean, sigma, n); }

GParams solve_g_params(double rho, double mean, double sigma, int n) {
  return params_from_tail(rho, solve_tail(rho, mean, sigma, n), mean, sigma, n);
}

Distribution build_G(const GParams& params) {
  if (params.n == 2) return Distribution::atom_uniform(params.rho, params.q, params.rho, params.top());
  return Distribution::g_tail(params);
}

double revenue_G_closed(double r, const AuctionSetting& setting, TieRule tie) {
  setting.validate();
  const double m = setting.mean();
  const double sigma = setting.sigma();
  const int n = setting.bidders;
  const double c = setting.cost;
  const auto p = solve_g_params(r, m, sigma, n);
  const double qn = std::pow(p.q, n);
  const double z_q = -std::pow(p.q, n - 2) * p.tail_mass;
  double value = -p.lambda1 * (m - p.q * r) - 2.0 * p.lambda2 * (m * m + sigma * sigma - p.q * r * r) -
                 n * z_q * r * p.q + c * qn;
  if (tie == TieRule::SaleAtReserve) value += (r - c) * qn;
  return value;
}

double revenue_G_derivative(double r, const AuctionSetting& setting) {
  setting.validate();
  const double m = setting.mean();
  const double sigma = setting.sigma();
  const int n = setting.bidders;
  const double tail = solve_tail(r, m, sigma, n);
  const double q = 1.0 - tail;
  const auto km = kernel_tail_moments(q, tail, n);
  const double dphi = 2.0 * z_prime(q, n) * km.variance / (tail * km.mean * km.mean * km.mean);
  const double gap = m - r;
  const double dq = (2.0 * sigma * sigma / (gap * gap * gap)) / dphi;
  const double z_q = -std::pow(q, n - 2) * tail;
  return n * (n - 2.0) * q * z_q - n * std::pow(q, n - 1) * dq * (r - setting.cost);
}

Distribution worst_case_variance(const AuctionSetting& setting) {
  setting.validate();
  const double m = setting.mean();
  const double sigma = setting.sigma();
  const int n = setting.bidders;
  const double rho = std::max(v_min_star2(m, sigma, n), setting.cost);
  return build_G(solve_g_params(rho, m, sigma, n));
}

Threat threat_variance(double r, const AuctionSetting& setting) {
  if (!(r >= 0.0)) throw DomainError("negative_reserve", "reserve price must be non-negative");
  setting.validate();
  const double m = setting.mean();
  const double sigma = setting.sigma();
  const int n = setting.bidders;
  const double c = setting.cost;
  const double vs = v_min_star2(m, sigma, n);
  if (r >= m) return {Distribution::point(m), TieRule::NoSaleAtReserve};
  if (r < vs) return {build_G(solve_g_params(vs, m, sigma, n)), TieRule::NoSaleAtReserve};
  // The tail end diverges as rho -> m; past the guard the member at the
  // guard still leaves almost all mass unsold at r.
  const double rho = std::min(r, m - kEdgeGuard);
  const TieRule tie = (c > vs && r < c) ? TieRule::SaleAtReserve : TieRule::NoSaleAtReserve;
  return {build_G(solve_g_params(rho, m, sigma, n)), tie};
}

double threat_revenue_variance(double r, const AuctionSetting& setting) {
  const auto t = threat_variance(r, setting);
  return expected_revenue(t.distribution, r, setting, t.tie);
}

double gamma_n(int n) {
  const double ts = tail_star(n);
  const double d = n - 1.0;
  return alpha_n(n) * std::sqrt(d * d * psi_tail(1.0 - ts, ts, n) - 1.0);
}

VarianceSolution maxmin_variance(const AuctionSetting& setting) {
  setting.validate();
  const double m = setting.mean();
  const double sigma = setting.sigma();
  const int n = setting.bidders;
  const double c = setting.cost;
  VarianceSolution s;
  s.v_min_star2 = v_min_star2(m, sigma, n);
  const double rho = std::max(s.v_min_star2, c);
  s.params = solve_g_params(rho, m, sigma, n);
  s.worst_case = build_G(s.params);
  if (c >= s.v_min_star2) {
    s.maxmin_revenue = revenue_G_closed(c, setting, TieRule::NoSaleAtReserve);
  } else {
    // Every value clears r = c, which matches a sale at the atom v**.
    s.maxmin_revenue = revenue_G_closed(s.v_min_star2, setting, TieRule::SaleAtReserve);
  }
  // Boundary c = v** > 0 belongs to the non-unique branch. At v** = 0 the
  // flat threat segment below it is empty and [0, c] = {0} when c = 0.
  s.unique = s.v_min_star2 < c || s.v_min_star2 <= 0.0;
  s.price_set = s.unique ? PriceSet{c, c, false} : PriceSet{0.0, c, true};
  if (!s.unique) {
    s.gamma_n = gamma_n(n);
    const double shortcut = m - *s.gamma_n * sigma;
    if (std::abs(shortcut - s.maxmin_revenue) > 1e-9 * std::max(1.0, m))
      throw std::logic_error("maxmin revenue disagrees with m - gamma_n sigma");
  }
  return s;
}

}  // namespace robust_reserve
