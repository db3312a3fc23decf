#include "robust_reserve/revenue.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <vector>

#include "robust_reserve/errors.hpp"
#include "robust_reserve/sampling.hpp"
#include "robust_reserve/zkernel.hpp"
#include "roots.hpp"

namespace robust_reserve {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// P(v_(2) > v) as a function of u = F(v).
double survival_second(double u, int n) { return 1.0 - n * std::pow(u, n - 1) + (n - 1) * std::pow(u, n); }

// The same probability in terms of w = 1 - F(v), accurate for small w.
double survival_second_upper(double w, int n) {
  if (w >= 0.5) return survival_second(1.0 - w, n);
  return -std::expm1(n * std::log1p(-w)) - n * std::pow(1.0 - w, n - 1) * w;
}

// int_0^1 survival_second_upper(w s) ds, the average over a stretch on which
// F rises linearly to 1 starting from 1 - w.
double mean_survival_upper(double w, int n) {
  return integrate_unit(kernel_rule_degree(n, w, n), [&](double s) { return survival_second_upper(w * s, n); });
}

double overlap(double lo, double hi, double r) { return std::max(0.0, hi - std::max(lo, r)); }

// Right-continuous step function with value levels[k] on [points[k], points[k+1]),
// zero before points[0] and one from the last point onwards.
template <class Points, class Levels>
double step_tail(const Points& points, const Levels& levels, double r, int n) {
  double sum = std::max(0.0, points[0] - r);
  for (std::size_t k = 0; k + 1 < std::size(points); ++k) {
    const double len = overlap(points[k], points[k + 1], r);
    if (len > 0.0) sum += len * survival_second_upper(1.0 - levels[k], n);
  }
  return sum;
}

double g_tail_integral(const GParams& p, double r, int n) {
  double sum = std::max(0.0, p.rho - r);
  const double top = p.top();
  if (r >= top) return sum;
  double t0 = 0.0;
  if (r > p.rho) {
    auto f = [&](double t) { return p.quantile_at(t) - r; };
    t0 = detail::toms748_root(f, 0.0, 1.0, p.rho - r, top - r);
  }
  const double span = 1.0 - t0;
  // Integrate P(v_(2) > Q(u)) dQ(u) over u = q + tail * t, t = t0 + span * s.
  const int degree = kernel_rule_degree(n + p.n - 2, p.tail_mass, std::max(n, p.n));
  const double tail_part = integrate_unit(degree, [&](double s) {
    const double t = t0 + span * s;
    return survival_second_upper(p.tail_mass * (1.0 - t), n) * p.quantile_slope_at(t);
  });
  return sum + p.tail_mass * span * tail_part;
}

}  // namespace

double second_order_tail(const Distribution& dist, double r, int n) {
  return std::visit(
      overloaded{
          [&](const PointMass& d) { return std::max(0.0, d.at - r); },
          [&](const Binary& d) {
            const double pts[] = {d.low, d.high};
            const double lv[] = {d.p_low, 1.0};
            return step_tail(pts, lv, r, n);
          },
          [&](const AtomQuantileTail& d) { return g_tail_integral(d.params, r, n); },
          [&](const AtomUniformTail& d) {
            double sum = std::max(0.0, d.atom_point - r);
            sum += overlap(d.atom_point, d.tail_low, r) * survival_second_upper(1.0 - d.atom_mass, n);
            const double lo = std::max(r, d.tail_low);
            if (lo < d.tail_high && d.atom_mass < 1.0) {
              // F rises linearly from 1 - w at lo to 1 at tail_high.
              const double w = (1.0 - d.atom_mass) * (d.tail_high - lo) / (d.tail_high - d.tail_low);
              sum += (d.tail_high - lo) * mean_survival_upper(w, n);
            }
            return sum;
          },
          [&](const DiscreteCdf& d) { return step_tail(d.grid, d.cdf, r, n); },
      },
      dist.variant());
}

double expected_revenue(const Distribution& dist, double r, int bidders, double cost, TieRule tie) {
  if (!(r >= 0.0)) throw DomainError("negative_reserve", "reserve price must be non-negative");
  const double f_r = tie == TieRule::SaleAtReserve ? cdf_left(dist, r) : cdf_eval(dist, r);
  return r - (r - cost) * std::pow(f_r, bidders) + second_order_tail(dist, r, bidders);
}

double expected_revenue(const Distribution& dist, double r, const AuctionSetting& setting, TieRule tie) {
  return expected_revenue(dist, r, setting.bidders, setting.cost, tie);
}

namespace {

// Bisects until the Gauss-Kronrod error estimate on each piece is within its
// share of the absolute tolerance. Boost's own recursion stops on a relative
// criterion, which rounding noise can keep unsatisfied.
template <class F>
double adaptive_gauss_kronrod(F& f, double a, double b, double tol, int depth, double& err_sum) {
  double err = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &err);
  if (err <= tol || depth == 0 || !(b - a > 1e-14 * std::max(1.0, std::abs(a)))) {
    err_sum += err;
    return value;
  }
  const double mid = 0.5 * (a + b);
  return adaptive_gauss_kronrod(f, a, mid, 0.5 * tol, depth - 1, err_sum) +
         adaptive_gauss_kronrod(f, mid, b, 0.5 * tol, depth - 1, err_sum);
}

// Integrates f over [lo, hi] split at the distribution's breakpoints.
template <class F>
double piecewise_gauss_kronrod(const Distribution& dist, double lo, double hi, F&& f, double abs_tol) {
  std::vector<double> cuts{lo};
  for (double b : breakpoints(dist))
    if (b > lo && b < hi) cuts.push_back(b);
  cuts.push_back(hi);
  double total = 0.0;
  double total_err = 0.0;
  const double piece_tol = 0.5 * abs_tol / static_cast<double>(cuts.size());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    // Gauss-Kronrod nodes are interior, so atoms at the cuts do not leak in.
    total += adaptive_gauss_kronrod(f, cuts[i], cuts[i + 1], piece_tol, 30, total_err);
  }
  if (total_err > abs_tol) throw QuadratureError("adaptive quadrature did not converge", total_err);
  return total;
}

}  // namespace

double expected_revenue_quadrature(const Distribution& dist, double r, int n, double cost, TieRule tie,
                                   double abs_tol) {
  if (!(r >= 0.0)) throw DomainError("negative_reserve", "reserve price must be non-negative");
  const double f_r = tie == TieRule::SaleAtReserve ? cdf_left(dist, r) : cdf_eval(dist, r);
  const double top = support_upper(dist);
  double tail = 0.0;
  if (top > r) {
    tail = piecewise_gauss_kronrod(
        dist, r, top, [&](double v) { return survival_second(cdf_eval(dist, v), n); }, abs_tol);
  }
  return r - (r - cost) * std::pow(f_r, n) + tail;
}

Moments moments_by_quadrature(const Distribution& dist, double abs_tol) {
  const double top = support_upper(dist);
  if (!(top > 0.0)) return Moments{0.0, 0.0};
  const double mean =
      piecewise_gauss_kronrod(dist, 0.0, top, [&](double v) { return 1.0 - cdf_eval(dist, v); }, abs_tol);
  const double second = piecewise_gauss_kronrod(
      dist, 0.0, top, [&](double v) { return 2.0 * v * (1.0 - cdf_eval(dist, v)); }, abs_tol);
  return Moments{mean, second - mean * mean};
}

double expected_maximum(const Distribution& dist, int n, double abs_tol) {
  const double top = support_upper(dist);
  if (!(top > 0.0)) return 0.0;
  return piecewise_gauss_kronrod(
      dist, 0.0, top, [&](double v) { return 1.0 - std::pow(cdf_eval(dist, v), n); }, abs_tol);
}

RevenueReport revenue_report(const Distribution& dist, double r, const AuctionSetting& setting, TieRule tie,
                             std::int64_t samples, std::uint64_t seed) {
  RevenueReport report;
  report.analytic = expected_revenue(dist, r, setting, tie);
  report.quadrature = expected_revenue_quadrature(dist, r, setting.bidders, setting.cost, tie);
  const auto mc = monte_carlo_revenue(dist, r, setting, tie, samples, seed);
  report.mc_estimate = mc.estimate;
  report.mc_stderr = mc.std_error;
  report.samples = samples;
  report.seed = seed;
  return report;
}

}  // namespace robust_reserve
