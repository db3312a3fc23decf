#include "robust_reserve/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "robust_reserve/errors.hpp"
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

[[noreturn]] void invalid(const std::string& msg) { throw DomainError("invalid_distribution", msg); }

bool finite(double x) { return std::isfinite(x); }

void check(const PointMass& d) {
  if (!finite(d.at)) invalid("point mass location must be finite");
}

void check(const Binary& d) {
  if (!finite(d.low) || !finite(d.high)) invalid("binary support must be finite");
  if (!(d.low >= 0.0 && d.low < d.high)) invalid("binary requires 0 <= low < high");
  if (!(d.p_low >= 0.0 && d.p_low <= 1.0)) invalid("binary p_low must lie in [0,1]");
}

void check(const AtomQuantileTail& d) {
  const auto& p = d.params;
  if (p.n < 2) invalid("g_tail requires n >= 2");
  if (!(p.q >= 0.0 && p.q <= 1.0)) invalid("g_tail atom mass must lie in [0,1]");
  if (!(p.tail_mass > 0.0 && p.tail_mass <= 1.0)) invalid("g_tail tail mass must lie in (0,1]");
  if (!(p.lambda2 > 0.0) || !finite(p.lambda1) || !finite(p.rho)) invalid("g_tail requires lambda2 > 0");
}

void check(const AtomUniformTail& d) {
  if (!finite(d.atom_point) || !finite(d.tail_low) || !finite(d.tail_high))
    invalid("atom_uniform parameters must be finite");
  if (!(d.atom_point <= d.tail_low && d.tail_low < d.tail_high))
    invalid("atom_uniform requires atom_point <= tail_low < tail_high");
  if (!(d.atom_mass >= 0.0 && d.atom_mass <= 1.0)) invalid("atom_uniform atom_mass must lie in [0,1]");
}

void check(DiscreteCdf& d) {
  if (d.grid.empty() || d.grid.size() != d.cdf.size()) invalid("discrete grid and cdf must be non-empty and equal length");
  for (std::size_t i = 0; i < d.grid.size(); ++i) {
    if (!finite(d.grid[i])) invalid("discrete grid must be finite");
    if (i > 0 && !(d.grid[i] > d.grid[i - 1])) invalid("discrete grid must be strictly ascending");
    if (!(d.cdf[i] >= 0.0 && d.cdf[i] <= 1.0)) invalid("discrete cdf values must lie in [0,1]");
    if (i > 0 && d.cdf[i] < d.cdf[i - 1]) invalid("discrete cdf must be nondecreasing");
  }
  if (std::abs(d.cdf.back() - 1.0) > 1e-12) invalid("discrete cdf must end at 1");
  d.cdf.back() = 1.0;
}

// Mass of the atom at grid[k] of a step cdf.
double step_mass(const DiscreteCdf& d, std::size_t k) { return k == 0 ? d.cdf[0] : d.cdf[k] - d.cdf[k - 1]; }

double g_tail_cdf(const GParams& p, double v) {
  if (v < p.rho) return 0.0;
  const double top = p.top();
  if (v >= top) return 1.0;
  if (v == p.rho) return p.q;
  auto f = [&](double t) { return p.quantile_at(t) - v; };
  const double t = detail::toms748_root(f, 0.0, 1.0, p.rho - v, top - v);
  return p.q + p.tail_mass * t;
}

}  // namespace

double GParams::quantile_at(double t) const {
  return rho + n * (n - 1) * z_step(q, tail_mass * t, n) / (2.0 * lambda2);
}

double GParams::quantile_slope_at(double t) const {
  return n * (n - 1) * z_prime(q + tail_mass * t, n) / (2.0 * lambda2);
}

double GParams::top() const {
  // -z(q) = q^(n-2) (1 - q).
  return rho + n * (n - 1) * std::pow(q, n - 2) * tail_mass / (2.0 * lambda2);
}

Distribution::Distribution(DistributionVariant v) : v_(std::move(v)) {
  std::visit([](auto& d) { check(d); }, v_);
}

std::string_view Distribution::type_name() const {
  return std::visit(overloaded{
                        [](const PointMass&) { return std::string_view("point"); },
                        [](const Binary&) { return std::string_view("binary"); },
                        [](const AtomQuantileTail&) { return std::string_view("g_tail"); },
                        [](const AtomUniformTail&) { return std::string_view("atom_uniform"); },
                        [](const DiscreteCdf&) { return std::string_view("discrete"); },
                    },
                    v_);
}

double cdf_eval(const Distribution& dist, double v) {
  return std::visit(
      overloaded{
          [&](const PointMass& d) { return v < d.at ? 0.0 : 1.0; },
          [&](const Binary& d) { return v < d.low ? 0.0 : (v < d.high ? d.p_low : 1.0); },
          [&](const AtomQuantileTail& d) { return g_tail_cdf(d.params, v); },
          [&](const AtomUniformTail& d) {
            if (v < d.atom_point) return 0.0;
            if (v < d.tail_low) return d.atom_mass;
            if (v >= d.tail_high) return 1.0;
            return d.atom_mass + (1.0 - d.atom_mass) * (v - d.tail_low) / (d.tail_high - d.tail_low);
          },
          [&](const DiscreteCdf& d) {
            const auto it = std::upper_bound(d.grid.begin(), d.grid.end(), v);
            return it == d.grid.begin() ? 0.0 : d.cdf[static_cast<std::size_t>(it - d.grid.begin()) - 1];
          },
      },
      dist.variant());
}

double cdf_left(const Distribution& dist, double v) {
  return std::visit(
      overloaded{
          [&](const PointMass& d) { return v <= d.at ? 0.0 : 1.0; },
          [&](const Binary& d) { return v <= d.low ? 0.0 : (v <= d.high ? d.p_low : 1.0); },
          [&](const AtomQuantileTail& d) { return v <= d.params.rho ? 0.0 : g_tail_cdf(d.params, v); },
          [&](const AtomUniformTail& d) {
            if (v <= d.atom_point) return 0.0;
            if (v <= d.tail_low) return d.atom_mass;
            if (v >= d.tail_high) return 1.0;
            return d.atom_mass + (1.0 - d.atom_mass) * (v - d.tail_low) / (d.tail_high - d.tail_low);
          },
          [&](const DiscreteCdf& d) {
            const auto it = std::lower_bound(d.grid.begin(), d.grid.end(), v);
            return it == d.grid.begin() ? 0.0 : d.cdf[static_cast<std::size_t>(it - d.grid.begin()) - 1];
          },
      },
      dist.variant());
}

double quantile(const Distribution& dist, double u) {
  return std::visit(
      overloaded{
          [&](const PointMass& d) { return d.at; },
          [&](const Binary& d) { return u <= d.p_low ? d.low : d.high; },
          [&](const AtomQuantileTail& d) {
            const auto& p = d.params;
            if (u <= p.q) return p.rho;
            return p.quantile_at(std::min(1.0, (u - p.q) / p.tail_mass));
          },
          [&](const AtomUniformTail& d) {
            if (u <= d.atom_mass) return d.atom_point;
            const double frac = (u - d.atom_mass) / (1.0 - d.atom_mass);
            return d.tail_low + std::min(1.0, frac) * (d.tail_high - d.tail_low);
          },
          [&](const DiscreteCdf& d) {
            const auto it = std::lower_bound(d.cdf.begin(), d.cdf.end(), u);
            const auto k = it == d.cdf.end() ? d.cdf.size() - 1 : static_cast<std::size_t>(it - d.cdf.begin());
            return d.grid[k];
          },
      },
      dist.variant());
}

double support_lower(const Distribution& dist) {
  return std::visit(overloaded{
                        [](const PointMass& d) { return d.at; },
                        [](const Binary& d) { return d.p_low > 0.0 ? d.low : d.high; },
                        [](const AtomQuantileTail& d) { return d.params.rho; },
                        [](const AtomUniformTail& d) { return d.atom_mass > 0.0 ? d.atom_point : d.tail_low; },
                        [](const DiscreteCdf& d) {
                          for (std::size_t k = 0; k < d.grid.size(); ++k)
                            if (step_mass(d, k) > 0.0) return d.grid[k];
                          return d.grid.back();
                        },
                    },
                    dist.variant());
}

double support_upper(const Distribution& dist) {
  return std::visit(overloaded{
                        [](const PointMass& d) { return d.at; },
                        [](const Binary& d) { return d.p_low < 1.0 ? d.high : d.low; },
                        [](const AtomQuantileTail& d) { return d.params.top(); },
                        [](const AtomUniformTail& d) { return d.atom_mass < 1.0 ? d.tail_high : d.atom_point; },
                        [](const DiscreteCdf& d) {
                          for (std::size_t k = 0; k < d.grid.size(); ++k)
                            if (d.cdf[k] >= 1.0) return d.grid[k];
                          return d.grid.back();
                        },
                    },
                    dist.variant());
}

std::vector<double> breakpoints(const Distribution& dist) {
  return std::visit(overloaded{
                        [](const PointMass& d) { return std::vector<double>{d.at}; },
                        [](const Binary& d) { return std::vector<double>{d.low, d.high}; },
                        [](const AtomQuantileTail& d) {
                          return std::vector<double>{d.params.rho, d.params.top()};
                        },
                        [](const AtomUniformTail& d) {
                          std::vector<double> pts{d.atom_point, d.tail_low, d.tail_high};
                          pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
                          return pts;
                        },
                        [](const DiscreteCdf& d) { return d.grid; },
                    },
                    dist.variant());
}

Moments moments(const Distribution& dist) {
  return std::visit(
      overloaded{
          [](const PointMass& d) { return Moments{d.at, 0.0}; },
          [](const Binary& d) {
            const double p = d.p_low;
            const double w = d.high - d.low;
            return Moments{p * d.low + (1.0 - p) * d.high, p * (1.0 - p) * w * w};
          },
          [](const AtomQuantileTail& d) {
            const auto& p = d.params;
            const int degree = kernel_rule_degree(2 * p.n - 2, p.tail_mass, p.n);
            const double mean =
                p.q * p.rho + p.tail_mass * integrate_unit(degree, [&](double t) { return p.quantile_at(t); });
            const double spread = integrate_unit(degree, [&](double t) {
              const double x = p.quantile_at(t) - mean;
              return x * x;
            });
            const double a = p.rho - mean;
            return Moments{mean, p.q * a * a + p.tail_mass * spread};
          },
          [](const AtomUniformTail& d) {
            const double p = d.atom_mass;
            const double mid = 0.5 * (d.tail_low + d.tail_high);
            const double w = d.tail_high - d.tail_low;
            const double mean = p * d.atom_point + (1.0 - p) * mid;
            const double a = d.atom_point - mean;
            const double b = mid - mean;
            return Moments{mean, p * a * a + (1.0 - p) * (b * b + w * w / 12.0)};
          },
          [](const DiscreteCdf& d) {
            double mean = 0.0;
            for (std::size_t k = 0; k < d.grid.size(); ++k) mean += step_mass(d, k) * d.grid[k];
            double var = 0.0;
            for (std::size_t k = 0; k < d.grid.size(); ++k) {
              const double x = d.grid[k] - mean;
              var += step_mass(d, k) * x * x;
            }
            return Moments{mean, var};
          },
      },
      dist.variant());
}

}  // namespace robust_reserve
