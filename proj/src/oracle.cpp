#include "robust_reserve/oracle.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "robust_reserve/bounded.hpp"
#include "robust_reserve/errors.hpp"
#include "robust_reserve/parallel.hpp"
#include "robust_reserve/revenue.hpp"
#include "robust_reserve/sampling.hpp"
#include "robust_reserve/variance.hpp"
#include "robust_reserve/zkernel.hpp"
#include "roots.hpp"

namespace robust_reserve {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::DiscretizedCdf:
      return "discretized_cdf";
    case Family::Binary:
      return "binary";
    case Family::AtomPlusUniform:
      return "atom_plus_uniform";
    case Family::AtomPlusGapUniform:
      return "atom_plus_gap_uniform";
    case Family::ClosedFormSeed:
      return "closed_form_seed";
  }
  return "unknown";
}

Family family_from_string(std::string_view name) {
  for (Family f : {Family::DiscretizedCdf, Family::Binary, Family::AtomPlusUniform, Family::AtomPlusGapUniform,
                   Family::ClosedFormSeed})
    if (to_string(f) == name) return f;
  throw DomainError("invalid_family", "unknown oracle family: " + std::string(name));
}

void OracleConfig::validate() const {
  if (value_grid_size < 50) throw DomainError("invalid_config", "value_grid_size must be at least 50");
  if (!(tolerance > 0.0)) throw DomainError("invalid_config", "tolerance must be positive");
  if (!(sigma_multiple > 0.0)) throw DomainError("invalid_config", "sigma_multiple must be positive");
  if (max_iterations < 1) throw DomainError("invalid_config", "max_iterations must be positive");
  if (starts < 1) throw DomainError("invalid_config", "starts must be positive");
  if (families.empty()) throw DomainError("invalid_config", "at least one family is required");
}

namespace {

constexpr std::uint64_t kStartStream = 0x6f7261636c65ULL;

struct Problem {
  double r = 0.0;
  int n = 2;
  double c = 0.0;
  TieRule tie = TieRule::NoSaleAtReserve;
  double m = 0.0;
  bool bounded = true;
  double vmax = 0.0;
  double sigma = 0.0;

  double revenue(const Distribution& d) const { return expected_revenue(d, r, n, c, tie); }
};

double survival_second(double u, int n) { return 1.0 - n * std::pow(u, n - 1) + (n - 1) * std::pow(u, n); }

// ---- discretized cdf search ------------------------------------------------

struct Block {
  double sum_wy = 0.0;
  double sum_w = 0.0;
  std::size_t count = 0;
  double mean() const { return sum_wy / sum_w; }
};

// Weighted least-squares projection of y onto nonincreasing sequences.
void pav_nonincreasing(const std::vector<double>& y, const std::vector<double>& w, std::vector<double>& out,
                       std::vector<Block>& blocks) {
  blocks.clear();
  for (std::size_t i = 0; i < y.size(); ++i) {
    Block b{w[i] * y[i], w[i], 1};
    while (!blocks.empty() && blocks.back().mean() < b.mean()) {
      b.sum_wy += blocks.back().sum_wy;
      b.sum_w += blocks.back().sum_w;
      b.count += blocks.back().count;
      blocks.pop_back();
    }
    blocks.push_back(b);
  }
  out.resize(y.size());
  std::size_t i = 0;
  for (const auto& b : blocks) {
    const double v = b.mean();
    for (std::size_t k = 0; k < b.count; ++k) out[i++] = v;
  }
}

// Step cdf on a fixed grid: s_j = 1 - F(v_j) for j < N - 1 and F = 1 from
// the last grid point on.
class DiscreteSearch {
 public:
  DiscreteSearch(const Problem& p, double grid_max, int grid_size, int max_iterations, double tolerance)
      : p_(p), max_iterations_(max_iterations), tolerance_(tolerance) {
    for (int i = 0; i < grid_size; ++i) v_.push_back(grid_max * i / (grid_size - 1));
    for (double extra : {p.r, p.c, p.m, p.r + 1e-9 * std::max(1.0, p.r)})
      if (extra >= 0.0 && extra <= grid_max) v_.push_back(extra);
    std::sort(v_.begin(), v_.end());
    v_.erase(std::unique(v_.begin(), v_.end()), v_.end());
    const std::size_t cells = v_.size() - 1;
    h_.resize(cells);
    w_.resize(cells);
    for (std::size_t j = 0; j < cells; ++j) {
      h_[j] = v_[j + 1] - v_[j];
      w_[j] = v_[j] + v_[j + 1];
    }
    second_cap_ = p.bounded ? std::numeric_limits<double>::infinity() : p.m * p.m + p.sigma * p.sigma;
    const auto upper = std::upper_bound(v_.begin(), v_.end(), p.r);
    k_right_ = static_cast<std::size_t>(upper - v_.begin()) - 1;
    const auto lower = std::lower_bound(v_.begin(), v_.end(), p.r);
    tail_start_ = static_cast<std::size_t>(lower - v_.begin());
    k_left_ = tail_start_ == 0 ? npos : tail_start_ - 1;
  }

  std::size_t cells() const { return h_.size(); }

  double objective(const std::vector<double>& s) const {
    const int n = p_.n;
    const double f_r = level(s, p_.tie == TieRule::SaleAtReserve ? k_left_ : k_right_);
    double value = p_.r - (p_.r - p_.c) * std::pow(f_r, n);
    for (std::size_t j = tail_start_; j < cells(); ++j) value += h_[j] * survival_second(1.0 - s[j], n);
    return value;
  }

  // Gradient in the h-weighted metric.
  void gradient(const std::vector<double>& s, std::vector<double>& d) const {
    const int n = p_.n;
    d.assign(cells(), 0.0);
    for (std::size_t j = tail_start_; j < cells(); ++j) d[j] = -n * (n - 1.0) * z(1.0 - s[j], n);
    const std::size_t k = p_.tie == TieRule::SaleAtReserve ? k_left_ : k_right_;
    if (k != npos && k < cells()) d[k] += (p_.r - p_.c) * n * std::pow(1.0 - s[k], n - 1) / h_[k];
  }

  // Projection onto {s in [0,1], nonincreasing, sum h s = m, sum h w s <= cap}
  // in the h-weighted metric: s = clip(PAV(x - nu w) - mu).
  void project(const std::vector<double>& x, std::vector<double>& s) {
    fill(x, 0.0, s);
    if (second(s) <= second_cap_) return;
    double nu_hi = 1.0;
    for (int i = 0; i < 80; ++i) {
      fill(x, nu_hi, s);
      if (second(s) <= second_cap_) break;
      nu_hi *= 4.0;
    }
    auto g = [&](double nu) {
      fill(x, nu, s);
      return second(s) - second_cap_;
    };
    const double g_hi = g(nu_hi);
    if (g_hi > 0.0) return;
    boost::math::tools::eps_tolerance<double> tol(50);
    std::uintmax_t iters = 100;
    const auto bracket = boost::math::tools::toms748_solve(g, 0.0, nu_hi, g(0.0), g_hi, tol, iters);
    // The upper end of the bracket keeps the second moment under the cap.
    fill(x, bracket.second, s);
  }

  double second(const std::vector<double>& s) const {
    double sum = 0.0;
    for (std::size_t j = 0; j < cells(); ++j) sum += h_[j] * w_[j] * s[j];
    return sum;
  }

  double weighted_distance2(const std::vector<double>& a, const std::vector<double>& b) const {
    double sum = 0.0;
    for (std::size_t j = 0; j < cells(); ++j) sum += h_[j] * (a[j] - b[j]) * (a[j] - b[j]);
    return sum;
  }

  // Projected gradient with Armijo backtracking from start x0.
  std::pair<std::vector<double>, double> descend(const std::vector<double>& x0, int& iterations) {
    std::vector<double> s, trial, x(cells()), d;
    project(x0, s);
    double f = objective(s);
    double t = 1.0;
    int stall = 0;
    for (int it = 0; it < max_iterations_; ++it) {
      ++iterations;
      gradient(s, d);
      bool accepted = false;
      double f_new = f;
      while (t > 1e-14) {
        for (std::size_t j = 0; j < cells(); ++j) x[j] = s[j] - t * d[j];
        project(x, trial);
        const double dist2 = weighted_distance2(trial, s);
        if (dist2 < 1e-26) break;
        f_new = objective(trial);
        if (f_new <= f - 1e-4 * dist2 / t) {
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) break;
      const double improvement = f - f_new;
      s.swap(trial);
      f = f_new;
      t = std::min(2.0 * t, 1e6);
      stall = improvement < 1e-3 * tolerance_ ? stall + 1 : 0;
      if (stall >= 5) break;
    }
    return {s, f};
  }

  Distribution to_distribution(const std::vector<double>& s) const {
    std::vector<double> cdf(v_.size());
    for (std::size_t j = 0; j < cells(); ++j) cdf[j] = 1.0 - s[j];
    cdf.back() = 1.0;
    return Distribution::discrete(v_, cdf);
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  double level(const std::vector<double>& s, std::size_t k) const {
    if (k == npos) return 0.0;
    if (k >= cells()) return 1.0;
    return 1.0 - s[k];
  }

  void fill(const std::vector<double>& x, double nu, std::vector<double>& s) {
    shifted_.resize(cells());
    for (std::size_t j = 0; j < cells(); ++j) shifted_[j] = x[j] - nu * w_[j];
    pav_nonincreasing(shifted_, h_, iso_, blocks_);
    // PAV commutes with constant shifts, so mu only needs the clip.
    auto mean_at = [&](double mu) {
      double sum = 0.0;
      for (std::size_t j = 0; j < cells(); ++j) sum += h_[j] * std::clamp(iso_[j] - mu, 0.0, 1.0);
      return sum - p_.m;
    };
    const auto [lo_it, hi_it] = std::minmax_element(iso_.begin(), iso_.end());
    const double lo = *lo_it - 1.0;
    const double hi = *hi_it;
    const double g_lo = mean_at(lo);
    double mu = lo;
    if (g_lo > 0.0) mu = detail::toms748_root(mean_at, lo, hi, g_lo, mean_at(hi));
    s.resize(cells());
    for (std::size_t j = 0; j < cells(); ++j) s[j] = std::clamp(iso_[j] - mu, 0.0, 1.0);
  }

  Problem p_;
  int max_iterations_;
  double tolerance_;
  std::vector<double> v_, h_, w_;
  double second_cap_ = 0.0;
  std::size_t k_right_ = 0, k_left_ = 0, tail_start_ = 0;
  std::vector<double> shifted_, iso_;
  std::vector<Block> blocks_;
};

struct Found {
  double value = std::numeric_limits<double>::infinity();
  std::optional<Distribution> dist;
  int iterations = 0;
};

Found search_discretized(const Problem& p, double grid_max, const OracleConfig& config) {
  DiscreteSearch search(p, grid_max, config.value_grid_size, config.max_iterations, config.tolerance);
  Found best;
  for (int start = 0; start < config.starts; ++start) {
    std::vector<double> x0(search.cells());
    for (std::size_t j = 0; j < x0.size(); ++j)
      x0[j] = counter_uniform(config.seed, kStartStream + static_cast<std::uint64_t>(start), j);
    std::sort(x0.begin(), x0.end(), std::greater<>());
    auto [s, f] = search.descend(x0, best.iterations);
    if (f < best.value) {
      best.value = f;
      best.dist = search.to_distribution(s);
    }
  }
  // Report the revenue of the returned object itself.
  best.value = p.revenue(*best.dist);
  return best;
}

// ---- parametric families -----------------------------------------------------

template <std::size_t D>
using Point = std::array<double, D>;

// Atom at a, mass p, and a binary high point h with the mean pinned.
std::optional<Distribution> build_binary(const Problem& p, const Point<2>& u) {
  const double m = p.m;
  const double a = u[0] * m;
  if (!(a < m)) return std::nullopt;
  const double h_max = p.bounded ? p.vmax : m + p.sigma * p.sigma / (m - a);
  const double h = m + u[1] * (h_max - m);
  if (!(h > a)) return std::nullopt;
  return Distribution::binary(a, h, std::clamp((h - m) / (h - a), 0.0, 1.0));
}

// Atom at a with a uniform tail on [a, b].
std::optional<Distribution> build_atom_uniform(const Problem& p, const Point<2>& u) {
  const double m = p.m;
  const double a = u[0] * m;
  if (!(a < m)) return std::nullopt;
  const double b_min = 2.0 * m - a;
  // E(v - a)^2 = 2 (m - a)(b - a) / 3 once the mean is pinned.
  const double b_max =
      p.bounded ? p.vmax : a + 1.5 * (p.sigma * p.sigma + (m - a) * (m - a)) / (m - a);
  if (!(b_min <= b_max)) return std::nullopt;
  const double b = b_min + u[1] * (b_max - b_min);
  const double mass = std::clamp(1.0 - 2.0 * (m - a) / (b - a), 0.0, 1.0);
  return Distribution::atom_uniform(a, mass, a, b);
}

// Atom at a with a uniform block on [l, l + w].
std::optional<Distribution> build_atom_gap_uniform(const Problem& p, const Point<3>& u) {
  const double m = p.m;
  const double a = u[0] * m;
  if (!(a < m)) return std::nullopt;
  const double big_a = m - a;
  const double l_lo = p.bounded ? std::max(a, 2.0 * m - p.vmax) : std::max(a, m - std::sqrt(3.0) * p.sigma);
  const double l_hi = p.bounded ? p.vmax : m + p.sigma * p.sigma / big_a;
  if (!(l_lo < l_hi)) return std::nullopt;
  const double l = l_lo + u[1] * (l_hi - l_lo);
  const double w_min = std::max(2.0 * (m - l), 0.0);
  double w_max = 0.0;
  if (p.bounded) {
    w_max = p.vmax - l;
  } else {
    // Variance binds where the block midpoint K - a solves
    // 4 K^2 - (2 d + 3 T) K + d^2 = 0, d = l - a, T = (sigma^2 + A^2) / A.
    const double d = l - a;
    const double t = (p.sigma * p.sigma + big_a * big_a) / big_a;
    const double bq = 2.0 * d + 3.0 * t;
    const double k = (bq + std::sqrt(std::max(bq * bq - 16.0 * d * d, 0.0))) / 8.0;
    w_max = 2.0 * (k - d);
  }
  if (!(w_min <= w_max)) return std::nullopt;
  const double w = w_min + u[2] * (w_max - w_min);
  if (!(w > 1e-12 * std::max(1.0, m))) return std::nullopt;
  const double mid = l + 0.5 * w;
  const double mass = std::clamp((mid - m) / (mid - a), 0.0, 1.0);
  return Distribution::atom_uniform(a, mass, l, l + w);
}

template <std::size_t D, class Build>
Found search_family(const Problem& p, Build build, const std::vector<double>& a_values,
                    const std::array<int, D>& resolution) {
  struct Scored {
    Point<D> u;
    double value;
  };
  std::vector<Scored> scored;
  Found out;
  auto eval = [&](const Point<D>& u) -> double {
    ++out.iterations;
    const auto d = build(p, u);
    return d ? p.revenue(*d) : std::numeric_limits<double>::infinity();
  };
  // Exhaustive grid: first coordinate over a_values, the rest uniform on [0, 1].
  std::size_t inner = 1;
  for (std::size_t k = 1; k < D; ++k) inner *= static_cast<std::size_t>(resolution[k] + 1);
  for (double ua : a_values) {
    for (std::size_t idx = 0; idx < inner; ++idx) {
      Point<D> u{};
      u[0] = ua;
      std::size_t rest = idx;
      for (std::size_t k = 1; k < D; ++k) {
        const auto steps = static_cast<std::size_t>(resolution[k]);
        u[k] = static_cast<double>(rest % (steps + 1)) / static_cast<double>(steps);
        rest /= steps + 1;
      }
      const double v = eval(u);
      if (std::isfinite(v)) scored.push_back({u, v});
    }
  }
  if (scored.empty()) return out;
  std::stable_sort(scored.begin(), scored.end(), [](const Scored& x, const Scored& y) { return x.value < y.value; });
  // Compass refinement from the best few grid points.
  const std::size_t seeds = std::min<std::size_t>(4, scored.size());
  for (std::size_t sidx = 0; sidx < seeds; ++sidx) {
    Point<D> u = scored[sidx].u;
    double best = scored[sidx].value;
    std::array<double, D> step{};
    step[0] = 1.0 / 64.0;
    for (std::size_t k = 1; k < D; ++k) step[k] = 1.0 / resolution[k];
    for (int guard = 0; guard < 4000; ++guard) {
      bool moved = false;
      for (std::size_t k = 0; k < D && !moved; ++k) {
        for (double sign : {-1.0, 1.0}) {
          Point<D> trial = u;
          trial[k] = std::clamp(u[k] + sign * step[k], 0.0, 1.0);
          if (trial[k] == u[k]) continue;
          const double v = eval(trial);
          if (v < best) {
            best = v;
            u = trial;
            moved = true;
            break;
          }
        }
      }
      if (!moved) {
        bool active = false;
        for (auto& s : step) {
          s *= 0.5;
          active = active || s > 1e-11;
        }
        if (!active) break;
      }
    }
    if (best < out.value) {
      out.value = best;
      out.dist = build(p, u);
    }
  }
  return out;
}

std::vector<double> a_grid(const Problem& p, int points) {
  std::vector<double> u;
  for (int i = 0; i < points; ++i) u.push_back(static_cast<double>(i) / points);
  for (double a : {0.0, p.c, p.r, p.r + 1e-9 * std::max(1.0, p.r)})
    if (a >= 0.0 && a < p.m) u.push_back(a / p.m);
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

}  // namespace

OracleResult minimize_revenue(double r, const AuctionSetting& setting, TieRule tie, const OracleConfig& config) {
  if (!(r >= 0.0)) throw DomainError("negative_reserve", "reserve price must be non-negative");
  setting.validate();
  config.validate();
  Problem p;
  p.r = r;
  p.n = setting.bidders;
  p.c = setting.cost;
  p.tie = tie;
  p.m = setting.mean();
  p.bounded = setting.is_bounded();
  if (p.bounded) {
    p.vmax = setting.bounded_values().vmax;
  } else {
    p.sigma = setting.sigma();
  }
  const double grid_max =
      config.value_grid_max.value_or(p.bounded ? p.vmax : p.m + config.sigma_multiple * p.sigma);
  if (!(grid_max >= p.m)) throw DomainError("infeasible_config", "value grid ends below the mean");
  if (p.bounded && grid_max > p.vmax) throw DomainError("infeasible_config", "value grid exceeds vmax");

  auto has = [&](Family f) { return std::find(config.families.begin(), config.families.end(), f) != config.families.end(); };
  OracleResult result;
  result.best_revenue = std::numeric_limits<double>::infinity();
  bool found = false;
  auto take = [&](Family f, Found&& candidate) {
    result.iterations += candidate.iterations;
    if (candidate.dist && candidate.value < result.best_revenue) {
      result.best_revenue = candidate.value;
      result.best_distribution = *candidate.dist;
      result.family = f;
      found = true;
    }
  };
  // Family order doubles as the tie-break order.
  if (has(Family::DiscretizedCdf)) take(Family::DiscretizedCdf, search_discretized(p, grid_max, config));
  if (has(Family::Binary))
    take(Family::Binary, search_family<2>(p, build_binary, a_grid(p, 48), {0, 48}));
  if (has(Family::AtomPlusUniform))
    take(Family::AtomPlusUniform, search_family<2>(p, build_atom_uniform, a_grid(p, 48), {0, 48}));
  if (has(Family::AtomPlusGapUniform))
    take(Family::AtomPlusGapUniform, search_family<3>(p, build_atom_gap_uniform, a_grid(p, 20), {0, 40, 24}));
  if (has(Family::ClosedFormSeed)) {
    const Distribution seeds[] = {
        p.bounded ? worst_case_bounded(setting) : worst_case_variance(setting),
        p.bounded ? threat_bounded(r, setting).distribution : threat_variance(r, setting).distribution,
    };
    for (const auto& d : seeds) {
      Found f;
      f.value = expected_revenue(d, r, setting, tie);
      f.dist = d;
      take(Family::ClosedFormSeed, std::move(f));
    }
  }
  if (!found) throw DomainError("infeasible_config", "no feasible distribution found");

  const auto mo = moments(result.best_distribution);
  result.mean_residual = std::abs(mo.mean - p.m) / p.m;
  if (p.bounded) {
    result.bound_residual = std::max(0.0, support_upper(result.best_distribution) - p.vmax) / p.vmax;
  } else {
    const double var = p.sigma * p.sigma;
    result.bound_residual = std::max(0.0, mo.variance - var) / var;
  }
  return result;
}

VerificationReport verify_maxmin(const AuctionSetting& setting, int r_grid_size, const OracleConfig& config) {
  if (r_grid_size < 20) throw DomainError("invalid_config", "r_grid_size must be at least 20");
  setting.validate();
  config.validate();
  const double m = setting.mean();
  const double c = setting.cost;
  VerificationReport rep;
  rep.cost = c;
  bool claimed_unique = false;
  if (setting.is_bounded()) {
    const auto sol = maxmin_bounded(setting);
    rep.maxmin_revenue = sol.maxmin_revenue;
    claimed_unique = sol.unique;
  } else {
    const auto sol = maxmin_variance(setting);
    rep.maxmin_revenue = sol.maxmin_revenue;
    claimed_unique = sol.unique;
  }
  rep.claimed_unique = claimed_unique;

  const double r_max = 1.25 * m;
  const double spacing = r_max / (r_grid_size - 1);
  std::vector<double> grid;
  for (int i = 0; i < r_grid_size; ++i) grid.push_back(r_max * i / (r_grid_size - 1));
  grid.push_back(c);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(), [](double x, double y) { return std::abs(x - y) <= 1e-12; }),
             grid.end());
  rep.points.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const double r = grid[i];
    const auto res = minimize_revenue(r, setting, TieRule::NoSaleAtReserve, config);
    auto& pt = rep.points[i];
    pt.r = r;
    pt.oracle_revenue = res.best_revenue;
    pt.family = res.family;
    pt.closed_form_bound =
        setting.is_bounded() ? threat_revenue_bounded(r, setting) : threat_revenue_variance(r, setting);
  });

  rep.max_excess = -std::numeric_limits<double>::infinity();
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& pt : rep.points) {
    rep.max_excess = std::max(rep.max_excess, pt.oracle_revenue - rep.maxmin_revenue);
    best = std::max(best, pt.oracle_revenue);
    if (std::abs(pt.r - c) <= 1e-12) rep.oracle_at_cost = pt.oracle_revenue;
  }
  rep.envelope_ok = rep.max_excess <= rep.envelope_tolerance;
  rep.at_cost_ok = std::abs(rep.oracle_at_cost - rep.maxmin_revenue) <= rep.at_cost_tolerance;
  rep.empirical_unique = true;
  for (const auto& pt : rep.points) {
    if (pt.oracle_revenue >= best - rep.envelope_tolerance) {
      rep.argmax.push_back(pt.r);
      if (std::abs(pt.r - c) > spacing * (1.0 + 1e-9)) rep.empirical_unique = false;
    }
  }
  rep.passed = rep.envelope_ok && rep.at_cost_ok && rep.empirical_unique == rep.claimed_unique;
  return rep;
}

}  // namespace robust_reserve
