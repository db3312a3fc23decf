#pragma once

// Value distributions used throughout: point masses, two-point laws, an atom
// followed by a uniform or quantile-parameterised tail, and step cdfs.

#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace robust_reserve {

struct PointMass {
  double at = 0.0;
};

/// Mass `p_low` on `low`, the rest on `high`.
struct Binary {
  double low = 0.0;
  double high = 1.0;
  double p_low = 0.5;
};

/// Parameters of one member of the atom-plus-tail family: an atom of mass q
/// at rho followed by the quantile map
///   u -> (n(n-1) z(u) - lambda1) / (2 lambda2),   u in [q, 1].
/// `tail_mass` caches 1 - q at full precision.
struct GParams {
  double rho = 0.0;
  double q = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 1.0;
  int n = 2;
  double m = 0.0;
  double sigma = 0.0;
  double tail_mass = 1.0;

  /// Quantile at level q + tail_mass * t for t in [0, 1].
  double quantile_at(double t) const;
  /// d quantile / du at level q + tail_mass * t.
  double quantile_slope_at(double t) const;
  /// Upper end of the support.
  double top() const;
};

struct AtomQuantileTail {
  GParams params;
};

/// Mass `atom_mass` at `atom_point`, the rest uniform on [tail_low, tail_high].
struct AtomUniformTail {
  double atom_point = 0.0;
  double atom_mass = 0.0;
  double tail_low = 0.0;
  double tail_high = 1.0;
};

/// Right-continuous step cdf: F(v) = cdf[k] for grid[k] <= v < grid[k+1].
struct DiscreteCdf {
  std::vector<double> grid;
  std::vector<double> cdf;
};

using DistributionVariant =
    std::variant<PointMass, Binary, AtomQuantileTail, AtomUniformTail, DiscreteCdf>;

/// Immutable, validated value distribution.
class Distribution {
 public:
  /// Throws DomainError("invalid_distribution") on violated invariants.
  explicit Distribution(DistributionVariant v);

  static Distribution point(double at) { return Distribution(PointMass{at}); }
  static Distribution binary(double low, double high, double p_low) {
    return Distribution(Binary{low, high, p_low});
  }
  static Distribution atom_uniform(double atom_point, double atom_mass, double tail_low,
                                   double tail_high) {
    return Distribution(AtomUniformTail{atom_point, atom_mass, tail_low, tail_high});
  }
  static Distribution g_tail(const GParams& params) { return Distribution(AtomQuantileTail{params}); }
  static Distribution discrete(std::vector<double> grid, std::vector<double> cdf) {
    return Distribution(DiscreteCdf{std::move(grid), std::move(cdf)});
  }

  const DistributionVariant& variant() const { return v_; }

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }

  /// "point", "binary", "g_tail", "atom_uniform" or "discrete".
  std::string_view type_name() const;

 private:
  DistributionVariant v_;
};

/// F(v).
double cdf_eval(const Distribution& dist, double v);
/// F(v-), the left limit.
double cdf_left(const Distribution& dist, double v);
/// Generalised inverse inf{v : F(v) >= u} for u in (0, 1].
double quantile(const Distribution& dist, double u);
/// Lowest and highest support points.
double support_lower(const Distribution& dist);
double support_upper(const Distribution& dist);

/// Points where the cdf has an atom or changes analytic form, ascending.
std::vector<double> breakpoints(const Distribution& dist);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Closed-form (or exact polynomial) mean and variance.
Moments moments(const Distribution& dist);

}  // namespace robust_reserve
