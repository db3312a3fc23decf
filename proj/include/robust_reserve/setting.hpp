#pragma once

#include <string_view>
#include <variant>

namespace robust_reserve {

/// Values lie in [0, vmax] and have the given mean.
struct BoundedValues {
  double mean = 0.0;
  double vmax = 0.0;
};

/// Values are non-negative with the given mean and variance at most `variance`.
struct VarianceBound {
  double mean = 0.0;
  double variance = 0.0;
};

using Constraint = std::variant<BoundedValues, VarianceBound>;

/// A second-price auction with `bidders` iid bidders and seller valuation
/// `cost`, together with what the seller knows about the value distribution.
struct AuctionSetting {
  int bidders = 2;
  double cost = 0.0;
  Constraint constraint = BoundedValues{};

  static AuctionSetting bounded(int bidders, double cost, double mean, double vmax);
  static AuctionSetting variance_bound(int bidders, double cost, double mean, double sigma);

  double mean() const;
  bool is_bounded() const { return std::holds_alternative<BoundedValues>(constraint); }
  const BoundedValues& bounded_values() const;
  const VarianceBound& variance_bound() const;
  double sigma() const;

  /// Throws DomainError("invalid_setting") unless n >= 2, 0 <= c < m and the
  /// constraint is non-degenerate.
  void validate() const;
};

/// Whether a bidder whose value sits exactly at the reserve trades. The
/// limit distributions that put an atom just above r are represented by
/// SaleAtReserve on the distribution with the atom at r.
enum class TieRule { NoSaleAtReserve, SaleAtReserve };

std::string_view to_string(TieRule tie);
TieRule tie_rule_from_string(std::string_view name);

}  // namespace robust_reserve
