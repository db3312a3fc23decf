#pragma once

// Brute-force adversary: minimises R(F, r) over distributions with the
// given mean and either support in [0, vmax] or variance at most sigma^2.
// The searched families never use the closed-form constructions; those enter
// only as the separately tagged closed_form_seed candidate.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "robust_reserve/distribution.hpp"
#include "robust_reserve/setting.hpp"

namespace robust_reserve {

/// Search families, in tie-break order.
enum class Family { DiscretizedCdf, Binary, AtomPlusUniform, AtomPlusGapUniform, ClosedFormSeed };

std::string_view to_string(Family family);
/// Throws DomainError("invalid_family") on unknown names.
Family family_from_string(std::string_view name);

struct OracleConfig {
  int value_grid_size = 400;
  /// Upper end of the discretized value grid. Defaults to vmax for bounded
  /// values and m + sigma_multiple * sigma under a variance bound.
  std::optional<double> value_grid_max;
  double sigma_multiple = 12.0;
  /// ClosedFormSeed evaluates the closed-form worst case at r = c and the
  /// threat at r, and loses every tie.
  std::vector<Family> families{Family::DiscretizedCdf, Family::Binary, Family::AtomPlusUniform,
                               Family::AtomPlusGapUniform, Family::ClosedFormSeed};
  /// Projected-gradient iterations per start.
  int max_iterations = 400;
  double tolerance = 1e-7;
  int starts = 10;
  std::uint64_t seed = 0;

  /// Throws DomainError("invalid_config").
  void validate() const;
};

struct OracleResult {
  double best_revenue = 0.0;
  Distribution best_distribution = Distribution::point(0.0);
  Family family = Family::DiscretizedCdf;
  /// |mean - m| / m.
  double mean_residual = 0.0;
  /// Relative excess of the variance over sigma^2, or of the support over
  /// vmax; zero when feasible.
  double bound_residual = 0.0;
  int iterations = 0;
};

/// Throws DomainError("infeasible_config") when the value grid ends below m.
OracleResult minimize_revenue(double r, const AuctionSetting& setting, TieRule tie, const OracleConfig& config);

struct VerificationPoint {
  double r = 0.0;
  double oracle_revenue = 0.0;
  /// Revenue of the closed-form threat at r.
  double closed_form_bound = 0.0;
  Family family = Family::DiscretizedCdf;
};

struct VerificationReport {
  double maxmin_revenue = 0.0;
  double cost = 0.0;
  double envelope_tolerance = 1e-6;
  double at_cost_tolerance = 1e-4;
  std::vector<VerificationPoint> points;
  /// max over the grid of oracle_revenue - maxmin_revenue.
  double max_excess = 0.0;
  double oracle_at_cost = 0.0;
  bool envelope_ok = false;
  bool at_cost_ok = false;
  /// Grid points whose oracle revenue is within envelope_tolerance of the
  /// best one.
  std::vector<double> argmax;
  /// Every argmax point lies within one grid spacing of c.
  bool empirical_unique = false;
  bool claimed_unique = false;
  bool passed = false;
};

/// Runs the oracle on r_grid_size reserves evenly spaced on [0, 1.25 m],
/// plus r = c, and checks the envelope against the maxmin revenue. Failures
/// are reported in the result, not thrown.
VerificationReport verify_maxmin(const AuctionSetting& setting, int r_grid_size, const OracleConfig& config);

}  // namespace robust_reserve
