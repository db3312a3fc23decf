#pragma once

// Revenue gaps m - R*_n as the number of bidders grows.

#include <vector>

namespace robust_reserve {

/// n/(n-1) (1 - 1/(n-1)^2)^(n-2) - 1, with 0^0 = 1 so alpha_2 = 1.
/// The bounded-values maxmin revenue is m - alpha_n (vmax - m) whenever the
/// worst case has an interior low point.
double alpha_n(int n);

/// Gap (vmax - m) / (n - 1) when values may be arbitrarily correlated.
double correlated_gap(double mean, double vmax, int n);

struct RateTableRow {
  int n = 0;
  double gap_bounded = 0.0;
  double gap_variance = 0.0;
  double gap_correlated = 0.0;
  double n_sq_alpha = 0.0;
};

/// Rows for n = 2..n_max with gap_bounded = alpha_n (vmax - m),
/// gap_variance = gamma_n sigma and the correlated gap.
std::vector<RateTableRow> rate_table(double mean, double vmax, double sigma, int n_max);

struct RateSlopes {
  double bounded = 0.0;
  double variance = 0.0;
  double correlated = 0.0;
};

/// Least-squares slopes of log gap against log n over rows with
/// n in [n_lo, n_hi].
RateSlopes loglog_slopes(const std::vector<RateTableRow>& rows, int n_lo, int n_hi);

/// Slopes over the top decade [n_max / 10, n_max] of the table.
RateSlopes top_decade_slopes(const std::vector<RateTableRow>& rows);

}  // namespace robust_reserve
