#include "robust_reserve/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "robust_reserve/errors.hpp"
#include "robust_reserve/variance.hpp"

namespace robust_reserve {

double alpha_n(int n) {
  if (n < 2) throw DomainError("invalid_bidders", "need at least two bidders");
  // 0^0 = 1: the n = 2 worst case is Binary(0, vmax).
  if (n == 2) return 1.0;
  const double d = n - 1.0;
  // expm1 of the log keeps precision when alpha_n ~ 1/(2 n^2).
  return std::expm1(std::log1p(1.0 / d) + (n - 2) * std::log1p(-1.0 / (d * d)));
}

double correlated_gap(double mean, double vmax, int n) {
  if (n < 2) throw DomainError("invalid_bidders", "need at least two bidders");
  return (vmax - mean) / (n - 1.0);
}

std::vector<RateTableRow> rate_table(double mean, double vmax, double sigma, int n_max) {
  if (n_max < 3) throw DomainError("invalid_n_max", "n_max must be at least 3");
  if (!(vmax > mean) || !(sigma > 0.0)) throw DomainError("invalid_setting", "require vmax > mean and sigma > 0");
  std::vector<RateTableRow> rows;
  rows.reserve(static_cast<std::size_t>(n_max - 1));
  for (int n = 2; n <= n_max; ++n) {
    const double a = alpha_n(n);
    rows.push_back({n, a * (vmax - mean), gamma_n(n) * sigma, correlated_gap(mean, vmax, n),
                    static_cast<double>(n) * n * a});
  }
  return rows;
}

namespace {

double slope(const std::vector<RateTableRow>& rows, int n_lo, int n_hi, double RateTableRow::*field) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0, k = 0;
  for (const auto& row : rows) {
    if (row.n < n_lo || row.n > n_hi) continue;
    const double x = std::log(static_cast<double>(row.n));
    const double y = std::log(row.*field);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    k += 1;
  }
  if (k < 2) throw DomainError("invalid_range", "slope needs at least two rows");
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace

RateSlopes loglog_slopes(const std::vector<RateTableRow>& rows, int n_lo, int n_hi) {
  return {slope(rows, n_lo, n_hi, &RateTableRow::gap_bounded),
          slope(rows, n_lo, n_hi, &RateTableRow::gap_variance),
          slope(rows, n_lo, n_hi, &RateTableRow::gap_correlated)};
}

RateSlopes top_decade_slopes(const std::vector<RateTableRow>& rows) {
  if (rows.empty()) throw DomainError("invalid_range", "empty rate table");
  const int n_max = rows.back().n;
  return loglog_slopes(rows, std::max(2, n_max / 10), n_max);
}

}  // namespace robust_reserve
