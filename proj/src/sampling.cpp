#include "robust_reserve/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "robust_reserve/errors.hpp"
#include "robust_reserve/parallel.hpp"

namespace robust_reserve {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Welford accumulator; blocks are merged in index order.
struct Accumulator {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    count += 1.0;
    const double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
  }

  void merge(const Accumulator& o) {
    if (o.count == 0.0) return;
    const double total = count + o.count;
    const double delta = o.mean - mean;
    mean += delta * o.count / total;
    m2 += o.m2 + delta * delta * count * o.count / total;
    count = total;
  }
};

constexpr std::int64_t kBlock = 1 << 14;

}  // namespace

std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  std::uint64_t key = mix64(seed + kGolden);
  key = mix64(key ^ (stream * kGolden + 0x632BE59BD9B4E019ULL));
  return mix64(key + (counter + 1) * kGolden);
}

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return (static_cast<double>(counter_bits(seed, stream, counter) >> 11) + 0.5) * 0x1.0p-53;
}

std::vector<double> sample(const Distribution& dist, std::int64_t count, std::uint64_t seed) {
  if (count < 1) throw DomainError("invalid_count", "sample count must be positive");
  std::vector<double> out(static_cast<std::size_t>(count));
  const std::size_t blocks = static_cast<std::size_t>((count + kBlock - 1) / kBlock);
  parallel_for(blocks, [&](std::size_t b) {
    const std::int64_t lo = static_cast<std::int64_t>(b) * kBlock;
    const std::int64_t hi = std::min(count, lo + kBlock);
    for (std::int64_t i = lo; i < hi; ++i)
      out[static_cast<std::size_t>(i)] = quantile(dist, counter_uniform(seed, static_cast<std::uint64_t>(i), 0));
  });
  return out;
}

MonteCarloEstimate monte_carlo_revenue(const Distribution& dist, double r, const AuctionSetting& setting,
                                       TieRule tie, std::int64_t samples, std::uint64_t seed) {
  if (samples < 1000) throw DomainError("invalid_count", "at least 1000 Monte Carlo auctions are required");
  const int n = setting.bidders;
  const double c = setting.cost;
  const std::size_t blocks = static_cast<std::size_t>((samples + kBlock - 1) / kBlock);
  std::vector<Accumulator> partial(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    const std::int64_t lo = static_cast<std::int64_t>(b) * kBlock;
    const std::int64_t hi = std::min(samples, lo + kBlock);
    Accumulator acc;
    for (std::int64_t i = lo; i < hi; ++i) {
      double first = -INFINITY;
      double second = -INFINITY;
      for (int j = 0; j < n; ++j) {
        const double v = quantile(dist, counter_uniform(seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)));
        if (v > first) {
          second = first;
          first = v;
        } else if (v > second) {
          second = v;
        }
      }
      const bool sold = tie == TieRule::SaleAtReserve ? first >= r : first > r;
      acc.add(sold ? std::max(second, r) : c);
    }
    partial[b] = acc;
  });
  Accumulator total;
  for (const auto& p : partial) total.merge(p);
  const double variance = total.count > 1.0 ? total.m2 / (total.count - 1.0) : 0.0;
  return MonteCarloEstimate{total.mean, std::sqrt(std::max(0.0, variance) / total.count)};
}

}  // namespace robust_reserve
