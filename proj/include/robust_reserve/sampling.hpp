#pragma once

#include <cstdint>
#include <vector>

#include "robust_reserve/distribution.hpp"
#include "robust_reserve/setting.hpp"

namespace robust_reserve {

/// Counter-based generator: the draw for (seed, stream, counter) is a pure
/// function of its key, so any partition of the work reproduces the same
/// numbers. Mixing is SplitMix64's finaliser applied to the folded key.
std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// Uniform on the open interval (0, 1) with 53 bits of resolution.
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// Inverse-cdf draws; element i uses stream i.
std::vector<double> sample(const Distribution& dist, std::int64_t count, std::uint64_t seed);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Simulates `samples` independent auctions: auction i draws its n values
/// from stream i, sells when the top value clears the reserve (or meets it
/// under SaleAtReserve) at max(second value, r), and otherwise the seller
/// keeps c. std_error is the sample standard deviation over sqrt(samples).
/// Throws DomainError("invalid_count") below 1000 samples.
MonteCarloEstimate monte_carlo_revenue(const Distribution& dist, double r, const AuctionSetting& setting,
                                       TieRule tie, std::int64_t samples, std::uint64_t seed);

}  // namespace robust_reserve
