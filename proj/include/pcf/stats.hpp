#pragma once

#include <cstdint>

namespace pcf::stats {

/// log C(n, k).
double log_choose(std::uint64_t n, std::uint64_t k);

/// P(X <= k) for X ~ Binomial(n, p), summed in log space.
double binomial_cdf(std::uint64_t k, std::uint64_t n, double p);

/// P(X >= k) for X ~ Binomial(n, p).
double binomial_sf(std::uint64_t k, std::uint64_t n, double p);

/// Round half away from zero at `digits` decimals, treating the value as the
/// decimal it was written as: 81.085 -> 81.09 even though the nearest double
/// sits just below the midpoint.
double round_decimal(double value, int digits);

}  // namespace pcf::stats
