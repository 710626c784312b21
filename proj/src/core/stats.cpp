#include "pcf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace pcf::stats {
namespace {

double log_pmf(std::uint64_t j, std::uint64_t n, double log_p, double log_q) {
  return log_choose(n, j) + static_cast<double>(j) * log_p + static_cast<double>(n - j) * log_q;
}

double log_sum_exp(const std::vector<double>& terms) {
  const double peak = *std::max_element(terms.begin(), terms.end());
  if (peak == -std::numeric_limits<double>::infinity()) return peak;
  double total = 0.0;
  for (double t : terms) total += std::exp(t - peak);
  return peak + std::log(total);
}

// Sum of pmf over [lo, hi]. p must be in [0, 1].
double binomial_range(std::uint64_t lo, std::uint64_t hi, std::uint64_t n, double p) {
  if (lo > hi) return 0.0;
  if (p <= 0.0) return lo == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return hi == n ? 1.0 : 0.0;
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  std::vector<double> terms;
  terms.reserve(hi - lo + 1);
  for (std::uint64_t j = lo; j <= hi; ++j) terms.push_back(log_pmf(j, n, log_p, log_q));
  return std::min(1.0, std::exp(log_sum_exp(terms)));
}

}  // namespace

double log_choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

double binomial_cdf(std::uint64_t k, std::uint64_t n, double p) {
  if (k >= n) return 1.0;
  return binomial_range(0, k, n, p);
}

double binomial_sf(std::uint64_t k, std::uint64_t n, double p) {
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  return binomial_range(k, n, n, p);
}

double round_decimal(double value, int digits) {
  const double scale = std::pow(10.0, digits);
  // Snap away representation noise below 1e-6 of the last kept digit before
  // the half-away-from-zero rounding.
  const double scaled = std::round(value * scale * 1e6) / 1e6;
  return std::round(scaled) / scale;
}

}  // namespace pcf::stats
