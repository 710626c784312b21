#pragma once

// Reference computations used only by tests. Each takes a different route
// from the library code it checks: exact integer arithmetic instead of
// log-space sums, direct enumeration instead of closed forms.

#include <cstdint>
#include <vector>

namespace pcf::test {

using u128 = unsigned __int128;

/// C(n, k) exactly; valid for n <= 120.
inline u128 exact_choose(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  u128 c = 1;
  for (unsigned i = 1; i <= k; ++i) c = c * (n - k + i) / i;  // stays integral at every step
  return c;
}

/// Two-sided sign test by exact enumeration of Binomial(d, 1/2), d <= 120.
inline double exact_sign_test_oracle(unsigned improved, unsigned regressed) {
  const unsigned d = improved + regressed;
  const unsigned low = improved < regressed ? improved : regressed;
  u128 tail = 0;
  for (unsigned j = 0; j <= low; ++j) tail += exact_choose(d, j);
  const u128 total = u128{1} << d;
  const long double p = 2.0L * static_cast<long double>(tail) / static_cast<long double>(total);
  return static_cast<double>(p > 1.0L ? 1.0L : p);
}

/// P(Binomial(k, q) <= (k-1)/2) by direct term-by-term summation.
inline double majority_error_oracle(double q, unsigned k) {
  long double total = 0.0L;
  for (unsigned j = 0; j <= (k - 1) / 2; ++j) {
    long double term = static_cast<long double>(exact_choose(k, j));
    for (unsigned a = 0; a < j; ++a) term *= q;
    for (unsigned b = 0; b < k - j; ++b) term *= (1.0L - q);
    total += term;
  }
  return static_cast<double>(total);
}

}  // namespace pcf::test
