#pragma once

// Exact combinatorial counters: binomials, multinomials, and the two
// inclusion-exclusion counts used throughout the operator layer.

#include <kpb/rational.hpp>

#include <span>
#include <vector>

namespace kpb {

inline Int binomial(int n, int k) {
  if (k < 0 || k > n || n < 0) return Int(0);
  if (k > n - k) k = n - k;
  Int result = 1;
  for (int i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

inline Int factorial(int n) {
  Int result = 1;
  for (int i = 2; i <= n; ++i) result *= i;
  return result;
}

inline Int int_pow(Int base, int exp) {
  Int result = 1;
  for (int i = 0; i < exp; ++i) result *= base;
  return result;
}

// Number of distinct orderings of a multiset given by per-value counts.
inline Int multinomial(std::span<const int> counts) {
  int total = 0;
  for (int c : counts) total += c;
  Int result = factorial(total);
  for (int c : counts) result /= factorial(c);
  return result;
}

// Number of tuples in S^t whose coordinates cover all of S, for |S| = m.
// Inclusion-exclusion over omitted elements; (0,0) -> 1 since the empty
// tuple covers the empty set.
inline Int covering_tuple_count(int t, int m) {
  if (m < 0 || t < 0) return Int(0);
  if (m > t) return Int(0);
  if (m == 0) return t == 0 ? Int(1) : Int(0);
  Int total = 0;
  for (int i = 0; i <= m; ++i) {
    Int term = binomial(m, i) * int_pow(Int(m - i), t);
    total += (i % 2 == 0) ? term : -term;
  }
  return total;
}

// Number of tuples in A^len, |A| = alphabet, whose coordinates include a
// prescribed set of `required` elements of A.
inline Int cover_completion_count(int len, int alphabet, int required) {
  if (len < 0 || required < 0 || required > alphabet) return Int(0);
  if (required > len) return Int(0);
  if (len == 0) return required == 0 ? Int(1) : Int(0);
  Int total = 0;
  for (int j = 0; j <= required; ++j) {
    Int term = binomial(required, j) * int_pow(Int(alphabet - j), len);
    total += (j % 2 == 0) ? term : -term;
  }
  return total;
}

}  // namespace kpb
