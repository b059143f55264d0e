#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's order, metric or sequence code; values are built from raw
// mpq_class arithmetic so that a bug in the library cannot hide itself.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Q = mpq_class;
using Vec = std::vector<Q>;

inline Q frac(long n, long d) {
  Q q(n, d);
  q.canonicalize();
  return q;
}

inline bool cone_leq(const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline bool all_positive(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Q& q) { return q > 0; });
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

/// Largest n in [1, limit] at which holds(n) is false, 0 when none. With a
/// limit far beyond the true threshold this is the exact N.
inline std::uint64_t last_violation(std::uint64_t limit, const std::function<bool(std::uint64_t)>& holds) {
  for (std::uint64_t n = limit; n >= 1; --n)
    if (!holds(n)) return n;
  return 0;
}

/// max over a in A of min over b in B of |a - b|, then symmetrised.
inline Q hausdorff_line(const std::vector<Q>& a, const std::vector<Q>& b) {
  auto directed = [](const std::vector<Q>& x, const std::vector<Q>& y) {
    Q worst = 0;
    for (const auto& p : x) {
      Q best = abs(p - y.front());
      for (const auto& q : y) best = std::min<Q>(best, abs(p - q));
      worst = std::max<Q>(worst, best);
    }
    return worst;
  };
  return std::max<Q>(directed(a, b), directed(b, a));
}

/// Seeded rational generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

  Q rational(long span, long max_den) {
    const long d = integer(1, max_den);
    return frac(integer(-span * d, span * d), d);
  }

  Q positive(long span, long max_den) {
    const long d = integer(1, max_den);
    return frac(integer(1, span * d), d);
  }

  bool coin() { return integer(0, 1) == 1; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
