#pragma once

#include <cstdint>
#include <optional>

namespace ordmet::detail {

/// Smallest n in [1, horizon] with pred(n) true, for a predicate that is
/// false up to some point and true from then on. Exponential probe followed
/// by bisection, so pred is evaluated O(log n) times.
template <class Pred>
std::optional<std::uint64_t> first_true(Pred&& pred, std::uint64_t horizon) {
  if (horizon == 0) return std::nullopt;
  if (pred(1)) return 1;
  std::uint64_t lo = 1;  // pred(lo) false
  std::uint64_t hi = 2;
  while (true) {
    if (hi >= horizon) {
      hi = horizon;
      if (!pred(hi)) return std::nullopt;
      break;
    }
    if (pred(hi)) break;
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (pred(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace ordmet::detail
