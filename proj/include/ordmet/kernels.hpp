#pragma once

// Data-parallel sweeps used by the law checkers, the convergence scanners and
// the Hausdorff distance. Every kernel has a serial reference with identical
// semantics; the parallel variant must return exactly what the serial one
// returns (same index, same exception), which the kernel tests assert.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <omp.h>

namespace ordmet::kernels {

enum class Exec { serial, parallel };

namespace detail {
inline std::atomic<Exec>& default_exec_slot() {
  static std::atomic<Exec> slot{Exec::parallel};
  return slot;
}
}  // namespace detail

inline Exec default_exec() { return detail::default_exec_slot().load(std::memory_order_relaxed); }
inline void set_default_exec(Exec e) { detail::default_exec_slot().store(e, std::memory_order_relaxed); }

/// Smallest i in [0, count) for which holds(i) is false.
template <class Pred>
std::optional<std::size_t> first_failure_serial(std::size_t count, Pred&& holds) {
  for (std::size_t i = 0; i < count; ++i)
    if (!holds(i)) return i;
  return std::nullopt;
}

template <class Pred>
std::optional<std::size_t> first_failure_parallel(std::size_t count, Pred&& holds) {
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::size_t best = none;
  std::size_t thrown_at = none;
  std::exception_ptr error;
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 64) reduction(min : best)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      if (!holds(idx) && idx < best) best = idx;
    } catch (...) {
#pragma omp critical(ordmet_kernel_error)
      if (idx < thrown_at) {
        thrown_at = idx;
        error = std::current_exception();
      }
    }
  }
  if (error && thrown_at < best) std::rethrow_exception(error);
  if (best == none) return std::nullopt;
  return best;
}

template <class Pred>
std::optional<std::size_t> first_failure(std::size_t count, Pred&& holds, Exec exec = default_exec()) {
  return exec == Exec::serial ? first_failure_serial(count, holds) : first_failure_parallel(count, holds);
}

/// Largest i in [0, count) for which holds(i) is false.
template <class Pred>
std::optional<std::size_t> last_failure_serial(std::size_t count, Pred&& holds) {
  for (std::size_t i = count; i-- > 0;)
    if (!holds(i)) return i;
  return std::nullopt;
}

template <class Pred>
std::optional<std::size_t> last_failure_parallel(std::size_t count, Pred&& holds) {
  // Mirror image of first_failure_parallel, including which exception wins:
  // the serial scan runs from the top, so the highest throwing index counts.
  std::int64_t best = -1;
  std::int64_t thrown_at = -1;
  std::exception_ptr error;
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 64) reduction(max : best)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      if (!holds(static_cast<std::size_t>(i)) && i > best) best = i;
    } catch (...) {
#pragma omp critical(ordmet_kernel_error)
      if (i > thrown_at) {
        thrown_at = i;
        error = std::current_exception();
      }
    }
  }
  if (error && thrown_at > best) std::rethrow_exception(error);
  if (best < 0) return std::nullopt;
  return static_cast<std::size_t>(best);
}

template <class Pred>
std::optional<std::size_t> last_failure(std::size_t count, Pred&& holds, Exec exec = default_exec()) {
  return exec == Exec::serial ? last_failure_serial(count, holds) : last_failure_parallel(count, holds);
}

/// out[i] = fn(i). Exceptions propagate from the smallest throwing index.
template <class Fn>
auto map_serial(std::size_t count, Fn&& fn) {
  using R = decltype(fn(std::size_t{}));
  std::vector<R> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(fn(i));
  return out;
}

template <class Fn>
auto map_parallel(std::size_t count, Fn&& fn) {
  using R = decltype(fn(std::size_t{}));
  std::vector<std::optional<R>> slots(count);
  std::size_t thrown_at = std::numeric_limits<std::size_t>::max();
  std::exception_ptr error;
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      slots[idx].emplace(fn(idx));
    } catch (...) {
#pragma omp critical(ordmet_kernel_error)
      if (idx < thrown_at) {
        thrown_at = idx;
        error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

template <class Fn>
auto map(std::size_t count, Fn&& fn, Exec exec = default_exec()) {
  return exec == Exec::serial ? map_serial(count, fn) : map_parallel(count, fn);
}

}  // namespace ordmet::kernels
