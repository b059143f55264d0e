#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ordmet/element.hpp"

namespace ordmet {

/// Deterministic finite quantification for universally quantified laws:
/// `count` seeded random draws plus the user supplied edge elements.
struct SamplePlan {
  std::uint64_t seed = 20100132;
  std::size_t count = 1000;
  long span = 6;             // random coordinates lie in [-span, span]
  long max_denominator = 8;  // and have denominators in [1, max_denominator]
  std::vector<Element> edge;
};

/// Seeded generator of rational coordinates.
class RationalSampler {
 public:
  RationalSampler(std::uint64_t seed, long span, long max_denominator)
      : rng_(seed), span_(span), max_den_(max_denominator) {}

  Rational scalar() {
    std::uniform_int_distribution<long> den(1, max_den_);
    const long q = den(rng_);
    std::uniform_int_distribution<long> num(-span_ * q, span_ * q);
    Rational r(num(rng_), q);
    r.canonicalize();
    return r;
  }

  /// Strictly positive scalar in (0, span].
  Rational positive_scalar() {
    std::uniform_int_distribution<long> den(1, max_den_);
    const long q = den(rng_);
    std::uniform_int_distribution<long> num(1, span_ * q);
    Rational r(num(rng_), q);
    r.canonicalize();
    return r;
  }

  Element element(std::size_t dim) {
    std::vector<Rational> c(dim);
    for (auto& x : c) x = scalar();
    return Element(std::move(c));
  }

  /// Coordinatewise nonnegative element; each coordinate is zero with
  /// probability 1/4 so boundary cases of the cone appear.
  Element nonnegative(std::size_t dim) {
    std::vector<Rational> c(dim);
    for (auto& x : c) x = index(4) == 0 ? Rational(0) : positive_scalar();
    return Element(std::move(c));
  }

  std::size_t index(std::size_t bound) {
    std::uniform_int_distribution<std::size_t> d(0, bound - 1);
    return d(rng_);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  long span_;
  long max_den_;
};

}  // namespace ordmet
