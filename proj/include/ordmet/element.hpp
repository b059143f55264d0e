#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace ordmet {

/// Exact rational scalar. All arithmetic in the library is exact.
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed
/// input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when the denominator is one).
std::string to_string(const Rational& r);

Rational pow(const Rational& base, unsigned long exponent);

/// Thrown when a value does not belong to the carrier it is used with.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A point of the coordinate group Q^n. Used both for group elements and
/// for points of coordinate metric spaces.
class Element {
 public:
  Element() = default;
  explicit Element(std::vector<Rational> coords) : coords_(std::move(coords)) {}
  Element(std::initializer_list<Rational> coords) : coords_(coords) {}

  static Element zero(std::size_t dim) { return Element(std::vector<Rational>(dim)); }
  static Element unit(std::size_t dim, std::size_t axis);
  static Element filled(std::size_t dim, const Rational& value) {
    return Element(std::vector<Rational>(dim, value));
  }

  std::size_t dim() const { return coords_.size(); }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  std::span<const Rational> coords() const { return coords_; }

  bool is_zero() const;

  Element operator+(const Element& other) const;
  Element operator-(const Element& other) const;
  Element operator-() const;
  Element scaled(const Rational& r) const;

  bool operator==(const Element& other) const { return coords_ == other.coords_; }

  /// Lexicographic order, used only for canonical enumeration and as a
  /// key for ordered containers. Unrelated to any group order.
  std::strong_ordering operator<=>(const Element& other) const;

 private:
  std::vector<Rational> coords_;
};

using Point = Element;

void require_same_dim(const Element& a, const Element& b);

/// "3" for one-dimensional values, "(1, 1/2)" otherwise.
std::string to_string(const Element& e);

/// Accepts "3", "1/2", "(1, 1/2)" and "(1 1/2)".
Element parse_element(std::string_view text);

/// Splits on `sep` outside parentheses and trims the parts.
std::vector<std::string_view> split_top_level(std::string_view text, char sep);
std::string_view trim(std::string_view s);

/// Parses a whitespace separated list of elements; parenthesised tuples may
/// contain spaces.
std::vector<Element> parse_element_list(std::string_view text);

}  // namespace ordmet
