#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ordmet/element.hpp"

namespace ordmet {

/// Basis functions of the closed-form family, evaluated at n >= 1.
enum class TermKind {
  constant,       // 1
  harmonic,       // 1/n
  inverse_square, // 1/n^2
  geometric,      // ratio^n
};

struct Term {
  TermKind kind;
  Element coeff;
  Rational ratio = 0;  // geometric only, in (0, 1)

  Rational basis(std::uint64_t n) const;
  bool operator==(const Term&) const = default;
};

/// a_n = sum_k coeff_k * f_k(n). Finite sums of constants, c/n, c/n^2 and
/// r^n c. Each basis function is positive and nonincreasing in n, which is
/// what makes exact thresholds computable.
class ClosedForm {
 public:
  ClosedForm() = default;
  explicit ClosedForm(std::vector<Term> terms);

  static ClosedForm constant(Element c);
  static ClosedForm harmonic(Element c);
  static ClosedForm inverse_square(Element c);
  static ClosedForm geometric(Rational ratio, Element c);

  std::size_t dim() const;
  const std::vector<Term>& terms() const { return terms_; }

  Element at(std::uint64_t n) const;
  /// Sum of the constant terms.
  Element limit() const;
  /// True when every non-constant coefficient is coordinatewise
  /// nonnegative, i.e. the sequence is nonincreasing in the cone order.
  bool nonincreasing() const;
  bool has_geometric() const;

  /// Coordinatewise |a_n| as a closed form, when within every coordinate
  /// all coefficients (constant included) share a sign.
  std::optional<ClosedForm> abs_value() const;
  /// True when within every coordinate the non-constant coefficients share
  /// a sign, so each coordinate is monotone in n.
  bool coordinatewise_monotone() const;
  /// Sum over non-constant terms of |coeff| f(n). When the sequence is
  /// coordinatewise monotone this bounds |a_m - a_k| for all m, k >= n.
  Element tail_bound(std::uint64_t n) const;

  ClosedForm operator+(const ClosedForm& other) const;
  ClosedForm operator-(const ClosedForm& other) const;
  ClosedForm scaled(const Rational& r) const;

  bool operator==(const ClosedForm&) const = default;

 private:
  std::vector<Term> terms_;
};

/// "const(c) + harm(c) + harm2(c) + geom(r, c)" with c an element literal.
ClosedForm parse_closed_form(std::string_view text);
std::string to_string(const ClosedForm& f);

/// A sequence indexed from n = 1: either a closed form or an explicit
/// finite prefix.
class Sequence {
 public:
  Sequence(ClosedForm f) : repr_(std::move(f)) {}  // NOLINT(google-explicit-constructor)
  Sequence(std::vector<Element> prefix);           // NOLINT(google-explicit-constructor)

  bool is_closed_form() const { return std::holds_alternative<ClosedForm>(repr_); }
  const ClosedForm* closed_form() const { return std::get_if<ClosedForm>(&repr_); }
  /// Number of materialized terms; unbounded for closed forms.
  std::optional<std::uint64_t> length() const;
  std::size_t dim() const;

  Element at(std::uint64_t n) const;
  /// Terms 1..n (truncated to the prefix length).
  std::vector<Element> materialize(std::uint64_t n) const;

 private:
  std::variant<ClosedForm, std::vector<Element>> repr_;
};

}  // namespace ordmet
