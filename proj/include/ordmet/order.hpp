#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ordmet/element.hpp"
#include "ordmet/law_report.hpp"
#include "ordmet/sampling.hpp"

namespace ordmet {

/// Four-way comparison result. A partial order may leave two elements
/// unrelated; callers that need extrema must handle `incomparable`.
enum class Order { equal, less, greater, incomparable };

std::string_view to_string(Order o);

using LeqFn = std::function<bool(const Element&, const Element&)>;

/// Abelian group Q^n with a translation invariant partial order. The
/// built-in order is the one induced by the nonnegative orthant cone:
/// x <= y iff every coordinate of y - x is nonnegative (for n = 1 this is the
/// usual order of the line). The order predicate can be replaced, which is
/// how corrupted instances are produced for harness sensitivity tests.
class OrderedGroup {
 public:
  static OrderedGroup coordinate_cone(std::size_t dim);

  OrderedGroup(std::string name, std::size_t dim, LeqFn leq);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }

  bool contains(const Element& a) const { return a.dim() == dim_; }
  Element identity() const { return Element::zero(dim_); }
  Element add(const Element& a, const Element& b) const;
  Element neg(const Element& a) const;
  Element sub(const Element& a, const Element& b) const { return add(a, neg(b)); }

  bool leq(const Element& a, const Element& b) const;
  /// a < b: a <= b and a != b.
  bool less(const Element& a, const Element& b) const { return a != b && leq(a, b); }
  Order compare(const Element& a, const Element& b) const;

  /// a in G_+ (a >= identity).
  bool nonnegative(const Element& a) const { return leq(identity(), a); }
  /// a in G^+ (a > identity).
  bool positive(const Element& a) const { return less(identity(), a); }

  OrderedGroup with_order(std::string name, LeqFn leq) const;

 private:
  void require(const Element& a) const;

  std::string name_;
  std::size_t dim_;
  LeqFn leq_;
};

using RingLeqFn = std::function<bool(const Rational&, const Rational&)>;
using ScaleFn = std::function<Element(const Rational&, const Element&)>;

/// Partially ordered module over the rationals (an ordered integral ring).
class OrderedModule {
 public:
  static OrderedModule coordinate_cone(std::size_t dim);

  OrderedModule(OrderedGroup group, RingLeqFn ring_leq, ScaleFn scale);

  const OrderedGroup& group() const { return group_; }
  std::size_t dim() const { return group_.dim(); }

  Element scale(const Rational& r, const Element& a) const;
  bool ring_leq(const Rational& r, const Rational& s) const { return ring_leq_(r, s); }
  bool ring_less(const Rational& r, const Rational& s) const { return r != s && ring_leq_(r, s); }

  OrderedModule with_group(OrderedGroup g) const;
  OrderedModule with_ring_order(RingLeqFn leq) const;
  OrderedModule with_scale(ScaleFn scale) const;

 private:
  OrderedGroup group_;
  RingLeqFn ring_leq_;
  ScaleFn scale_;
};

/// Raised when an extremum over a finite set does not exist because two
/// candidates are unrelated in the order.
class OrderError : public std::runtime_error {
 public:
  OrderError(const std::string& context, Element first, Element second);
  const Element& first() const { return first_; }
  const Element& second() const { return second_; }

 private:
  Element first_;
  Element second_;
};

/// Least element of a nonempty finite set. When none exists, throws
/// OrderError naming two distinct minimal members.
Element least_element(const OrderedGroup& g, const std::vector<Element>& set, const std::string& context);
/// Greatest element, dual of least_element.
Element greatest_element(const OrderedGroup& g, const std::vector<Element>& set, const std::string& context);

/// Default edge elements: identity, unit vectors, their negatives, and a
/// mixed-sign vector.
std::vector<Element> default_edge_elements(std::size_t dim);

/// Checks associativity, commutativity, identity, inverse, the partial
/// order axioms, g1, the two-sided translation law and exactness of
/// (a + b) - b on seeded samples. Failures carry a concrete witness.
LawReport check_group_laws(const OrderedGroup& g, const SamplePlan& plan);

/// Checks r1, m1, m1-weak, m2, m2-weak. Ring samples always include 0, 1
/// and values on both sides of them.
LawReport check_module_laws(const OrderedModule& m, const SamplePlan& plan);

}  // namespace ordmet
