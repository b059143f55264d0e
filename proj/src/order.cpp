#include "ordmet/order.hpp"

#include <algorithm>
#include <array>
#include <tuple>

#include "ordmet/kernels.hpp"
#include "samples_internal.hpp"

namespace ordmet {

std::string_view to_string(Order o) {
  switch (o) {
    case Order::equal: return "equal";
    case Order::less: return "strictly-less";
    case Order::greater: return "strictly-greater";
    case Order::incomparable: return "incomparable";
  }
  return "?";
}

namespace {

bool cone_leq(const Element& a, const Element& b) {
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

}  // namespace

OrderedGroup OrderedGroup::coordinate_cone(std::size_t dim) {
  std::string name = dim == 1 ? "Q" : "Q^" + std::to_string(dim) + " (orthant cone)";
  return OrderedGroup(std::move(name), dim, cone_leq);
}

OrderedGroup::OrderedGroup(std::string name, std::size_t dim, LeqFn leq)
    : name_(std::move(name)), dim_(dim), leq_(std::move(leq)) {
  // Every instance must carry a non-identity element.
  if (dim_ == 0) throw DomainError("ordered group must have dimension >= 1");
}

void OrderedGroup::require(const Element& a) const {
  if (!contains(a))
    throw DomainError("element " + to_string(a) + " is not in " + name_);
}

Element OrderedGroup::add(const Element& a, const Element& b) const {
  require(a);
  require(b);
  return a + b;
}

Element OrderedGroup::neg(const Element& a) const {
  require(a);
  return -a;
}

bool OrderedGroup::leq(const Element& a, const Element& b) const {
  require(a);
  require(b);
  return leq_(a, b);
}

Order OrderedGroup::compare(const Element& a, const Element& b) const {
  require(a);
  require(b);
  if (a == b) return Order::equal;
  if (leq_(a, b)) return Order::less;
  if (leq_(b, a)) return Order::greater;
  return Order::incomparable;
}

OrderedGroup OrderedGroup::with_order(std::string name, LeqFn leq) const {
  return OrderedGroup(std::move(name), dim_, std::move(leq));
}

OrderedModule OrderedModule::coordinate_cone(std::size_t dim) {
  return OrderedModule(
      OrderedGroup::coordinate_cone(dim), [](const Rational& r, const Rational& s) { return r <= s; },
      [](const Rational& r, const Element& a) { return a.scaled(r); });
}

OrderedModule::OrderedModule(OrderedGroup group, RingLeqFn ring_leq, ScaleFn scale)
    : group_(std::move(group)), ring_leq_(std::move(ring_leq)), scale_(std::move(scale)) {}

Element OrderedModule::scale(const Rational& r, const Element& a) const {
  if (!group_.contains(a)) throw DomainError("element " + to_string(a) + " is not in " + group_.name());
  return scale_(r, a);
}

OrderedModule OrderedModule::with_group(OrderedGroup g) const {
  return OrderedModule(std::move(g), ring_leq_, scale_);
}

OrderedModule OrderedModule::with_ring_order(RingLeqFn leq) const {
  return OrderedModule(group_, std::move(leq), scale_);
}

OrderedModule OrderedModule::with_scale(ScaleFn scale) const {
  return OrderedModule(group_, ring_leq_, std::move(scale));
}

OrderError::OrderError(const std::string& context, Element first, Element second)
    : std::runtime_error(context + ": " + to_string(first) + " and " + to_string(second) + " are incomparable"),
      first_(std::move(first)),
      second_(std::move(second)) {}

namespace {

Element extremum(const OrderedGroup& g, const std::vector<Element>& set, const std::string& context, bool least) {
  if (set.empty()) throw std::invalid_argument(context + ": extremum of an empty set");
  auto below = [&](const Element& a, const Element& b) { return least ? g.leq(a, b) : g.leq(b, a); };
  // Single pass keeps a running candidate; a least element, if any, survives.
  std::size_t best = 0;
  for (std::size_t i = 1; i < set.size(); ++i)
    if (below(set[i], set[best]) && !below(set[best], set[i])) best = i;
  bool ok = true;
  for (const auto& e : set)
    if (!below(set[best], e)) {
      ok = false;
      break;
    }
  if (ok) return set[best];
  // No extremum: collect two distinct minimal (maximal) members.
  std::vector<const Element*> minimal;
  for (const auto& e : set) {
    bool dominated = false;
    for (const auto& o : set)
      if (o != e && below(o, e)) {
        dominated = true;
        break;
      }
    if (!dominated && std::none_of(minimal.begin(), minimal.end(), [&](const Element* m) { return *m == e; }))
      minimal.push_back(&e);
    if (minimal.size() == 2) break;
  }
  if (minimal.size() < 2) throw std::logic_error(context + ": order predicate is not a partial order");
  throw OrderError(context, *minimal[0], *minimal[1]);
}

}  // namespace

Element least_element(const OrderedGroup& g, const std::vector<Element>& set, const std::string& context) {
  return extremum(g, set, context, true);
}

Element greatest_element(const OrderedGroup& g, const std::vector<Element>& set, const std::string& context) {
  return extremum(g, set, context, false);
}

std::vector<Element> default_edge_elements(std::size_t dim) {
  std::vector<Element> out{Element::zero(dim)};
  for (std::size_t i = 0; i < dim; ++i) {
    out.push_back(Element::unit(dim, i));
    out.push_back(-Element::unit(dim, i));
  }
  std::vector<Rational> mixed(dim);
  for (std::size_t i = 0; i < dim; ++i) mixed[i] = Rational(i % 2 == 0 ? 1 : -1, static_cast<long>(i + 1));
  out.emplace_back(std::move(mixed));
  return out;
}

namespace detail {

std::vector<Element> edge_set(std::size_t dim, const SamplePlan& plan) {
  std::vector<Element> edges = default_edge_elements(dim);
  for (const auto& e : plan.edge)
    if (e.dim() == dim) edges.push_back(e);
  return edges;
}

std::vector<Triple> sample_triples(std::size_t dim, const SamplePlan& plan) {
  const auto edges = edge_set(dim, plan);
  std::vector<Triple> out;
  out.reserve(edges.size() * edges.size() * edges.size() + plan.count);
  for (const auto& a : edges)
    for (const auto& b : edges)
      for (const auto& c : edges) out.push_back({a, b, c});
  RationalSampler rs(plan.seed, plan.span, plan.max_denominator);
  auto strictly_positive = [&] {
    std::vector<Rational> c(dim);
    for (auto& x : c) x = rs.positive_scalar();
    return Element(std::move(c));
  };
  for (std::size_t i = 0; i < plan.count; ++i) {
    Element a = rs.element(dim);
    switch (i % 4) {
      case 0: out.push_back({a, rs.element(dim), rs.element(dim)}); break;
      case 1: {
        Element b = a + rs.nonnegative(dim);
        Element c = b + rs.nonnegative(dim);
        out.push_back({a, b, c});
        break;
      }
      case 2: {
        Element b = a + rs.nonnegative(dim);
        out.push_back({a, b, rs.element(dim)});
        break;
      }
      default: {
        Element b = a + strictly_positive();
        Element c = b + strictly_positive();
        out.push_back({a, b, c});
        break;
      }
    }
  }
  return out;
}

std::string triple_witness(const Triple& t) {
  return "a=" + to_string(t[0]) + " b=" + to_string(t[1]) + " c=" + to_string(t[2]);
}

}  // namespace detail

namespace {

using detail::Triple;
using detail::edge_set;
using detail::sample_triples;
using detail::triple_witness;

template <class Pred>
LawResult run_law(std::string law, const std::vector<Triple>& triples, Pred&& holds) {
  LawResult r{std::move(law), true, triples.size(), {}};
  auto failure = kernels::first_failure(triples.size(), [&](std::size_t i) { return holds(triples[i]); });
  if (failure) {
    r.passed = false;
    r.witness = triple_witness(triples[*failure]);
  }
  return r;
}

}  // namespace

LawReport check_group_laws(const OrderedGroup& g, const SamplePlan& plan) {
  const auto triples = sample_triples(g.dim(), plan);
  const Element zero = g.identity();
  LawReport report;
  auto& laws = report.laws;

  laws.push_back(run_law("associativity", triples, [&](const Triple& t) {
    return g.add(g.add(t[0], t[1]), t[2]) == g.add(t[0], g.add(t[1], t[2]));
  }));
  laws.push_back(run_law("commutativity", triples,
                         [&](const Triple& t) { return g.add(t[0], t[1]) == g.add(t[1], t[0]); }));
  laws.push_back(run_law("identity", triples, [&](const Triple& t) { return g.add(t[0], zero) == t[0]; }));
  laws.push_back(run_law("inverse", triples, [&](const Triple& t) { return g.add(t[0], g.neg(t[0])) == zero; }));
  laws.push_back(run_law("reflexive", triples, [&](const Triple& t) { return g.leq(t[0], t[0]); }));
  laws.push_back(run_law("antisymmetric", triples, [&](const Triple& t) {
    return !(g.leq(t[0], t[1]) && g.leq(t[1], t[0])) || t[0] == t[1];
  }));
  laws.push_back(run_law("transitive", triples, [&](const Triple& t) {
    return !(g.leq(t[0], t[1]) && g.leq(t[1], t[2])) || g.leq(t[0], t[2]);
  }));
  laws.push_back(run_law("g1", triples, [&](const Triple& t) {
    return !g.less(t[0], t[1]) || g.less(g.add(t[0], t[2]), g.add(t[1], t[2]));
  }));
  laws.push_back(run_law("g1-two-sided", triples, [&](const Triple& t) {
    return g.leq(t[0], t[1]) == g.leq(g.add(t[0], t[2]), g.add(t[1], t[2]));
  }));
  laws.push_back(run_law("exactness", triples,
                         [&](const Triple& t) { return g.sub(g.add(t[0], t[1]), t[1]) == t[0]; }));

  LawResult nontrivial{"nontrivial", false, triples.size(), "no non-identity element sampled"};
  for (const auto& t : triples)
    if (t[0] != zero) {
      nontrivial.passed = true;
      nontrivial.witness.clear();
      break;
    }
  laws.push_back(std::move(nontrivial));
  return report;
}

namespace {

struct ModuleSample {
  Rational r, s;
  Element a, b;
};

std::vector<ModuleSample> sample_module(const OrderedModule& m, const SamplePlan& plan) {
  const std::size_t dim = m.dim();
  const std::vector<Rational> ring_edges{0, 1, -1, Rational(1, 2), 2, Rational(-1, 2), Rational(3, 2), Rational(1, 3),
                                         -2};
  const auto edges = edge_set(dim, plan);
  std::vector<ModuleSample> out;
  for (const auto& r : ring_edges)
    for (const auto& s : ring_edges)
      for (const auto& a : edges)
        for (const auto& b : edges) out.push_back({r, s, a, b});
  RationalSampler rs(plan.seed ^ 0x9e3779b97f4a7c15ULL, plan.span, plan.max_denominator);
  for (std::size_t i = 0; i < plan.count; ++i) {
    Rational r = rs.scalar();
    Rational s = i % 2 == 0 ? r + rs.positive_scalar() : rs.scalar();
    Element a = i % 3 == 0 ? rs.nonnegative(dim) : rs.element(dim);
    Element b = i % 3 == 2 ? rs.element(dim) : a + rs.nonnegative(dim);
    out.push_back({std::move(r), std::move(s), std::move(a), std::move(b)});
  }
  return out;
}

std::string module_witness(const ModuleSample& x) {
  return "r=" + to_string(x.r) + " s=" + to_string(x.s) + " a=" + to_string(x.a) + " b=" + to_string(x.b);
}

template <class Pred>
LawResult run_module_law(std::string law, const std::vector<ModuleSample>& samples, Pred&& holds) {
  LawResult res{std::move(law), true, samples.size(), {}};
  auto failure = kernels::first_failure(samples.size(), [&](std::size_t i) { return holds(samples[i]); });
  if (failure) {
    res.passed = false;
    res.witness = module_witness(samples[*failure]);
  }
  return res;
}

}  // namespace

LawReport check_module_laws(const OrderedModule& m, const SamplePlan& plan) {
  const auto& g = m.group();
  const auto samples = sample_module(m, plan);
  LawReport report;
  auto& laws = report.laws;

  LawResult r1{"r1", m.ring_less(0, 1) && !m.ring_leq(1, 0), 1, {}};
  if (!r1.passed) r1.witness = m.ring_less(0, 1) ? "1 <= 0 also holds in the ring order" : "0 < 1 does not hold in the ring order";
  laws.push_back(std::move(r1));

  laws.push_back(run_module_law("m1", samples, [&](const ModuleSample& x) {
    return !(g.less(x.a, x.b) && m.ring_less(0, x.r)) || g.less(m.scale(x.r, x.a), m.scale(x.r, x.b));
  }));
  laws.push_back(run_module_law("m1-weak", samples, [&](const ModuleSample& x) {
    return !(g.leq(x.a, x.b) && m.ring_leq(0, x.r)) || g.leq(m.scale(x.r, x.a), m.scale(x.r, x.b));
  }));
  laws.push_back(run_module_law("m2", samples, [&](const ModuleSample& x) {
    return !(m.ring_less(x.r, x.s) && g.positive(x.a)) || g.less(m.scale(x.r, x.a), m.scale(x.s, x.a));
  }));
  laws.push_back(run_module_law("m2-weak", samples, [&](const ModuleSample& x) {
    return !(m.ring_leq(x.r, x.s) && g.nonnegative(x.a)) || g.leq(m.scale(x.r, x.a), m.scale(x.s, x.a));
  }));
  return report;
}

}  // namespace ordmet
