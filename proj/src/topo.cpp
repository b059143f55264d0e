#include "ordmet/topo.hpp"

#include <algorithm>

#include "ordmet/kernels.hpp"
#include "samples_internal.hpp"
#include "threshold_internal.hpp"

namespace ordmet {

namespace {

bool interior_positive(const Element& d) {
  for (const auto& c : d.coords())
    if (c <= 0) return false;
  return true;
}

}  // namespace

TopoStructure TopoStructure::strict_order(OrderedModule m) {
  const OrderedGroup g = m.group();
  const std::size_t dim = g.dim();
  return TopoStructure("strict-order", TopoKind::strict_order, std::move(m),
                       [g](const Element& a, const Element& b) { return g.less(a, b); },
                       Element::filled(dim, 1));
}

TopoStructure TopoStructure::interior_cone(OrderedModule m) {
  const std::size_t dim = m.dim();
  return TopoStructure("interior-cone", TopoKind::interior_cone, std::move(m),
                       [](const Element& a, const Element& b) { return interior_positive(b - a); },
                       Element::filled(dim, 1));
}

TopoStructure::TopoStructure(std::string name, TopoKind kind, OrderedModule m, RelationFn below, Element witness)
    : name_(std::move(name)), kind_(kind), module_(std::move(m)), below_(std::move(below)), witness_(std::move(witness)) {
  if (!module_.group().contains(witness_)) throw DomainError("positivity witness has the wrong dimension");
}

bool TopoStructure::below(const Element& a, const Element& b) const {
  const auto& g = group();
  if (!g.contains(a) || !g.contains(b))
    throw DomainError("element " + to_string(g.contains(a) ? b : a) + " is not in " + g.name());
  return below_(a, b);
}

Element TopoStructure::split(const Element& eps) const { return module_.scale(Rational(1, 2), eps); }

TopoStructure TopoStructure::with_module(OrderedModule m) const {
  // The built-in relations close over the group, so rebuild them.
  switch (kind_) {
    case TopoKind::strict_order: return strict_order(std::move(m));
    case TopoKind::interior_cone: return interior_cone(std::move(m));
    case TopoKind::custom: break;
  }
  return TopoStructure(name_, kind_, std::move(m), below_, witness_);
}

TopoStructure TopoStructure::with_relation(std::string name, RelationFn below) const {
  return TopoStructure(std::move(name), TopoKind::custom, module_, std::move(below), witness_);
}

LawReport check_topo_laws(const TopoStructure& t, const SamplePlan& plan) {
  using detail::Triple;
  const auto& g = t.group();
  const auto& m = t.module();
  const auto triples = detail::sample_triples(t.dim(), plan);
  LawReport report;
  auto& laws = report.laws;

  auto run = [&](std::string law, auto&& holds) {
    LawResult r{std::move(law), true, triples.size(), {}};
    auto failure = kernels::first_failure(triples.size(), [&](std::size_t i) { return holds(triples[i]); });
    if (failure) {
      r.passed = false;
      r.witness = detail::triple_witness(triples[*failure]);
    }
    laws.push_back(std::move(r));
  };

  LawResult nonempty{"witness", t.is_scale(t.positivity_witness()), 1, {}};
  if (!nonempty.passed) nonempty.witness = "eps0=" + to_string(t.positivity_witness()) + " is not >> identity";
  laws.push_back(std::move(nonempty));

  run("t1", [&](const Triple& x) { return !t.below(x[0], x[1]) || g.less(x[0], x[1]); });
  run("t2", [&](const Triple& x) { return !(g.leq(x[0], x[1]) && t.below(x[1], x[2])) || t.below(x[0], x[2]); });
  run("t3", [&](const Triple& x) { return !t.below(x[0], x[1]) || t.below(g.add(x[0], x[2]), g.add(x[1], x[2])); });

  // t4: a >= identity, a != identity must escape some eps0 / 2^k.
  {
    std::vector<Element> probes;
    for (const auto& x : triples)
      for (const auto& e : x)
        if (g.nonnegative(e)) probes.push_back(e);
    for (unsigned k = 0; k < 80; k += 7) probes.push_back(m.scale(pow(Rational(1, 3), k), t.positivity_witness()));
    for (std::size_t i = 0; i < t.dim(); ++i) probes.push_back(Element::unit(t.dim(), i).scaled(Rational(1, 1000)));
    constexpr unsigned max_halvings = 512;
    LawResult r{"t4", true, probes.size(), {}};
    auto failure = kernels::first_failure(probes.size(), [&](std::size_t i) {
      const Element& a = probes[i];
      if (a == g.identity()) return true;
      Element eps = t.positivity_witness();
      for (unsigned k = 0; k <= max_halvings; ++k) {
        if (!t.below(a, eps)) return true;
        eps = m.scale(Rational(1, 2), eps);
      }
      return false;
    });
    if (failure) {
      r.passed = false;
      r.witness = "a=" + to_string(probes[*failure]) + " stays << eps0/2^k for k <= 512";
    }
    laws.push_back(std::move(r));
  }

  // t5: each sampled eps >> identity admits eta >> identity with eta << eps.
  {
    std::vector<Element> scales{t.positivity_witness()};
    for (const auto& x : triples) {
      Element d = g.sub(x[2], x[1]);
      if (t.is_scale(d)) scales.push_back(std::move(d));
    }
    LawResult r{"t5", true, scales.size(), {}};
    auto failure = kernels::first_failure(scales.size(), [&](std::size_t i) {
      const Element eta = t.split(scales[i]);
      return t.is_scale(eta) && t.below(eta, scales[i]);
    });
    if (failure) {
      r.passed = false;
      r.witness = "eps=" + to_string(scales[*failure]) + " eta=" + to_string(t.split(scales[*failure]));
    }
    laws.push_back(std::move(r));
  }

  {
    RationalSampler rs(plan.seed + 17, plan.span, plan.max_denominator);
    std::vector<Rational> scalars(triples.size());
    for (auto& r : scalars) r = rs.positive_scalar();
    LawResult r{"t6", true, triples.size(), {}};
    auto failure = kernels::first_failure(triples.size(), [&](std::size_t i) {
      const auto& x = triples[i];
      return !(t.below(x[0], x[1]) && m.ring_less(0, scalars[i])) ||
             t.below(m.scale(scalars[i], x[0]), m.scale(scalars[i], x[1]));
    });
    if (failure) {
      r.passed = false;
      r.witness = detail::triple_witness(triples[*failure]) + " r=" + to_string(scalars[*failure]);
    }
    laws.push_back(std::move(r));
  }
  return report;
}

std::uint64_t search_horizon(const ClosedForm& f) {
  return f.has_geometric() ? (std::uint64_t{1} << 16) : (std::uint64_t{1} << 62);
}

namespace {

// Predicates on the value a_n: "lower" is the part of the sandwich that must
// hold on the limit for eventual certification to be possible.
struct Sandwich {
  std::function<bool(const Element&)> lower;
  std::function<bool(const Element&)> upper;
};

ConvergenceCertificate certify(const Sequence& s, const Element& eps, const Sandwich& w, std::uint64_t n_max) {
  ConvergenceCertificate cert{eps, false, 0, std::nullopt, std::nullopt};
  const auto* f = s.closed_form();
  if (f != nullptr && f->nonincreasing()) {
    // a_n decreases to its limit in the cone order, so by t2 both halves of
    // the sandwich are monotone in n and the threshold is exact.
    const std::uint64_t horizon = search_horizon(*f);
    const Element lim = f->limit();
    if (!w.lower(lim)) {
      auto first_bad = detail::first_true([&](std::uint64_t n) { return !w.lower(f->at(n)); }, horizon);
      cert.violation = first_bad.value_or(horizon);
      return cert;
    }
    if (!w.upper(lim)) {
      cert.violation = 1;
      return cert;
    }
    auto first_good = detail::first_true([&](std::uint64_t n) { return w.upper(f->at(n)); }, horizon);
    if (!first_good) {
      cert.violation = horizon;
      return cert;
    }
    cert.certified = true;
    cert.threshold = *first_good - 1;
    return cert;
  }

  const auto terms = s.materialize(n_max);
  const std::uint64_t len = terms.size();
  cert.verified_up_to = len;
  auto last_bad = kernels::last_failure(terms.size(), [&](std::size_t i) { return w.lower(terms[i]) && w.upper(terms[i]); });
  if (!last_bad) {
    cert.certified = true;
    return cert;
  }
  const std::uint64_t v = *last_bad + 1;  // 1-based index
  if (v <= len / 2) {
    cert.certified = true;
    cert.threshold = v;
  } else {
    cert.violation = v;
  }
  return cert;
}

void require_scales(const TopoStructure& t, const std::vector<Element>& eps_family) {
  for (const auto& eps : eps_family)
    if (!t.is_scale(eps)) throw DomainError("epsilon " + to_string(eps) + " is not >> identity");
}

}  // namespace

std::vector<ConvergenceCertificate> verify_convergence(const TopoStructure& t, const Sequence& s, const Element& a,
                                                       const std::vector<Element>& eps_family,
                                                       std::uint64_t n_max) {
  const auto& g = t.group();
  if (!g.contains(a) || !g.nonnegative(a)) throw DomainError("limit " + to_string(a) + " is not in G_+");
  if (s.dim() != g.dim()) throw DomainError("sequence dimension does not match the group");
  require_scales(t, eps_family);
  std::vector<ConvergenceCertificate> out;
  for (const auto& eps : eps_family) {
    Sandwich w{[&](const Element& x) { return g.nonnegative(g.sub(x, a)); },
               [&](const Element& x) { return t.below(g.sub(x, a), eps); }};
    out.push_back(certify(s, eps, w, n_max));
  }
  return out;
}

std::vector<ConvergenceCertificate> verify_convergence_two_sided(const TopoStructure& t, const Sequence& s,
                                                                 const Element& a,
                                                                 const std::vector<Element>& eps_family,
                                                                 std::uint64_t n_max) {
  const auto& g = t.group();
  if (!g.contains(a) || !g.nonnegative(a)) throw DomainError("limit " + to_string(a) + " is not in G_+");
  if (s.dim() != g.dim()) throw DomainError("sequence dimension does not match the group");
  require_scales(t, eps_family);
  std::vector<ConvergenceCertificate> out;
  for (const auto& eps : eps_family) {
    const Element b = g.add(a, eps);
    Sandwich w{[&](const Element& x) { return g.leq(a, x); }, [&](const Element& x) { return t.below(x, b); }};
    out.push_back(certify(s, eps, w, n_max));
  }
  return out;
}

bool all_certified(const std::vector<ConvergenceCertificate>& certs) {
  return std::all_of(certs.begin(), certs.end(), [](const auto& c) { return c.certified; });
}

LimitUniquenessResult check_limit_uniqueness(const TopoStructure& t, const Sequence& s, const Element& first,
                                             const Element& candidate, const std::vector<Element>& eps_family,
                                             std::uint64_t n_max) {
  const auto& g = t.group();
  LimitUniquenessResult res;
  if (!all_certified(verify_convergence(t, s, first, eps_family, n_max))) {
    res.detail = "sequence is not certified to converge to " + to_string(first);
    return res;
  }
  // The shrinking family eps0 / 2^k stands in for "every eps". Scales at
  // which even the first limit has no threshold within the search horizon
  // carry no information and are dropped.
  std::vector<Element> family = eps_family;
  Element eps = t.positivity_witness();
  for (int k = 0; k < 64; ++k) {
    if (verify_convergence(t, s, first, {eps}, n_max).front().certified) family.push_back(eps);
    eps = t.split(eps);
  }
  const auto certs = verify_convergence(t, s, candidate, family, n_max);
  const bool is_limit = all_certified(certs);

  if (const auto* f = s.closed_form(); f != nullptr && f->nonincreasing()) {
    res.index = detail::first_true([&](std::uint64_t n) { return !g.leq(candidate, f->at(n)); }, search_horizon(*f));
  } else {
    const auto terms = s.materialize(n_max);
    if (auto bad = kernels::first_failure(terms.size(), [&](std::size_t i) { return g.leq(candidate, terms[i]); }))
      res.index = *bad + 1;
  }

  if (is_limit && candidate == first) {
    res.passed = true;
    res.detail = "limit confirmed and equal to " + to_string(first);
  } else if (is_limit) {
    res.detail = "law violation: distinct limits " + to_string(first) + " and " + to_string(candidate);
  } else if (res.index) {
    res.detail = "candidate rejected: s_n >= " + to_string(candidate) + " fails at n=" + std::to_string(*res.index);
  } else {
    for (const auto& c : certs)
      if (!c.certified) {
        res.detail = "candidate rejected: no threshold for eps=" + to_string(c.epsilon);
        break;
      }
  }
  return res;
}

namespace {

Sequence add_sequences(const Sequence& a, const Sequence& b, std::uint64_t n_max) {
  if (a.is_closed_form() && b.is_closed_form()) return *a.closed_form() + *b.closed_form();
  auto x = a.materialize(n_max);
  auto y = b.materialize(n_max);
  const std::size_t len = std::min(x.size(), y.size());
  std::vector<Element> out;
  for (std::size_t i = 0; i < len; ++i) out.push_back(x[i] + y[i]);
  return out;
}

}  // namespace

std::vector<SumCertificate> sum_convergence(const TopoStructure& t, const Sequence& s1, const Sequence& s2,
                                            const std::vector<Element>& eps_family, std::uint64_t n_max) {
  const auto& g = t.group();
  const Element zero = g.identity();
  const Sequence sum = add_sequences(s1, s2, n_max);
  std::vector<SumCertificate> out;
  for (const auto& eps : eps_family) {
    const Element eta = t.split(eps);
    const Element rest = g.sub(eps, eta);
    const auto c1 = verify_convergence(t, s1, zero, {eta}, n_max).front();
    const auto c2 = verify_convergence(t, s2, zero, {rest}, n_max).front();
    const auto direct = verify_convergence(t, sum, zero, {eps}, n_max).front();
    SumCertificate c{eps, eta, c1.threshold, c2.threshold, std::max(c1.threshold, c2.threshold), std::nullopt, false};
    if (direct.certified) c.direct_threshold = direct.threshold;
    c.certified = c1.certified && c2.certified && direct.certified && direct.threshold <= c.split_threshold;
    out.push_back(std::move(c));
  }
  return out;
}

bool SandwichResult::certified() const {
  if (precondition_violation) return false;
  return std::all_of(entries.begin(), entries.end(), [](const Entry& e) { return e.certified; });
}

SandwichResult sandwich_convergence(const TopoStructure& t, const Sequence& lower, const Sequence& upper,
                                    const Element& a, const std::vector<Element>& eps_family, std::uint64_t n_max) {
  const auto& g = t.group();
  SandwichResult res;
  if (!g.nonnegative(a)) {
    res.precondition_violation = 0;
    res.detail = "a=" + to_string(a) + " is not >= identity";
    return res;
  }
  const auto lo = lower.materialize(n_max);
  const auto hi = upper.materialize(n_max);
  const std::size_t len = std::min(lo.size(), hi.size());
  auto bad = kernels::first_failure(len, [&](std::size_t i) { return g.leq(lo[i], hi[i]) && g.leq(a, lo[i]); });
  if (bad) {
    res.precondition_violation = *bad + 1;
    res.detail = "b_n >= a_n >= a fails at n=" + std::to_string(*bad + 1);
    return res;
  }

  Sequence diff = [&]() -> Sequence {
    if (lower.is_closed_form() && upper.is_closed_form()) return *upper.closed_form() - *lower.closed_form();
    std::vector<Element> d;
    for (std::size_t i = 0; i < len; ++i) d.push_back(g.sub(hi[i], lo[i]));
    return d;
  }();
  const auto bound = verify_convergence(t, upper, a, eps_family, n_max);
  const auto direct = verify_convergence(t, diff, g.identity(), eps_family, n_max);
  for (std::size_t i = 0; i < eps_family.size(); ++i) {
    SandwichResult::Entry e{eps_family[i], bound[i].threshold, std::nullopt, false};
    if (direct[i].certified) e.direct_threshold = direct[i].threshold;
    e.certified = bound[i].certified && direct[i].certified && direct[i].threshold <= bound[i].threshold;
    res.entries.push_back(std::move(e));
  }
  if (!res.certified()) res.detail = "b_n -> a not certified on the whole family";
  return res;
}

Element coordinate_meet(const std::vector<Element>& set) {
  if (set.empty()) throw std::invalid_argument("meet of an empty set");
  std::vector<Rational> c(set.front().coords().begin(), set.front().coords().end());
  for (const auto& e : set) {
    require_same_dim(set.front(), e);
    for (std::size_t i = 0; i < c.size(); ++i)
      if (e[i] < c[i]) c[i] = e[i];
  }
  return Element(std::move(c));
}

std::optional<Element> infimum(const OrderedGroup& g, const std::vector<Element>& set,
                               const std::vector<Element>& candidates) {
  std::vector<Element> pool = candidates;
  pool.insert(pool.end(), set.begin(), set.end());
  std::vector<Element> lower;
  for (const auto& c : pool) {
    const bool bound = std::all_of(set.begin(), set.end(), [&](const Element& s) { return g.leq(c, s); });
    if (bound && std::find(lower.begin(), lower.end(), c) == lower.end()) lower.push_back(c);
  }
  for (const auto& l : lower)
    if (std::all_of(lower.begin(), lower.end(), [&](const Element& o) { return g.leq(o, l); })) return l;
  return std::nullopt;
}

std::vector<RegularityEntry> check_regularity(const TopoStructure& t, const std::vector<Sequence>& seqs,
                                              const std::vector<Element>& eps_family, std::uint64_t n_max) {
  const auto& g = t.group();
  std::vector<RegularityEntry> out;
  for (const auto& s : seqs) {
    RegularityEntry e;
    const auto terms = s.materialize(n_max);
    auto bad = kernels::first_failure(terms.size(), [&](std::size_t i) {
      if (!g.nonnegative(terms[i])) return false;
      return i + 1 == terms.size() || g.leq(terms[i + 1], terms[i]);
    });
    if (bad) {
      e.status = RegularityEntry::Status::not_decreasing;
      e.violation = *bad + 1;
      out.push_back(std::move(e));
      continue;
    }
    if (const auto* f = s.closed_form())
      e.limit = f->limit();
    else
      e.limit = infimum(g, terms, {coordinate_meet(terms)});
    if (e.limit && g.nonnegative(*e.limit)) {
      e.certificates = verify_convergence(t, s, *e.limit, eps_family, n_max);
      e.status = all_certified(e.certificates) ? RegularityEntry::Status::converged
                                                : RegularityEntry::Status::unresolved;
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace ordmet
