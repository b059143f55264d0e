#include "ordmet/contraction.hpp"

#include <algorithm>
#include <memory>

#include "samples_internal.hpp"

namespace ordmet {

namespace {

// Rounds toward zero onto step * Z.
Rational round_toward_zero(const Rational& x, const Rational& step) {
  Rational q = x / step;
  mpz_class k;
  mpz_tdiv_q(k.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  Rational out(k);
  out *= step;
  return out;
}

}  // namespace

Point AffineBranch::apply(const Point& x) const {
  if (scale.size() != x.dim() || offset.dim() != x.dim()) throw DomainError("branch dimension mismatch");
  std::vector<Rational> c(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    c[i] = scale[i] * x[i] + offset[i];
    if (grid_step) c[i] = round_toward_zero(c[i], *grid_step);
  }
  return Element(std::move(c));
}

SetValuedMap::SetValuedMap(MetricSpace space, std::optional<ImageTable> table, std::vector<AffineBranch> branches,
                           ImageFn rule, std::string description)
    : space_(std::move(space)),
      table_(std::move(table)),
      branches_(std::move(branches)),
      rule_(std::move(rule)),
      description_(std::move(description)) {}

SetValuedMap SetValuedMap::from_table(MetricSpace space, ImageTable images) {
  if (!space.is_finite()) throw std::invalid_argument("image tables need a finite space");
  for (const auto& [x, img] : images) {
    if (!space.contains(x)) throw DomainError("map row " + to_string(x) + " is not a declared point");
    if (img.empty()) throw std::invalid_argument("image of " + to_string(x) + " is empty");
    for (const auto& y : img)
      if (!space.contains(y))
        throw DomainError("image point " + to_string(y) + " of " + to_string(x) + " is not a declared point");
  }
  for (const auto& p : space.points())
    if (!images.count(p)) throw std::invalid_argument("no image declared for " + to_string(p));
  return SetValuedMap(std::move(space), std::move(images), {}, nullptr, "table");
}

SetValuedMap SetValuedMap::from_branches(MetricSpace space, std::vector<AffineBranch> branches) {
  if (branches.empty()) throw std::invalid_argument("rule map needs at least one branch");
  for (const auto& b : branches)
    if (b.scale.size() != space.point_dim() || b.offset.dim() != space.point_dim())
      throw DomainError("branch dimension does not match the space");
  return SetValuedMap(std::move(space), std::nullopt, std::move(branches), nullptr, "affine");
}

SetValuedMap SetValuedMap::from_rule(MetricSpace space, ImageFn rule, std::string description) {
  return SetValuedMap(std::move(space), std::nullopt, {}, std::move(rule), std::move(description));
}

std::vector<Point> SetValuedMap::image(const Point& x) const {
  if (!space_.contains(x)) throw DomainError("point " + to_string(x) + " is not in X");
  std::vector<Point> out;
  if (table_) {
    out = table_->at(x);
  } else if (!branches_.empty()) {
    for (const auto& b : branches_) out.push_back(b.apply(x));
  } else {
    out = rule_(x);
  }
  if (out.empty()) throw std::invalid_argument("image of " + to_string(x) + " is empty");
  for (const auto& y : out)
    if (!space_.contains(y)) throw DomainError("image point " + to_string(y) + " of " + to_string(x) + " leaves X");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SetValuedMap SetValuedMap::with_image(const Point& x, std::vector<Point> image) const {
  if (!table_) throw std::logic_error("with_image needs a table map");
  ImageTable t = *table_;
  t[x] = std::move(image);
  return from_table(space_, std::move(t));
}

SetValuedMap SetValuedMap::with_space(MetricSpace space) const {
  if (table_) return from_table(std::move(space), *table_);
  return SetValuedMap(std::move(space), std::nullopt, branches_, rule_, description_);
}

std::string_view to_string(WitnessClass c) {
  switch (c) {
    case WitnessClass::phi_table: return "phi-table";
    case WitnessClass::alpha_function: return "alpha-fn";
    case WitnessClass::alpha_constant: return "alpha-const";
    case WitnessClass::psi: return "psi";
  }
  return "?";
}

std::string_view to_string(PsiKind k) {
  switch (k) {
    case PsiKind::linear: return "linear";
    case PsiKind::rational: return "rational";
    case PsiKind::capped_quadratic: return "capped-quadratic";
  }
  return "?";
}

Rational apply_psi(PsiKind kind, const Rational& param, const Rational& t) {
  switch (kind) {
    case PsiKind::linear: return param * t;
    case PsiKind::rational: return t / (1 + t);
    case PsiKind::capped_quadratic: return t <= 1 ? Rational(t - t * t / 2) : Rational(1, 2);
  }
  return 0;
}

ContractionWitness ContractionWitness::alpha_constant(Rational alpha) {
  ContractionWitness w;
  w.class_ = WitnessClass::alpha_constant;
  w.alpha_ = std::move(alpha);
  w.description_ = "alpha = " + to_string(w.alpha_);
  return w;
}

ContractionWitness ContractionWitness::alpha_function(AlphaFn alpha, Rational bound, std::string description) {
  ContractionWitness w;
  w.class_ = WitnessClass::alpha_function;
  w.alpha_fn_ = std::move(alpha);
  w.alpha_ = std::move(bound);
  w.description_ = std::move(description);
  return w;
}

ContractionWitness ContractionWitness::alpha_table(AlphaTable entries, Rational fallback, Rational bound) {
  auto shared = std::make_shared<const AlphaTable>(entries);
  AlphaFn fn = [shared, fallback](const Point& x, const Point& y) {
    auto it = shared->find({x, y});
    return it == shared->end() ? fallback : it->second;
  };
  ContractionWitness w = alpha_function(std::move(fn), std::move(bound), "alpha table");
  w.alpha_entries_ = std::move(entries);
  w.alpha_fallback_ = std::move(fallback);
  return w;
}

ContractionWitness ContractionWitness::phi_table(PhiTable table) {
  ContractionWitness w;
  w.class_ = WitnessClass::phi_table;
  w.table_ = std::move(table);
  w.description_ = "phi table";
  return w;
}

ContractionWitness ContractionWitness::psi(PsiKind kind, Rational param) {
  if (kind == PsiKind::linear && (param <= 0 || param >= 1))
    throw std::invalid_argument("linear psi needs a coefficient in (0, 1)");
  ContractionWitness w;
  w.class_ = WitnessClass::psi;
  w.psi_kind_ = kind;
  w.psi_param_ = std::move(param);
  w.description_ = "psi " + std::string(to_string(kind));
  if (kind == PsiKind::linear) w.description_ += " " + to_string(w.psi_param_);
  return w;
}

Rational ContractionWitness::alpha_at(const Point& x, const Point& y) const {
  switch (class_) {
    case WitnessClass::alpha_constant: return alpha_;
    case WitnessClass::alpha_function: return alpha_fn_(x, y);
    default: throw std::logic_error("witness has no alpha");
  }
}

Element ContractionWitness::phi(const MetricSpace& m, const Point& x, const Point& y) const {
  switch (class_) {
    case WitnessClass::alpha_constant:
    case WitnessClass::alpha_function: return m.target().module().scale(alpha_at(x, y), m.distance(x, y));
    case WitnessClass::psi: {
      if (m.group().dim() != 1) throw DomainError("psi witnesses need real-valued distances");
      return Element{apply_psi(psi_kind_, psi_param_, m.distance(x, y)[0])};
    }
    case WitnessClass::phi_table: {
      auto it = table_->find({x, y});
      if (it == table_->end()) throw DomainError("phi table has no entry for (" + to_string(x) + ", " + to_string(y) + ")");
      return it->second;
    }
  }
  return {};
}

ContractionWitness ContractionWitness::with_entry(const Point& x, const Point& y, Element value) const {
  ContractionWitness w = *this;
  if (!w.table_) throw std::logic_error("with_entry needs a phi table");
  (*w.table_)[{x, y}] = std::move(value);
  return w;
}

std::string_view to_string(CStatus s) { return s == CStatus::holds_by_theorem ? "holds-by-theorem" : "unknown"; }

CConditionStatus c_condition_status(const ContractionWitness& w, const MetricSpace& m) {
  switch (w.witness_class()) {
    case WitnessClass::alpha_constant:
    case WitnessClass::alpha_function:
      if (w.alpha() >= 0 && w.alpha() < 1)
        return {CStatus::holds_by_theorem, "alpha <= " + to_string(w.alpha()) +
                                               " < 1, so d_n - phi_n >= (1 - alpha) d_n and d_n -> identity follows"};
      return {CStatus::unknown, "alpha bound " + to_string(w.alpha()) + " is not below 1"};
    case WitnessClass::psi:
      if (m.group().dim() == 1)
        return {CStatus::holds_by_theorem,
                "psi is upper semicontinuous with psi(t) < t and t - psi(t) bounded away from 0 near every r > 0"};
      return {CStatus::unknown, "psi reduction needs real-valued distances"};
    case WitnessClass::phi_table: return {CStatus::unknown, "no theorem covers an arbitrary phi table"};
  }
  return {CStatus::unknown, ""};
}

std::vector<std::pair<Point, Point>> contraction_pairs(const MetricSpace& m, const SamplePlan& plan) {
  std::vector<std::pair<Point, Point>> out;
  if (m.is_finite()) {
    for (const auto& x : m.points())
      for (const auto& y : m.points())
        if (x != y) out.emplace_back(x, y);
    return out;
  }
  const auto edges = detail::edge_set(m.point_dim(), plan);
  for (const auto& x : edges)
    for (const auto& y : edges)
      if (x != y) out.emplace_back(x, y);
  RationalSampler rs(plan.seed ^ 0x5bd1e995ULL, plan.span, plan.max_denominator);
  while (out.size() < edges.size() * (edges.size() - 1) + plan.count) {
    Point x = rs.element(m.point_dim());
    Point y = rs.element(m.point_dim());
    if (x != y) out.emplace_back(std::move(x), std::move(y));
  }
  return out;
}

namespace {

template <class Pred>
ContractionCheck run_pairs(std::string name, const MetricSpace& m, const std::vector<std::pair<Point, Point>>& pairs,
                           Pred&& check) {
  ContractionCheck r;
  r.check = std::move(name);
  r.exhaustive = m.is_finite();
  r.checked = pairs.size();
  // check returns an empty vector on success, the counterexample otherwise.
  auto bad = kernels::first_failure(pairs.size(), [&](std::size_t i) { return check(pairs[i]).empty(); });
  if (bad) {
    r.passed = false;
    r.counterexample = check(pairs[*bad]);
    static const char* names[] = {"x", "y", "x'", "y'"};
    for (std::size_t i = 0; i < r.counterexample.size(); ++i)
      r.witness += std::string(i ? " " : "") + names[i] + "=" + to_string(r.counterexample[i]);
  }
  return r;
}

}  // namespace

ContractionCheck check_phi_bound(const SetValuedMap& t, const ContractionWitness& w, const SamplePlan& plan) {
  const auto& m = t.space();
  const auto& g = m.group();
  const bool alpha = w.witness_class() == WitnessClass::alpha_constant ||
                     w.witness_class() == WitnessClass::alpha_function;
  return run_pairs("phi-bound", m, contraction_pairs(m, plan), [&](const auto& p) -> std::vector<Point> {
    const auto& [x, y] = p;
    if (alpha) {
      const Rational a = w.alpha_at(x, y);
      if (a < 0 || a >= 1 || a > w.alpha()) return {x, y};
    }
    const Element d = m.distance(x, y);
    const Element f = w.phi(m, x, y);
    if (!g.nonnegative(f)) return {x, y};
    if (g.positive(d) && !g.less(f, d)) return {x, y};
    return {};
  });
}

ContractionCheck is_weak_contraction(const SetValuedMap& t, const ContractionWitness& w, const SamplePlan& plan) {
  const auto& m = t.space();
  const auto& g = m.group();
  return run_pairs("weak", m, contraction_pairs(m, plan), [&](const auto& p) -> std::vector<Point> {
    const auto& [x, y] = p;
    const Element f = w.phi(m, x, y);
    const auto ty = t.image(y);
    for (const auto& xp : t.image(x)) {
      const bool found =
          std::any_of(ty.begin(), ty.end(), [&](const Point& yb) { return g.leq(m.distance(xp, yb), f); });
      if (!found) return {x, y, xp};
    }
    return {};
  });
}

ContractionCheck is_global_weak_contraction(const SetValuedMap& t, const ContractionWitness& w,
                                            const SamplePlan& plan) {
  const auto& m = t.space();
  const auto& g = m.group();
  return run_pairs("global", m, contraction_pairs(m, plan), [&](const auto& p) -> std::vector<Point> {
    const auto& [x, y] = p;
    const Element f = w.phi(m, x, y);
    const auto ty = t.image(y);
    for (const auto& xp : t.image(x))
      for (const auto& yp : ty)
        if (!g.leq(m.distance(xp, yp), f)) return {x, y, xp, yp};
    return {};
  });
}

InfSupValue approximate_endpoint_property_finite(const SetValuedMap& t) {
  const auto& m = t.space();
  const auto& pts = m.points();
  std::vector<Element> sups;
  sups.reserve(pts.size());
  for (const auto& x : pts) {
    std::vector<Element> d;
    for (const auto& y : t.image(x)) d.push_back(m.distance(x, y));
    sups.push_back(greatest_element(m.group(), d, "sup over Tx"));
  }
  Element value = least_element(m.group(), sups, "inf over X");
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (sups[i] == value) return {value, pts[i]};
  throw std::logic_error("least element not found among candidates");
}

ApproximateEndpointReport approximate_endpoint_sequence(const SetValuedMap& t, const Sequence& points,
                                                        const Sequence& bounds, const std::vector<Element>& eps_family,
                                                        std::uint64_t n_max) {
  const auto& m = t.space();
  const auto& g = m.group();
  ApproximateEndpointReport r;
  r.bound_certified = all_certified(verify_convergence(m.target(), bounds, g.identity(), eps_family, n_max));
  if (!r.bound_certified) {
    r.detail = "bound sequence a_n is not certified to converge to identity";
    return r;
  }
  const auto xs = points.materialize(n_max);
  const auto as = bounds.materialize(n_max);
  const std::size_t len = std::min(xs.size(), as.size());
  r.checked_up_to = len;
  auto violating_image = [&](std::size_t i) -> std::optional<Point> {
    for (const auto& xp : t.image(xs[i]))
      if (!g.leq(m.distance(xs[i], xp), as[i])) return xp;
    return std::nullopt;
  };
  auto bad = kernels::first_failure(len, [&](std::size_t i) { return !violating_image(i).has_value(); });
  if (bad) {
    r.violation_index = *bad + 1;
    r.violation_image = violating_image(*bad);
    r.detail = "d(x_n, x') <= a_n fails at n=" + std::to_string(*bad + 1) + " x'=" + to_string(*r.violation_image);
    return r;
  }
  r.holds = true;
  r.detail = "holds for n <= " + std::to_string(len);
  return r;
}

std::vector<Point> endpoints_bruteforce(const SetValuedMap& t) {
  std::vector<Point> out;
  for (const auto& x : t.space().points()) {
    const auto img = t.image(x);
    if (img.size() == 1 && img.front() == x) out.push_back(x);
  }
  return out;
}

}  // namespace ordmet
