#include "ordmet/solver.hpp"

#include <algorithm>

namespace ordmet {

std::string_view to_string(SelectionRule r) { return r == SelectionRule::min_distance ? "min-dist" : "lex"; }

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::endpoint_found: return "endpoint-found";
    case Outcome::approximate_endpoint_sequence: return "approximate-endpoint-sequence";
    case Outcome::budget_exhausted: return "budget-exhausted";
    case Outcome::hypothesis_violation: return "hypothesis-violation";
  }
  return "?";
}

std::string_view to_string(SolverMode m) { return m == SolverMode::theorem ? "theorem" : "best-effort"; }

namespace {

Point start_point(const MetricSpace& m, const SolverConfig& cfg) {
  if (cfg.start) {
    if (!m.contains(*cfg.start)) throw DomainError("start point " + to_string(*cfg.start) + " is not in X");
    return *cfg.start;
  }
  if (!m.is_finite()) throw std::invalid_argument("coordinate spaces need an explicit start point");
  return m.points().back();
}

void require_scale(const MetricSpace& m, const Element& eps) {
  if (!m.target().is_scale(eps)) throw DomainError("eps " + to_string(eps) + " is not >> identity");
}

Point select(const MetricSpace& m, const Point& y, const std::vector<Point>& candidates, SelectionRule rule,
             std::vector<std::string>& notes, std::uint64_t n) {
  if (rule == SelectionRule::lexicographic) return candidates.front();
  std::vector<Element> d;
  for (const auto& c : candidates) d.push_back(m.distance(y, c));
  try {
    const Element least = least_element(m.group(), d, "selection");
    for (std::size_t i = 0; i < candidates.size(); ++i)
      if (d[i] == least) return candidates[i];
  } catch (const OrderError& e) {
    notes.push_back("step " + std::to_string(n) + ": " + e.what() + "; took the lexicographic candidate");
  }
  return candidates.front();
}

SolverReport violation(std::string hypothesis, std::string witness) {
  SolverReport r;
  r.outcome = Outcome::hypothesis_violation;
  r.hypothesis = std::move(hypothesis);
  if (!witness.empty()) r.notes.push_back(std::move(witness));
  return r;
}

}  // namespace

SolverReport iterate_endpoint(const SetValuedMap& t, const ContractionWitness& w, const SolverConfig& cfg) {
  const auto& m = t.space();
  const auto& g = m.group();
  require_scale(m, cfg.eps);
  if (cfg.max_iter == 0) throw std::invalid_argument("max_iter must be at least 1");

  const auto bound = check_phi_bound(t, w, cfg.plan);
  if (!bound.passed) return violation("phi < d (weak contraction witness)", bound.witness);

  SolverReport r;
  const auto global = is_global_weak_contraction(t, w, cfg.plan);
  const auto cstatus = c_condition_status(w, m);
  if (!global.passed) {
    r.mode = SolverMode::best_effort;
    r.notes.push_back("global weak contraction check failed: " + global.witness);
  }
  if (cstatus.status != CStatus::holds_by_theorem) {
    r.mode = SolverMode::best_effort;
    r.notes.push_back("C-condition " + std::string(to_string(cstatus.status)) + ": " + cstatus.justification);
  }

  Point y = start_point(m, cfg);
  std::optional<Element> prev_phi;
  for (std::uint64_t n = 0; n < cfg.max_iter; ++n) {
    const auto img = t.image(y);
    if (img.size() == 1 && img.front() == y) {
      r.trace.push_back({n, y, y, g.identity(), std::nullopt});
      r.outcome = Outcome::endpoint_found;
      r.point = y;
      return r;
    }
    std::vector<Point> candidates;
    for (const auto& c : img)
      if (c != y) candidates.push_back(c);
    const Point next = select(m, y, candidates, cfg.rule, r.notes, n);
    const Element step = m.distance(y, next);
    r.trace.push_back({n, y, next, step, std::nullopt});

    if (prev_phi && !g.leq(step, *prev_phi)) {
      const std::string what = "step " + std::to_string(n) + ": d(y_n, y_n+1) = " + to_string(step) +
                               " exceeds phi(y_n-1, y_n) = " + to_string(*prev_phi);
      if (r.mode == SolverMode::theorem) {
        r.outcome = Outcome::hypothesis_violation;
        r.hypothesis = "monotone trace d(y_n+1, y_n+2) <= phi(y_n, y_n+1)";
        r.violation_step = n;
        r.notes.push_back(what);
        return r;
      }
      r.notes.push_back(what);
    }
    const Element phi = w.phi(m, y, next);
    r.witness_points.push_back(next);
    r.witness_bounds.push_back(phi);
    prev_phi = phi;

    if (!m.is_finite()) {
      std::vector<Element> d;
      for (const auto& c : img) d.push_back(m.distance(y, c));
      try {
        if (m.target().below(greatest_element(g, d, "sup over Ty_n"), cfg.eps)) {
          r.outcome = Outcome::approximate_endpoint_sequence;
          r.point = next;
          return r;
        }
      } catch (const OrderError& e) {
        r.notes.push_back("step " + std::to_string(n) + ": " + e.what());
      }
    }
    y = next;
  }
  r.outcome = Outcome::budget_exhausted;
  r.point = y;
  return r;
}

SolverReport banach_iterate(const SetValuedMap& f, const Rational& alpha, const SolverConfig& cfg) {
  const auto& m = f.space();
  const auto& mod = m.target().module();
  require_scale(m, cfg.eps);
  if (cfg.max_iter == 0) throw std::invalid_argument("max_iter must be at least 1");
  if (alpha < 0 || alpha >= 1) return violation("alpha in [0, 1)", "alpha = " + to_string(alpha));

  const auto w = ContractionWitness::alpha_constant(alpha);
  for (const auto& [x, y] : contraction_pairs(m, cfg.plan))
    if (f.image(x).size() != 1) return violation("single-valued map", "image of " + to_string(x) + " is not a singleton");
  const auto lipschitz = is_global_weak_contraction(f, w, cfg.plan);
  if (!lipschitz.passed) return violation("d(fx, fy) <= alpha d(x, y)", lipschitz.witness);

  SolverReport r;
  const Rational inv = 1 / (1 - alpha);
  const Element stop = mod.scale(1 - alpha, cfg.eps);
  Point x = start_point(m, cfg);
  std::optional<Element> first_step;
  for (std::uint64_t n = 0; n < cfg.max_iter; ++n) {
    const auto img = f.image(x);
    if (img.size() != 1) return violation("single-valued map", "image of " + to_string(x) + " is not a singleton");
    const Point next = img.front();
    const Element step = m.distance(x, next);
    if (!first_step) first_step = step;
    const Element bound = mod.scale(pow(alpha, n) * inv, *first_step);
    r.trace.push_back({n, x, next, step, bound});
    if (next == x) {
      r.outcome = Outcome::endpoint_found;
      r.point = x;
      return r;
    }
    if (m.target().below(step, stop)) {
      r.outcome = Outcome::approximate_endpoint_sequence;
      r.point = x;
      r.notes.push_back("d(x_n, x*) << eps by the geometric tail bound");
      return r;
    }
    x = next;
  }
  r.outcome = Outcome::budget_exhausted;
  r.point = x;
  return r;
}

EndpointIffReport endpoint_iff_check(const SetValuedMap& t, const ContractionWitness& w, const SamplePlan& plan) {
  EndpointIffReport r;
  const auto& m = t.space();
  if (!m.is_finite()) {
    r.skipped = true;
    r.reason = "needs a finite space";
    return r;
  }
  const auto bound = check_phi_bound(t, w, plan);
  const auto weak = is_weak_contraction(t, w, plan);
  const auto cstatus = c_condition_status(w, m);
  if (!bound.passed || !weak.passed || cstatus.status != CStatus::holds_by_theorem) {
    r.skipped = true;
    r.reason = !bound.passed  ? "phi bound fails: " + bound.witness
               : !weak.passed ? "not a weak contraction: " + weak.witness
                              : "C-condition unknown";
    return r;
  }
  r.endpoints = endpoints_bruteforce(t);
  const auto value = approximate_endpoint_property_finite(t);
  r.inf_sup = value.value;
  r.endpoint_side = r.endpoints.size() == 1;
  r.property_side = value.value == m.group().identity();
  r.agree = r.endpoint_side == r.property_side;
  return r;
}

FixedPointReport single_valued_fixed_point_check(const SetValuedMap& f, const ContractionWitness& w,
                                                 const SolverConfig& cfg) {
  FixedPointReport r;
  const auto& m = f.space();
  if (!m.is_finite()) {
    r.skipped = true;
    r.reason = "needs a finite space";
    return r;
  }
  for (const auto& x : m.points())
    if (f.image(x).size() != 1) {
      r.skipped = true;
      r.reason = "image of " + to_string(x) + " is not a singleton";
      return r;
    }
  const auto bound = check_phi_bound(f, w, cfg.plan);
  const auto weak = is_weak_contraction(f, w, cfg.plan);
  if (!bound.passed || !weak.passed) {
    r.skipped = true;
    r.reason = !bound.passed ? "phi bound fails: " + bound.witness : "not a weak contraction: " + weak.witness;
    return r;
  }
  r.fixed_points = endpoints_bruteforce(f);
  r.agree = r.fixed_points.size() == 1;
  for (const auto& x : m.points()) {
    SolverConfig c = cfg;
    c.start = x;
    const auto rep = iterate_endpoint(f, w, c);
    r.solver_points.push_back(rep.outcome == Outcome::endpoint_found ? rep.point : std::nullopt);
    if (!r.agree || r.solver_points.back() != std::optional<Point>(r.fixed_points.front())) r.agree = false;
  }
  return r;
}

}  // namespace ordmet
