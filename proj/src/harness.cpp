#include "ordmet/harness.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <sstream>

namespace ordmet {

Instance Instance::with_module(OrderedModule m) const { return with_topo(topo.with_module(std::move(m))); }

Instance Instance::with_topo(TopoStructure t) const {
  Instance out = *this;
  out.topo = t;
  out.space = space.with_target(std::move(t));
  if (map) out.map = map->with_space(out.space);
  return out;
}

Instance Instance::with_space(MetricSpace s) const {
  Instance out = *this;
  out.space = std::move(s);
  if (map) out.map = map->with_space(out.space);
  return out;
}

namespace {

Element q(std::initializer_list<long> nums, long den = 1) {
  std::vector<Rational> c;
  for (long n : nums) {
    Rational r(n, den);
    r.canonicalize();
    c.push_back(r);
  }
  return Element(std::move(c));
}

Rational frac(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

AffineBranch scale_branch(std::vector<Rational> scale) {
  const std::size_t dim = scale.size();
  return AffineBranch{std::move(scale), Element::zero(dim), std::nullopt};
}

std::vector<Sequence> line_sequences() {
  return {
      ClosedForm::harmonic(q({1})),
      ClosedForm::inverse_square(q({3})),
      ClosedForm::geometric(frac(1, 2), q({1})),
      ClosedForm::harmonic(q({1})) + ClosedForm::inverse_square(q({1})),
      ClosedForm::geometric(frac(1, 3), q({2})) + ClosedForm::inverse_square(q({1}, 2)),
      ClosedForm::constant(q({1})) + ClosedForm::harmonic(q({1})),
  };
}

std::vector<Sequence> cone_sequences(std::size_t dim) {
  auto vec = [&](std::initializer_list<long> pattern) {
    std::vector<Rational> c(dim);
    auto it = pattern.begin();
    for (std::size_t i = 0; i < dim; ++i) c[i] = *(it + static_cast<long>(i % pattern.size()));
    return Element(std::move(c));
  };
  return {
      ClosedForm::harmonic(vec({1, 2})),
      ClosedForm::inverse_square(vec({1})),
      ClosedForm::geometric(frac(1, 2), vec({1, 3})),
      ClosedForm::harmonic(vec({1, 0})) + ClosedForm::inverse_square(vec({0, 1})),
      ClosedForm::geometric(frac(1, 3), vec({2, 1})) + ClosedForm::harmonic(vec({1})),
      ClosedForm::constant(vec({1, 2})) + ClosedForm::harmonic(vec({1})),
  };
}

std::vector<Element> cone_eps(std::size_t dim) {
  std::vector<Element> out{Element::filled(dim, frac(1, 10))};
  std::vector<Rational> a(dim), b(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    a[i] = i % 2 == 0 ? frac(1, 100) : frac(1, 2);
    b[i] = i % 2 == 0 ? Rational(2) : frac(1, 1000);
  }
  out.emplace_back(std::move(a));
  out.emplace_back(std::move(b));
  return out;
}

Instance line_instance(std::string name, std::vector<AffineBranch> branches, ContractionWitness w) {
  auto topo = TopoStructure::strict_order(OrderedModule::coordinate_cone(1));
  auto space = MetricSpace::continuum(1, MetricKind::absolute, topo);
  auto map = SetValuedMap::from_branches(space, std::move(branches));
  return Instance{std::move(name),
                  "real",
                  topo,
                  space,
                  std::move(map),
                  std::move(w),
                  line_sequences(),
                  {q({1}, 10), q({1}, 1000), q({3}, 2)},
                  q({1}),
                  q({1}, 1024),
                  {}};
}

Instance cone_instance(std::string name, std::size_t dim, bool interior) {
  auto module = OrderedModule::coordinate_cone(dim);
  auto topo = interior ? TopoStructure::interior_cone(module) : TopoStructure::strict_order(module);
  auto space = MetricSpace::continuum(dim, MetricKind::coordinatewise, topo);
  std::vector<Rational> scale(dim);
  for (std::size_t i = 0; i < dim; ++i) scale[i] = frac(1, static_cast<long>(i + 2));
  auto map = SetValuedMap::from_branches(space, {scale_branch(std::move(scale))});
  return Instance{std::move(name),
                  "coord-cone",
                  topo,
                  space,
                  std::move(map),
                  ContractionWitness::alpha_constant(frac(1, 2)),
                  cone_sequences(dim),
                  cone_eps(dim),
                  Element::filled(dim, 1),
                  Element::filled(dim, frac(1, 1024)),
                  {}};
}

Instance finite_chain() {
  auto topo = TopoStructure::strict_order(OrderedModule::coordinate_cone(1));
  auto space = MetricSpace::finite({q({0}), q({1}), q({3})}, MetricKind::absolute, topo);
  ImageTable t{{q({0}), {q({0})}}, {q({1}), {q({0})}}, {q({3}), {q({1})}}};
  auto map = SetValuedMap::from_table(space, std::move(t));
  return Instance{"finite-chain",
                  "real",
                  topo,
                  space,
                  std::move(map),
                  ContractionWitness::alpha_constant(frac(1, 2)),
                  line_sequences(),
                  {q({1}, 10), q({1}, 1000), q({3}, 2)},
                  q({3}),
                  q({1}, 1024),
                  {}};
}

Instance table2() {
  auto topo = TopoStructure::interior_cone(OrderedModule::coordinate_cone(2));
  const Element p0 = q({0}), p1 = q({1}), p2 = q({2});
  const Element z = q({0, 0}), d01 = q({1, 2}), d02 = q({2, 2}), d12 = q({2, 3});
  MetricTable d{{z, d01, d02}, {d01, z, d12}, {d02, d12, z}};
  auto space = MetricSpace::with_table({p0, p1, p2}, std::move(d), topo);
  ImageTable t{{p0, {p0}}, {p1, {p0}}, {p2, {p1}}};
  auto map = SetValuedMap::from_table(space, std::move(t));
  PhiTable phi{{{p0, p1}, q({1, 2}, 2)}, {{p1, p0}, q({1, 2}, 2)}, {{p0, p2}, d01},
               {{p2, p0}, d01},         {{p1, p2}, d01},         {{p2, p1}, d01}};
  return Instance{"table2",
                  "coord-cone",
                  topo,
                  space,
                  std::move(map),
                  ContractionWitness::phi_table(std::move(phi)),
                  cone_sequences(2),
                  cone_eps(2),
                  p2,
                  q({1, 1}, 1024),
                  {}};
}

}  // namespace

std::vector<std::string> builtin_instance_names() {
  return {"real", "r1-banach", "psi-real", "cone2", "cone3", "strict2", "finite-chain", "table2"};
}

Instance builtin_instance(const std::string& name) {
  if (name == "real")
    return line_instance("real", {scale_branch({frac(1, 2)}), scale_branch({frac(1, 3)})},
                         ContractionWitness::alpha_constant(frac(1, 2)));
  if (name == "r1-banach")
    return line_instance("r1-banach", {scale_branch({frac(1, 2)})}, ContractionWitness::alpha_constant(frac(1, 2)));
  if (name == "psi-real")
    return line_instance("psi-real", {scale_branch({frac(1, 3)})}, ContractionWitness::psi(PsiKind::linear, frac(1, 2)));
  if (name == "cone2") return cone_instance("cone2", 2, true);
  if (name == "cone3") return cone_instance("cone3", 3, true);
  if (name == "strict2") return cone_instance("strict2", 2, false);
  if (name == "finite-chain") return finite_chain();
  if (name == "table2") return table2();
  throw std::invalid_argument("unknown instance '" + name + "'");
}

std::string_view to_string(RowOutcome o) {
  switch (o) {
    case RowOutcome::pass: return "pass";
    case RowOutcome::fail: return "fail";
    case RowOutcome::skip: return "skip";
  }
  return "?";
}

std::size_t TraceabilityReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const ReportRow& r) { return r.outcome == RowOutcome::fail; }));
}

const ReportRow* TraceabilityReport::find(std::string_view check, std::string_view instance) const {
  for (const auto& r : rows)
    if (r.check == check && r.instance == instance) return &r;
  return nullptr;
}

std::string render(const TraceabilityReport& r, ReportFormat format, bool timing) {
  std::ostringstream out;
  if (format == ReportFormat::machine_rows) {
    for (const auto& row : r.rows) {
      out << row.check << '\t' << row.instance << '\t' << to_string(row.outcome) << '\t' << row.detail;
      if (timing) out << '\t' << row.runtime_ms;
      out << '\n';
    }
    return out.str();
  }
  std::size_t wc = 5, wi = 8;
  for (const auto& row : r.rows) {
    wc = std::max(wc, row.check.size());
    wi = std::max(wi, row.instance.size());
  }
  auto pad = [](std::string s, std::size_t w) {
    s.resize(std::max(s.size(), w), ' ');
    return s;
  };
  for (const auto& row : r.rows) {
    out << pad(row.check, wc) << "  " << pad(row.instance, wi) << "  " << pad(std::string(to_string(row.outcome)), 4)
        << "  " << row.detail;
    if (timing) out << "  [" << row.runtime_ms << " ms]";
    out << '\n';
  }
  std::size_t pass = 0, skip = 0;
  for (const auto& row : r.rows) {
    pass += row.outcome == RowOutcome::pass;
    skip += row.outcome == RowOutcome::skip;
  }
  out << r.rows.size() << " rows: " << pass << " pass, " << r.failures() << " fail, " << skip << " skip\n";
  return out.str();
}

namespace {

CheckResult pass(std::string d) { return {RowOutcome::pass, std::move(d)}; }
CheckResult fail(std::string d) { return {RowOutcome::fail, std::move(d)}; }
CheckResult skip(std::string d) { return {RowOutcome::skip, std::move(d)}; }

CheckResult from_laws(const LawReport& rep) {
  std::size_t samples = 0;
  for (const auto& l : rep.laws) {
    if (!l.passed) return fail(l.law + ": " + l.witness);
    samples = std::max(samples, l.checked);
  }
  return pass(std::to_string(rep.laws.size()) + " laws, up to " + std::to_string(samples) + " samples each");
}

CheckResult from_contraction(const ContractionCheck& c) {
  if (!c.passed) return fail(c.witness);
  return pass(std::to_string(c.checked) + (c.exhaustive ? " pairs (exhaustive)" : " sampled pairs"));
}

SamplePlan plan_for(const Instance& inst, const CheckContext& ctx) {
  SamplePlan p = ctx.plan;
  p.edge.insert(p.edge.end(), inst.edge.begin(), inst.edge.end());
  return p;
}

// Closed forms in G_+ that decrease to a limit in G_+.
std::vector<const ClosedForm*> positive_forms(const Instance& inst) {
  std::vector<const ClosedForm*> out;
  for (const auto& s : inst.sequences)
    if (const auto* f = s.closed_form(); f && f->nonincreasing() && inst.group().nonnegative(f->limit()))
      out.push_back(f);
  return out;
}

std::string thresholds(const std::vector<ConvergenceCertificate>& certs) {
  std::string out;
  for (const auto& c : certs) out += (out.empty() ? "" : ",") + std::to_string(c.threshold);
  return out;
}

CheckResult check_convergence(const Instance& inst, const CheckContext& ctx) {
  const auto forms = positive_forms(inst);
  if (forms.empty()) return skip("no closed-form sequences");
  std::string detail;
  for (const auto* f : forms) {
    const auto certs = verify_convergence(inst.topo, *f, f->limit(), inst.eps_family, ctx.n_max);
    for (const auto& c : certs)
      if (!c.certified)
        return fail(to_string(*f) + " not certified at eps=" + to_string(c.epsilon) +
                    (c.violation ? " (violation at n=" + std::to_string(*c.violation) + ")" : ""));
    if (detail.size() < 60) detail += (detail.empty() ? "N=" : " ") + thresholds(certs);
  }
  return pass(std::to_string(forms.size()) + " sequences x " + std::to_string(inst.eps_family.size()) + " eps; " +
              detail);
}

CheckResult check_two_sided(const Instance& inst, const CheckContext& ctx) {
  const auto forms = positive_forms(inst);
  if (forms.empty()) return skip("no closed-form sequences");
  for (const auto* f : forms) {
    const auto a = verify_convergence(inst.topo, *f, f->limit(), inst.eps_family, ctx.n_max);
    const auto b = verify_convergence_two_sided(inst.topo, *f, f->limit(), inst.eps_family, ctx.n_max);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].certified != b[i].certified || a[i].threshold != b[i].threshold)
        return fail(to_string(*f) + " eps=" + to_string(a[i].epsilon) + ": N=" + std::to_string(a[i].threshold) +
                    " vs two-sided N=" + std::to_string(b[i].threshold));
  }
  return pass(std::to_string(forms.size() * inst.eps_family.size()) + " (sequence, eps) pairs agree");
}

CheckResult check_uniqueness(const Instance& inst, const CheckContext& ctx) {
  const auto forms = positive_forms(inst);
  if (forms.empty()) return skip("no closed-form sequences");
  for (const auto* f : forms) {
    const Element lim = f->limit();
    const auto same = check_limit_uniqueness(inst.topo, *f, lim, lim, inst.eps_family, ctx.n_max);
    if (!same.passed) return fail(to_string(*f) + ": " + same.detail);
    const Element other = inst.group().add(lim, inst.eps_family.front());
    const auto diff = check_limit_uniqueness(inst.topo, *f, lim, other, inst.eps_family, ctx.n_max);
    if (diff.passed || diff.detail.rfind("law violation", 0) == 0)
      return fail(to_string(*f) + " accepted a second limit " + to_string(other));
  }
  return pass(std::to_string(forms.size()) + " sequences, second candidate rejected in each");
}

CheckResult check_sum(const Instance& inst, const CheckContext& ctx) {
  std::vector<const ClosedForm*> null;
  for (const auto* f : positive_forms(inst))
    if (f->limit().is_zero()) null.push_back(f);
  if (null.size() < 2) return skip("fewer than two null sequences");
  std::size_t pairs = 0;
  for (std::size_t i = 0; i + 1 < null.size(); ++i) {
    const auto certs = sum_convergence(inst.topo, *null[i], *null[i + 1], inst.eps_family, ctx.n_max);
    for (const auto& c : certs)
      if (!c.certified)
        return fail(to_string(*null[i]) + " + " + to_string(*null[i + 1]) + " at eps=" + to_string(c.epsilon));
    ++pairs;
  }
  return pass(std::to_string(pairs) + " sums certified with N <= max(N1, N2)");
}

CheckResult check_sandwich(const Instance& inst, const CheckContext& ctx) {
  const auto forms = positive_forms(inst);
  if (forms.empty()) return skip("no closed-form sequences");
  for (const auto* f : forms) {
    const Element lim = f->limit();
    const ClosedForm upper = f->scaled(2) - ClosedForm::constant(lim);
    const auto r = sandwich_convergence(inst.topo, *f, upper, lim, inst.eps_family, ctx.n_max);
    if (!r.certified()) return fail(to_string(*f) + ": " + r.detail);
  }
  return pass(std::to_string(forms.size()) + " sandwiches b_n = 2a_n - a certified");
}

CheckResult check_regular(const Instance& inst, const CheckContext& ctx) {
  const auto forms = positive_forms(inst);
  if (forms.empty()) return skip("no closed-form sequences");
  std::vector<Sequence> seqs;
  for (const auto* f : forms) seqs.emplace_back(*f);
  const auto res = check_regularity(inst.topo, seqs, inst.eps_family, ctx.n_max);
  for (std::size_t i = 0; i < res.size(); ++i)
    if (res[i].status != RegularityEntry::Status::converged)
      return fail(to_string(*forms[i]) + " did not converge to its infimum");
  return pass(std::to_string(res.size()) + " decreasing sequences converge");
}

// An eventually constant walk through the points of a finite space.
Sequence finite_walk(const MetricSpace& m) {
  std::vector<Element> terms = m.points();
  while (terms.size() < 4 * m.points().size()) terms.push_back(m.points().back());
  return terms;
}

CheckResult check_point_convergence(const Instance& inst, const CheckContext& ctx) {
  const auto& m = inst.space;
  if (m.is_finite()) {
    const auto eps = m.constancy_scale();
    if (!eps) return skip("single point space");
    const auto certs = point_convergence(m, finite_walk(m), m.points().back(), {*eps}, ctx.n_max);
    if (!all_certified(certs)) return fail("eventually constant walk not certified");
    return pass("eventually constant walk, N=" + std::to_string(certs.front().threshold));
  }
  std::size_t count = 0;
  for (const auto* f : positive_forms(inst)) {
    if (f->dim() != m.point_dim()) continue;
    const auto certs = point_convergence(m, *f, f->limit(), inst.eps_family, ctx.n_max);
    if (!all_certified(certs)) return fail(to_string(*f) + " -> " + to_string(f->limit()) + " not certified");
    ++count;
  }
  if (count == 0) return skip("no point sequences of matching dimension");
  return pass(std::to_string(count) + " point sequences converge");
}

CheckResult check_cauchy(const Instance& inst, const CheckContext& ctx) {
  const auto& m = inst.space;
  if (m.is_finite()) {
    const auto eps = m.constancy_scale();
    if (!eps) return skip("single point space");
    const auto walk = finite_walk(m);
    const auto c = cauchy_check(m, walk, {*eps}, ctx.n_max).front();
    if (!c.certified) return fail("eventually constant walk not Cauchy");
    // Cauchy at the constancy scale means eventually constant, hence convergent.
    const Point tail = walk.at(c.threshold + 1);
    if (!all_certified(point_convergence(m, walk, tail, {*eps}, ctx.n_max)))
      return fail("Cauchy walk does not converge to its tail point");
    return pass("Cauchy at the constancy scale, N=" + std::to_string(c.threshold) + ", converges");
  }
  std::size_t count = 0;
  for (const auto* f : positive_forms(inst)) {
    if (f->dim() != m.point_dim()) continue;
    for (const auto& c : cauchy_check(m, *f, inst.eps_family, ctx.n_max))
      if (!c.certified) return fail(to_string(*f) + " not Cauchy at eps=" + to_string(c.epsilon));
    ++count;
  }
  if (count == 0) return skip("no point sequences of matching dimension");
  return pass(std::to_string(count) + " sequences Cauchy (analytic N)");
}

std::vector<std::vector<Point>> hausdorff_sets(const Instance& inst, const CheckContext& ctx) {
  std::vector<Point> pool;
  if (inst.space.is_finite()) {
    pool = inst.space.points();
  } else {
    pool = default_edge_elements(inst.space.point_dim());
  }
  std::vector<std::vector<Point>> sets;
  RationalSampler rs(ctx.plan.seed + 3, ctx.plan.span, ctx.plan.max_denominator);
  for (int k = 0; k < 24; ++k) {
    std::vector<Point> s;
    const std::size_t size = 1 + rs.index(std::min<std::size_t>(pool.size(), 4));
    for (std::size_t i = 0; i < size; ++i) s.push_back(pool[rs.index(pool.size())]);
    sets.push_back(std::move(s));
  }
  return sets;
}

CheckResult check_hausdorff(const Instance& inst, const CheckContext& ctx) {
  const auto& m = inst.space;
  const auto& g = inst.group();
  const auto sets = hausdorff_sets(inst, ctx);
  std::size_t defined = 0, undefined = 0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (hausdorff(m, sets[i], sets[i]) != g.identity()) return fail("H(A, A) != identity");
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      try {
        const Element ab = hausdorff(m, sets[i], sets[j]);
        if (ab != hausdorff(m, sets[j], sets[i])) return fail("H(A, B) != H(B, A)");
        ++defined;
      } catch (const OrderError&) {
        ++undefined;
      }
    }
    const Point& x = sets[i].front();
    const Point& y = sets[(i + 1) % sets.size()].front();
    if (hausdorff(m, {x}, {y}) != m.distance(x, y)) return fail("H({x}, {y}) != d(x, y)");
  }
  return pass(std::to_string(defined) + " pairs symmetric, " + std::to_string(undefined) +
              " undefined for this order");
}

CheckResult needs_map(const Instance& inst) {
  if (!inst.map || !inst.witness) return skip("no map or witness declared");
  return pass("");
}

CheckResult check_phi(const Instance& inst, const CheckContext& ctx) {
  if (auto r = needs_map(inst); r.outcome == RowOutcome::skip) return r;
  return from_contraction(check_phi_bound(*inst.map, *inst.witness, plan_for(inst, ctx)));
}

CheckResult check_weak(const Instance& inst, const CheckContext& ctx) {
  if (auto r = needs_map(inst); r.outcome == RowOutcome::skip) return r;
  return from_contraction(is_weak_contraction(*inst.map, *inst.witness, plan_for(inst, ctx)));
}

CheckResult check_global_weak(const Instance& inst, const CheckContext& ctx) {
  if (auto r = needs_map(inst); r.outcome == RowOutcome::skip) return r;
  const auto plan = plan_for(inst, ctx);
  const auto global = is_global_weak_contraction(*inst.map, *inst.witness, plan);
  const auto weak = is_weak_contraction(*inst.map, *inst.witness, plan);
  if (global.passed && !weak.passed) return fail("global passes but weak fails: " + weak.witness);
  return pass(global.passed ? "global and weak both pass" : "global fails (" + global.witness + "), nothing implied");
}

CheckResult check_c_condition(const Instance& inst, const CheckContext&) {
  if (!inst.witness) return skip("no witness declared");
  const auto s = c_condition_status(*inst.witness, inst.space);
  return pass(std::string(to_string(s.status)) + ": " + s.justification);
}

CheckResult check_endpoint_count(const Instance& inst, const CheckContext& ctx) {
  if (auto r = needs_map(inst); r.outcome == RowOutcome::skip) return r;
  if (!inst.space.is_finite()) return skip("endpoint enumeration needs a finite space");
  const auto weak = is_weak_contraction(*inst.map, *inst.witness, plan_for(inst, ctx));
  const auto ends = endpoints_bruteforce(*inst.map);
  if (!weak.passed) return skip("not a weak contraction: " + weak.witness);
  if (ends.size() > 1) return fail("weak contraction with endpoints " + to_string(ends[0]) + " and " + to_string(ends[1]));
  return pass(std::to_string(ends.size()) + " endpoint(s)");
}

CheckResult check_inf_sup(const Instance& inst, const CheckContext& ctx) {
  if (auto r = needs_map(inst); r.outcome == RowOutcome::skip) return r;
  if (!inst.space.is_finite()) return skip("inf-sup value needs a finite space");
  const auto ends = endpoints_bruteforce(*inst.map);
  const auto v = approximate_endpoint_property_finite(*inst.map);
  const Element zero = inst.group().identity();
  if (!ends.empty() && v.value != zero) return fail("endpoint present but inf-sup value is " + to_string(v.value));
  // Constant witness pair at the minimizer.
  const Sequence xs(std::vector<Element>(8, v.achieving_point));
  const Sequence as(ClosedForm::constant(v.value));
  const auto eps = inst.space.constancy_scale().value_or(inst.eps_family.front());
  const auto seq = approximate_endpoint_sequence(*inst.map, xs, as, {eps}, ctx.n_max);
  const bool witnessed = seq.bound_certified && seq.holds;
  if (witnessed != (v.value == zero))
    return fail("inf-sup value " + to_string(v.value) + " disagrees with the sequence witness");
  return pass("inf-sup value " + to_string(v.value) + " at " + to_string(v.achieving_point));
}

SolverConfig solver_config(const Instance& inst, const CheckContext& ctx) {
  SolverConfig cfg;
  cfg.eps = inst.solver_eps.value_or(inst.eps_family.front());
  cfg.max_iter = 1000;
  cfg.start = inst.start;
  cfg.plan = plan_for(inst, ctx);
  return cfg;
}

CheckResult check_solver(const Instance& inst, const CheckContext& ctx) {
  if (auto r = needs_map(inst); r.outcome == RowOutcome::skip) return r;
  SolverConfig cfg = solver_config(inst, ctx);
  if (!inst.space.is_finite()) {
    const auto rep = iterate_endpoint(*inst.map, *inst.witness, cfg);
    if (rep.outcome == Outcome::hypothesis_violation || rep.outcome == Outcome::budget_exhausted)
      return fail(std::string(to_string(rep.outcome)) + (rep.notes.empty() ? "" : ": " + rep.notes.back()));
    return pass(std::string(to_string(rep.outcome)) + " after " + std::to_string(rep.trace.size()) + " rows (" +
                std::string(to_string(rep.mode)) + ")");
  }
  const auto ends = endpoints_bruteforce(*inst.map);
  std::set<Point> found;
  std::size_t runs = 0;
  for (auto rule : {SelectionRule::min_distance, SelectionRule::lexicographic})
    for (const auto& x : inst.space.points()) {
      cfg.rule = rule;
      cfg.start = x;
      const auto rep = iterate_endpoint(*inst.map, *inst.witness, cfg);
      ++runs;
      if (rep.outcome == Outcome::hypothesis_violation)
        return fail("from " + to_string(x) + ": " + rep.hypothesis);
      if (rep.outcome == Outcome::endpoint_found) found.insert(*rep.point);
      if (!ends.empty() && (rep.outcome != Outcome::endpoint_found || *rep.point != ends.front()))
        return fail("from " + to_string(x) + " (" + std::string(to_string(rule)) + "): " +
                    std::string(to_string(rep.outcome)) + ", oracle endpoint " + to_string(ends.front()));
    }
  if (found.size() > 1) return fail("solver produced two distinct endpoints");
  return pass(std::to_string(runs) + " runs agree with the oracle" +
              (ends.empty() ? std::string(" (no endpoint)") : " at " + to_string(ends.front())));
}

CheckResult check_iff(const Instance& inst, const CheckContext& ctx) {
  if (auto r = needs_map(inst); r.outcome == RowOutcome::skip) return r;
  const auto rep = endpoint_iff_check(*inst.map, *inst.witness, plan_for(inst, ctx));
  if (rep.skipped) return skip(rep.reason);
  if (!rep.agree)
    return fail("endpoint side " + std::string(rep.endpoint_side ? "true" : "false") + ", property side " +
                (rep.property_side ? "true" : "false"));
  return pass(std::string("both sides ") + (rep.endpoint_side ? "true" : "false"));
}

CheckResult check_fixed_point(const Instance& inst, const CheckContext& ctx) {
  if (auto r = needs_map(inst); r.outcome == RowOutcome::skip) return r;
  const auto rep = single_valued_fixed_point_check(*inst.map, *inst.witness, solver_config(inst, ctx));
  if (rep.skipped) return skip(rep.reason);
  if (!rep.agree) return fail("solver fixed points disagree with the oracle");
  return pass("unique fixed point " + to_string(rep.fixed_points.front()) + " from every start");
}

CheckResult check_banach(const Instance& inst, const CheckContext& ctx) {
  if (auto r = needs_map(inst); r.outcome == RowOutcome::skip) return r;
  if (inst.witness->witness_class() != WitnessClass::alpha_constant) return skip("needs an alpha-const witness");
  if (inst.space.is_finite()) return skip("rate check runs on coordinate spaces");
  const Point x0 = inst.start.value_or(Element::unit(inst.space.point_dim(), 0));
  if (inst.map->image(x0).size() != 1) return skip("map is not single-valued");
  SolverConfig cfg = solver_config(inst, ctx);
  cfg.start = x0;
  const Rational alpha = inst.witness->alpha();
  const auto rep = banach_iterate(*inst.map, alpha, cfg);
  if (rep.outcome == Outcome::hypothesis_violation) return fail(rep.hypothesis + ": " + rep.notes.back());
  if (rep.outcome == Outcome::budget_exhausted) return fail("budget exhausted");
  const auto& g = inst.group();
  const auto& mod = inst.module();
  const Element first = rep.trace.front().step;
  for (const auto& row : rep.trace) {
    if (!g.leq(row.step, mod.scale(pow(alpha, row.n), first)))
      return fail("step " + std::to_string(row.n) + " exceeds alpha^n d(x0, x1)");
    if (!g.leq(row.step, *row.bound)) return fail("a-priori bound below the step at n=" + std::to_string(row.n));
  }
  return pass(std::to_string(rep.trace.size()) + " rows, steps within alpha^n d(x0, x1)");
}

}  // namespace

const std::vector<CheckSpec>& check_registry() {
  static const std::vector<CheckSpec> registry = {
      {"group.laws", "ordered group laws", [](const Instance& i, const CheckContext& c) {
         return from_laws(check_group_laws(i.group(), plan_for(i, c)));
       }},
      {"module.laws", "ordered module laws", [](const Instance& i, const CheckContext& c) {
         return from_laws(check_module_laws(i.module(), plan_for(i, c)));
       }},
      {"topo.laws", "analytic topological structure laws", [](const Instance& i, const CheckContext& c) {
         return from_laws(check_topo_laws(i.topo, plan_for(i, c)));
       }},
      {"topo.convergence", "exact thresholds for closed forms", check_convergence},
      {"topo.two-sided", "sandwich and two-sided forms give equal N", check_two_sided},
      {"topo.limit-unique", "limits are unique", check_uniqueness},
      {"topo.sum", "sums of null sequences", check_sum},
      {"topo.sandwich", "b_n - a_n -> identity", check_sandwich},
      {"topo.regular", "decreasing sequences converge", check_regular},
      {"metric.laws", "metric laws", [](const Instance& i, const CheckContext& c) {
         return from_laws(check_metric_laws(i.space, plan_for(i, c)));
       }},
      {"metric.convergence", "point sequence convergence", check_point_convergence},
      {"metric.cauchy", "Cauchy sequences", check_cauchy},
      {"metric.hausdorff", "Hausdorff distance identities", check_hausdorff},
      {"contraction.phi-bound", "phi < d", check_phi},
      {"contraction.weak", "weak contraction", check_weak},
      {"contraction.global-weak", "global implies weak", check_global_weak},
      {"contraction.c-condition", "C-condition status", check_c_condition},
      {"contraction.endpoint-count", "at most one endpoint", check_endpoint_count},
      {"contraction.inf-sup", "approximate endpoint property", check_inf_sup},
      {"solver.endpoint", "solver agrees with the oracle", check_solver},
      {"solver.endpoint-iff", "endpoint iff approximate endpoint property", check_iff},
      {"solver.fixed-point", "single-valued fixed point", check_fixed_point},
      {"solver.banach-rate", "Picard iteration rate", check_banach},
  };
  return registry;
}

std::vector<std::string> default_checks() {
  std::vector<std::string> out;
  for (const auto& c : check_registry()) out.push_back(c.id);
  return out;
}

TraceabilityReport run_suite(const SuiteSpec& spec) {
  std::vector<const CheckSpec*> checks;
  for (const auto& id : spec.checks) {
    auto it = std::find_if(check_registry().begin(), check_registry().end(),
                           [&](const CheckSpec& c) { return c.id == id; });
    if (it == check_registry().end()) throw std::invalid_argument("unknown check '" + id + "'");
    checks.push_back(&*it);
  }
  CheckContext ctx;
  ctx.plan.seed = spec.seed;
  ctx.plan.count = spec.samples;
  ctx.n_max = spec.n_max;
  TraceabilityReport report;
  for (const auto* c : checks)
    for (const auto& inst : spec.instances) {
      const auto t0 = std::chrono::steady_clock::now();
      CheckResult r;
      try {
        r = c->run(inst, ctx);
      } catch (const std::exception& e) {
        r = fail(std::string("error: ") + e.what());
      }
      const auto t1 = std::chrono::steady_clock::now();
      report.rows.push_back(
          {c->id, inst.name, r.outcome, r.detail, std::chrono::duration<double, std::milli>(t1 - t0).count()});
    }
  return report;
}

std::vector<std::string> fault_names() {
  return {"break-d2", "break-g1", "break-t3", "break-phi-bound", "add-second-endpoint", "identity"};
}

std::string fault_target(const std::string& mutation) {
  static const std::map<std::string, std::string> targets{{"break-d2", "metric.laws"},
                                                          {"break-g1", "group.laws"},
                                                          {"break-t3", "topo.laws"},
                                                          {"break-phi-bound", "contraction.phi-bound"},
                                                          {"add-second-endpoint", "contraction.weak"},
                                                          {"identity", ""}};
  auto it = targets.find(mutation);
  if (it == targets.end()) throw std::invalid_argument("unknown mutation '" + mutation + "'");
  return it->second;
}

Instance fault_inject(const Instance& inst, const std::string& mutation) {
  fault_target(mutation);
  Instance out = inst;
  out.name = inst.name + "+" + mutation;
  const std::size_t dim = inst.group().dim();

  if (mutation == "identity") return out;

  if (mutation == "break-d2") {
    const auto& m = inst.space;
    if (m.table() && m.points().size() >= 2) {
      const Element bumped = m.group().add(m.distance(m.points()[0], m.points()[1]), Element::filled(dim, 1));
      return out.with_space(m.with_entry(0, 1, bumped));
    }
    const auto base = m;
    auto skewed = m.with_metric([base](const Point& x, const Point& y) {
      const Element d = base.distance(x, y);
      return x < y ? d.scaled(2) : d;
    });
    Instance r = out.with_space(std::move(skewed));
    return r;
  }

  if (mutation == "break-g1") {
    // Declares a <= b for one extra pair; translating it by c breaks g1.
    const Element a = Element::zero(dim);
    Element b = dim == 1 ? Element{Rational(-1)} : Element::unit(dim, 0) - Element::unit(dim, 1);
    const OrderedGroup g = inst.group();
    auto leq = [g, a, b](const Element& x, const Element& y) {
      return (x == a && y == b) || g.leq(x, y);
    };
    Instance r = out.with_module(inst.module().with_group(g.with_order(g.name() + " (corrupted)", leq)));
    r.edge.push_back(a);
    r.edge.push_back(b);
    return r;
  }

  if (mutation == "break-t3") {
    const TopoStructure base = inst.topo;
    auto below = [base](const Element& x, const Element& y) {
      if (!base.below(x, y)) return false;
      for (const auto& c : y.coords())
        if (c >= 4) return false;
      return true;
    };
    return out.with_topo(inst.topo.with_relation(inst.topo.name() + " (capped)", below));
  }

  if (!inst.map || !inst.witness) throw std::invalid_argument(mutation + " needs a map and a witness");

  if (mutation == "break-phi-bound") {
    if (const auto* t = inst.witness->table(); t && !t->empty()) {
      const auto& key = t->begin()->first;
      out.witness = inst.witness->with_entry(key.first, key.second, inst.space.distance(key.first, key.second));
    } else {
      out.witness = ContractionWitness::alpha_constant(1);
    }
    return out;
  }

  // add-second-endpoint
  const auto& m = inst.space;
  if (inst.map->table()) {
    const auto ends = endpoints_bruteforce(*inst.map);
    for (const auto& p : m.points())
      if (std::find(ends.begin(), ends.end(), p) == ends.end()) {
        out.map = inst.map->with_image(p, {p});
        return out;
      }
    throw std::invalid_argument("every point is already an endpoint");
  }
  const Point p = Element::unit(m.point_dim(), 0);
  const SetValuedMap base = *inst.map;
  out.map = SetValuedMap::from_rule(
      m,
      [base, p](const Point& x) { return x == p ? std::vector<Point>{p} : base.image(x); },
      base.description() + " with an extra endpoint");
  out.edge.push_back(p);
  return out;
}

}  // namespace ordmet
