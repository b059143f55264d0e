// One line per acceptance criterion, "ACk PASS ..." or "ACk FAIL ...".
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "ordmet/harness.hpp"
#include "oracles.hpp"

using namespace ordmet;
using oracle::frac;
using oracle::Q;
using oracle::Vec;

namespace {

constexpr std::uint64_t kSeed = 20100132;
constexpr std::size_t kMinSamples = 1000;
constexpr double kAxiomBudgetSeconds = 60.0;

struct Verdict {
  bool ok = true;
  std::string summary;
  std::string first_problem;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) first_problem = what;
    ok = ok && cond;
  }
};

int failures = 0;

void report(const char* id, const std::function<Verdict()>& run) {
  Verdict v;
  try {
    v = run();
  } catch (const std::exception& e) {
    v.ok = false;
    v.first_problem = std::string("exception: ") + e.what();
  }
  std::printf("%s %s %s%s%s\n", id, v.ok ? "PASS" : "FAIL", v.summary.c_str(), v.ok ? "" : " | first problem: ",
              v.ok ? "" : v.first_problem.c_str());
  std::fflush(stdout);
  failures += v.ok ? 0 : 1;
}

Vec to_vec(const Element& e) { return Vec(e.coords().begin(), e.coords().end()); }
Element to_element(const Vec& v) { return Element(std::vector<Rational>(v.begin(), v.end())); }

// a_n from the term list with plain rational arithmetic.
Vec eval(const ClosedForm& f, std::uint64_t n) {
  Vec out(f.dim(), Q(0));
  for (const auto& t : f.terms()) {
    Q basis = 1;
    switch (t.kind) {
      case TermKind::constant: break;
      case TermKind::harmonic: basis = Q(1) / Q(static_cast<unsigned long>(n)); break;
      case TermKind::inverse_square:
        basis = Q(1) / (Q(static_cast<unsigned long>(n)) * Q(static_cast<unsigned long>(n)));
        break;
      case TermKind::geometric:
        for (std::uint64_t k = 0; k < n; ++k) basis *= t.ratio;
        break;
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += basis * t.coeff[i];
  }
  return out;
}

// "theta <= a_n - a << eps" in the two built-in structures.
bool holds_at(bool interior, const Vec& an, const Vec& a, const Vec& eps) {
  const Vec diff = oracle::sub(an, a);
  if (!oracle::cone_leq(Vec(diff.size(), Q(0)), diff)) return false;
  const Vec gap = oracle::sub(eps, diff);
  if (interior) return oracle::all_positive(gap);
  return oracle::cone_leq(Vec(gap.size(), Q(0)), gap) && gap != Vec(gap.size(), Q(0));
}

// Smallest N with the condition at every n > N, for sequences whose terms
// are nonincreasing: the first n where it holds, minus one. Only valid for
// nonnegative coefficients, which every caller guarantees.
std::uint64_t brute_threshold(const ClosedForm& f, const Vec& limit, const Vec& eps, bool interior) {
  constexpr std::uint64_t cap = 1u << 22;
  for (std::uint64_t n = 1; n <= cap; ++n)
    if (holds_at(interior, eval(f, n), limit, eps)) return n - 1;
  return cap;
}

bool is_interior(const Instance& inst) { return inst.group().dim() > 1 && inst.name != "strict2"; }

ClosedForm without_constant(const ClosedForm& f) {
  std::vector<Term> kept;
  for (const auto& t : f.terms())
    if (t.kind != TermKind::constant) kept.push_back(t);
  return ClosedForm(kept);
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// AC1 ----------------------------------------------------------------------

Verdict axiom_suite() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const std::set<std::string> required{"g1", "r1", "m1", "g1-two-sided", "m1-weak", "m2", "m2-weak",
                                       "t1", "t2", "t3", "t5", "t6", "d1", "d2", "d3"};
  // r1 and the positivity witness are statements about fixed elements, not
  // about samples.
  const std::set<std::string> unsampled{"r1", "witness"};
  std::size_t reports = 0, min_checked = SIZE_MAX;
  for (const auto* name : {"real", "cone2", "cone3"}) {
    const Instance inst = builtin_instance(name);
    SamplePlan plan;
    plan.seed = kSeed;
    plan.edge = inst.edge;
    // Some laws only apply to samples meeting a precondition; grow the draw
    // until each of them has seen the minimum.
    for (plan.count = kMinSamples;; plan.count *= 2) {
      const std::vector<LawReport> reps{check_group_laws(inst.group(), plan), check_module_laws(inst.module(), plan),
                                        check_topo_laws(inst.topo, plan), check_metric_laws(inst.space, plan)};
      std::size_t least = SIZE_MAX;
      std::set<std::string> seen;
      for (const auto& r : reps)
        for (const auto& l : r.laws) {
          seen.insert(l.law);
          if (!unsampled.count(l.law)) least = std::min(least, l.checked);
        }
      if (least < kMinSamples && plan.count < 64 * kMinSamples) continue;
      for (const auto& r : reps)
        for (const auto& l : r.laws) v.expect(l.passed, std::string(name) + " " + l.law + ": " + l.witness);
      for (const auto& law : required) v.expect(seen.count(law) == 1, std::string(name) + " missing law " + law);
      v.expect(least >= kMinSamples, fmt("%s: only %zu samples for some law", name, least));
      min_checked = std::min(min_checked, least);
      reports += reps.size();
      break;
    }
  }

  std::size_t flipped = 0, targeted = 0;
  for (const auto& fault : fault_names()) {
    const auto target = fault_target(fault);
    if (target.empty()) continue;
    ++targeted;
    bool any = false;
    for (const auto& name : builtin_instance_names()) {
      const Instance base = builtin_instance(name);
      std::optional<Instance> broken;
      try {
        broken = fault_inject(base, fault);
      } catch (const std::invalid_argument&) {
        continue;
      }
      SuiteSpec spec;
      spec.seed = kSeed;
      spec.samples = kMinSamples;
      spec.checks = {target};
      spec.instances = {base, *broken};
      const auto rep = run_suite(spec);
      const bool flips = rep.rows[0].outcome == RowOutcome::pass && rep.rows[1].outcome == RowOutcome::fail;
      v.expect(flips, fault + " on " + name + " does not flip " + target);
      any = any || flips;
    }
    v.expect(any, fault + " applies to no built-in instance");
    flipped += any ? 1 : 0;
  }

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  v.expect(secs < kAxiomBudgetSeconds, fmt("took %.1f s", secs));
  v.summary = fmt("axiom suite: %zu law reports on real/cone2/cone3, >= %zu samples per sampled law, %zu/%zu faults "
                  "flip their target, %.1f s",
                  reports, min_checked, flipped, targeted, secs);
  return v;
}

// AC2 ----------------------------------------------------------------------

Verdict limit_lemma_suite() {
  Verdict v;
  std::size_t families = 0, certs = 0;
  std::size_t min_families = SIZE_MAX;
  const std::uint64_t n_max = 256;
  for (const auto* name : {"real", "cone2", "cone3", "strict2"}) {
    const Instance inst = builtin_instance(name);
    const bool interior = is_interior(inst);
    std::vector<ClosedForm> forms;
    for (const auto& s : inst.sequences)
      if (const auto* f = s.closed_form()) forms.push_back(*f);
    min_families = std::min(min_families, forms.size());
    families += forms.size();
    const auto& t = inst.topo;

    for (std::size_t k = 0; k < forms.size(); ++k) {
      const ClosedForm& f = forms[k];
      const Element lim = f.limit();
      const std::string tag = std::string(name) + " seq " + to_string(f);

      // Exact N against the brute-force oracle.
      const auto cs = verify_convergence(t, f, lim, inst.eps_family, n_max);
      for (const auto& c : cs) {
        v.expect(c.certified, tag + " not certified");
        v.expect(c.threshold == brute_threshold(f, to_vec(lim), to_vec(c.epsilon), interior),
                 tag + fmt(" N=%llu disagrees with brute force", (unsigned long long)c.threshold));
        ++certs;
      }

      // Limit uniqueness: the limit itself is confirmed, a shifted point is not.
      v.expect(check_limit_uniqueness(t, f, lim, lim, inst.eps_family, n_max).passed, tag + " limit rejected");
      const Element shift = inst.eps_family.front().scaled(frac(1, 2));
      v.expect(!check_limit_uniqueness(t, f, lim, lim + shift, inst.eps_family, n_max).passed,
               tag + " second limit above accepted");
      if (inst.group().nonnegative(lim - shift))
        v.expect(!check_limit_uniqueness(t, f, lim, lim - shift, inst.eps_family, n_max).passed,
                 tag + " second limit below accepted");

      // Sum of two null sequences.
      const ClosedForm a = without_constant(f);
      const ClosedForm b = without_constant(forms[(k + 1) % forms.size()]);
      const Vec zero(lim.dim(), Q(0));
      for (const auto& sc : sum_convergence(t, a, b, inst.eps_family, n_max)) {
        v.expect(sc.certified, tag + " sum not certified");
        const auto direct = brute_threshold(a + b, zero, to_vec(sc.epsilon), interior);
        v.expect(sc.direct_threshold == direct, tag + " sum direct N disagrees with brute force");
        v.expect(sc.first_threshold == brute_threshold(a, zero, to_vec(sc.eta), interior) &&
                     sc.second_threshold == brute_threshold(b, zero, to_vec(sc.epsilon - sc.eta), interior),
                 tag + " split thresholds disagree with brute force");
        v.expect(sc.split_threshold >= direct, tag + " split N below the true N");
        ++certs;
      }

      // Sandwich: f <= f + b with both tending to lim.
      const ClosedForm upper = f + b;
      const auto sw = sandwich_convergence(t, f, upper, lim, inst.eps_family, n_max);
      v.expect(!sw.precondition_violation.has_value(), tag + " sandwich precondition: " + sw.detail);
      v.expect(sw.certified(), tag + " sandwich not certified");
      for (const auto& e : sw.entries) {
        v.expect(e.bound_threshold == brute_threshold(upper, to_vec(lim), to_vec(e.epsilon), interior),
                 tag + " sandwich bound N disagrees with brute force");
        v.expect(e.direct_threshold == brute_threshold(b, zero, to_vec(e.epsilon), interior),
                 tag + " sandwich direct N disagrees with brute force");
        ++certs;
      }
    }
    v.expect(forms.size() >= 5, std::string(name) + " has fewer than 5 closed-form families");
  }
  v.summary = fmt("limit lemmas: %zu families (>= %zu per instance), %zu exact thresholds match brute force", families,
                  min_families, certs);
  return v;
}

// Finite corpus -----------------------------------------------------------------

struct Corpus {
  std::vector<std::pair<SetValuedMap, ContractionWitness>> items;
};

// Random subsets of a small rational line, with maps biased towards the
// shapes that contract: near-constant tables and "move one step towards a
// sink" tables, plus fully random ones.
SetValuedMap random_table(oracle::Gen& gen, const MetricSpace& m) {
  const auto& pts = m.points();
  const long last = static_cast<long>(pts.size()) - 1;
  const long sink = gen.integer(0, last);
  const int mode = static_cast<int>(gen.integer(0, 2));
  ImageTable img;
  for (long i = 0; i <= last; ++i) {
    std::vector<Point> im;
    if (mode == 0) {
      im.push_back(pts[gen.coin() ? sink : gen.integer(0, last)]);
    } else if (mode == 1) {
      const long step = i < sink ? i + 1 : i > sink ? i - 1 : i;
      im.push_back(pts[step]);
      if (gen.integer(0, 3) == 0) im.push_back(pts[sink]);
    } else {
      im.push_back(pts[gen.integer(0, last)]);
      while (gen.integer(0, 2) == 0) im.push_back(pts[gen.integer(0, last)]);
    }
    img[pts[i]] = im;
  }
  return SetValuedMap::from_table(m, img);
}

MetricSpace random_space(oracle::Gen& gen) {
  const auto line = TopoStructure::strict_order(OrderedModule::coordinate_cone(1));
  std::set<Point> s;
  const auto size = static_cast<std::size_t>(gen.integer(1, 5));
  while (s.size() < size) s.insert(Element{gen.rational(3, 4)});
  return MetricSpace::finite({s.begin(), s.end()}, MetricKind::absolute, line);
}

ContractionWitness random_alpha(oracle::Gen& gen) { return ContractionWitness::alpha_constant(frac(gen.integer(1, 19), 20)); }

// AC3 ----------------------------------------------------------------------

Verdict finite_endpoint_suite() {
  Verdict v;
  oracle::Gen gen(kSeed + 3);
  std::size_t kept = 0, with_endpoint = 0, drawn = 0;
  while (kept < 200 && drawn < 200000) {
    ++drawn;
    const auto m = random_space(gen);
    const auto t = random_table(gen, m);
    const auto w = random_alpha(gen);
    const auto weak = is_weak_contraction(t, w, {});
    if (!weak.passed) continue;
    v.expect(weak.exhaustive, "weak check was not exhaustive");
    ++kept;

    // Brute force on the raw table.
    std::vector<Q> ends;
    Q inf_sup = -1;
    for (const auto& x : m.points()) {
      const auto im = t.image(x);
      if (im.size() == 1 && im.front() == x) ends.push_back(x[0]);
      Q worst = 0;
      for (const auto& y : im) worst = std::max<Q>(worst, abs(x[0] - y[0]));
      if (inf_sup < 0 || worst < inf_sup) inf_sup = worst;
    }
    with_endpoint += ends.empty() ? 0 : 1;
    v.expect(ends.size() <= 1, fmt("%zu endpoints on a weak contraction", ends.size()));
    v.expect(endpoints_bruteforce(t).size() == ends.size(), "library endpoint count differs from the scan");
    const auto iff = endpoint_iff_check(t, w, {});
    v.expect(!iff.skipped, "iff check skipped: " + iff.reason);
    v.expect(iff.inf_sup == Element{inf_sup}, "inf-sup differs from the scan");
    v.expect(iff.agree && (ends.size() == 1) == (inf_sup == 0), "endpoint iff inf-sup = 0 broken");
  }
  v.expect(kept >= 100, fmt("only %zu weak contractions found", kept));
  v.summary = fmt("finite endpoints: %zu weak contractions (|X| <= 5) from %zu draws, %zu with an endpoint, count <= 1 "
                  "and the iff hold in all",
                  kept, drawn, with_endpoint);
  return v;
}

// AC4 ----------------------------------------------------------------------

Verdict solver_oracle_suite() {
  Verdict v;
  oracle::Gen gen(kSeed + 4);
  std::size_t kept = 0, runs = 0, drawn = 0;
  while (kept < 150 && drawn < 200000) {
    ++drawn;
    const auto m = random_space(gen);
    const auto t = random_table(gen, m);
    const auto w = random_alpha(gen);
    if (!is_global_weak_contraction(t, w, {}).passed) continue;
    ++kept;
    const auto ends = endpoints_bruteforce(t);
    v.expect(ends.size() == 1, fmt("global contraction with %zu endpoints", ends.size()));
    if (ends.size() != 1) continue;
    for (const auto rule : {SelectionRule::min_distance, SelectionRule::lexicographic})
      for (const auto& start : m.points()) {
        SolverConfig cfg;
        cfg.eps = Element{frac(1, 1000)};
        cfg.rule = rule;
        cfg.start = start;
        const auto r = iterate_endpoint(t, w, cfg);
        ++runs;
        v.expect(r.outcome == Outcome::endpoint_found && r.point == ends.front(),
                 "solver from " + to_string(start) + " gave " + std::string(to_string(r.outcome)));
        v.expect(r.mode == SolverMode::theorem, "solver fell back to best effort on a global contraction");
      }
  }
  v.expect(kept >= 100, fmt("only %zu global contractions found", kept));
  v.summary = fmt("solver vs brute force: %zu global alpha contractions, %zu runs (every start, both rules) agree", kept,
                  runs);
  return v;
}

// AC5 ----------------------------------------------------------------------

Verdict banach_suite() {
  Verdict v;
  const Instance inst = builtin_instance("r1-banach");
  SolverConfig cfg;
  cfg.eps = Element{frac(1, 1024)};
  cfg.start = Element{1};
  const Q alpha = frac(1, 2);
  const auto r = banach_iterate(*inst.map, alpha, cfg);
  v.expect(r.outcome == Outcome::approximate_endpoint_sequence || r.outcome == Outcome::endpoint_found,
           "outcome " + std::string(to_string(r.outcome)));
  const Q x0 = 1, x1 = x0 / 2;
  const Q target = frac(1, 1024);
  std::optional<std::uint64_t> reached;
  Q power = 1;
  for (const auto& row : r.trace) {
    const Q dist = abs(row.current[0]);
    v.expect(dist == power, fmt("d(x_%llu, 0) is not 2^-%llu", (unsigned long long)row.n, (unsigned long long)row.n));
    Q apriori = 1;
    for (std::uint64_t k = 0; k < row.n; ++k) apriori *= alpha;
    apriori = apriori / (1 - alpha) * abs(x0 - x1);
    v.expect(row.bound && (*row.bound)[0] == apriori, "reported bound differs from alpha^n/(1-alpha) d(x0, x1)");
    v.expect(dist <= apriori, "a-priori bound below the distance");
    if (!reached && dist < target) reached = row.n;
    power /= 2;
  }
  v.expect(reached && *reached <= 12, "2^-10 not reached within 12 iterations");
  v.summary = fmt("Banach x/2: d(x_n, 0) = 2^-n exactly over %zu rows, below 2^-10 at n = %llu, a-priori bound holds",
                  r.trace.size(), (unsigned long long)reached.value_or(0));
  return v;
}

// AC6 ----------------------------------------------------------------------

Verdict hausdorff_suite() {
  Verdict v;
  oracle::Gen gen(kSeed + 6);
  std::set<Q> raw;
  while (raw.size() < 20) raw.insert(gen.rational(10, 7));
  std::vector<Point> pts;
  for (const auto& q : raw) pts.push_back(Element{q});
  const auto m = MetricSpace::finite(pts, MetricKind::absolute,
                                     TopoStructure::strict_order(OrderedModule::coordinate_cone(1)));
  auto subset = [&]() {
    std::vector<Point> s;
    std::vector<Q> q;
    while (s.empty())
      for (const auto& p : m.points())
        if (gen.integer(0, 3) == 0) {
          s.push_back(p);
          q.push_back(p[0]);
        }
    return std::make_pair(s, q);
  };
  const std::size_t pairs = 200;
  for (std::size_t i = 0; i < pairs; ++i) {
    const auto [a, qa] = subset();
    const auto [b, qb] = subset();
    const Element h = hausdorff(m, a, b);
    v.expect(h == Element{oracle::hausdorff_line(qa, qb)}, "differs from the double-loop oracle");
    v.expect(h == hausdorff(m, b, a), "not symmetric");
    v.expect(hausdorff(m, a, a) == Element{Q(0)}, "H(A, A) != 0");
    v.expect(hausdorff(m, a, b, kernels::Exec::serial) == hausdorff(m, a, b, kernels::Exec::parallel),
             "serial and parallel kernels differ");
  }
  v.summary = fmt("Hausdorff: %zu random subset pairs of a 20-point line match the oracle, symmetric, H(A, A) = 0",
                  pairs);
  return v;
}

// AC7 ----------------------------------------------------------------------

Verdict strength_suite() {
  Verdict v;
  std::size_t pairs = 0, two_sided = 0;
  const std::uint64_t n_max = 256;
  for (const auto dim : {std::size_t{2}, std::size_t{3}}) {
    const Instance cone = builtin_instance(dim == 2 ? "cone2" : "cone3");
    std::vector<ClosedForm> forms;
    for (const auto& s : cone.sequences) forms.push_back(*s.closed_form());
    // Sequences whose coordinates converge at different rates.
    Vec ones(dim, Q(1)), mixed(dim, Q(0)), other(dim, Q(0));
    mixed[0] = 1;
    other[dim - 1] = 5;
    forms.push_back(ClosedForm::harmonic(to_element(mixed)) + ClosedForm::inverse_square(to_element(other)));
    forms.push_back(ClosedForm::geometric(frac(1, 3), to_element(other)) + ClosedForm::harmonic(to_element(mixed)));
    forms.push_back(ClosedForm::constant(to_element(ones)) + ClosedForm::geometric(frac(2, 3), to_element(ones)));
    std::vector<Element> eps = cone.eps_family;
    Vec uneven(dim, frac(1, 1000));
    uneven[0] = frac(1, 10);
    eps.push_back(to_element(uneven));

    for (const auto& f : forms) {
      const Element lim = f.limit();
      const auto cs = verify_convergence(cone.topo, f, lim, eps, n_max);
      for (const auto& c : cs) {
        ++pairs;
        const Vec e = to_vec(c.epsilon);
        // Coordinatewise: the largest of the one-dimensional thresholds.
        std::uint64_t coordinatewise = 0;
        for (std::size_t i = 0; i < dim; ++i) {
          Vec unit(dim, Q(0));
          unit[i] = 1;
          std::vector<Term> proj;
          for (const auto& t : f.terms()) proj.push_back(Term{t.kind, Element{t.coeff[i]}, t.ratio});
          coordinatewise = std::max(coordinatewise, brute_threshold(ClosedForm(proj), {lim[i]}, {e[i]}, false));
        }
        Q smallest = e[0];
        for (const auto& q : e) smallest = std::min(smallest, q);
        const std::uint64_t normwise = brute_threshold(f, to_vec(lim), Vec(dim, smallest), true);
        v.expect(c.certified, "cone certificate missing for " + to_string(f));
        v.expect(c.threshold <= coordinatewise,
                 to_string(f) + fmt(": cone N %llu above coordinatewise N %llu", (unsigned long long)c.threshold,
                                    (unsigned long long)coordinatewise));
        v.expect(c.threshold <= normwise, to_string(f) + ": cone N above the max-norm N");
      }
      const auto ts = verify_convergence_two_sided(cone.topo, f, lim, eps, n_max);
      for (std::size_t i = 0; i < cs.size(); ++i) {
        v.expect(ts[i].certified == cs[i].certified && ts[i].threshold == cs[i].threshold,
                 to_string(f) + ": two-sided N differs");
        ++two_sided;
      }
    }
  }
  // Two-sided agreement on the remaining structures as well.
  for (const auto* name : {"real", "strict2"}) {
    const Instance inst = builtin_instance(name);
    for (const auto& s : inst.sequences) {
      const auto* f = s.closed_form();
      const auto cs = verify_convergence(inst.topo, *f, f->limit(), inst.eps_family, n_max);
      const auto ts = verify_convergence_two_sided(inst.topo, *f, f->limit(), inst.eps_family, n_max);
      for (std::size_t i = 0; i < cs.size(); ++i) {
        v.expect(ts[i].certified == cs[i].certified && ts[i].threshold == cs[i].threshold,
                 std::string(name) + " " + to_string(*f) + ": two-sided N differs");
        ++two_sided;
      }
    }
  }
  v.summary = fmt("strength ordering: %zu (sequence, eps) pairs in Q^2/Q^3 with cone N <= coordinatewise N, %zu "
                  "two-sided thresholds identical",
                  pairs, two_sided);
  return v;
}

}  // namespace

int main() {
  report("AC1", axiom_suite);
  report("AC2", limit_lemma_suite);
  report("AC3", finite_endpoint_suite);
  report("AC4", solver_oracle_suite);
  report("AC5", banach_suite);
  report("AC6", hausdorff_suite);
  report("AC7", strength_suite);
  std::printf("%d of 7 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
