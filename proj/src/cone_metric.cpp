#include "ordmet/cone_metric.hpp"

#include <algorithm>

#include "samples_internal.hpp"
#include "threshold_internal.hpp"

namespace ordmet {

std::string_view to_string(MetricKind k) {
  switch (k) {
    case MetricKind::absolute: return "abs";
    case MetricKind::coordinatewise: return "coordinatewise";
    case MetricKind::table: return "table";
    case MetricKind::custom: return "custom";
  }
  return "?";
}

namespace {

Element coordinate_distance(const Point& x, const Point& y) {
  require_same_dim(x, y);
  std::vector<Rational> c(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) c[i] = abs(x[i] - y[i]);
  return Element(std::move(c));
}

void check_builtin(std::size_t point_dim, MetricKind kind, const TopoStructure& target) {
  if (kind == MetricKind::absolute && point_dim != 1) throw DomainError("abs metric needs one-dimensional points");
  if ((kind == MetricKind::absolute || kind == MetricKind::coordinatewise) && target.dim() != point_dim)
    throw DomainError("metric values have dimension " + std::to_string(point_dim) + " but the group has dimension " +
                      std::to_string(target.dim()));
  if (kind == MetricKind::table || kind == MetricKind::custom)
    throw std::invalid_argument("use with_table or with_metric for non-coordinate metrics");
}

std::vector<Point> canonical_points(std::vector<Point> pts) {
  if (pts.empty()) throw std::invalid_argument("finite space needs at least one point");
  for (const auto& p : pts) require_same_dim(pts.front(), p);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

MetricSpace::MetricSpace(std::size_t point_dim, MetricKind kind, TopoStructure target,
                         std::optional<std::vector<Point>> points, MetricFn metric, std::optional<MetricTable> table)
    : point_dim_(point_dim),
      kind_(kind),
      target_(std::move(target)),
      points_(std::move(points)),
      metric_(std::move(metric)),
      table_(std::move(table)) {}

MetricSpace MetricSpace::continuum(std::size_t point_dim, MetricKind kind, TopoStructure target) {
  check_builtin(point_dim, kind, target);
  return MetricSpace(point_dim, kind, std::move(target), std::nullopt, coordinate_distance, std::nullopt);
}

MetricSpace MetricSpace::finite(std::vector<Point> points, MetricKind kind, TopoStructure target) {
  points = canonical_points(std::move(points));
  const std::size_t dim = points.front().dim();
  check_builtin(dim, kind, target);
  return MetricSpace(dim, kind, std::move(target), std::move(points), coordinate_distance, std::nullopt);
}

MetricSpace MetricSpace::grid(const Rational& lo, const Rational& hi, const Rational& step, TopoStructure target) {
  if (step <= 0 || hi < lo) throw std::invalid_argument("grid needs lo <= hi and a positive step");
  std::vector<Point> pts;
  for (Rational x = lo; x <= hi; x += step) pts.push_back(Element{x});
  return finite(std::move(pts), MetricKind::absolute, std::move(target));
}

MetricSpace MetricSpace::with_table(std::vector<Point> points, MetricTable table, TopoStructure target) {
  const std::size_t n = points.size();
  if (n == 0) throw std::invalid_argument("finite space needs at least one point");
  if (table.size() != n) throw std::invalid_argument("metric table must have one row per point");
  for (const auto& row : table) {
    if (row.size() != n) throw std::invalid_argument("metric table must be square");
    for (const auto& v : row)
      if (!target.group().contains(v)) throw DomainError("metric value " + to_string(v) + " is not in the group");
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  std::vector<Point> sorted;
  for (auto i : order) sorted.push_back(points[i]);
  for (std::size_t i = 1; i < n; ++i)
    if (sorted[i] == sorted[i - 1]) throw std::invalid_argument("duplicate point " + to_string(sorted[i]));
  MetricTable t(n, std::vector<Element>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t[i][j] = table[order[i]][order[j]];
  const std::size_t dim = sorted.front().dim();
  return MetricSpace(dim, MetricKind::table, std::move(target), std::move(sorted), nullptr, std::move(t));
}

const std::vector<Point>& MetricSpace::points() const {
  if (!points_) throw std::logic_error("continuum space has no point list");
  return *points_;
}

std::optional<std::size_t> MetricSpace::index_of(const Point& p) const {
  if (!points_) return std::nullopt;
  auto it = std::lower_bound(points_->begin(), points_->end(), p);
  if (it == points_->end() || *it != p) return std::nullopt;
  return static_cast<std::size_t>(it - points_->begin());
}

bool MetricSpace::contains(const Point& p) const {
  if (p.dim() != point_dim_) return false;
  return !points_ || index_of(p).has_value();
}

Element MetricSpace::distance(const Point& x, const Point& y) const {
  if (!contains(x)) throw DomainError("point " + to_string(x) + " is not in X");
  if (!contains(y)) throw DomainError("point " + to_string(y) + " is not in X");
  if (table_) return (*table_)[*index_of(x)][*index_of(y)];
  return metric_(x, y);
}

std::optional<Element> MetricSpace::constancy_scale() const {
  if (!points_) return std::nullopt;
  std::optional<Rational> least;
  for (const auto& x : *points_)
    for (const auto& y : *points_) {
      if (x == y) continue;
      const Element d = distance(x, y);
      for (const auto& c : d.coords())
        if (c > 0 && (!least || c < *least)) least = c;
    }
  if (!least) return std::nullopt;
  return Element::filled(group().dim(), *least);
}

MetricSpace MetricSpace::with_metric(MetricFn d) const {
  return MetricSpace(point_dim_, MetricKind::custom, target_, points_, std::move(d), std::nullopt);
}

MetricSpace MetricSpace::with_target(TopoStructure target) const {
  return MetricSpace(point_dim_, kind_, std::move(target), points_, metric_, table_);
}

MetricSpace MetricSpace::with_entry(std::size_t i, std::size_t j, Element value) const {
  if (!table_) throw std::logic_error("with_entry needs a table metric");
  MetricTable t = *table_;
  t.at(i).at(j) = std::move(value);
  return MetricSpace(point_dim_, kind_, target_, points_, metric_, std::move(t));
}

LawReport check_metric_laws(const MetricSpace& m, const SamplePlan& plan) {
  using detail::Triple;
  std::vector<Triple> triples;
  if (m.is_finite()) {
    const auto& p = m.points();
    for (const auto& x : p)
      for (const auto& y : p)
        for (const auto& z : p) triples.push_back({x, y, z});
  } else {
    triples = detail::sample_triples(m.point_dim(), plan);
  }
  const auto& g = m.group();
  auto pair_witness = [](const Triple& t) { return "x=" + to_string(t[0]) + " y=" + to_string(t[1]); };
  auto run = [&](std::string law, auto&& holds, bool pair) {
    LawResult r{std::move(law), true, triples.size(), {}};
    if (auto bad = kernels::first_failure(triples.size(), [&](std::size_t i) { return holds(triples[i]); })) {
      r.passed = false;
      const auto& t = triples[*bad];
      r.witness = pair ? pair_witness(t) : pair_witness(t) + " z=" + to_string(t[2]);
    }
    return r;
  };
  LawReport report;
  report.laws.push_back(run(
      "d1",
      [&](const Triple& t) {
        const Element d = m.distance(t[0], t[1]);
        return g.nonnegative(d) && ((d == g.identity()) == (t[0] == t[1]));
      },
      true));
  report.laws.push_back(
      run("d2", [&](const Triple& t) { return m.distance(t[0], t[1]) == m.distance(t[1], t[0]); }, true));
  report.laws.push_back(run(
      "d3",
      [&](const Triple& t) {
        return g.leq(m.distance(t[0], t[1]), g.add(m.distance(t[0], t[2]), m.distance(t[2], t[1])));
      },
      false));
  return report;
}

namespace {

bool coordinate_metric(const MetricSpace& m) {
  return m.kind() == MetricKind::absolute || m.kind() == MetricKind::coordinatewise;
}

std::vector<Element> checked_terms(const MetricSpace& m, const Sequence& s, std::uint64_t n_max) {
  auto terms = s.materialize(n_max);
  for (std::size_t i = 0; i < terms.size(); ++i)
    if (!m.contains(terms[i]))
      throw DomainError("term x_" + std::to_string(i + 1) + " = " + to_string(terms[i]) + " is not in X");
  return terms;
}

}  // namespace

std::vector<ConvergenceCertificate> point_convergence(const MetricSpace& m, const Sequence& s, const Point& x,
                                                      const std::vector<Element>& eps_family, std::uint64_t n_max) {
  if (!m.contains(x)) throw DomainError("limit " + to_string(x) + " is not in X");
  const Element zero = m.group().identity();
  if (const auto* f = s.closed_form(); f != nullptr && coordinate_metric(m) && !m.is_finite()) {
    if (auto dist = (*f - ClosedForm::constant(x)).abs_value(); dist && dist->nonincreasing())
      return verify_convergence(m.target(), *dist, zero, eps_family, n_max);
  }
  const auto terms = checked_terms(m, s, n_max);
  std::vector<Element> d;
  d.reserve(terms.size());
  for (const auto& t : terms) d.push_back(m.distance(t, x));
  return verify_convergence(m.target(), Sequence(std::move(d)), zero, eps_family, n_max);
}

std::vector<CauchyCertificate> cauchy_check(const MetricSpace& m, const Sequence& s,
                                            const std::vector<Element>& eps_family, std::uint64_t n_max) {
  const auto& t = m.target();
  for (const auto& eps : eps_family)
    if (!t.is_scale(eps)) throw DomainError("epsilon " + to_string(eps) + " is not >> identity");
  std::vector<CauchyCertificate> out;

  const auto* f = s.closed_form();
  if (f != nullptr && coordinate_metric(m) && !m.is_finite() && f->coordinatewise_monotone()) {
    for (const auto& eps : eps_family) {
      CauchyCertificate c{eps, false, 0, true, std::nullopt, std::nullopt};
      const auto first = detail::first_true([&](std::uint64_t n) { return t.below(f->tail_bound(n), eps); },
                                            search_horizon(*f));
      if (first) {
        c.certified = true;
        c.threshold = *first - 1;
      }
      out.push_back(std::move(c));
    }
    return out;
  }

  const auto terms = checked_terms(m, s, n_max);
  const std::size_t len = terms.size();
  for (const auto& eps : eps_family) {
    CauchyCertificate c{eps, false, 0, false, len, std::nullopt};
    auto far_partner = [&](std::size_t i) -> std::optional<std::size_t> {
      for (std::size_t j = i + 1; j < len; ++j)
        if (!t.below(m.distance(terms[i], terms[j]), eps)) return j;
      return std::nullopt;
    };
    const auto last = kernels::last_failure(len, [&](std::size_t i) { return !far_partner(i).has_value(); });
    if (!last) {
      c.certified = true;
    } else {
      const std::uint64_t v = *last + 1;
      if (v <= len / 2) {
        c.certified = true;
        c.threshold = v;
      } else {
        c.witness = std::make_pair(v, static_cast<std::uint64_t>(*far_partner(*last) + 1));
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

constexpr const char* undefined_here = "Hausdorff undefined for this order";

void require_points(const MetricSpace& m, const std::vector<Point>& set) {
  if (set.empty()) throw std::invalid_argument("Hausdorff distance needs nonempty sets");
  for (const auto& p : set)
    if (!m.contains(p)) throw DomainError("point " + to_string(p) + " is not in X");
}

}  // namespace

Element point_set_distance(const MetricSpace& m, const Point& x, const std::vector<Point>& b) {
  std::vector<Element> d;
  d.reserve(b.size());
  for (const auto& y : b) d.push_back(m.distance(x, y));
  return least_element(m.group(), d, undefined_here);
}

Element directed_hausdorff(const MetricSpace& m, const std::vector<Point>& a, const std::vector<Point>& b,
                           kernels::Exec exec) {
  require_points(m, a);
  require_points(m, b);
  auto inner = kernels::map(a.size(), [&](std::size_t i) { return point_set_distance(m, a[i], b); }, exec);
  return greatest_element(m.group(), inner, undefined_here);
}

Element hausdorff(const MetricSpace& m, const std::vector<Point>& a, const std::vector<Point>& b,
                  kernels::Exec exec) {
  const Element ab = directed_hausdorff(m, a, b, exec);
  const Element ba = directed_hausdorff(m, b, a, exec);
  return greatest_element(m.group(), {ab, ba}, undefined_here);
}

}  // namespace ordmet
