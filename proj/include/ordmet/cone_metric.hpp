#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ordmet/kernels.hpp"
#include "ordmet/law_report.hpp"
#include "ordmet/topo.hpp"

namespace ordmet {

enum class MetricKind {
  absolute,        // X subset of Q, d(x, y) = |x - y|
  coordinatewise,  // X subset of Q^k, d(x, y) = (|x_i - y_i|)_i
  table,           // finite X, explicit matrix of group elements
  custom,
};

std::string_view to_string(MetricKind k);

using MetricFn = std::function<Element(const Point&, const Point&)>;
using MetricTable = std::vector<std::vector<Element>>;

/// A set X with a distance valued in a partially ordered group. X is either
/// a finite list of points (kept sorted and duplicate free) or all of Q^k.
class MetricSpace {
 public:
  /// Q^k with the absolute (k = 1) or coordinatewise metric.
  static MetricSpace continuum(std::size_t point_dim, MetricKind kind, TopoStructure target);
  static MetricSpace finite(std::vector<Point> points, MetricKind kind, TopoStructure target);
  /// Points lo, lo + step, ..., hi on the line with the absolute metric.
  static MetricSpace grid(const Rational& lo, const Rational& hi, const Rational& step, TopoStructure target);
  /// Rows and columns follow the order of `points` as given; the points are
  /// then sorted together with the table.
  static MetricSpace with_table(std::vector<Point> points, MetricTable table, TopoStructure target);

  MetricKind kind() const { return kind_; }
  const TopoStructure& target() const { return target_; }
  const OrderedGroup& group() const { return target_.group(); }
  std::size_t point_dim() const { return point_dim_; }

  bool is_finite() const { return points_.has_value(); }
  const std::vector<Point>& points() const;
  std::optional<std::size_t> index_of(const Point& p) const;
  bool contains(const Point& p) const;
  /// Only set for table metrics; indexed like points().
  const MetricTable* table() const { return table_ ? &*table_ : nullptr; }

  Element distance(const Point& x, const Point& y) const;

  /// Finite spaces are complete because Cauchy sequences are eventually
  /// constant; coordinate spaces carry completeness as declared metadata.
  bool complete() const { return true; }

  /// For finite spaces, an eps >> identity that no positive distance is
  /// << of: every coordinate equals the least positive coordinate of any
  /// distance. A sequence that is Cauchy at this scale is eventually
  /// constant.
  std::optional<Element> constancy_scale() const;

  MetricSpace with_metric(MetricFn d) const;
  MetricSpace with_target(TopoStructure target) const;
  /// Replaces one table entry (not its mirror). Table metrics only.
  MetricSpace with_entry(std::size_t i, std::size_t j, Element value) const;

 private:
  MetricSpace(std::size_t point_dim, MetricKind kind, TopoStructure target, std::optional<std::vector<Point>> points,
              MetricFn metric, std::optional<MetricTable> table);

  std::size_t point_dim_;
  MetricKind kind_;
  TopoStructure target_;
  std::optional<std::vector<Point>> points_;
  MetricFn metric_;
  std::optional<MetricTable> table_;
};

/// d1 (nonnegativity and d(x, y) = identity iff x = y), d2 (symmetry), d3
/// (triangle). Exhaustive over all triples of a finite space, seeded samples
/// otherwise.
LawReport check_metric_laws(const MetricSpace& m, const SamplePlan& plan);

/// x_n -> x iff d(x_n, x) -> identity. Closed forms over coordinate metrics
/// get exact thresholds when |x_n - x| is again a closed form.
std::vector<ConvergenceCertificate> point_convergence(const MetricSpace& m, const Sequence& s, const Point& x,
                                                      const std::vector<Element>& eps_family, std::uint64_t n_max);

struct CauchyCertificate {
  Element epsilon;
  bool certified = false;
  std::uint64_t threshold = 0;  // d(x_n, x_m) << eps for all n, m > threshold
  bool analytic = false;        // from the closed-form tail bound rather than a scan
  std::optional<std::uint64_t> verified_up_to;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> witness;  // violating pair
};

/// Closed forms over coordinate metrics whose coordinates are monotone use
/// the tail bound: for n, m > N, |x_n - x_m| <= tail_bound(N + 1). The
/// resulting N is sound but may exceed the smallest one. Everything else is
/// scanned pairwise over the first n_max terms with the half-tail rule.
std::vector<CauchyCertificate> cauchy_check(const MetricSpace& m, const Sequence& s,
                                            const std::vector<Element>& eps_family, std::uint64_t n_max);

/// d(x, B): least element of {d(x, b) : b in B}.
Element point_set_distance(const MetricSpace& m, const Point& x, const std::vector<Point>& b);

/// Greatest element of {d(a, B) : a in A}.
Element directed_hausdorff(const MetricSpace& m, const std::vector<Point>& a, const std::vector<Point>& b,
                           kernels::Exec exec = kernels::default_exec());

/// max of the two directed distances. Defined on finite nonempty sets
/// whenever every inner extremum exists; otherwise throws OrderError with
/// "Hausdorff undefined for this order" naming an incomparable pair.
Element hausdorff(const MetricSpace& m, const std::vector<Point>& a, const std::vector<Point>& b,
                  kernels::Exec exec = kernels::default_exec());

}  // namespace ordmet
