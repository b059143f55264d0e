#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ordmet/cone_metric.hpp"

namespace ordmet {

/// x -> (scale_i * x_i + offset_i)_i, optionally rounded toward zero onto
/// the lattice step * Z in every coordinate.
struct AffineBranch {
  std::vector<Rational> scale;
  Element offset;
  std::optional<Rational> grid_step;

  Point apply(const Point& x) const;
  bool operator==(const AffineBranch&) const = default;
};

using ImageTable = std::map<Point, std::vector<Point>>;
using ImageFn = std::function<std::vector<Point>(const Point&)>;

/// T : X -> nonempty finite subsets of X. Finite spaces use a table; coordinate
/// spaces use a finite list of affine branches (or an arbitrary rule).
class SetValuedMap {
 public:
  static SetValuedMap from_table(MetricSpace space, ImageTable images);
  static SetValuedMap from_branches(MetricSpace space, std::vector<AffineBranch> branches);
  static SetValuedMap from_rule(MetricSpace space, ImageFn rule, std::string description);

  const MetricSpace& space() const { return space_; }
  bool is_table() const { return table_.has_value(); }
  const ImageTable* table() const { return table_ ? &*table_ : nullptr; }
  const std::vector<AffineBranch>& branches() const { return branches_; }
  const std::string& description() const { return description_; }

  /// Sorted, duplicate free. Throws DomainError when x is not in X or the
  /// image leaves X, std::invalid_argument when the image is empty.
  std::vector<Point> image(const Point& x) const;

  /// Table maps only.
  SetValuedMap with_image(const Point& x, std::vector<Point> image) const;
  SetValuedMap with_space(MetricSpace space) const;

 private:
  SetValuedMap(MetricSpace space, std::optional<ImageTable> table, std::vector<AffineBranch> branches, ImageFn rule,
               std::string description);

  MetricSpace space_;
  std::optional<ImageTable> table_;
  std::vector<AffineBranch> branches_;
  ImageFn rule_;
  std::string description_;
};

enum class WitnessClass { phi_table, alpha_function, alpha_constant, psi };
std::string_view to_string(WitnessClass c);

/// psi(t) for real-valued distances. All three are upper semicontinuous,
/// satisfy psi(t) < t for t > 0, and keep t - psi(t) away from zero near
/// every r > 0.
enum class PsiKind {
  linear,            // c t with 0 < c < 1
  rational,          // t / (1 + t)
  capped_quadratic,  // t - t^2 / 2 on [0, 1], 1/2 beyond
};
std::string_view to_string(PsiKind k);
Rational apply_psi(PsiKind kind, const Rational& param, const Rational& t);

using PhiTable = std::map<std::pair<Point, Point>, Element>;
using AlphaFn = std::function<Rational(const Point&, const Point&)>;
using AlphaTable = std::map<std::pair<Point, Point>, Rational>;

/// The comparison function phi : X x X -> G_+ of a weak contraction, given
/// as a table, as alpha(x, y) d(x, y), or as psi(d(x, y)).
class ContractionWitness {
 public:
  static ContractionWitness alpha_constant(Rational alpha);
  static ContractionWitness alpha_function(AlphaFn alpha, Rational bound, std::string description);
  /// alpha(x, y) from a table, `fallback` for pairs not listed.
  static ContractionWitness alpha_table(AlphaTable entries, Rational fallback, Rational bound);
  static ContractionWitness phi_table(PhiTable table);
  static ContractionWitness psi(PsiKind kind, Rational param = 0);

  WitnessClass witness_class() const { return class_; }
  const Rational& alpha() const { return alpha_; }  // constant, or the bound of an alpha function
  const PhiTable* table() const { return table_ ? &*table_ : nullptr; }
  /// Set only for alpha functions built by alpha_table.
  const AlphaTable* alpha_entries() const { return alpha_entries_ ? &*alpha_entries_ : nullptr; }
  const Rational& alpha_fallback() const { return alpha_fallback_; }
  PsiKind psi_kind() const { return psi_kind_; }
  const Rational& psi_param() const { return psi_param_; }
  const std::string& description() const { return description_; }

  /// alpha(x, y) for alpha classes.
  Rational alpha_at(const Point& x, const Point& y) const;
  /// phi(x, y). Throws DomainError when a table has no entry for (x, y).
  Element phi(const MetricSpace& m, const Point& x, const Point& y) const;

  ContractionWitness with_entry(const Point& x, const Point& y, Element value) const;

 private:
  ContractionWitness() = default;

  WitnessClass class_ = WitnessClass::alpha_constant;
  Rational alpha_;
  AlphaFn alpha_fn_;
  std::optional<PhiTable> table_;
  std::optional<AlphaTable> alpha_entries_;
  Rational alpha_fallback_;
  PsiKind psi_kind_ = PsiKind::linear;
  Rational psi_param_;
  std::string description_;
};

enum class CStatus { holds_by_theorem, unknown };
std::string_view to_string(CStatus s);

struct CConditionStatus {
  CStatus status;
  std::string justification;
};

/// Class-level status of the C-condition (d_n - phi_n -> identity implies
/// d_n -> identity). Never decided from samples.
CConditionStatus c_condition_status(const ContractionWitness& w, const MetricSpace& m);

/// Outcome of a contraction predicate over a finite set of pairs.
struct ContractionCheck {
  std::string check;
  bool passed = true;
  bool exhaustive = false;  // every ordered pair of a finite space
  std::size_t checked = 0;
  std::vector<Point> counterexample;  // (x, y) or (x, y, x') or (x, y, x', y')
  std::string witness;
};

/// Ordered pairs (x, y), x != y: all of them on finite spaces, edges plus
/// seeded samples on coordinate spaces.
std::vector<std::pair<Point, Point>> contraction_pairs(const MetricSpace& m, const SamplePlan& plan);

/// phi(x, y) in G_+ and phi(x, y) < d(x, y) whenever d(x, y) > identity.
/// Alpha classes additionally need alpha(x, y) in [0, 1) and below the bound.
ContractionCheck check_phi_bound(const SetValuedMap& t, const ContractionWitness& w, const SamplePlan& plan);

/// For x != y and every x' in Tx some y' in Ty has d(x', y') <= phi(x, y).
ContractionCheck is_weak_contraction(const SetValuedMap& t, const ContractionWitness& w, const SamplePlan& plan);

/// For x != y, every x' in Tx and every y' in Ty: d(x', y') <= phi(x, y).
ContractionCheck is_global_weak_contraction(const SetValuedMap& t, const ContractionWitness& w,
                                            const SamplePlan& plan);

struct InfSupValue {
  Element value;         // min over x of max over y in Tx of d(x, y)
  Point achieving_point;  // first minimizer in canonical order
};

/// Finite spaces only. Throws OrderError when an inner extremum does not
/// exist.
InfSupValue approximate_endpoint_property_finite(const SetValuedMap& t);

struct ApproximateEndpointReport {
  bool bound_certified = false;  // a_n -> identity on the eps family
  bool holds = false;            // d(x_n, x') <= a_n for every checked n and x' in Tx_n
  std::uint64_t checked_up_to = 0;
  std::optional<std::uint64_t> violation_index;
  std::optional<Point> violation_image;
  std::string detail;
};

/// Checks d(x_n, x') <= a_n for all n <= n_max and x' in Tx_n, after
/// certifying a_n -> identity.
ApproximateEndpointReport approximate_endpoint_sequence(const SetValuedMap& t, const Sequence& points,
                                                        const Sequence& bounds, const std::vector<Element>& eps_family,
                                                        std::uint64_t n_max);

/// Exhaustive scan for Tx = {x}. Finite spaces only.
std::vector<Point> endpoints_bruteforce(const SetValuedMap& t);

}  // namespace ordmet
