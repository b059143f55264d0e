#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ordmet/law_report.hpp"
#include "ordmet/order.hpp"
#include "ordmet/sequence.hpp"

namespace ordmet {

using RelationFn = std::function<bool(const Element&, const Element&)>;

enum class TopoKind { strict_order, interior_cone, custom };

/// An analytic topological structure: a strict relation "a << b" on an
/// ordered module, used to define convergence in the positive part.
///
/// Two built-in structures exist. `strict_order` uses the order itself
/// (a << b iff a < b). `interior_cone` uses the interior of the orthant cone:
/// a << b iff every coordinate of b - a is strictly positive, which is decided
/// exactly on rationals.
class TopoStructure {
 public:
  static TopoStructure strict_order(OrderedModule m);
  static TopoStructure interior_cone(OrderedModule m);

  TopoStructure(std::string name, TopoKind kind, OrderedModule m, RelationFn below, Element witness);

  const std::string& name() const { return name_; }
  TopoKind kind() const { return kind_; }
  const OrderedModule& module() const { return module_; }
  const OrderedGroup& group() const { return module_.group(); }
  std::size_t dim() const { return module_.dim(); }

  /// a << b.
  bool below(const Element& a, const Element& b) const;
  /// epsilon >> identity.
  bool is_scale(const Element& eps) const { return below(group().identity(), eps); }
  /// Designated element eps0 >> identity.
  const Element& positivity_witness() const { return witness_; }
  /// An eta >> identity with eta << eps; here eps / 2.
  Element split(const Element& eps) const;

  TopoStructure with_module(OrderedModule m) const;
  TopoStructure with_relation(std::string name, RelationFn below) const;

 private:
  std::string name_;
  TopoKind kind_;
  OrderedModule module_;
  RelationFn below_;
  Element witness_;
};

/// Checks t1, t2, t3, t4, t5, t6 on seeded samples. t4 is checked in its
/// shrinking-family form: every sampled a >= identity other than the
/// identity must fail a << eps0 / 2^k for some k.
LawReport check_topo_laws(const TopoStructure& t, const SamplePlan& plan);

/// Evidence that a_n -> a for one epsilon: theta <= a_n - a << eps for all
/// n > threshold. For closed forms the threshold is exact and holds for every
/// n; for explicit prefixes it is verified up to `verified_up_to` and is only
/// accepted when the verified tail covers at least half of the prefix.
struct ConvergenceCertificate {
  Element epsilon;
  bool certified = false;
  std::uint64_t threshold = 0;
  std::optional<std::uint64_t> verified_up_to;  // nullopt: exact for all n
  std::optional<std::uint64_t> violation;       // violating index when not certified
};

/// Exact closed-form threshold search horizon. Beyond it a closed form is
/// reported as not certified.
std::uint64_t search_horizon(const ClosedForm& f);

/// For each eps in the family, the smallest N such that
/// theta <= s_n - a << eps for all n > N. Throws DomainError when a is not in
/// G_+ or some eps is not >> identity.
std::vector<ConvergenceCertificate> verify_convergence(const TopoStructure& t, const Sequence& s, const Element& a,
                                                       const std::vector<Element>& eps_family,
                                                       std::uint64_t n_max);

/// Same sandwich written two-sidedly: a <= s_n << a + eps for all n > N.
std::vector<ConvergenceCertificate> verify_convergence_two_sided(const TopoStructure& t, const Sequence& s,
                                                                 const Element& a,
                                                                 const std::vector<Element>& eps_family,
                                                                 std::uint64_t n_max);

bool all_certified(const std::vector<ConvergenceCertificate>& certs);

struct LimitUniquenessResult {
  bool passed = false;  // candidate confirmed as a limit (and hence equal to the first)
  std::string detail;
  std::optional<std::uint64_t> index;  // where s_n >= candidate stops holding
};

/// Given s -> first (certified on the family), decides whether `candidate`
/// is also a limit. A certified second limit different from the first is a
/// law violation and is reported as such.
LimitUniquenessResult check_limit_uniqueness(const TopoStructure& t, const Sequence& s, const Element& first,
                                             const Element& candidate, const std::vector<Element>& eps_family,
                                             std::uint64_t n_max);

struct SumCertificate {
  Element epsilon;
  Element eta;                     // split point: s1 << eta, s2 << eps - eta
  std::uint64_t first_threshold;   // N1 for s1 at eta
  std::uint64_t second_threshold;  // N2 for s2 at eps - eta
  std::uint64_t split_threshold;   // max(N1, N2)
  std::optional<std::uint64_t> direct_threshold;  // computed on the sum itself
  bool certified = false;
};

/// s1 -> identity and s2 -> identity give s1 + s2 -> identity with
/// N(eps) = max(N1(eta), N2(eps - eta)).
std::vector<SumCertificate> sum_convergence(const TopoStructure& t, const Sequence& s1, const Sequence& s2,
                                            const std::vector<Element>& eps_family, std::uint64_t n_max);

struct SandwichResult {
  std::optional<std::uint64_t> precondition_violation;  // first n with b_n >= a_n >= a >= identity failing
  std::string detail;
  struct Entry {
    Element epsilon;
    std::uint64_t bound_threshold;                  // N for b_n -> a, valid for b_n - a_n
    std::optional<std::uint64_t> direct_threshold;  // computed on b_n - a_n
    bool certified = false;
  };
  std::vector<Entry> entries;
  bool certified() const;
};

/// b_n >= a_n >= a >= identity and b_n -> a give b_n - a_n -> identity.
SandwichResult sandwich_convergence(const TopoStructure& t, const Sequence& lower, const Sequence& upper,
                                    const Element& a, const std::vector<Element>& eps_family, std::uint64_t n_max);

/// Greatest lower bound of `set` among `candidates` (and the members of
/// `set`). Returns nullopt when no candidate is a greatest lower bound.
std::optional<Element> infimum(const OrderedGroup& g, const std::vector<Element>& set,
                               const std::vector<Element>& candidates);

/// Coordinatewise minimum; the infimum of a finite set in the orthant order.
Element coordinate_meet(const std::vector<Element>& set);

struct RegularityEntry {
  enum class Status { converged, unresolved, not_decreasing };
  Status status = Status::unresolved;
  std::optional<Element> limit;
  std::optional<std::uint64_t> violation;  // first n with s_{n+1} <= s_n failing
  std::vector<ConvergenceCertificate> certificates;
};

/// For each (claimed decreasing) sequence in G_+: checks monotonicity up to
/// n_max, then certifies convergence to the closed-form limit or, for
/// explicit prefixes, to the infimum of the materialized terms.
std::vector<RegularityEntry> check_regularity(const TopoStructure& t, const std::vector<Sequence>& seqs,
                                              const std::vector<Element>& eps_family, std::uint64_t n_max);

}  // namespace ordmet
