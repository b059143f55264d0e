#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ordmet/contraction.hpp"

namespace ordmet {

/// How y_{n+1} is picked from Ty_n minus {y_n}.
enum class SelectionRule {
  min_distance,   // least d(y_n, .) when it exists, else lexicographic
  lexicographic,  // first candidate in canonical point order
};
std::string_view to_string(SelectionRule r);

struct SolverConfig {
  Element eps;                  // target scale, must be >> identity
  std::uint64_t max_iter = 1000;
  SelectionRule rule = SelectionRule::min_distance;
  std::optional<Point> start;   // defaults to the last point of a finite space
  SamplePlan plan;              // used for the hypothesis checks
};

enum class Outcome { endpoint_found, approximate_endpoint_sequence, budget_exhausted, hypothesis_violation };
std::string_view to_string(Outcome o);

/// theorem: the hypotheses were verified, so the endpoint is unique.
/// best_effort: some hypothesis is not verified; the result is only "an
/// endpoint was found".
enum class SolverMode { theorem, best_effort };
std::string_view to_string(SolverMode m);

struct TraceRow {
  std::uint64_t n;
  Point current;
  Point next;
  Element step;                  // d(y_n, y_{n+1})
  std::optional<Element> bound;  // a-priori bound on d(y_n, y*) (single-valued runs)
};

struct SolverReport {
  Outcome outcome = Outcome::budget_exhausted;
  SolverMode mode = SolverMode::theorem;
  std::vector<TraceRow> trace;
  std::optional<Point> point;  // endpoint, or the last point of an approximate certificate
  // Approximate certificate: x_n = y_{n+1}, a_n = phi(y_n, y_{n+1}).
  std::vector<Point> witness_points;
  std::vector<Element> witness_bounds;
  std::vector<std::string> notes;
  std::optional<std::uint64_t> violation_step;
  std::string hypothesis;  // the failed hypothesis, when outcome is hypothesis_violation
};

/// Builds y_{n+1} in Ty_n with y_{n+1} != y_n until Ty_n = {y_n}. On coordinate
/// spaces it also stops once every x' in Ty_n has d(y_n, x') << eps. A step
/// that breaks d(y_n, y_{n+1}) <= phi(y_{n-1}, y_n) aborts in theorem mode
/// and is noted in best-effort mode.
SolverReport iterate_endpoint(const SetValuedMap& t, const ContractionWitness& w, const SolverConfig& cfg);

/// Picard iteration of a single-valued map (every image a singleton) with
/// d(fx, fy) <= alpha d(x, y). Stops at an exact fixed point or once
/// d(x_n, x_{n+1}) << (1 - alpha) eps, which gives d(x_n, x*) << eps.
SolverReport banach_iterate(const SetValuedMap& f, const Rational& alpha, const SolverConfig& cfg);

/// Both sides of "a weak contraction with the C-condition has a unique
/// endpoint iff it has the approximate endpoint property", computed
/// independently on a finite space.
struct EndpointIffReport {
  bool skipped = false;
  std::string reason;
  std::vector<Point> endpoints;
  std::optional<Element> inf_sup;
  bool endpoint_side = false;  // exactly one endpoint
  bool property_side = false;  // inf-sup value is the identity
  bool agree = false;
};
EndpointIffReport endpoint_iff_check(const SetValuedMap& t, const ContractionWitness& w, const SamplePlan& plan);

/// A single-valued weak contraction has a unique fixed point: runs the
/// solver from every point and compares with the brute-force fixed points.
struct FixedPointReport {
  bool skipped = false;
  std::string reason;
  std::vector<Point> fixed_points;
  std::vector<std::optional<Point>> solver_points;  // one per start point
  bool agree = false;
};
FixedPointReport single_valued_fixed_point_check(const SetValuedMap& f, const ContractionWitness& w,
                                                 const SolverConfig& cfg);

}  // namespace ordmet
