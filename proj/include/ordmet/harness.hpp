#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ordmet/solver.hpp"

namespace ordmet {

/// Everything a suite run needs about one concrete setting. The layers
/// depend on each other (module -> structure -> space -> map), and the
/// with_* helpers rebuild everything downstream of the replaced layer.
struct Instance {
  std::string name;
  std::string family;  // "real" or "coord-cone"
  TopoStructure topo;
  MetricSpace space;
  std::optional<SetValuedMap> map;
  std::optional<ContractionWitness> witness;
  std::vector<Sequence> sequences;  // closed forms used by the convergence checks
  std::vector<Element> eps_family;
  std::optional<Point> start;
  std::optional<Element> solver_eps;
  std::vector<Element> edge;  // extra edge elements for the sampled checks

  const OrderedModule& module() const { return topo.module(); }
  const OrderedGroup& group() const { return topo.group(); }

  Instance with_module(OrderedModule m) const;
  Instance with_topo(TopoStructure t) const;
  Instance with_space(MetricSpace s) const;
};

std::vector<std::string> builtin_instance_names();
/// Throws std::invalid_argument for unknown names.
Instance builtin_instance(const std::string& name);

enum class RowOutcome { pass, fail, skip };
std::string_view to_string(RowOutcome o);

struct ReportRow {
  std::string check;
  std::string instance;
  RowOutcome outcome;
  std::string detail;  // witness, certificate summary or skip reason
  double runtime_ms = 0;
};

struct SuiteSpec {
  std::vector<Instance> instances;
  std::vector<std::string> checks;  // run in this order; empty means no rows
  std::uint64_t seed = 20100132;
  std::size_t samples = 1000;
  std::uint64_t n_max = 256;
};

struct TraceabilityReport {
  std::vector<ReportRow> rows;

  std::size_t failures() const;
  bool ok() const { return failures() == 0; }
  const ReportRow* find(std::string_view check, std::string_view instance) const;
};

enum class ReportFormat { text, machine_rows };

/// Deterministic rendering; runtimes appear only when `timing` is set.
std::string render(const TraceabilityReport& r, ReportFormat format, bool timing = false);

struct CheckContext {
  SamplePlan plan;
  std::uint64_t n_max;
};

struct CheckResult {
  RowOutcome outcome;
  std::string detail;
};

struct CheckSpec {
  std::string id;
  std::string summary;
  std::function<CheckResult(const Instance&, const CheckContext&)> run;
};

/// Every registered check, in report order.
const std::vector<CheckSpec>& check_registry();
std::vector<std::string> default_checks();

/// Runs every (instance, check) cell. Exceptions inside a check become a
/// failing row with the message as witness. Unknown check ids throw
/// std::invalid_argument before anything runs.
TraceabilityReport run_suite(const SuiteSpec& spec);

/// Mutations: break-d2, break-g1, break-t3, break-phi-bound,
/// add-second-endpoint, identity.
std::vector<std::string> fault_names();
/// The check each mutation must flip.
std::string fault_target(const std::string& mutation);
Instance fault_inject(const Instance& inst, const std::string& mutation);

}  // namespace ordmet
