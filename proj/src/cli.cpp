#include "ordmet/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <sstream>

#include "ordmet/instance_file.hpp"

namespace ordmet {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

InstanceFile resolve(const std::string& arg) {
  if (std::filesystem::exists(arg)) return load_instance(arg);
  const auto names = builtin_instance_names();
  if (std::find(names.begin(), names.end(), arg) != names.end()) return InstanceFile{builtin_instance(arg), {}, {}};
  throw UsageError("'" + arg + "' is neither a file nor a built-in instance");
}

std::vector<std::string> split_checks(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream in(list);
  for (std::string id; std::getline(in, id, ',');)
    if (!id.empty()) out.push_back(id);
  return out;
}

ReportFormat parse_format(const std::string& s) {
  return s == "machine-rows" ? ReportFormat::machine_rows : ReportFormat::text;
}

struct VerifyOpts {
  std::vector<std::string> instances;
  std::uint64_t seed = 20100132;
  std::size_t samples = 1000;
  std::uint64_t n_max = 256;
  std::string checks;
  std::string format = "text";
  std::string fault;
  bool timing = false;
};

int cmd_verify(const VerifyOpts& o, std::ostream& out) {
  SuiteSpec spec;
  spec.seed = o.seed;
  spec.samples = o.samples;
  spec.n_max = o.n_max;
  spec.checks = o.checks.empty() ? default_checks() : split_checks(o.checks);
  const auto names = o.instances.empty() ? builtin_instance_names() : o.instances;
  for (const auto& n : names) {
    Instance inst = resolve(n).instance;
    if (!o.fault.empty()) inst = fault_inject(inst, o.fault);
    spec.instances.push_back(std::move(inst));
  }
  const auto report = run_suite(spec);
  out << render(report, parse_format(o.format), o.timing);
  return report.ok() ? exit_ok : exit_failure;
}

struct SolveOpts {
  std::string instance;
  std::string start;
  std::string eps;
  std::uint64_t max_iter = 0;
  std::string rule;
  std::string method = "auto";
  std::string format = "text";
  std::uint64_t seed = 20100132;
};

bool single_valued(const SetValuedMap& t) {
  if (const auto* tab = t.table()) {
    for (const auto& [x, img] : *tab)
      if (img.size() != 1) return false;
    return true;
  }
  return t.branches().size() == 1;
}

void print_report(const SolverReport& r, const std::string& format, std::ostream& out) {
  auto bound_str = [](const TraceRow& row) { return row.bound ? to_string(*row.bound) : std::string("-"); };
  if (format == "machine-rows") {
    out << "outcome\t" << to_string(r.outcome) << "\nmode\t" << to_string(r.mode) << '\n';
    if (r.point) out << "point\t" << to_string(*r.point) << '\n';
    if (!r.hypothesis.empty()) out << "hypothesis\t" << r.hypothesis << '\n';
    for (const auto& row : r.trace)
      out << "trace\t" << row.n << '\t' << to_string(row.current) << '\t' << to_string(row.next) << '\t'
          << to_string(row.step) << '\t' << bound_str(row) << '\n';
    for (const auto& n : r.notes) out << "note\t" << n << '\n';
    return;
  }
  out << "outcome: " << to_string(r.outcome) << " (" << to_string(r.mode) << ")\n";
  if (r.point) out << "point: " << to_string(*r.point) << '\n';
  if (!r.hypothesis.empty()) out << "violated hypothesis: " << r.hypothesis << '\n';
  if (!r.witness_points.empty()) {
    out << "certificate: x_n = y_n+1, a_n = phi(y_n, y_n+1):";
    for (std::size_t i = 0; i < r.witness_bounds.size(); ++i) out << (i ? ", " : " ") << to_string(r.witness_bounds[i]);
    out << '\n';
  }
  if (!r.trace.empty()) {
    out << "n\tcurrent\tnext\tstep\tbound\n";
    for (const auto& row : r.trace)
      out << row.n << '\t' << to_string(row.current) << '\t' << to_string(row.next) << '\t' << to_string(row.step)
          << '\t' << bound_str(row) << '\n';
  }
  for (const auto& n : r.notes) out << "note: " << n << '\n';
}

int cmd_solve(const SolveOpts& o, std::ostream& out) {
  const InstanceFile f = resolve(o.instance);
  const Instance& inst = f.instance;
  if (!inst.map || !inst.witness) throw UsageError("solve needs an instance with [map] and [witness]");
  SolverConfig cfg;
  cfg.plan.seed = o.seed;
  cfg.start = o.start.empty() ? inst.start : std::optional<Point>(parse_element(o.start));
  cfg.eps = !o.eps.empty()        ? parse_element(o.eps)
            : inst.solver_eps     ? *inst.solver_eps
                                  : Element::filled(inst.group().dim(), Rational(1, 1024));
  cfg.max_iter = o.max_iter ? o.max_iter : f.max_iter.value_or(1000);
  if (!o.rule.empty()) {
    const auto r = parse_rule(o.rule);
    if (!r) throw UsageError("unknown rule '" + o.rule + "' (min-dist, lex)");
    cfg.rule = *r;
  } else if (f.rule) {
    cfg.rule = *f.rule;
  }
  bool banach = o.method == "banach";
  if (o.method == "auto")
    banach = inst.witness->witness_class() == WitnessClass::alpha_constant && !inst.space.is_finite() &&
             single_valued(*inst.map);
  else if (o.method != "endpoint" && o.method != "banach")
    throw UsageError("unknown method '" + o.method + "' (auto, endpoint, banach)");
  if (banach && inst.witness->witness_class() != WitnessClass::alpha_constant)
    throw UsageError("banach needs an alpha-const witness");

  const SolverReport r = banach ? banach_iterate(*inst.map, inst.witness->alpha(), cfg)
                                : iterate_endpoint(*inst.map, *inst.witness, cfg);
  print_report(r, o.format, out);
  switch (r.outcome) {
    case Outcome::endpoint_found:
    case Outcome::approximate_endpoint_sequence: return exit_ok;
    case Outcome::budget_exhausted: return exit_failure;
    case Outcome::hypothesis_violation: return exit_hypothesis;
  }
  return exit_failure;
}

int cmd_hausdorff(const std::string& instance, const std::string& a, const std::string& b, bool directed,
                  std::ostream& out) {
  const Instance inst = resolve(instance).instance;
  const auto A = parse_element_list(a);
  const auto B = parse_element_list(b);
  if (A.empty() || B.empty()) throw UsageError("both sets must be nonempty");
  for (const auto* s : {&A, &B})
    for (const auto& p : *s)
      if (!inst.space.contains(p)) throw DomainError("point " + to_string(p) + " is not in X");
  out << to_string(directed ? directed_hausdorff(inst.space, A, B) : hausdorff(inst.space, A, B)) << '\n';
  return exit_ok;
}

int cmd_export(const std::string& instance, const std::string& fault, std::ostream& out) {
  InstanceFile f = resolve(instance);
  if (!fault.empty()) f.instance = fault_inject(f.instance, fault);
  std::string text;
  try {
    text = export_instance(f);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("cannot export: ") + e.what());
  }
  out << text;
  return exit_ok;
}

int cmd_list(std::ostream& out) {
  out << "instances:\n";
  for (const auto& n : builtin_instance_names()) out << "  " << n << '\n';
  out << "checks:\n";
  for (const auto& c : check_registry()) out << "  " << c.id << "  " << c.summary << '\n';
  out << "faults:\n";
  for (const auto& f : fault_names()) {
    const auto t = fault_target(f);
    out << "  " << f << (t.empty() ? "" : "  -> " + t) << '\n';
  }
  return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ordered metric spaces, weak contractions and endpoints", "ordmet"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "built-in instances, checks and faults");

  VerifyOpts vo;
  auto* verify = app.add_subcommand("verify", "run the law and theorem checks");
  verify->add_option("instances", vo.instances, "instance files or built-in names (default: all built-ins)");
  verify->add_option("--seed", vo.seed, "sampling seed");
  verify->add_option("--samples", vo.samples, "random samples per law")->check(CLI::PositiveNumber);
  verify->add_option("--n-max", vo.n_max, "prefix length for explicit sequences")->check(CLI::PositiveNumber);
  verify->add_option("--checks", vo.checks, "comma separated check ids (default: all)");
  verify->add_option("--format", vo.format)->check(CLI::IsMember({"text", "machine-rows"}));
  verify->add_option("--fault", vo.fault, "apply a fault injection first")->check(CLI::IsMember(fault_names()));
  verify->add_flag("--timing", vo.timing, "include per-row runtimes");

  SolveOpts so;
  auto* solve = app.add_subcommand("solve", "iterate towards an endpoint");
  solve->add_option("instance", so.instance)->required();
  solve->add_option("--start", so.start, "start point");
  solve->add_option("--eps", so.eps, "target scale, must be >> identity");
  solve->add_option("--max-iter", so.max_iter)->check(CLI::PositiveNumber);
  solve->add_option("--rule", so.rule)->check(CLI::IsMember({"min-dist", "lex"}));
  solve->add_option("--method", so.method)->check(CLI::IsMember({"auto", "endpoint", "banach"}));
  solve->add_option("--format", so.format)->check(CLI::IsMember({"text", "machine-rows"}));
  solve->add_option("--seed", so.seed, "sampling seed for the hypothesis checks");

  std::string h_instance, h_a, h_b;
  bool h_directed = false;
  auto* haus = app.add_subcommand("hausdorff", "Hausdorff distance of two finite point sets");
  haus->add_option("instance", h_instance)->required();
  haus->add_option("--a", h_a, "first set, space separated points")->required();
  haus->add_option("--b", h_b, "second set")->required();
  haus->add_flag("--directed", h_directed, "only the directed distance from A to B");

  std::string e_instance, e_fault;
  auto* exp = app.add_subcommand("export", "print an instance file");
  exp->add_option("instance", e_instance)->required();
  exp->add_option("--fault", e_fault)->check(CLI::IsMember(fault_names()));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? exit_ok : exit_usage;
  }

  try {
    if (list->parsed()) return cmd_list(out);
    if (verify->parsed()) return cmd_verify(vo, out);
    if (solve->parsed()) return cmd_solve(so, out);
    if (haus->parsed()) return cmd_hausdorff(h_instance, h_a, h_b, h_directed, out);
    if (exp->parsed()) return cmd_export(e_instance, e_fault, out);
  } catch (const InstanceParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return exit_usage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const OrderError& e) {
    err << "order error: " << e.what() << '\n';
    return exit_hypothesis;
  } catch (const DomainError& e) {
    err << "hypothesis violation: " << e.what() << '\n';
    return exit_hypothesis;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace ordmet
