#include "ordmet/instance_file.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ordmet {

InstanceParseError::InstanceParseError(std::size_t line, const std::string& message)
    : std::runtime_error(line == 0 ? message : "line " + std::to_string(line) + ": " + message), line_(line) {}

std::optional<SelectionRule> parse_rule(std::string_view s) {
  if (s == "min-dist") return SelectionRule::min_distance;
  if (s == "lex") return SelectionRule::lexicographic;
  return std::nullopt;
}

namespace {

struct Entry {
  std::size_t line;
  std::string key;
  std::string value;
};

using Sections = std::map<std::string, std::vector<Entry>>;

const std::set<std::string> known_sections{"",    "group",   "structure", "space",
                                           "map", "witness", "sequences", "solver"};

Sections split_sections(std::string_view text) {
  Sections out;
  std::string section;
  std::size_t lineno = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw InstanceParseError(lineno, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!known_sections.count(section)) throw InstanceParseError(lineno, "unknown section [" + section + "]");
      out[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw InstanceParseError(lineno, "expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw InstanceParseError(lineno, "missing key");
    out[section].push_back({lineno, std::move(key), std::move(value)});
  }
  return out;
}

// Runs `fn`, rethrowing library errors with the entry's line number.
template <class F>
auto at_line(const Entry& e, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const InstanceParseError&) {
    throw;
  } catch (const std::exception& ex) {
    throw InstanceParseError(e.line, e.key + ": " + ex.what());
  }
}

const Entry* single(const Sections& s, const std::string& section, const std::string& key) {
  auto it = s.find(section);
  if (it == s.end()) return nullptr;
  const Entry* found = nullptr;
  for (const auto& e : it->second)
    if (e.key == key) {
      if (found) throw InstanceParseError(e.line, "duplicate key '" + key + "'");
      found = &e;
    }
  return found;
}

std::vector<const Entry*> all(const Sections& s, const std::string& section, const std::string& key) {
  std::vector<const Entry*> out;
  if (auto it = s.find(section); it != s.end())
    for (const auto& e : it->second)
      if (e.key == key) out.push_back(&e);
  return out;
}

// "name(args)" keys such as T(x) or phi(x, y).
std::optional<std::vector<std::string_view>> call_args(std::string_view key, std::string_view name) {
  if (key.size() < name.size() + 2 || key.substr(0, name.size()) != name) return std::nullopt;
  auto rest = trim(key.substr(name.size()));
  if (rest.front() != '(' || rest.back() != ')') return std::nullopt;
  return split_top_level(rest.substr(1, rest.size() - 2), ',');
}

void reject_unknown(const Sections& s, const std::string& section, const std::set<std::string>& keys,
                    const std::vector<std::string>& call_names = {}) {
  auto it = s.find(section);
  if (it == s.end()) return;
  for (const auto& e : it->second) {
    if (keys.count(e.key)) continue;
    bool call = false;
    for (const auto& n : call_names) call = call || call_args(e.key, n).has_value();
    if (!call) throw InstanceParseError(e.line, "unknown key '" + e.key + "' in [" + section + "]");
  }
}

std::uint64_t parse_count(const Entry& e) {
  return at_line(e, [&] {
    std::size_t used = 0;
    const auto v = std::stoull(e.value, &used);
    if (used != e.value.size()) throw std::invalid_argument("expected a nonnegative integer");
    return static_cast<std::uint64_t>(v);
  });
}

std::vector<std::string> words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

TopoStructure parse_structure(const Sections& s) {
  const Entry* fam = single(s, "group", "family");
  const Entry* dim_e = single(s, "group", "dimension");
  reject_unknown(s, "group", {"family", "dimension"});
  reject_unknown(s, "structure", {"kind"});
  const std::string family = fam ? fam->value : "real";
  std::size_t dim = 1;
  if (family == "real") {
    if (dim_e && parse_count(*dim_e) != 1) throw InstanceParseError(dim_e->line, "family real has dimension 1");
  } else if (family == "coord-cone") {
    if (!dim_e) throw InstanceParseError(fam->line, "coord-cone needs a dimension");
    dim = parse_count(*dim_e);
    if (dim == 0) throw InstanceParseError(dim_e->line, "dimension must be positive");
  } else {
    throw InstanceParseError(fam->line, "unknown family '" + family + "' (real, coord-cone)");
  }
  const auto module = OrderedModule::coordinate_cone(dim);
  const Entry* kind = single(s, "structure", "kind");
  const std::string k = kind ? kind->value : (family == "real" ? "strict-order" : "interior-cone");
  if (k == "strict-order") return TopoStructure::strict_order(module);
  if (k == "interior-cone") return TopoStructure::interior_cone(module);
  throw InstanceParseError(kind->line, "unknown structure '" + k + "' (strict-order, interior-cone)");
}

MetricSpace parse_space(const Sections& s, const TopoStructure& topo) {
  reject_unknown(s, "space", {"points", "grid", "metric", "row"});
  const Entry* pts = single(s, "space", "points");
  const Entry* grid = single(s, "space", "grid");
  const Entry* metric = single(s, "space", "metric");
  const auto rows = all(s, "space", "row");
  const std::size_t dim = topo.dim();
  std::string kind = metric ? metric->value : (dim == 1 ? "abs" : "coordinatewise");
  if (kind != "abs" && kind != "coordinatewise" && kind != "table")
    throw InstanceParseError(metric->line, "unknown metric '" + kind + "' (abs, coordinatewise, table)");
  const MetricKind mk = kind == "abs" ? MetricKind::absolute : MetricKind::coordinatewise;
  if (pts && grid) throw InstanceParseError(grid->line, "give either points or grid");
  if (kind != "table" && !rows.empty()) throw InstanceParseError(rows.front()->line, "rows need metric = table");

  if (grid) {
    if (kind != "abs") throw InstanceParseError(grid->line, "grids use the abs metric");
    return at_line(*grid, [&] {
      const auto w = words(grid->value);
      if (w.size() != 3) throw std::invalid_argument("expected 'lo hi step'");
      return MetricSpace::grid(parse_rational(w[0]), parse_rational(w[1]), parse_rational(w[2]), topo);
    });
  }
  if (!pts || pts->value == "continuum") {
    if (kind == "table") throw InstanceParseError(metric->line, "table metrics need a finite point list");
    const Entry& where = pts ? *pts : (metric ? *metric : Entry{0, "points", ""});
    return at_line(where, [&] { return MetricSpace::continuum(dim, mk, topo); });
  }
  const auto points = at_line(*pts, [&] { return parse_element_list(pts->value); });
  if (kind != "table") return at_line(*pts, [&] { return MetricSpace::finite(points, mk, topo); });

  if (rows.size() != points.size())
    throw InstanceParseError(rows.empty() ? metric->line : rows.back()->line,
                             "table needs " + std::to_string(points.size()) + " rows, found " +
                                 std::to_string(rows.size()));
  MetricTable table;
  for (const Entry* r : rows) {
    auto row = at_line(*r, [&] { return parse_element_list(r->value); });
    if (row.size() != points.size())
      throw InstanceParseError(r->line, "row has " + std::to_string(row.size()) + " entries, expected " +
                                            std::to_string(points.size()));
    for (const auto& v : row)
      if (v.dim() != dim) throw InstanceParseError(r->line, "entry " + to_string(v) + " has the wrong dimension");
    table.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!table[i][i].is_zero())
      throw InstanceParseError(rows[i]->line, "d(" + to_string(points[i]) + ", " + to_string(points[i]) +
                                                  ") must be the identity");
    for (std::size_t j = 0; j < i; ++j)
      if (table[i][j] != table[j][i])
        throw InstanceParseError(rows[i]->line, "table is not symmetric at row " + std::to_string(i + 1) +
                                                    ", column " + std::to_string(j + 1) + ": " +
                                                    to_string(table[i][j]) + " vs " + to_string(table[j][i]));
  }
  return at_line(*pts, [&] { return MetricSpace::with_table(points, std::move(table), topo); });
}

std::optional<SetValuedMap> parse_map(const Sections& s, const MetricSpace& space) {
  if (!s.count("map")) return std::nullopt;
  reject_unknown(s, "map", {"branch"}, {"T"});
  std::vector<AffineBranch> branches;
  ImageTable images;
  std::size_t last_line = 0;
  for (const auto& e : s.at("map")) {
    last_line = e.line;
    if (e.key == "branch") {
      branches.push_back(at_line(e, [&] {
        const auto parts = parse_element_list(e.value);
        if (parts.size() < 2 || parts.size() > 3) throw std::invalid_argument("expected 'scale offset [step]'");
        std::vector<Rational> scale(parts[0].coords().begin(), parts[0].coords().end());
        std::optional<Rational> step;
        if (parts.size() == 3) {
          if (parts[2].dim() != 1) throw std::invalid_argument("step must be a scalar");
          step = parts[2][0];
        }
        return AffineBranch{std::move(scale), parts[1], step};
      }));
      continue;
    }
    const auto args = *call_args(e.key, "T");
    if (args.size() != 1) throw InstanceParseError(e.line, "T takes one point");
    const Point x = at_line(e, [&] { return parse_element(args[0]); });
    if (images.count(x)) throw InstanceParseError(e.line, "image of " + to_string(x) + " given twice");
    images[x] = at_line(e, [&] { return parse_element_list(e.value); });
  }
  if (!branches.empty() && !images.empty())
    throw InstanceParseError(last_line, "map mixes branches and image rows");
  if (branches.empty() && images.empty()) return std::nullopt;
  const Entry where{last_line, "map", ""};
  if (!branches.empty()) return at_line(where, [&] { return SetValuedMap::from_branches(space, branches); });
  return at_line(where, [&] { return SetValuedMap::from_table(space, images); });
}

std::pair<Point, Point> pair_args(const Entry& e, std::string_view name) {
  const auto args = *call_args(e.key, name);
  if (args.size() != 2) throw InstanceParseError(e.line, std::string(name) + " takes two points");
  return at_line(e, [&] { return std::pair{parse_element(args[0]), parse_element(args[1])}; });
}

Rational scalar_value(const Entry& e) {
  return at_line(e, [&] { return parse_rational(trim(e.value)); });
}

std::optional<ContractionWitness> parse_witness(const Sections& s) {
  if (!s.count("witness")) return std::nullopt;
  reject_unknown(s, "witness", {"class", "alpha", "bound", "default", "psi"}, {"phi", "alpha"});
  const Entry* cls = single(s, "witness", "class");
  if (!cls) throw InstanceParseError(s.at("witness").empty() ? 0 : s.at("witness").front().line, "missing class");
  const std::string c = cls->value;
  auto forbid_others = [&](const std::set<std::string>& allowed) {
    for (const auto& e : s.at("witness"))
      if (e.key != "class" && !allowed.count(e.key) && !(allowed.count("phi()") && call_args(e.key, "phi")) &&
          !(allowed.count("alpha()") && call_args(e.key, "alpha")))
        throw InstanceParseError(e.line, "'" + e.key + "' does not apply to class " + c);
  };
  if (c == "alpha-const") {
    forbid_others({"alpha"});
    const Entry* a = single(s, "witness", "alpha");
    if (!a) throw InstanceParseError(cls->line, "alpha-const needs 'alpha = r'");
    return ContractionWitness::alpha_constant(scalar_value(*a));
  }
  if (c == "alpha-fn") {
    forbid_others({"bound", "default", "alpha()"});
    const Entry* b = single(s, "witness", "bound");
    const Entry* d = single(s, "witness", "default");
    if (!b || !d) throw InstanceParseError(cls->line, "alpha-fn needs 'bound' and 'default'");
    AlphaTable entries;
    for (const auto& e : s.at("witness"))
      if (call_args(e.key, "alpha")) entries[pair_args(e, "alpha")] = scalar_value(e);
    return ContractionWitness::alpha_table(std::move(entries), scalar_value(*d), scalar_value(*b));
  }
  if (c == "phi-table") {
    forbid_others({"phi()"});
    PhiTable table;
    for (const auto& e : s.at("witness"))
      if (call_args(e.key, "phi")) table[pair_args(e, "phi")] = at_line(e, [&] { return parse_element(e.value); });
    return ContractionWitness::phi_table(std::move(table));
  }
  if (c == "psi") {
    forbid_others({"psi"});
    const Entry* p = single(s, "witness", "psi");
    if (!p) throw InstanceParseError(cls->line, "psi needs 'psi = linear c | rational | capped-quadratic'");
    return at_line(*p, [&] {
      const auto w = words(p->value);
      if (w.empty()) throw std::invalid_argument("missing psi kind");
      if (w[0] == "linear" && w.size() == 2) return ContractionWitness::psi(PsiKind::linear, parse_rational(w[1]));
      if (w[0] == "rational" && w.size() == 1) return ContractionWitness::psi(PsiKind::rational);
      if (w[0] == "capped-quadratic" && w.size() == 1) return ContractionWitness::psi(PsiKind::capped_quadratic);
      throw std::invalid_argument("expected 'linear c', 'rational' or 'capped-quadratic'");
    });
  }
  throw InstanceParseError(cls->line, "unknown witness class '" + c + "'");
}

}  // namespace

InstanceFile parse_instance(std::string_view text, const std::string& fallback_name) {
  const Sections s = split_sections(text);
  reject_unknown(s, "", {"name"});
  const Entry* name = single(s, "", "name");

  const TopoStructure topo = parse_structure(s);
  const MetricSpace space = parse_space(s, topo);
  auto map = parse_map(s, space);
  auto witness = parse_witness(s);

  reject_unknown(s, "sequences", {"seq", "prefix", "eps"});
  std::vector<Sequence> seqs;
  std::vector<Element> eps;
  if (auto it = s.find("sequences"); it != s.end())
    for (const auto& e : it->second) {
      const auto check_dim = [&](const Element& v) {
        if (v.dim() != topo.dim()) throw InstanceParseError(e.line, "value " + to_string(v) + " has the wrong dimension");
      };
      if (e.key == "seq") {
        auto f = at_line(e, [&] { return parse_closed_form(e.value); });
        if (f.dim() != topo.dim()) throw InstanceParseError(e.line, "sequence has the wrong dimension");
        seqs.emplace_back(std::move(f));
      } else if (e.key == "prefix") {
        auto terms = at_line(e, [&] { return parse_element_list(e.value); });
        if (terms.empty()) throw InstanceParseError(e.line, "empty prefix");
        for (const auto& t : terms) check_dim(t);
        seqs.emplace_back(std::move(terms));
      } else {
        for (auto& v : at_line(e, [&] { return parse_element_list(e.value); })) {
          check_dim(v);
          if (!topo.is_scale(v)) throw InstanceParseError(e.line, "eps " + to_string(v) + " is not >> identity");
          eps.push_back(std::move(v));
        }
      }
    }
  if (eps.empty()) eps.push_back(Element::filled(topo.dim(), Rational(1, 10)));

  reject_unknown(s, "solver", {"start", "eps", "max-iter", "rule"});
  InstanceFile out{Instance{name ? name->value : fallback_name, topo.dim() == 1 && topo.kind() == TopoKind::strict_order
                                                                    ? "real"
                                                                    : "coord-cone",
                            topo, space, std::move(map), std::move(witness), std::move(seqs), std::move(eps),
                            std::nullopt, std::nullopt, {}},
                   std::nullopt, std::nullopt};
  if (const Entry* fam = single(s, "group", "family")) out.instance.family = fam->value;
  if (const Entry* e = single(s, "solver", "start")) {
    out.instance.start = at_line(*e, [&] { return parse_element(e->value); });
    if (!space.contains(*out.instance.start))
      throw InstanceParseError(e->line, "start " + e->value + " is not a point of the space");
  }
  if (const Entry* e = single(s, "solver", "eps")) {
    out.instance.solver_eps = at_line(*e, [&] { return parse_element(e->value); });
    if (out.instance.solver_eps->dim() != topo.dim() || !topo.is_scale(*out.instance.solver_eps))
      throw InstanceParseError(e->line, "solver eps must be >> identity");
  }
  if (const Entry* e = single(s, "solver", "max-iter")) {
    out.max_iter = parse_count(*e);
    if (*out.max_iter == 0) throw InstanceParseError(e->line, "max-iter must be positive");
  }
  if (const Entry* e = single(s, "solver", "rule")) {
    out.rule = parse_rule(e->value);
    if (!out.rule) throw InstanceParseError(e->line, "unknown rule '" + e->value + "' (min-dist, lex)");
  }
  return out;
}

InstanceFile load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InstanceParseError(0, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str(), path.stem().string());
}

namespace {

std::string list(const std::vector<Element>& xs) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : " ") + to_string(x);
  return out;
}

// Scalars print bare; a multi-coordinate point prints as a tuple.
std::string tuple(std::span<const Rational> c) {
  std::string out = "(";
  for (std::size_t i = 0; i < c.size(); ++i) out += (i ? ", " : "") + to_string(c[i]);
  return out + ")";
}

}  // namespace

std::string export_instance(const InstanceFile& f) {
  const Instance& inst = f.instance;
  const auto& topo = inst.topo;
  if (topo.kind() == TopoKind::custom) throw std::invalid_argument("custom structure '" + topo.name() + "' cannot be exported");
  if (inst.group().name() != OrderedGroup::coordinate_cone(inst.group().dim()).name())
    throw std::invalid_argument("replaced order '" + inst.group().name() + "' cannot be exported");

  std::ostringstream out;
  out << "name = " << inst.name << "\n\n[group]\nfamily = " << inst.family << "\ndimension = " << topo.dim()
      << "\n\n[structure]\nkind = " << topo.name() << "\n\n[space]\n";
  const auto& m = inst.space;
  switch (m.kind()) {
    case MetricKind::custom: throw std::invalid_argument("custom metrics cannot be exported");
    case MetricKind::table:
      out << "points = " << list(m.points()) << "\nmetric = table\n";
      for (const auto& row : *m.table()) out << "row = " << list(row) << '\n';
      break;
    default:
      out << "points = " << (m.is_finite() ? list(m.points()) : std::string("continuum")) << "\nmetric = "
          << to_string(m.kind()) << '\n';
  }

  if (inst.map) {
    out << "\n[map]\n";
    if (const auto* t = inst.map->table()) {
      for (const auto& [x, img] : *t) out << "T(" << to_string(x) << ") = " << list(img) << '\n';
    } else if (!inst.map->branches().empty()) {
      for (const auto& b : inst.map->branches()) {
        out << "branch = " << tuple(b.scale) << ' ' << tuple(b.offset.coords());
        if (b.grid_step) out << ' ' << to_string(*b.grid_step);
        out << '\n';
      }
    } else {
      throw std::invalid_argument("map '" + inst.map->description() + "' is a rule and cannot be exported");
    }
  }

  if (inst.witness) {
    const auto& w = *inst.witness;
    out << "\n[witness]\nclass = " << to_string(w.witness_class()) << '\n';
    switch (w.witness_class()) {
      case WitnessClass::alpha_constant: out << "alpha = " << to_string(w.alpha()) << '\n'; break;
      case WitnessClass::alpha_function:
        if (!w.alpha_entries()) throw std::invalid_argument("alpha function '" + w.description() + "' cannot be exported");
        out << "bound = " << to_string(w.alpha()) << "\ndefault = " << to_string(w.alpha_fallback()) << '\n';
        for (const auto& [k, v] : *w.alpha_entries())
          out << "alpha(" << to_string(k.first) << ", " << to_string(k.second) << ") = " << to_string(v) << '\n';
        break;
      case WitnessClass::phi_table:
        for (const auto& [k, v] : *w.table())
          out << "phi(" << to_string(k.first) << ", " << to_string(k.second) << ") = " << to_string(v) << '\n';
        break;
      case WitnessClass::psi:
        out << "psi = " << to_string(w.psi_kind());
        if (w.psi_kind() == PsiKind::linear) out << ' ' << to_string(w.psi_param());
        out << '\n';
        break;
    }
  }

  out << "\n[sequences]\n";
  for (const auto& s : inst.sequences) {
    if (const auto* cf = s.closed_form())
      out << "seq = " << to_string(*cf) << '\n';
    else
      out << "prefix = " << list(s.materialize(*s.length())) << '\n';
  }
  out << "eps = " << list(inst.eps_family) << '\n';

  if (inst.start || inst.solver_eps || f.max_iter || f.rule) {
    out << "\n[solver]\n";
    if (inst.start) out << "start = " << to_string(*inst.start) << '\n';
    if (inst.solver_eps) out << "eps = " << to_string(*inst.solver_eps) << '\n';
    if (f.max_iter) out << "max-iter = " << *f.max_iter << '\n';
    if (f.rule) out << "rule = " << to_string(*f.rule) << '\n';
  }
  return out.str();
}

}  // namespace ordmet
