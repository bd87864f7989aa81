#include "symcomp/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace symcomp {

using nlohmann::json;

namespace {

// ---- json access with FormatError instead of nlohmann exceptions ----------

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw FormatError(std::string("missing field '") + key + "'");
  return *it;
}

std::string str_field(const json& j, const char* key) {
  const json& f = field(j, key);
  if (!f.is_string())
    throw FormatError(std::string("field '") + key + "' must be a string");
  return f.get<std::string>();
}

std::uint64_t uint_field(const json& j, const char* key) {
  const json& f = field(j, key);
  // in-memory documents may carry signed literals; accept them when >= 0
  if (!f.is_number_unsigned() &&
      !(f.is_number_integer() && f.get<std::int64_t>() >= 0))
    throw FormatError(std::string("field '") + key +
                      "' must be a nonnegative integer");
  return f.get<std::uint64_t>();
}

double num_field(const json& j, const char* key) {
  const json& f = field(j, key);
  if (!f.is_number())
    throw FormatError(std::string("field '") + key + "' must be a number");
  return f.get<double>();
}

const json& array_field(const json& j, const char* key) {
  const json& f = field(j, key);
  if (!f.is_array())
    throw FormatError(std::string("field '") + key + "' must be an array");
  return f;
}

// ---- variable universe bookkeeping -----------------------------------------

// Atoms of the given variables, deduplicated, declaration order.
std::vector<Variable> atom_universe(Context& ctx, const std::vector<Variable>& vars) {
  std::vector<Variable> out;
  for (const Variable& v : vars) {
    if (v.ctx != &ctx) throw ContextMismatch("variable from another context");
    if (v.is_composite()) {
      auto m = v.members();
      out.insert(out.end(), m.begin(), m.end());
    } else {
      out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void require_covers(Context& ctx, Predicate p, const std::vector<Variable>& universe) {
  for (const Variable& s : ctx.support_vars(p))
    if (!std::binary_search(universe.begin(), universe.end(), s))
      throw SupportError("predicate depends on '" + s.name() +
                         "', which the artifact does not carry");
}

// level -> position among the universe's levels, ascending
std::map<dd::Level, std::uint32_t> rank_map(Context& ctx,
                                            const std::vector<Variable>& universe) {
  std::map<dd::Level, std::uint32_t> ranks;
  for (const Variable& v : universe)
    for (dd::Level l : ctx.bit_levels(v)) ranks.emplace(l, 0);
  std::uint32_t r = 0;
  for (auto& [lvl, rank] : ranks) rank = r++;
  return ranks;
}

json variables_json(const std::vector<Variable>& universe) {
  json out = json::array();
  for (const Variable& v : universe)
    out.push_back({{"name", v.name()}, {"domain", v.domain_size()}});
  return out;
}

json level_owner_json(Context& ctx, const std::vector<Variable>& universe) {
  std::map<dd::Level, std::uint32_t> owner;
  for (std::size_t i = 0; i < universe.size(); ++i)
    for (dd::Level l : ctx.bit_levels(universe[i]))
      owner[l] = static_cast<std::uint32_t>(i);
  json out = json::array();
  for (auto& [lvl, idx] : owner) out.push_back(idx);
  return out;
}

// ---- node payload ----------------------------------------------------------

std::uint32_t art_id(dd::NodeId n,
                     const std::unordered_map<dd::NodeId, std::uint32_t>& ids) {
  if (n == dd::bot) return 0;
  if (n == dd::top) return 1;
  return ids.at(n);
}

void emit_nodes(const dd::Store& st, dd::NodeId f,
                const std::map<dd::Level, std::uint32_t>& ranks, json& nodes,
                std::unordered_map<dd::NodeId, std::uint32_t>& ids) {
  if (f == dd::bot || f == dd::top || ids.count(f)) return;
  emit_nodes(st, st.low(f), ranks, nodes, ids);
  emit_nodes(st, st.high(f), ranks, nodes, ids);
  std::uint32_t id = static_cast<std::uint32_t>(nodes.size()) + 2;
  nodes.push_back({ranks.at(st.level(f)), art_id(st.low(f), ids),
                   art_id(st.high(f), ids)});
  ids[f] = id;
}

struct ParsedHeader {
  std::vector<std::pair<std::string, std::uint64_t>> variables;
  std::vector<std::uint32_t> level_owner;
};

ParsedHeader parse_header(const json& j) {
  ParsedHeader h;
  for (const json& v : array_field(j, "variables"))
    h.variables.emplace_back(str_field(v, "name"), uint_field(v, "domain"));
  for (const json& o : array_field(j, "level_owner")) {
    if (!o.is_number_unsigned())
      throw FormatError("level_owner entries must be variable indices");
    h.level_owner.push_back(o.get<std::uint32_t>());
  }
  return h;
}

// Resolve the header against the context: declare the layout on a fresh
// context, otherwise insist the variables already exist with equal domains.
std::vector<Variable> realize_header(Context& ctx, const ParsedHeader& h) {
  if (ctx.var_count() == 0 && !h.variables.empty()) {
    try {
      return ctx.declare_layout(h.variables, h.level_owner);
    } catch (const ValidationError& e) {
      throw FormatError(std::string("bad artifact layout: ") + e.what());
    }
  }
  std::vector<Variable> out;
  for (const auto& [name, domain] : h.variables) {
    auto v = ctx.find(name);
    if (!v)
      throw ValidationError("artifact variable '" + name +
                            "' is not declared in this context");
    if (v->is_composite() || v->domain_size() != domain)
      throw TypeMismatch("variable '" + name + "' has domain " +
                         std::to_string(v->domain_size()) +
                         " here, artifact expects " + std::to_string(domain));
    out.push_back(*v);
  }
  return out;
}

// artifact rank -> context level, required to be strictly increasing so the
// dumped diagram keeps its ordering when adopted
std::vector<dd::Level> rank_to_level(Context& ctx, const ParsedHeader& h,
                                     const std::vector<Variable>& vars) {
  std::vector<std::uint32_t> next_bit(vars.size(), 0);
  std::vector<dd::Level> map;
  map.reserve(h.level_owner.size());
  for (std::uint32_t owner : h.level_owner) {
    if (owner >= vars.size())
      throw FormatError("level_owner index out of range");
    const auto& bits = ctx.bit_levels(vars[owner]);
    if (next_bit[owner] >= bits.size())
      throw FormatError("level_owner gives '" + vars[owner].name() +
                        "' more bits than its domain needs");
    map.push_back(bits[next_bit[owner]++]);
  }
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (next_bit[i] != ctx.bit_levels(vars[i]).size())
      throw FormatError("level_owner gives '" + vars[i].name() +
                        "' too few bits");
  for (std::size_t r = 1; r < map.size(); ++r)
    if (map[r] <= map[r - 1])
      throw ValidationError(
          "artifact bit order is incompatible with this context's layout");
  return map;
}

Predicate recanonize(Context& ctx, Predicate p) {
  // honest artifacts come back unchanged; a corrupt diagram cannot smuggle
  // satisfying padding assignments past the counters
  return ctx.conj(p, ctx.tru());
}

Predicate payload_to_predicate(Context& ctx, const json& j, const ParsedHeader& h,
                               const std::vector<Variable>& vars) {
  std::string enc = str_field(j, "encoding");
  if (enc == "assignments") {
    Predicate acc = ctx.fls();
    for (const json& row : array_field(j, "rows")) {
      if (!row.is_array() || row.size() != vars.size())
        throw FormatError("assignment row does not match the variable list");
      Predicate one = ctx.tru();
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if (!row[i].is_number_unsigned())
          throw FormatError("assignment values must be nonnegative integers");
        std::uint64_t val = row[i].get<std::uint64_t>();
        if (val >= vars[i].domain_size())
          throw FormatError("value " + std::to_string(val) + " outside domain of '" +
                            vars[i].name() + "'");
        one = ctx.conj(one, ctx.value_eq(vars[i], val));
      }
      acc = ctx.disj(acc, one);
    }
    return acc;
  }
  if (enc != "nodes")
    throw FormatError("unknown predicate encoding '" + enc + "'");

  std::vector<dd::Level> levels = rank_to_level(ctx, h, vars);
  const json& nodes = array_field(j, "nodes");
  std::vector<dd::NodeId> built;
  std::vector<std::uint32_t> rank_of; // per artifact id, 2-based
  built.reserve(nodes.size());
  rank_of.reserve(nodes.size());
  auto child_rank = [&](std::uint32_t id) -> std::uint32_t {
    return id < 2 ? 0xffffffffu : rank_of[id - 2];
  };
  for (const json& n : nodes) {
    if (!n.is_array() || n.size() != 3 || !n[0].is_number_unsigned() ||
        !n[1].is_number_unsigned() || !n[2].is_number_unsigned())
      throw FormatError("diagram nodes must be [rank, lo, hi] triples");
    std::uint32_t rank = n[0].get<std::uint32_t>();
    std::uint32_t lo = n[1].get<std::uint32_t>();
    std::uint32_t hi = n[2].get<std::uint32_t>();
    std::uint32_t id = static_cast<std::uint32_t>(built.size()) + 2;
    if (rank >= levels.size() || lo >= id || hi >= id)
      throw FormatError("diagram node references are out of range");
    if (rank >= child_rank(lo) || rank >= child_rank(hi))
      throw FormatError("diagram nodes are not ordered");
    built.push_back(ctx.store().mk(
        levels[rank], lo < 2 ? (lo ? dd::top : dd::bot) : built[lo - 2],
        hi < 2 ? (hi ? dd::top : dd::bot) : built[hi - 2]));
    rank_of.push_back(rank);
  }
  std::uint64_t root = uint_field(j, "root");
  dd::NodeId r;
  if (root < 2)
    r = root ? dd::top : dd::bot;
  else if (root - 2 < built.size())
    r = built[root - 2];
  else
    throw FormatError("diagram root is out of range");
  return recanonize(ctx, ctx.adopt(r));
}

json doc_from_file(const std::string& path, const char* expect_format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError("'" + path + "' is not a valid artifact: " + e.what());
  }
  if (!j.is_object() || str_field(j, "format") != expect_format)
    throw FormatError("'" + path + "' is not a " + std::string(expect_format) +
                      " artifact");
  return j;
}

void doc_to_file(const json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << j.dump(1) << '\n';
  if (!out) throw FormatError("write to '" + path + "' failed");
}

std::vector<Variable> names_to_vars(Context& ctx, const json& names) {
  std::vector<Variable> out;
  for (const json& n : names) {
    if (!n.is_string()) throw FormatError("variable names must be strings");
    auto v = ctx.find(n.get<std::string>());
    if (!v)
      throw FormatError("artifact names unknown variable '" +
                        n.get<std::string>() + "'");
    out.push_back(*v);
  }
  return out;
}

json name_list(const std::vector<Variable>& vars) {
  json out = json::array();
  for (const Variable& v : vars) out.push_back(v.name());
  return out;
}

} // namespace

// ---- text dump -------------------------------------------------------------

std::string dump_predicate(Predicate p, const std::vector<Variable>& vars) {
  Context& ctx = *p.ctx;
  std::vector<Variable> universe = atom_universe(ctx, vars);
  require_covers(ctx, p, universe);

  std::vector<std::string> lines;
  std::vector<Variable> sorted = ctx.enumerate_sat(
      p, universe, [&](const std::vector<std::uint64_t>& values) {
        std::string line;
        for (std::size_t i = 0; i < values.size(); ++i) {
          if (i) line += ' ';
          line += universe[i].name() + "=" + std::to_string(values[i]);
        }
        lines.push_back(std::move(line));
      });
  std::sort(lines.begin(), lines.end());

  std::string out = "vars";
  for (const Variable& v : universe)
    out += " " + v.name() + ":" + std::to_string(v.domain_size());
  out += '\n';
  for (const std::string& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

Predicate parse_predicate_dump(Context& ctx, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("vars", 0) != 0)
    throw FormatError("predicate dump must start with a 'vars' header");

  std::vector<Variable> universe;
  {
    std::istringstream head(line.substr(4));
    std::string tok;
    while (head >> tok) {
      std::size_t colon = tok.rfind(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size())
        throw FormatError("bad header entry '" + tok + "'");
      std::string name = tok.substr(0, colon);
      std::uint64_t domain = 0;
      try {
        std::size_t used = 0;
        domain = std::stoull(tok.substr(colon + 1), &used);
        if (used != tok.size() - colon - 1) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw FormatError("bad domain size in '" + tok + "'");
      }
      auto v = ctx.find(name);
      if (!v)
        universe.push_back(ctx.declare(name, domain));
      else if (v->is_composite() || v->domain_size() != domain)
        throw TypeMismatch("variable '" + name + "' does not match the dump header");
      else
        universe.push_back(*v);
    }
  }
  if (universe.empty()) throw FormatError("dump header declares no variables");

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < universe.size(); ++i)
    index[universe[i].name()] = i;

  Predicate acc = ctx.fls();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string tok;
    std::vector<bool> seen(universe.size(), false);
    Predicate one = ctx.tru();
    while (row >> tok) {
      std::size_t eq = tok.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == tok.size())
        throw FormatError("bad assignment field '" + tok + "'");
      auto it = index.find(tok.substr(0, eq));
      if (it == index.end())
        throw FormatError("assignment names unknown variable in '" + tok + "'");
      if (seen[it->second])
        throw FormatError("variable assigned twice in '" + line + "'");
      seen[it->second] = true;
      std::uint64_t value = 0;
      try {
        std::size_t used = 0;
        value = std::stoull(tok.substr(eq + 1), &used);
        if (used != tok.size() - eq - 1) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw FormatError("bad value in '" + tok + "'");
      }
      if (value >= universe[it->second].domain_size())
        throw FormatError("value out of domain in '" + tok + "'");
      one = ctx.conj(one, ctx.value_eq(universe[it->second], value));
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
      throw FormatError("line '" + line + "' does not assign every variable");
    acc = ctx.disj(acc, one);
  }
  return acc;
}

// ---- quantizer schema ------------------------------------------------------

json quantizer_json(const Quantizer& q, const std::string& var) {
  json j{{"var", var}, {"cells", q.cell_count()}};
  if (q.is_identity()) {
    j["kind"] = "identity";
    j["labels"] = q.labels();
  } else {
    j["kind"] = "uniform";
    j["lower"] = q.domain().lower;
    j["upper"] = q.domain().upper;
    j["eta"] = q.eta();
    j["anchor"] = q.anchor();
  }
  return j;
}

Quantizer quantizer_from_json(const json& j) {
  std::string kind = str_field(j, "kind");
  std::uint64_t cells = uint_field(j, "cells");
  Quantizer q = [&] {
    if (kind == "identity") {
      std::vector<double> labels;
      for (const json& l : array_field(j, "labels")) {
        if (!l.is_number()) throw FormatError("labels must be numbers");
        labels.push_back(l.get<double>());
      }
      return Quantizer::identity(std::move(labels));
    }
    if (kind != "uniform")
      throw FormatError("unknown quantizer kind '" + kind + "'");
    if (cells > 0xffffffffull) throw FormatError("cell count out of range");
    return Quantizer::uniform({num_field(j, "lower"), num_field(j, "upper")},
                              num_field(j, "eta"), num_field(j, "anchor"),
                              static_cast<std::uint32_t>(cells));
  }();
  if (q.cell_count() != cells)
    throw FormatError("stored cell count " + std::to_string(cells) +
                      " disagrees with the quantizer's " +
                      std::to_string(q.cell_count()));
  return q;
}

// ---- predicate payloads ----------------------------------------------------

json predicate_json(Predicate p, const std::vector<Variable>& vars,
                    std::uint64_t assignment_limit) {
  Context& ctx = *p.ctx;
  std::vector<Variable> universe = atom_universe(ctx, vars);
  require_covers(ctx, p, universe);

  json j{{"variables", variables_json(universe)},
         {"level_owner", level_owner_json(ctx, universe)}};

  unsigned __int128 count = ctx.count_sat_wide(p, universe);
  if (count <= assignment_limit) {
    json rows = json::array();
    ctx.enumerate_sat(p, universe, [&](const std::vector<std::uint64_t>& values) {
      rows.push_back(values);
    });
    j["encoding"] = "assignments";
    j["rows"] = std::move(rows);
    return j;
  }

  json nodes = json::array();
  std::unordered_map<dd::NodeId, std::uint32_t> ids;
  emit_nodes(ctx.store(), p.id, rank_map(ctx, universe), nodes, ids);
  j["encoding"] = "nodes";
  j["nodes"] = std::move(nodes);
  j["root"] = art_id(p.id, ids);
  return j;
}

Predicate predicate_from_json(Context& ctx, const json& j) {
  ParsedHeader h = parse_header(j);
  std::vector<Variable> vars = realize_header(ctx, h);
  return payload_to_predicate(ctx, j, h, vars);
}

// ---- module artifacts ------------------------------------------------------

json module_json(const FiniteModule& m, const std::vector<NamedQuantizer>& quantizers,
                 std::uint64_t assignment_limit) {
  for (const Variable& v : m.inputs())
    if (v.is_composite())
      throw ValidationError("artifacts store atomic variables only");
  for (const Variable& v : m.outputs())
    if (v.is_composite())
      throw ValidationError("artifacts store atomic variables only");

  std::vector<Variable> io = m.inputs();
  io.insert(io.end(), m.outputs().begin(), m.outputs().end());
  json q = json::array();
  for (const NamedQuantizer& nq : quantizers)
    q.push_back(quantizer_json(nq.q, nq.var));
  return json{{"format", "symcomp-module"},
              {"version", 1},
              {"name", m.name()},
              {"inputs", name_list(m.inputs())},
              {"outputs", name_list(m.outputs())},
              {"quantizers", std::move(q)},
              {"constraint", predicate_json(m.constraint(), io, assignment_limit)}};
}

LoadedModule module_from_json(Context& ctx, const json& j) {
  if (str_field(j, "format") != "symcomp-module")
    throw FormatError("not a module artifact");
  Predicate constraint = predicate_from_json(ctx, field(j, "constraint"));
  std::vector<Variable> inputs = names_to_vars(ctx, array_field(j, "inputs"));
  std::vector<Variable> outputs = names_to_vars(ctx, array_field(j, "outputs"));

  std::vector<NamedQuantizer> qs;
  for (const json& qj : array_field(j, "quantizers")) {
    NamedQuantizer nq{str_field(qj, "var"), quantizer_from_json(qj)};
    if (auto v = ctx.find(nq.var); v && v->domain_size() != nq.q.cell_count())
      throw FormatError("quantizer for '" + nq.var +
                        "' disagrees with the variable's domain");
    qs.push_back(std::move(nq));
  }
  return LoadedModule{
      FiniteModule(str_field(j, "name"), std::move(inputs), std::move(outputs),
                   constraint),
      std::move(qs)};
}

// ---- controller artifacts --------------------------------------------------

json controller_json(const Controller& c) {
  if (!c.policy.ctx) throw ValidationError("controller has no context");
  std::vector<Variable> universe = c.states;
  universe.insert(universe.end(), c.controls.begin(), c.controls.end());
  json waves = json::array();
  for (const Predicate& w : c.waves)
    waves.push_back(predicate_json(w, universe));
  return json{{"format", "symcomp-controller"},
              {"version", 1},
              {"system", c.system},
              {"states", name_list(c.states)},
              {"controls", name_list(c.controls)},
              {"policy", predicate_json(c.policy, universe)},
              {"at_target", predicate_json(c.at_target, universe)},
              {"waves", std::move(waves)}};
}

Controller controller_from_json(Context& ctx, const json& j) {
  if (str_field(j, "format") != "symcomp-controller")
    throw FormatError("not a controller artifact");
  Controller c;
  c.system = str_field(j, "system");
  c.policy = predicate_from_json(ctx, field(j, "policy"));
  c.at_target = predicate_from_json(ctx, field(j, "at_target"));
  for (const json& w : array_field(j, "waves"))
    c.waves.push_back(predicate_from_json(ctx, w));
  c.states = names_to_vars(ctx, array_field(j, "states"));
  c.controls = names_to_vars(ctx, array_field(j, "controls"));
  return c;
}

// ---- file wrappers ---------------------------------------------------------

void save_module(const FiniteModule& m, const std::string& path,
                 const std::vector<NamedQuantizer>& quantizers) {
  doc_to_file(module_json(m, quantizers), path);
}

LoadedModule load_module(Context& ctx, const std::string& path) {
  return module_from_json(ctx, doc_from_file(path, "symcomp-module"));
}

void save_controller(const Controller& c, const std::string& path) {
  doc_to_file(controller_json(c), path);
}

Controller load_controller(Context& ctx, const std::string& path) {
  return controller_from_json(ctx, doc_from_file(path, "symcomp-controller"));
}

// ---- reports ---------------------------------------------------------------

json check_report_json(const CheckReport& rep) {
  const char* violated = "none";
  if (rep.violated == CheckReport::Condition::Nonblocking) violated = "nonblocking";
  if (rep.violated == CheckReport::Condition::Overapprox) violated = "overapprox";
  json cex = json::array();
  for (const auto& [var, value] : rep.counterexample)
    cex.push_back({{"var", var}, {"value", value}});
  return json{{"pass", rep.pass},
              {"violated", violated},
              {"counterexample", std::move(cex)},
              {"note", rep.note},
              {"method", rep.method}};
}

json trial_json(const TrialRecord& t) {
  return json{{"trial", t.index}, {"seed", t.seed}, {"pass", t.pass}, {"note", t.note}};
}

json harness_json(const HarnessStats& st) {
  json failed = json::array();
  for (const TrialRecord& t : st.failed) failed.push_back(trial_json(t));
  return json{{"trials", st.trials},
              {"passes", st.passes},
              {"failures", st.failures},
              {"failed", std::move(failed)}};
}

// ---- artifact summaries ----------------------------------------------------

double ArtifactSummary::blocking_fraction() const {
  if (inputs_total == 0) return 0.0;
  return 1.0 - static_cast<double>(static_cast<long double>(nonblocking) /
                                   static_cast<long double>(inputs_total));
}

ArtifactSummary summarize_module(const std::string& path) {
  Context ctx;
  LoadedModule loaded = load_module(ctx, path);
  const FiniteModule& m = loaded.module;

  std::vector<Variable> io = m.inputs();
  io.insert(io.end(), m.outputs().begin(), m.outputs().end());

  ArtifactSummary s;
  s.name = m.name();
  s.transitions = ctx.count_sat_wide(m.constraint(), io);
  s.nonblocking = ctx.count_sat_wide(m.nonblocking(), m.inputs());
  s.inputs_total = 1;
  for (const Variable& v : m.inputs()) s.inputs_total *= v.domain_size();
  s.nodes = ctx.predicate_size(m.constraint());
  return s;
}

std::string dec_string(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string sci_string(unsigned __int128 v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2Le", static_cast<long double>(v));
  return buf;
}

} // namespace symcomp
