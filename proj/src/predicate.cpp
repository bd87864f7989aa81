#include "symcomp/predicate.hpp"

#include <algorithm>
#include <cassert>

namespace symcomp {

namespace {

std::uint32_t width_for(std::uint64_t domain) {
  std::uint32_t w = 0;
  while ((1ull << w) < domain) ++w; // domain 1 -> zero bits
  return w;
}

} // namespace

// ---- Variable accessors ---------------------------------------------------

const std::string& Variable::name() const { return ctx->var_name(*this); }
std::uint64_t Variable::domain_size() const { return ctx->var_domain(*this); }
std::uint32_t Variable::bit_width() const {
  return static_cast<std::uint32_t>(ctx->bit_levels(*this).size());
}
bool Variable::is_composite() const { return ctx->var_composite(*this); }
std::vector<Variable> Variable::members() const { return ctx->var_members(*this); }

// ---- Context --------------------------------------------------------------

Context::Context(std::uint64_t node_limit) : store_(node_limit) {}

Variable Context::declare(const std::string& name, std::uint64_t domain_size) {
  return declare_interleaved({{name, domain_size}}).front();
}

std::vector<Variable> Context::declare_interleaved(
    const std::vector<std::pair<std::string, std::uint64_t>>& group) {
  // validate everything before touching the registry
  for (const auto& [name, domain] : group) {
    if (name.empty() || name.find_first_of(" \t\n=") != std::string::npos)
      throw ValidationError("bad variable name '" + name + "'");
    if (domain == 0)
      throw ValidationError("variable '" + name + "' has empty domain");
    if (domain > (1ull << 32))
      throw ValidationError("variable '" + name + "' domain too large");
    if (by_name_.count(name))
      throw NameClash("variable '" + name + "' already declared");
  }
  for (std::size_t i = 0; i < group.size(); ++i)
    for (std::size_t j = i + 1; j < group.size(); ++j)
      if (group[i].first == group[j].first)
        throw NameClash("variable '" + group[i].first + "' repeated in group");

  std::vector<Variable> out;
  std::uint32_t first_id = static_cast<std::uint32_t>(vars_.size());
  std::uint32_t max_width = 0;
  for (const auto& [name, domain] : group) {
    VarInfo vi;
    vi.name = name;
    vi.domain = domain;
    vi.bits.resize(width_for(domain));
    vi.padded = (domain & (domain - 1)) != 0;
    max_width = std::max(max_width, static_cast<std::uint32_t>(vi.bits.size()));
    by_name_[name] = static_cast<std::uint32_t>(vars_.size());
    vars_.push_back(std::move(vi));
  }
  // hand out levels round robin, most significant bits first
  for (std::uint32_t k = 0; k < max_width; ++k)
    for (std::size_t m = 0; m < group.size(); ++m) {
      VarInfo& vi = vars_[first_id + m];
      if (k < vi.bits.size()) {
        vi.bits[k] = next_level_++;
        level_to_atom_.push_back(first_id + static_cast<std::uint32_t>(m));
      }
    }
  for (std::size_t m = 0; m < group.size(); ++m) {
    std::uint32_t id = first_id + static_cast<std::uint32_t>(m);
    if (vars_[id].padded) any_padded_ = true;
    vars_[id].domain_constraint =
        vars_[id].padded ? le_node(id, vars_[id].domain - 1) : dd::top;
    out.push_back(Variable{this, id});
  }
  return out;
}

std::vector<Variable> Context::declare_layout(
    const std::vector<std::pair<std::string, std::uint64_t>>& group,
    const std::vector<std::uint32_t>& level_owner) {
  if (next_level_ != 0 || !vars_.empty())
    throw ValidationError("declare_layout requires a fresh context");
  for (const auto& [name, domain] : group) {
    if (name.empty() || name.find_first_of(" \t\n=") != std::string::npos)
      throw ValidationError("bad variable name '" + name + "'");
    if (domain == 0)
      throw ValidationError("variable '" + name + "' has empty domain");
    if (domain > (1ull << 32))
      throw ValidationError("variable '" + name + "' domain too large");
  }
  for (std::size_t i = 0; i < group.size(); ++i)
    for (std::size_t j = i + 1; j < group.size(); ++j)
      if (group[i].first == group[j].first)
        throw NameClash("variable '" + group[i].first + "' repeated in group");

  // every variable must own exactly as many levels as its width
  std::vector<std::uint32_t> seen(group.size(), 0);
  for (std::uint32_t owner : level_owner) {
    if (owner >= group.size())
      throw ValidationError("level owner index out of range");
    ++seen[owner];
  }
  for (std::size_t i = 0; i < group.size(); ++i)
    if (seen[i] != width_for(group[i].second))
      throw ValidationError("layout gives variable '" + group[i].first +
                            "' the wrong number of bits");

  std::vector<Variable> out;
  for (const auto& [name, domain] : group) {
    VarInfo vi;
    vi.name = name;
    vi.domain = domain;
    vi.bits.resize(width_for(domain));
    vi.padded = (domain & (domain - 1)) != 0;
    by_name_[name] = static_cast<std::uint32_t>(vars_.size());
    vars_.push_back(std::move(vi));
  }
  std::fill(seen.begin(), seen.end(), 0);
  for (std::uint32_t owner : level_owner) {
    vars_[owner].bits[seen[owner]++] = next_level_++;
    level_to_atom_.push_back(owner);
  }
  for (std::size_t m = 0; m < group.size(); ++m) {
    std::uint32_t id = static_cast<std::uint32_t>(m);
    if (vars_[id].padded) any_padded_ = true;
    vars_[id].domain_constraint =
        vars_[id].padded ? le_node(id, vars_[id].domain - 1) : dd::top;
    out.push_back(Variable{this, id});
  }
  return out;
}

Variable Context::bundle(const std::vector<Variable>& members) {
  if (members.empty()) throw InvalidBundle("empty bundle");
  for (const Variable& m : members) check_ctx(m);
  if (members.size() == 1 && !members.front().is_composite())
    return members.front();
  // flatten to atoms, reject overlap
  std::vector<std::uint32_t> atoms;
  for (const Variable& m : members) {
    auto f = flatten(m);
    atoms.insert(atoms.end(), f.begin(), f.end());
  }
  std::vector<std::uint32_t> sorted = atoms;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidBundle("bundle members overlap");

  std::string key;
  for (const Variable& m : members) key += std::to_string(m.id) + ",";
  auto it = bundles_.find(key);
  if (it != bundles_.end()) return Variable{this, it->second};

  VarInfo vi;
  vi.name = "(";
  unsigned __int128 domain = 1;
  for (const Variable& m : members) {
    if (vi.name.size() > 1) vi.name += "|";
    vi.name += vars_[m.id].name;
    domain *= vars_[m.id].domain;
    if (domain > (unsigned __int128)UINT64_MAX)
      throw InvalidBundle("bundle domain exceeds 2^64");
    vi.members.push_back(m.id);
  }
  vi.name += ")";
  vi.domain = static_cast<std::uint64_t>(domain);
  for (std::uint32_t a : atoms) {
    vi.bits.insert(vi.bits.end(), vars_[a].bits.begin(), vars_[a].bits.end());
    if (vars_[a].padded) vi.padded = true;
  }
  std::uint32_t id = static_cast<std::uint32_t>(vars_.size());
  vars_.push_back(std::move(vi));
  bundles_[key] = id;
  return Variable{this, id};
}

std::optional<Variable> Context::find(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return Variable{this, it->second};
}

Variable Context::var(const std::string& name) const {
  auto v = find(name);
  if (!v) throw ValidationError("unknown variable '" + name + "'");
  return *v;
}

std::vector<Variable> Context::atoms() const {
  std::vector<Variable> out;
  for (std::uint32_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].members.empty()) out.push_back(Variable{this, i});
  return out;
}

void Context::check_ctx(const Predicate& p) const {
  if (p.ctx != this) throw ContextMismatch("predicate from another context");
}

void Context::check_ctx(const Variable& v) const {
  if (v.ctx != this) throw ContextMismatch("variable from another context");
}

std::vector<std::uint32_t> Context::flatten(const Variable& v) const {
  const VarInfo& vi = vars_[v.id];
  if (vi.members.empty()) return {v.id};
  std::vector<std::uint32_t> out;
  for (std::uint32_t m : vi.members) {
    auto f = flatten(Variable{this, m});
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

// ---- bit-level predicate builders ----------------------------------------

dd::NodeId Context::value_cube_node(std::uint32_t atom_id, std::uint64_t value) {
  const VarInfo& vi = vars_[atom_id];
  std::vector<dd::Lit> lits;
  std::uint32_t w = static_cast<std::uint32_t>(vi.bits.size());
  for (std::uint32_t i = 0; i < w; ++i) {
    bool bit = (value >> (w - 1 - i)) & 1; // bits[i] is the (w-1-i)-th power
    lits.push_back({vi.bits[i], bit});
  }
  return store_.cube(std::move(lits));
}

dd::NodeId Context::le_node(std::uint32_t atom_id, std::uint64_t bound) {
  const VarInfo& vi = vars_[atom_id];
  std::uint32_t w = static_cast<std::uint32_t>(vi.bits.size());
  dd::NodeId r = dd::top;
  // build from least significant bit upwards; less significant bits sit on
  // deeper levels, so children are always below the node being made
  for (std::uint32_t i = w; i-- > 0;) {
    std::uint32_t power = w - 1 - i;
    bool c = (bound >> power) & 1;
    r = c ? store_.mk(vi.bits[i], dd::top, r) : store_.mk(vi.bits[i], r, dd::bot);
  }
  return r;
}

dd::NodeId Context::ge_node(std::uint32_t atom_id, std::uint64_t bound) {
  const VarInfo& vi = vars_[atom_id];
  std::uint32_t w = static_cast<std::uint32_t>(vi.bits.size());
  dd::NodeId r = dd::top;
  for (std::uint32_t i = w; i-- > 0;) {
    std::uint32_t power = w - 1 - i;
    bool c = (bound >> power) & 1;
    r = c ? store_.mk(vi.bits[i], dd::bot, r) : store_.mk(vi.bits[i], r, dd::top);
  }
  return r;
}

dd::NodeId Context::domain_node(std::uint32_t atom_id) {
  return vars_[atom_id].domain_constraint;
}

Predicate Context::value_eq(Variable v, std::uint64_t value) {
  check_ctx(v);
  const VarInfo& vi = vars_[v.id];
  if (value >= vi.domain)
    throw OutOfDomain("value " + std::to_string(value) + " outside domain of '" +
                      vi.name + "'");
  if (vi.members.empty()) return {this, value_cube_node(v.id, value)};
  // composite: mixed radix decode, first member most significant
  dd::NodeId r = dd::top;
  std::uint64_t rest = value;
  std::vector<std::uint64_t> parts(vi.members.size());
  for (std::size_t i = vi.members.size(); i-- > 0;) {
    std::uint64_t d = vars_[vi.members[i]].domain;
    parts[i] = rest % d;
    rest /= d;
  }
  for (std::size_t i = 0; i < vi.members.size(); ++i) {
    Predicate part = value_eq(Variable{this, vi.members[i]}, parts[i]);
    r = store_.land(r, part.id);
  }
  return {this, r};
}

Predicate Context::range(Variable v, std::uint64_t lo, std::uint64_t hi) {
  check_ctx(v);
  const VarInfo& vi = vars_[v.id];
  if (!vi.members.empty())
    throw TypeMismatch("range over composite variable '" + vi.name + "'");
  if (lo > hi || hi >= vi.domain)
    throw OutOfDomain("range [" + std::to_string(lo) + "," + std::to_string(hi) +
                      "] outside domain of '" + vi.name + "'");
  dd::NodeId r = store_.land(ge_node(v.id, lo), le_node(v.id, hi));
  return canonize(r);
}

// ---- canonical form -------------------------------------------------------

/* Padding policy: a predicate is false on any assignment that drives one of
 * its support variables outside its domain, and a variable whose remaining
 * influence is only that padding guard is dropped from the support. This is
 * what makes handle equality coincide with equivalence over valid
 * assignments. Contexts without padded variables skip all of it. */
Predicate Context::canonize(dd::NodeId n) {
  if (!any_padded_ || n <= dd::top) return {this, n};
  auto levels = store_.support(n);
  std::vector<std::uint32_t> atoms;
  for (dd::Level l : levels) atoms.push_back(level_to_atom_[l]);
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  for (std::uint32_t a : atoms)
    if (vars_[a].padded) n = store_.land(n, domain_node(a));
  for (std::uint32_t a : atoms) {
    if (!vars_[a].padded) continue;
    dd::NodeId cube = store_.positive_cube(vars_[a].bits);
    dd::NodeId e = store_.exists(n, cube);
    if (store_.land(e, domain_node(a)) == n) n = e;
  }
  return {this, n};
}

// ---- boolean algebra ------------------------------------------------------

Predicate Context::conj(Predicate a, Predicate b) {
  check_ctx(a);
  check_ctx(b);
  return canonize(store_.land(a.id, b.id));
}

Predicate Context::disj(Predicate a, Predicate b) {
  check_ctx(a);
  check_ctx(b);
  return canonize(store_.lor(a.id, b.id));
}

Predicate Context::neg(Predicate a) {
  check_ctx(a);
  return canonize(store_.lnot(a.id));
}

Predicate Context::implies(Predicate a, Predicate b) {
  check_ctx(a);
  check_ctx(b);
  return canonize(store_.limplies(a.id, b.id));
}

Predicate Context::exists(const std::vector<Variable>& vars, Predicate p) {
  check_ctx(p);
  dd::NodeId cube = store_.positive_cube(atom_levels(vars));
  return canonize(store_.exists(p.id, cube));
}

Predicate Context::forall(const std::vector<Variable>& vars, Predicate p) {
  check_ctx(p);
  std::vector<dd::Level> levels = atom_levels(vars);
  dd::NodeId cube = store_.positive_cube(levels);
  // relativized: quantify over valid values only
  dd::NodeId dom = dd::top;
  if (any_padded_)
    for (const Variable& v : vars)
      for (std::uint32_t a : flatten(v))
        if (vars_[a].padded) dom = store_.land(dom, domain_node(a));
  dd::NodeId bad = store_.and_exists(dom, store_.lnot(p.id), cube);
  return canonize(store_.lnot(bad));
}

Predicate Context::rename(Predicate p,
                          const std::vector<std::pair<Variable, Variable>>& map) {
  check_ctx(p);
  // expand to atom pairs
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (const auto& [from, to] : map) {
    check_ctx(from);
    check_ctx(to);
    auto fa = flatten(from), ta = flatten(to);
    if (fa.size() != ta.size())
      throw TypeMismatch("rename shape mismatch between '" + vars_[from.id].name +
                         "' and '" + vars_[to.id].name + "'");
    for (std::size_t i = 0; i < fa.size(); ++i) {
      if (vars_[fa[i]].domain != vars_[ta[i]].domain)
        throw TypeMismatch("rename domain mismatch: '" + vars_[fa[i]].name +
                           "' vs '" + vars_[ta[i]].name + "'");
      pairs.emplace_back(fa[i], ta[i]);
    }
  }
  std::vector<std::uint32_t> froms, tos;
  for (auto& [f, t] : pairs) {
    froms.push_back(f);
    tos.push_back(t);
  }
  std::sort(froms.begin(), froms.end());
  std::sort(tos.begin(), tos.end());
  if (std::adjacent_find(froms.begin(), froms.end()) != froms.end() ||
      std::adjacent_find(tos.begin(), tos.end()) != tos.end())
    throw TypeMismatch("rename map repeats a variable");
  for (std::uint32_t t : tos)
    if (std::binary_search(froms.begin(), froms.end(), t))
      throw TypeMismatch("rename source also used as target");
  // targets must be fresh in p
  auto supp = store_.support(p.id);
  std::vector<bool> supp_level(next_level_, false);
  for (dd::Level l : supp) supp_level[l] = true;
  for (std::uint32_t t : tos)
    for (dd::Level l : vars_[t].bits)
      if (supp_level[l])
        throw TypeMismatch("rename target '" + vars_[t].name +
                           "' already occurs in the predicate");

  // try the cheap path: a level permutation that keeps the order
  std::vector<dd::Level> levmap(next_level_);
  for (dd::Level l = 0; l < next_level_; ++l) levmap[l] = l;
  for (auto& [f, t] : pairs) {
    const auto& fb = vars_[f].bits;
    const auto& tb = vars_[t].bits;
    for (std::size_t i = 0; i < fb.size(); ++i) levmap[fb[i]] = tb[i];
  }
  bool monotone = true;
  dd::Level prev = 0;
  bool first = true;
  for (dd::Level l : supp) {
    dd::Level m = levmap[l];
    if (!first && m <= prev) {
      monotone = false;
      break;
    }
    prev = m;
    first = false;
  }
  if (monotone) return canonize(store_.permute(p.id, levmap));

  // general path: conjoin bit equalities and quantify the old bits away
  dd::NodeId bridge = dd::top;
  std::vector<dd::Level> old_levels;
  for (auto& [f, t] : pairs) {
    const auto& fb = vars_[f].bits;
    const auto& tb = vars_[t].bits;
    for (std::size_t i = 0; i < fb.size(); ++i) {
      dd::NodeId eq = store_.lnot(store_.lxor(store_.literal(fb[i], true),
                                              store_.literal(tb[i], true)));
      bridge = store_.land(bridge, eq);
      old_levels.push_back(fb[i]);
    }
  }
  dd::NodeId cube = store_.positive_cube(old_levels);
  return canonize(store_.and_exists(p.id, bridge, cube));
}

// ---- queries --------------------------------------------------------------

bool Context::equivalent(Predicate a, Predicate b) const {
  check_ctx(a);
  check_ctx(b);
  return a.id == b.id;
}

std::vector<dd::Level> Context::atom_levels(const std::vector<Variable>& vars) const {
  std::vector<dd::Level> levels;
  for (const Variable& v : vars) {
    check_ctx(v);
    for (std::uint32_t a : flatten(v))
      levels.insert(levels.end(), vars_[a].bits.begin(), vars_[a].bits.end());
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  return levels;
}

std::vector<Variable>
Context::sorted_atoms(const std::vector<Variable>& vars) const {
  std::vector<std::uint32_t> ids;
  for (const Variable& v : vars) {
    check_ctx(v);
    auto f = flatten(v);
    ids.insert(ids.end(), f.begin(), f.end());
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw SupportError("variable listed twice");
  std::vector<Variable> out;
  for (std::uint32_t id : ids) out.push_back(Variable{this, id});
  return out;
}

unsigned __int128 Context::count_sat_wide(Predicate p,
                                          const std::vector<Variable>& vars) {
  check_ctx(p);
  std::vector<Variable> atoms = sorted_atoms(vars);
  std::vector<dd::Level> levels;
  std::vector<bool> have(next_level_, false);
  dd::NodeId b = p.id;
  for (const Variable& v : atoms) {
    for (dd::Level l : vars_[v.id].bits) {
      levels.push_back(l);
      have[l] = true;
    }
    if (vars_[v.id].padded) b = store_.land(b, domain_node(v.id));
  }
  for (dd::Level l : store_.support(p.id))
    if (!have[l])
      throw SupportError("count_sat: variable list does not cover the support");
  std::sort(levels.begin(), levels.end());
  return store_.sat_count(b, levels);
}

std::uint64_t Context::count_sat(Predicate p, const std::vector<Variable>& vars) {
  unsigned __int128 c = count_sat_wide(p, vars);
  if (c > (unsigned __int128)UINT64_MAX)
    throw CountOverflow("satisfying assignment count exceeds 2^64");
  return static_cast<std::uint64_t>(c);
}

std::vector<Variable> Context::enumerate_sat(
    Predicate p, const std::vector<Variable>& vars,
    const std::function<void(const std::vector<std::uint64_t>&)>& visit) {
  check_ctx(p);
  std::vector<Variable> atoms = sorted_atoms(vars);
  std::vector<bool> have(next_level_, false);
  for (const Variable& v : atoms)
    for (dd::Level l : vars_[v.id].bits) have[l] = true;
  for (dd::Level l : store_.support(p.id))
    if (!have[l])
      throw SupportError("enumerate_sat: variable list does not cover the support");

  std::vector<std::uint64_t> assign(atoms.size(), 0);
  std::function<void(std::size_t, dd::NodeId)> rec = [&](std::size_t i,
                                                         dd::NodeId n) {
    if (n == dd::bot) return;
    if (i == atoms.size()) {
      if (n == dd::top) visit(assign);
      return;
    }
    const VarInfo& vi = vars_[atoms[i].id];
    std::uint32_t w = static_cast<std::uint32_t>(vi.bits.size());
    for (std::uint64_t val = 0; val < vi.domain; ++val) {
      std::vector<dd::Lit> lits;
      for (std::uint32_t k = 0; k < w; ++k)
        lits.push_back({vi.bits[k], ((val >> (w - 1 - k)) & 1) != 0});
      std::sort(lits.begin(), lits.end(),
                [](const dd::Lit& a, const dd::Lit& b) { return a.level < b.level; });
      dd::NodeId r = store_.restrict_cube(n, lits);
      if (r == dd::bot) continue;
      assign[i] = val;
      rec(i + 1, r);
    }
  };
  rec(0, p.id);
  return atoms;
}

std::optional<std::vector<std::uint64_t>>
Context::pick_sat(Predicate p, const std::vector<Variable>& vars) {
  check_ctx(p);
  std::vector<dd::Level> levels;
  for (const Variable& v : vars) {
    check_ctx(v);
    for (std::uint32_t a : flatten(v))
      levels.insert(levels.end(), vars_[a].bits.begin(), vars_[a].bits.end());
  }
  std::sort(levels.begin(), levels.end());
  std::vector<bool> bits;
  if (!store_.pick_one(p.id, levels, bits)) return std::nullopt;
  std::unordered_map<dd::Level, bool> by_level;
  for (std::size_t i = 0; i < levels.size(); ++i) by_level[levels[i]] = bits[i];
  std::vector<std::uint64_t> out;
  // composite values re-assemble mixed radix over member atoms
  std::function<std::uint64_t(std::uint32_t)> value_of =
      [&](std::uint32_t id) -> std::uint64_t {
    const VarInfo& vi = vars_[id];
    if (vi.members.empty()) {
      std::uint64_t val = 0;
      std::uint32_t w = static_cast<std::uint32_t>(vi.bits.size());
      for (std::uint32_t k = 0; k < w; ++k)
        val = (val << 1) | (by_level.count(vi.bits[k]) && by_level[vi.bits[k]] ? 1 : 0);
      return val;
    }
    std::uint64_t val = 0;
    for (std::uint32_t m : vi.members) val = val * vars_[m].domain + value_of(m);
    return val;
  };
  for (const Variable& v : vars) out.push_back(value_of(v.id));
  return out;
}

bool Context::eval(Predicate p, const std::vector<Variable>& vars,
                   const std::vector<std::uint64_t>& values) const {
  check_ctx(p);
  if (values.size() != vars.size())
    throw SupportError("eval: values do not align with variables");
  std::vector<signed char> bit(next_level_, -1);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    check_ctx(vars[i]);
    const VarInfo& vi = vars_[vars[i].id];
    if (!vi.members.empty())
      throw TypeMismatch("eval expects atomic variables");
    if (values[i] >= vi.domain)
      throw OutOfDomain("eval: value outside domain of '" + vi.name + "'");
    std::uint32_t w = static_cast<std::uint32_t>(vi.bits.size());
    for (std::uint32_t k = 0; k < w; ++k)
      bit[vi.bits[k]] = static_cast<signed char>((values[i] >> (w - 1 - k)) & 1);
  }
  return store_.eval(p.id, [&](dd::Level l) {
    if (bit[l] < 0)
      throw SupportError("eval: assignment does not cover the support");
    return bit[l] == 1;
  });
}

std::vector<Variable> Context::support_vars(Predicate p) const {
  check_ctx(p);
  auto levels = store_.support(p.id);
  std::vector<std::uint32_t> ids;
  for (dd::Level l : levels) ids.push_back(level_to_atom_[l]);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<Variable> out;
  for (std::uint32_t id : ids) out.push_back(Variable{this, id});
  return out;
}

Predicate Context::fix(Predicate p, Variable v, std::uint64_t value) {
  check_ctx(p);
  check_ctx(v);
  const VarInfo& vi = vars_[v.id];
  if (value >= vi.domain) throw OutOfDomain("fix: value outside domain");
  if (!vi.members.empty()) {
    // decompose and fix each member
    std::uint64_t rest = value;
    std::vector<std::uint64_t> parts(vi.members.size());
    for (std::size_t i = vi.members.size(); i-- > 0;) {
      std::uint64_t d = vars_[vi.members[i]].domain;
      parts[i] = rest % d;
      rest /= d;
    }
    Predicate cur = p;
    for (std::size_t i = 0; i < vi.members.size(); ++i)
      cur = fix(cur, Variable{this, vi.members[i]}, parts[i]);
    return cur;
  }
  std::vector<dd::Lit> lits;
  std::uint32_t w = static_cast<std::uint32_t>(vi.bits.size());
  for (std::uint32_t k = 0; k < w; ++k)
    lits.push_back({vi.bits[k], ((value >> (w - 1 - k)) & 1) != 0});
  std::sort(lits.begin(), lits.end(),
            [](const dd::Lit& a, const dd::Lit& b) { return a.level < b.level; });
  return canonize(store_.restrict_cube(p.id, lits));
}

const std::vector<dd::Level>& Context::bit_levels(Variable v) const {
  check_ctx(v);
  return vars_[v.id].bits;
}

const std::string& Context::var_name(Variable v) const {
  check_ctx(v);
  return vars_[v.id].name;
}

std::uint64_t Context::var_domain(Variable v) const {
  check_ctx(v);
  return vars_[v.id].domain;
}

bool Context::var_composite(Variable v) const {
  check_ctx(v);
  return !vars_[v.id].members.empty();
}

std::vector<Variable> Context::var_members(Variable v) const {
  check_ctx(v);
  std::vector<Variable> out;
  for (std::uint32_t m : vars_[v.id].members) out.push_back(Variable{this, m});
  return out;
}

} // namespace symcomp
