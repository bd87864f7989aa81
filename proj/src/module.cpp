#include "symcomp/module.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace symcomp {

namespace {

std::vector<Variable> sorted_unique(std::vector<Variable> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<Variable> intersect(const std::vector<Variable>& a,
                                const std::vector<Variable>& b) {
  std::vector<Variable> sa = sorted_unique(a), sb = sorted_unique(b), out;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                        std::back_inserter(out));
  return out;
}

std::vector<Variable> unite(const std::vector<Variable>& a,
                            const std::vector<Variable>& b) {
  std::vector<Variable> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return sorted_unique(out);
}

std::vector<Variable> minus(const std::vector<Variable>& a,
                            const std::vector<Variable>& b) {
  std::vector<Variable> sa = sorted_unique(a), sb = sorted_unique(b), out;
  std::set_difference(sa.begin(), sa.end(), sb.begin(), sb.end(),
                      std::back_inserter(out));
  return out;
}

std::string joined_names(const std::vector<Variable>& vars) {
  std::string s;
  for (const Variable& v : vars) {
    if (!s.empty())
      s += ", ";
    s += v.name();
  }
  return s;
}

} // namespace

FiniteModule::FiniteModule(std::string name, std::vector<Variable> inputs,
                           std::vector<Variable> outputs, Predicate constraint)
    : name_(std::move(name)), inputs_(std::move(inputs)),
      outputs_(std::move(outputs)), constraint_(constraint) {
  Context* ctx = constraint_.ctx;
  std::set<std::uint32_t> seen;
  auto check = [&](const std::vector<Variable>& vars, const char* role) {
    for (const Variable& v : vars) {
      if (v.ctx != ctx)
        throw ContextMismatch("module '" + name_ + "': " + role + " variable '" +
                              v.name() + "' comes from a different context");
      if (v.is_composite())
        throw TypeMismatch("module '" + name_ + "': " + role + " variable '" +
                           v.name() + "' is composite; list its members instead");
      if (!seen.insert(v.id).second)
        throw SupportError("module '" + name_ + "': variable '" + v.name() +
                           "' listed twice across inputs/outputs");
    }
  };
  check(inputs_, "input");
  check(outputs_, "output");
  for (const Variable& v : ctx->support_vars(constraint_)) {
    if (!seen.count(v.id))
      throw SupportError("module '" + name_ + "': constraint mentions '" +
                         v.name() + "', which is neither input nor output");
  }
}

Predicate FiniteModule::nonblocking() const {
  if (!nb_)
    nb_ = ctx().exists(outputs_, constraint_);
  return *nb_;
}

FiniteModule compose2(const FiniteModule& a, const FiniteModule& b,
                      std::string name) {
  if (&a.ctx() != &b.ctx())
    throw ContextMismatch("compose2: '" + a.name() + "' and '" + b.name() +
                          "' live in different contexts");
  Context& ctx = a.ctx();

  std::vector<Variable> clash = intersect(a.outputs(), b.outputs());
  if (!clash.empty())
    throw OutputClash("compose2: '" + a.name() + "' and '" + b.name() +
                      "' both drive " + joined_names(clash));

  bool a_feeds_b = !intersect(a.outputs(), b.inputs()).empty();
  bool b_feeds_a = !intersect(b.outputs(), a.inputs()).empty();
  if (a_feeds_b && b_feeds_a)
    throw AlgebraicLoop("compose2: '" + a.name() + "' and '" + b.name() +
                        "' feed each other");
  // parallel composition (no shared wires) runs through the same formula;
  // the guard below degenerates to nonblocking(a) => nonblocking(b), which
  // the conjunction already implies
  const FiniteModule& m1 = b_feeds_a ? b : a;
  const FiniteModule& m2 = b_feeds_a ? a : b;

  if (name.empty())
    name = "(" + m1.name() + "." + m2.name() + ")";

  std::vector<Variable> out12 = unite(m1.outputs(), m2.outputs());
  std::vector<Variable> in12 = minus(unite(m1.inputs(), m2.inputs()), m1.outputs());

  Predicate joint = ctx.conj(m1.constraint(), m2.constraint());
  Predicate nb2 = m2.nonblocking();
  Predicate guard = ctx.tru();
  if (!ctx.is_tautology(nb2))
    guard = ctx.forall(out12, ctx.implies(m1.constraint(), nb2));
  return FiniteModule(std::move(name), std::move(in12), std::move(out12),
                      ctx.conj(joint, guard));
}

FiniteModule compose_all(const std::vector<FiniteModule>& modules,
                         std::string name) {
  if (modules.empty())
    throw ValidationError("compose_all: empty module list");
  std::map<std::string, std::size_t> by_name;
  for (std::size_t i = 0; i < modules.size(); ++i)
    if (!by_name.emplace(modules[i].name(), i).second)
      throw ValidationError("compose_all: duplicate module name '" +
                            modules[i].name() + "'");

  // consumers[i] = modules that read one of module i's outputs
  std::vector<std::set<std::size_t>> consumers(modules.size());
  for (std::size_t i = 0; i < modules.size(); ++i)
    for (std::size_t j = 0; j < modules.size(); ++j)
      if (i != j && !intersect(modules[i].outputs(), modules[j].inputs()).empty())
        consumers[i].insert(j);

  // pop sinks first so each step composes a feeder into the accumulator
  std::vector<std::size_t> pending(modules.size(), 0);
  std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
  for (std::size_t i = 0; i < modules.size(); ++i) {
    pending[i] = consumers[i].size();
    if (pending[i] == 0)
      ready.push(modules[i].name());
  }

  std::optional<FiniteModule> acc;
  std::vector<bool> done(modules.size(), false);
  std::size_t processed = 0;
  while (!ready.empty()) {
    std::size_t i = by_name.at(ready.top());
    ready.pop();
    done[i] = true;
    ++processed;
    acc = acc ? compose2(modules[i], *acc) : modules[i];
    for (std::size_t j = 0; j < modules.size(); ++j)
      if (!done[j] && consumers[j].count(i) && --pending[j] == 0)
        ready.push(modules[j].name());
  }
  if (processed != modules.size()) {
    std::string cyc;
    for (std::size_t i = 0; i < modules.size(); ++i)
      if (!done[i])
        cyc += (cyc.empty() ? "" : ", ") + modules[i].name();
    throw AlgebraicLoop("compose_all: dependency cycle among " + cyc);
  }
  return FiniteModule(name.empty() ? acc->name() : std::move(name),
                      acc->inputs(), acc->outputs(), acc->constraint());
}

FiniteModule hide(const FiniteModule& m, const std::vector<Variable>& hidden,
                  std::string name) {
  std::vector<Variable> outs = sorted_unique(m.outputs());
  for (const Variable& v : hidden)
    if (!std::binary_search(outs.begin(), outs.end(), v))
      throw NotAnOutput("hide: '" + v.name() + "' is not an output of '" +
                        m.name() + "'");
  return FiniteModule(name.empty() ? m.name() : std::move(name), m.inputs(),
                      minus(m.outputs(), hidden),
                      m.ctx().exists(hidden, m.constraint()));
}

ControlModule as_control(const FiniteModule& m,
                         const std::vector<std::pair<Variable, Variable>>& pairs,
                         const std::vector<Variable>& controls) {
  if (pairs.empty())
    throw PairingError("as_control: no state pairs given");
  std::set<std::uint32_t> ins, outs, used_in, used_out;
  for (const Variable& v : m.inputs())
    ins.insert(v.id);
  for (const Variable& v : m.outputs())
    outs.insert(v.id);

  std::vector<Variable> states, primed;
  for (const auto& [x, xp] : pairs) {
    if (!ins.count(x.id))
      throw PairingError("as_control: state '" + x.name() + "' is not an input of '" +
                         m.name() + "'");
    if (!outs.count(xp.id))
      throw PairingError("as_control: next-state '" + xp.name() +
                         "' is not an output of '" + m.name() + "'");
    if (x.domain_size() != xp.domain_size())
      throw PairingError("as_control: '" + x.name() + "' and '" + xp.name() +
                         "' have different domains");
    if (!used_in.insert(x.id).second || !used_out.insert(xp.id).second)
      throw PairingError("as_control: variable paired twice");
    states.push_back(x);
    primed.push_back(xp);
  }
  for (const Variable& u : controls) {
    if (!ins.count(u.id))
      throw PairingError("as_control: control '" + u.name() + "' is not an input of '" +
                         m.name() + "'");
    if (used_in.count(u.id))
      throw PairingError("as_control: '" + u.name() + "' is both state and control");
    used_in.insert(u.id);
  }
  for (const Variable& v : m.inputs())
    if (!used_in.count(v.id))
      throw PairingError("as_control: input '" + v.name() +
                         "' is neither a paired state nor a control");
  for (const Variable& v : m.outputs())
    if (!used_out.count(v.id))
      throw PairingError("as_control: output '" + v.name() +
                         "' is unpaired; hide latent outputs first");
  return ControlModule{m, std::move(states), std::vector<Variable>(controls),
                       std::move(primed)};
}

} // namespace symcomp
