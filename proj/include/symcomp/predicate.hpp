#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "symcomp/bdd.hpp"
#include "symcomp/errors.hpp"

namespace symcomp {

class Context;

/// Handle to a declared variable. Cheap to copy; only meaningful together
/// with the context that declared it.
struct Variable {
  const Context* ctx = nullptr;
  std::uint32_t id = 0;

  const std::string& name() const;
  std::uint64_t domain_size() const;
  std::uint32_t bit_width() const;
  bool is_composite() const;
  std::vector<Variable> members() const; // atoms, in bundle order

  friend bool operator==(const Variable& a, const Variable& b) {
    return a.ctx == b.ctx && a.id == b.id;
  }
  friend bool operator<(const Variable& a, const Variable& b) {
    return a.id < b.id;
  }
};

/// Canonical predicate handle. Two predicates from the same context denote
/// the same set iff their ids are equal; padding assignments of non power
/// of two domains are never satisfying.
struct Predicate {
  Context* ctx = nullptr;
  dd::NodeId id = dd::bot;

  friend bool operator==(const Predicate& a, const Predicate& b) {
    return a.ctx == b.ctx && a.id == b.id;
  }
};

/// Variable registry plus the decision-diagram store behind all predicates
/// of one synthesis run. Single-threaded; create one context per thread and
/// exchange predicates through the serialized artifact format if you want
/// parallel abstraction jobs.
class Context {
public:
  explicit Context(std::uint64_t node_limit = dd::Store::default_node_limit());
  Context(const Context&) = delete;
  Context& operator=(const Context&) = delete;

  /// Declare one finite variable. Encoded in ceil(log2(n)) bits, most
  /// significant bit on the topmost of its levels. n == 1 is legal and
  /// occupies zero bits.
  Variable declare(const std::string& name, std::uint64_t domain_size);

  /// Declare several variables with their bits interleaved (MSB first,
  /// round robin). Use for pairs that must stay close in the order:
  /// pre/post state variables, sample/cell pairs, and the like.
  std::vector<Variable>
  declare_interleaved(const std::vector<std::pair<std::string, std::uint64_t>>& group);

  /// Declare a whole variable block with an explicit bit layout:
  /// level_owner[l] is the index (into `group`) of the variable owning level
  /// l, and each variable's levels are assigned most significant first. Only
  /// legal on a context with no declarations yet; the artifact loader uses
  /// this to reproduce a dumped layout exactly.
  std::vector<Variable>
  declare_layout(const std::vector<std::pair<std::string, std::uint64_t>>& group,
                 const std::vector<std::uint32_t>& level_owner);

  /// Composite variable over previously declared atoms. The joint value is
  /// mixed-radix, first member most significant. Bundling a single variable
  /// returns it unchanged; repeated members are rejected.
  Variable bundle(const std::vector<Variable>& members);

  std::optional<Variable> find(const std::string& name) const;
  Variable var(const std::string& name) const; // throws ValidationError if absent
  std::vector<Variable> atoms() const;         // all atomic vars, declaration order

  Predicate tru() { return {this, dd::top}; }
  Predicate fls() { return {this, dd::bot}; }
  Predicate value_eq(Variable v, std::uint64_t value);
  Predicate range(Variable v, std::uint64_t lo, std::uint64_t hi); // lo<=v<=hi

  // boolean algebra -------------------------------------------------------
  Predicate conj(Predicate a, Predicate b);
  Predicate disj(Predicate a, Predicate b);
  Predicate neg(Predicate a);
  Predicate implies(Predicate a, Predicate b);
  Predicate exists(const std::vector<Variable>& vars, Predicate p);
  Predicate forall(const std::vector<Variable>& vars, Predicate p);

  /// Substitute variables: map.first is renamed to map.second. Targets must
  /// have equal domain sizes and must not occur in the support of p.
  Predicate rename(Predicate p,
                   const std::vector<std::pair<Variable, Variable>>& map);

  // queries ---------------------------------------------------------------
  bool equivalent(Predicate a, Predicate b) const;
  bool is_tautology(Predicate p) const { return p.id == dd::top; }
  bool is_unsat(Predicate p) const { return p.id == dd::bot; }

  /// Satisfying assignments counted over exactly `vars` (which must cover
  /// the support of p). Padding never counts.
  std::uint64_t count_sat(Predicate p, const std::vector<Variable>& vars);
  unsigned __int128 count_sat_wide(Predicate p, const std::vector<Variable>& vars);

  /// Enumerate assignments in lexicographic (declaration order, value
  /// index) order. The visitor receives values aligned with `vars` sorted
  /// by declaration order (the sorted list is returned).
  std::vector<Variable>
  enumerate_sat(Predicate p, const std::vector<Variable>& vars,
                const std::function<void(const std::vector<std::uint64_t>&)>& visit);

  /// First satisfying assignment in the deterministic diagram walk, or
  /// nullopt. Values aligned with `vars` as given.
  std::optional<std::vector<std::uint64_t>>
  pick_sat(Predicate p, const std::vector<Variable>& vars);

  /// Evaluate under a full assignment (values aligned with `vars`; every
  /// support variable must be covered).
  bool eval(Predicate p, const std::vector<Variable>& vars,
            const std::vector<std::uint64_t>& values) const;

  /// Atomic variables occurring in p, declaration order.
  std::vector<Variable> support_vars(Predicate p) const;

  /// Restrict p by fixing var = value.
  Predicate fix(Predicate p, Variable v, std::uint64_t value);

  // plumbing --------------------------------------------------------------
  dd::Store& store() { return store_; }
  const dd::Store& store() const { return store_; }
  std::size_t node_count() const { return store_.node_count(); }
  std::size_t predicate_size(Predicate p) const { return store_.dag_size(p.id); }
  std::uint32_t var_count() const { return static_cast<std::uint32_t>(vars_.size()); }

  /// Raw predicate from a diagram node; used by the io layer. The node must
  /// already satisfy the padding invariants.
  Predicate adopt(dd::NodeId id) { return {this, id}; }

  const std::vector<dd::Level>& bit_levels(Variable v) const; // MSB first
  const std::string& var_name(Variable v) const;
  std::uint64_t var_domain(Variable v) const;
  bool var_composite(Variable v) const;
  std::vector<Variable> var_members(Variable v) const;

private:
  struct VarInfo {
    std::string name;
    std::uint64_t domain;
    std::vector<dd::Level> bits;        // MSB first
    std::vector<std::uint32_t> members; // empty for atomic vars
    dd::NodeId domain_constraint = dd::top;
    bool padded = false; // domain not a power of two
  };

  void check_ctx(const Predicate& p) const;
  void check_ctx(const Variable& v) const;
  std::vector<std::uint32_t> flatten(const Variable& v) const; // atom ids
  std::vector<Variable> sorted_atoms(const std::vector<Variable>& vars) const;
  dd::NodeId domain_node(std::uint32_t atom_id);
  dd::NodeId value_cube_node(std::uint32_t atom_id, std::uint64_t value);
  dd::NodeId le_node(std::uint32_t atom_id, std::uint64_t bound);
  dd::NodeId ge_node(std::uint32_t atom_id, std::uint64_t bound);
  Predicate canonize(dd::NodeId n);
  std::vector<dd::Level> atom_levels(const std::vector<Variable>& vars) const;

  std::vector<VarInfo> vars_;
  std::unordered_map<std::string, std::uint32_t> by_name_;
  std::unordered_map<std::string, std::uint32_t> bundles_; // member-id key
  std::vector<std::uint32_t> level_to_atom_;
  dd::Store store_;
  dd::Level next_level_ = 0;
  bool any_padded_ = false;
};

// free-function spellings, matching the operation names used throughout
inline Predicate conj(Predicate a, Predicate b) { return a.ctx->conj(a, b); }
inline Predicate disj(Predicate a, Predicate b) { return a.ctx->disj(a, b); }
inline Predicate neg(Predicate a) { return a.ctx->neg(a); }
inline Predicate implies(Predicate a, Predicate b) { return a.ctx->implies(a, b); }
inline Predicate exists(const std::vector<Variable>& vars, Predicate p) {
  return p.ctx->exists(vars, p);
}
inline Predicate forall(const std::vector<Variable>& vars, Predicate p) {
  return p.ctx->forall(vars, p);
}
inline bool equivalent(Predicate a, Predicate b) { return a.ctx->equivalent(a, b); }
inline bool is_tautology(Predicate p) { return p.ctx->is_tautology(p); }
inline bool is_unsat(Predicate p) { return p.ctx->is_unsat(p); }

} // namespace symcomp
