#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "symcomp/errors.hpp"

namespace symcomp::dd {

using NodeId = std::uint32_t;
using Level = std::uint32_t;

inline constexpr NodeId bot = 0; // constant false
inline constexpr NodeId top = 1; // constant true
inline constexpr Level terminal_level = 0xffffffffu;

/// One literal of a cube: decision level plus the branch it fixes.
struct Lit {
  Level level;
  bool value;
};

/// Reduced ordered BDD store. Nodes are hash-consed, so two predicates
/// denote the same boolean function iff they carry the same NodeId. The
/// operation cache is lossy (direct mapped) which bounds memory without
/// affecting results. No garbage collection: stores are meant to live for
/// one synthesis run and be dropped afterwards. Single-threaded by design;
/// run independent stores on independent threads if you need parallelism.
class Store {
public:
  explicit Store(std::uint64_t node_limit = default_node_limit());

  /// Node limit derived from the SYMCOMP_DD_MEM_MB environment variable
  /// (roughly 24 bytes of working memory per node), with a default that
  /// stays comfortably inside an 8 GB machine.
  static std::uint64_t default_node_limit();

  NodeId mk(Level level, NodeId lo, NodeId hi);
  NodeId literal(Level level, bool value);

  NodeId ite(NodeId f, NodeId g, NodeId h);
  NodeId land(NodeId f, NodeId g) { return ite(f, g, bot); }
  NodeId lor(NodeId f, NodeId g) { return ite(f, top, g); }
  NodeId lnot(NodeId f) { return ite(f, bot, top); }
  NodeId lxor(NodeId f, NodeId g);
  NodeId limplies(NodeId f, NodeId g) { return ite(f, g, top); }

  /// Conjunction of literals. The input need not be sorted.
  NodeId cube(std::vector<Lit> lits);
  /// Conjunction of positive literals over the given levels.
  NodeId positive_cube(std::vector<Level> levels);

  /// Quantification. `cube` must be a positive cube naming the levels.
  NodeId exists(NodeId f, NodeId cube);
  NodeId forall(NodeId f, NodeId cube);
  /// exists(cube, f AND g) without building the conjunction first.
  NodeId and_exists(NodeId f, NodeId g, NodeId cube);

  /// Fix some levels to constants. `lits` must be sorted by level.
  NodeId restrict_cube(NodeId f, const std::vector<Lit>& lits);

  /// Rebuild f with every level l replaced by map[l]. Caller guarantees the
  /// map is strictly increasing on the support of f (checked) — use the
  /// equality-bridge fallback in the caller otherwise.
  NodeId permute(NodeId f, const std::vector<Level>& map);

  /// Levels occurring in f, ascending.
  std::vector<Level> support(NodeId f) const;

  /// Number of satisfying assignments over exactly the given levels
  /// (ascending, must cover the support of f).
  unsigned __int128 sat_count(NodeId f, const std::vector<Level>& over);

  /// Deterministic satisfying assignment: walks the diagram preferring the
  /// low branch. Levels not on the chosen path default to 0. Returns false
  /// when f is unsatisfiable.
  bool pick_one(NodeId f, const std::vector<Level>& over,
                std::vector<bool>& out);

  /// Evaluate under a full assignment.
  bool eval(NodeId f, const std::function<bool(Level)>& bits) const;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t dag_size(NodeId f) const;

  Level level(NodeId n) const { return nodes_[n].level; }
  NodeId low(NodeId n) const { return nodes_[n].lo; }
  NodeId high(NodeId n) const { return nodes_[n].hi; }

private:
  struct Node {
    Level level;
    NodeId lo, hi;
  };

  enum class Op : std::uint8_t { Ite = 1, Exists = 2, AndExists = 3, Xor = 4 };

  struct CacheSlot {
    std::uint64_t k1 = ~0ull, k2 = ~0ull;
    NodeId result = 0;
  };

  NodeId ite_rec(NodeId f, NodeId g, NodeId h);
  NodeId exists_rec(NodeId f, NodeId cube);
  NodeId and_exists_rec(NodeId f, NodeId g, NodeId cube);
  NodeId xor_rec(NodeId f, NodeId g);
  NodeId permute_rec(NodeId f, const std::vector<Level>& map,
                     std::unordered_map<NodeId, NodeId>& memo);
  NodeId restrict_rec(NodeId f, const std::vector<Lit>& lits, std::size_t i,
                      std::unordered_map<std::uint64_t, NodeId>& memo);

  bool cache_get(Op op, NodeId a, NodeId b, NodeId c, NodeId& out) const;
  void cache_put(Op op, NodeId a, NodeId b, NodeId c, NodeId result);
  void maybe_grow();

  std::vector<Node> nodes_;
  std::vector<NodeId> unique_; // open addressing, 0 = empty slot
  std::size_t unique_mask_ = 0;
  std::vector<CacheSlot> cache_;
  std::size_t cache_mask_ = 0;
  std::uint64_t node_limit_;
};

} // namespace symcomp::dd
