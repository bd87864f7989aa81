#include "symcomp/bdd.hpp"

#include <algorithm>
#include <cstdlib>
#include <cassert>

namespace symcomp::dd {

namespace {

inline std::uint64_t mix(std::uint64_t x) {
  // splitmix64 finalizer, good enough for table hashing
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t hash3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix(a * 0x100000001b3ull + mix(b * 0x1000193ull + c));
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

} // namespace

std::uint64_t Store::default_node_limit() {
  std::uint64_t mb = 6144; // leave headroom on an 8 GB machine
  if (const char* env = std::getenv("SYMCOMP_DD_MEM_MB")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) mb = v;
  }
  return mb * 1024ull * 1024ull / 24ull; // ~24 bytes per node incl. tables
}

Store::Store(std::uint64_t node_limit) : node_limit_(node_limit) {
  nodes_.push_back({terminal_level, 0, 0}); // bot
  nodes_.push_back({terminal_level, 1, 1}); // top
  unique_.assign(1 << 14, 0);
  unique_mask_ = unique_.size() - 1;
  cache_.assign(1 << 14, CacheSlot{});
  cache_mask_ = cache_.size() - 1;
}

NodeId Store::mk(Level level, NodeId lo, NodeId hi) {
  if (lo == hi) return lo;
  assert(nodes_[lo].level > level && nodes_[hi].level > level);
  std::uint64_t h = hash3(level, lo, hi);
  std::size_t slot = h & unique_mask_;
  while (unique_[slot] != 0) {
    const Node& n = nodes_[unique_[slot]];
    if (n.level == level && n.lo == lo && n.hi == hi) return unique_[slot];
    slot = (slot + 1) & unique_mask_;
  }
  if (nodes_.size() >= node_limit_)
    throw MemoryCap("decision diagram node limit exceeded (" +
                    std::to_string(node_limit_) +
                    " nodes); raise SYMCOMP_DD_MEM_MB");
  NodeId id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back({level, lo, hi});
  unique_[slot] = id;
  maybe_grow();
  return id;
}

void Store::maybe_grow() {
  if (nodes_.size() * 10 >= unique_.size() * 7) {
    std::vector<NodeId> old;
    old.swap(unique_);
    unique_.assign(old.size() * 2, 0);
    unique_mask_ = unique_.size() - 1;
    for (NodeId id : old) {
      if (id == 0) continue;
      const Node& n = nodes_[id];
      std::size_t slot = hash3(n.level, n.lo, n.hi) & unique_mask_;
      while (unique_[slot] != 0) slot = (slot + 1) & unique_mask_;
      unique_[slot] = id;
    }
  }
  // keep the lossy cache roughly a quarter of the node count
  std::size_t want = std::clamp<std::size_t>(next_pow2(nodes_.size() / 4),
                                             1 << 14, 1 << 23);
  if (want > cache_.size()) {
    cache_.assign(want, CacheSlot{});
    cache_mask_ = want - 1;
  }
}

NodeId Store::literal(Level level, bool value) {
  return value ? mk(level, bot, top) : mk(level, top, bot);
}

bool Store::cache_get(Op op, NodeId a, NodeId b, NodeId c, NodeId& out) const {
  std::uint64_t k1 = (std::uint64_t(static_cast<std::uint8_t>(op)) << 32) | a;
  std::uint64_t k2 = (std::uint64_t(b) << 32) | c;
  const CacheSlot& s = cache_[hash3(k1, k2, 0) & cache_mask_];
  if (s.k1 == k1 && s.k2 == k2) {
    out = s.result;
    return true;
  }
  return false;
}

void Store::cache_put(Op op, NodeId a, NodeId b, NodeId c, NodeId result) {
  std::uint64_t k1 = (std::uint64_t(static_cast<std::uint8_t>(op)) << 32) | a;
  std::uint64_t k2 = (std::uint64_t(b) << 32) | c;
  CacheSlot& s = cache_[hash3(k1, k2, 0) & cache_mask_];
  s.k1 = k1;
  s.k2 = k2;
  s.result = result;
}

NodeId Store::ite(NodeId f, NodeId g, NodeId h) { return ite_rec(f, g, h); }

NodeId Store::ite_rec(NodeId f, NodeId g, NodeId h) {
  if (f == top) return g;
  if (f == bot) return h;
  if (g == h) return g;
  if (g == top && h == bot) return f;
  NodeId out;
  if (cache_get(Op::Ite, f, g, h, out)) return out;
  Level lf = nodes_[f].level, lg = nodes_[g].level, lh = nodes_[h].level;
  Level l = std::min(lf, std::min(lg, lh));
  NodeId f0 = lf == l ? nodes_[f].lo : f, f1 = lf == l ? nodes_[f].hi : f;
  NodeId g0 = lg == l ? nodes_[g].lo : g, g1 = lg == l ? nodes_[g].hi : g;
  NodeId h0 = lh == l ? nodes_[h].lo : h, h1 = lh == l ? nodes_[h].hi : h;
  NodeId rlo = ite_rec(f0, g0, h0);
  NodeId rhi = ite_rec(f1, g1, h1);
  NodeId r = mk(l, rlo, rhi);
  cache_put(Op::Ite, f, g, h, r);
  return r;
}

NodeId Store::lxor(NodeId f, NodeId g) { return xor_rec(f, g); }

NodeId Store::xor_rec(NodeId f, NodeId g) {
  if (f == bot) return g;
  if (g == bot) return f;
  if (f == g) return bot;
  if (f == top) return lnot(g);
  if (g == top) return lnot(f);
  if (f > g) std::swap(f, g);
  NodeId out;
  if (cache_get(Op::Xor, f, g, 0, out)) return out;
  Level lf = nodes_[f].level, lg = nodes_[g].level;
  Level l = std::min(lf, lg);
  NodeId f0 = lf == l ? nodes_[f].lo : f, f1 = lf == l ? nodes_[f].hi : f;
  NodeId g0 = lg == l ? nodes_[g].lo : g, g1 = lg == l ? nodes_[g].hi : g;
  NodeId rlo = xor_rec(f0, g0);
  NodeId rhi = xor_rec(f1, g1);
  NodeId r = mk(l, rlo, rhi);
  cache_put(Op::Xor, f, g, 0, r);
  return r;
}

NodeId Store::cube(std::vector<Lit> lits) {
  std::sort(lits.begin(), lits.end(),
            [](const Lit& a, const Lit& b) { return a.level < b.level; });
  NodeId r = top;
  for (auto it = lits.rbegin(); it != lits.rend(); ++it)
    r = it->value ? mk(it->level, bot, r) : mk(it->level, r, bot);
  return r;
}

NodeId Store::positive_cube(std::vector<Level> levels) {
  std::sort(levels.begin(), levels.end());
  NodeId r = top;
  for (auto it = levels.rbegin(); it != levels.rend(); ++it)
    r = mk(*it, bot, r);
  return r;
}

NodeId Store::exists(NodeId f, NodeId cube) { return exists_rec(f, cube); }

NodeId Store::exists_rec(NodeId f, NodeId cube) {
  if (f == bot || f == top) return f;
  while (cube != top && nodes_[cube].level < nodes_[f].level)
    cube = nodes_[cube].hi;
  if (cube == top) return f;
  NodeId out;
  if (cache_get(Op::Exists, f, cube, 0, out)) return out;
  // copy before recursing: mk() may reallocate the node pool
  const Node n = nodes_[f];
  NodeId r;
  if (n.level == nodes_[cube].level) {
    NodeId sub = nodes_[cube].hi;
    NodeId lo = exists_rec(n.lo, sub);
    if (lo == top) {
      r = top;
    } else {
      r = lor(lo, exists_rec(n.hi, sub));
    }
  } else {
    NodeId lo = exists_rec(n.lo, cube);
    NodeId hi = exists_rec(n.hi, cube);
    r = mk(n.level, lo, hi);
  }
  cache_put(Op::Exists, f, cube, 0, r);
  return r;
}

NodeId Store::forall(NodeId f, NodeId cube) {
  return lnot(exists(lnot(f), cube));
}

NodeId Store::and_exists(NodeId f, NodeId g, NodeId cube) {
  return and_exists_rec(f, g, cube);
}

NodeId Store::and_exists_rec(NodeId f, NodeId g, NodeId cube) {
  if (f == bot || g == bot) return bot;
  if (f == top && g == top) return top;
  if (f == top) return exists_rec(g, cube);
  if (g == top) return exists_rec(f, cube);
  if (f == g) return exists_rec(f, cube);
  if (f > g) std::swap(f, g);
  Level lf = nodes_[f].level, lg = nodes_[g].level;
  Level l = std::min(lf, lg);
  while (cube != top && nodes_[cube].level < l) cube = nodes_[cube].hi;
  if (cube == top) return land(f, g);
  NodeId out;
  if (cache_get(Op::AndExists, f, g, cube, out)) return out;
  NodeId f0 = lf == l ? nodes_[f].lo : f, f1 = lf == l ? nodes_[f].hi : f;
  NodeId g0 = lg == l ? nodes_[g].lo : g, g1 = lg == l ? nodes_[g].hi : g;
  NodeId r;
  if (nodes_[cube].level == l) {
    NodeId lo = and_exists_rec(f0, g0, nodes_[cube].hi);
    if (lo == top) {
      r = top;
    } else {
      r = lor(lo, and_exists_rec(f1, g1, nodes_[cube].hi));
    }
  } else {
    NodeId rlo = and_exists_rec(f0, g0, cube);
    NodeId rhi = and_exists_rec(f1, g1, cube);
    r = mk(l, rlo, rhi);
  }
  cache_put(Op::AndExists, f, g, cube, r);
  return r;
}

NodeId Store::restrict_cube(NodeId f, const std::vector<Lit>& lits) {
  std::unordered_map<std::uint64_t, NodeId> memo;
  return restrict_rec(f, lits, 0, memo);
}

NodeId Store::restrict_rec(NodeId f, const std::vector<Lit>& lits,
                           std::size_t i,
                           std::unordered_map<std::uint64_t, NodeId>& memo) {
  if (f == bot || f == top) return f;
  while (i < lits.size() && lits[i].level < nodes_[f].level) ++i;
  if (i >= lits.size()) return f;
  std::uint64_t key = (std::uint64_t(f) << 16) | i;
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  const Node n = nodes_[f];  // copy: mk() below may reallocate the pool
  NodeId r;
  if (n.level == lits[i].level) {
    r = restrict_rec(lits[i].value ? n.hi : n.lo, lits, i + 1, memo);
  } else {
    NodeId lo = restrict_rec(n.lo, lits, i, memo);
    NodeId hi = restrict_rec(n.hi, lits, i, memo);
    r = mk(n.level, lo, hi);
  }
  memo[key] = r;
  return r;
}

NodeId Store::permute(NodeId f, const std::vector<Level>& map) {
  std::unordered_map<NodeId, NodeId> memo;
  return permute_rec(f, map, memo);
}

NodeId Store::permute_rec(NodeId f, const std::vector<Level>& map,
                          std::unordered_map<NodeId, NodeId>& memo) {
  if (f == bot || f == top) return f;
  auto it = memo.find(f);
  if (it != memo.end()) return it->second;
  const Node n = nodes_[f];  // copy: mk() below may reallocate the pool
  Level target = n.level < map.size() ? map[n.level] : n.level;
  NodeId lo = permute_rec(n.lo, map, memo);
  NodeId hi = permute_rec(n.hi, map, memo);
  NodeId r = mk(target, lo, hi);
  memo[f] = r;
  return r;
}

std::vector<Level> Store::support(NodeId f) const {
  std::vector<Level> out;
  if (f <= top) return out;
  std::vector<NodeId> stack{f};
  std::unordered_map<NodeId, bool> seen;
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    if (n <= top || seen.count(n)) continue;
    seen[n] = true;
    out.push_back(nodes_[n].level);
    stack.push_back(nodes_[n].lo);
    stack.push_back(nodes_[n].hi);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

unsigned __int128 Store::sat_count(NodeId f, const std::vector<Level>& over) {
  if (over.size() > 126)
    throw CountOverflow("sat count over more than 126 levels");
  std::unordered_map<Level, std::size_t> pos;
  for (std::size_t i = 0; i < over.size(); ++i) pos[over[i]] = i;
  std::unordered_map<NodeId, unsigned __int128> memo;
  // count(f) is taken relative to the position of f's own level; terminals
  // count 1 at position |over|
  std::function<unsigned __int128(NodeId)> rec = [&](NodeId n) -> unsigned __int128 {
    if (n == bot) return 0;
    if (n == top) return 1;
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    const Node& nd = nodes_[n];
    auto ip = pos.find(nd.level);
    if (ip == pos.end())
      throw SupportError("sat count: predicate depends on a variable outside "
                         "the given list");
    std::size_t p = ip->second;
    auto child = [&](NodeId c) -> unsigned __int128 {
      unsigned __int128 v = rec(c);
      std::size_t cp = (c <= top) ? over.size()
                                  : pos.at(nodes_[c].level);
      return v << (cp - p - 1);
    };
    unsigned __int128 r = child(nd.lo) + child(nd.hi);
    memo[n] = r;
    return r;
  };
  unsigned __int128 total = rec(f);
  std::size_t p0 = (f <= top) ? over.size() : pos.at(nodes_[f].level);
  return total << p0;
}

bool Store::pick_one(NodeId f, const std::vector<Level>& over,
                     std::vector<bool>& out) {
  out.assign(over.size(), false);
  if (f == bot) return false;
  std::unordered_map<Level, std::size_t> pos;
  for (std::size_t i = 0; i < over.size(); ++i) pos[over[i]] = i;
  NodeId n = f;
  while (n > top) {
    const Node& nd = nodes_[n];
    bool take_hi = nd.lo == bot;
    auto ip = pos.find(nd.level);
    if (ip != pos.end()) out[ip->second] = take_hi;
    n = take_hi ? nd.hi : nd.lo;
  }
  return true;
}

bool Store::eval(NodeId f, const std::function<bool(Level)>& bits) const {
  NodeId n = f;
  while (n > top) {
    const Node& nd = nodes_[n];
    n = bits(nd.level) ? nd.hi : nd.lo;
  }
  return n == top;
}

std::size_t Store::dag_size(NodeId f) const {
  if (f <= top) return 1;
  std::unordered_map<NodeId, bool> seen;
  std::vector<NodeId> stack{f};
  std::size_t count = 0;
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    if (n <= top || seen.count(n)) continue;
    seen[n] = true;
    ++count;
    stack.push_back(nodes_[n].lo);
    stack.push_back(nodes_[n].hi);
  }
  return count + 2;
}

} // namespace symcomp::dd
