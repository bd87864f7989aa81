// Acceptance gate.  Ten criteria, each timed against a pinned limit and
// reported as exactly one PASS/FAIL line; the process exits nonzero when any
// criterion fails.  Every expected value here is either derived by an
// independent construction inside the criterion itself or checked against a
// brute-force oracle, never read back from the code under test.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "symcomp/abstractor.hpp"
#include "symcomp/io.hpp"
#include "symcomp/module.hpp"
#include "symcomp/oracle.hpp"
#include "symcomp/refinement.hpp"
#include "symcomp/synthesis.hpp"
#include "symcomp/system_spec.hpp"

using namespace symcomp;
namespace fs = std::filesystem;

namespace {

struct CriterionFailure {
  std::string reason;
};

[[noreturn]] void bail(const std::string& reason) { throw CriterionFailure{reason}; }

void require(bool cond, const std::string& reason) {
  if (!cond) bail(reason);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- criterion 1 & 2 fixtures ---------------------------------------------

// Integer-centered unit grids.  The sqrt module is abstracted over
// y in [-6, 10] -> z in [0, 4]; the criterion formulas x >= 2, y >= 0 turn
// into cell ranges via value = cell + offset.
Quantizer unit_grid(int lo, int hi) {
  auto n = static_cast<std::uint32_t>(hi - lo + 1);
  return Quantizer::uniform({lo - 0.5, hi + 0.5}, 1.0, static_cast<double>(lo), n);
}

FiniteModule sqrt_module(Variable y, Variable z) {
  ExprOracle oracle = ExprOracle::interval_ext({Expr::sqrt(Expr::input("y"))}, {"y"});
  AbstractionJob job;
  job.name = "sqrt";
  job.inputs = {{unit_grid(-6, 10), y}};
  job.outputs = {{unit_grid(0, 4), z}};
  job.oracle = &oracle;
  return abstract_module(job).module;
}

void criterion_sqrt_composition() {
  Context ctx;
  Variable x = ctx.declare("x", 13); // values -4 .. 8
  Variable y = ctx.declare("y", 17); // values -6 .. 10
  Variable z = ctx.declare("z", 5);  // values  0 .. 4

  // M1 = (|y - x| <= 2), encoded pair by pair from the integer values
  Predicate m1p = ctx.fls();
  for (std::uint64_t xc = 0; xc < 13; ++xc)
    for (std::uint64_t yc = 0; yc < 17; ++yc) {
      int xv = static_cast<int>(xc) - 4, yv = static_cast<int>(yc) - 6;
      if (std::abs(yv - xv) <= 2)
        m1p = ctx.disj(m1p, ctx.conj(ctx.value_eq(x, xc), ctx.value_eq(y, yc)));
    }
  FiniteModule m1("band", {x}, {y}, m1p);
  FiniteModule m2 = sqrt_module(y, z);

  FiniteModule m12 = compose2(m1, m2, "band_sqrt");
  Predicate x_ge_2 = ctx.range(x, 6, 12); // cells with value >= 2
  require(ctx.equivalent(m12.nonblocking(), x_ge_2),
          "nonblocking of the composition differs from (x >= 2)");
  require(!ctx.equivalent(m12.nonblocking(), ctx.range(x, 5, 12)) &&
              !ctx.equivalent(m12.nonblocking(), ctx.range(x, 7, 12)),
          "nonblocking set is not tight around x == 2");
}

void criterion_nonblocking_identities() {
  Context ctx;
  Variable y = ctx.declare("y", 17);
  Variable z = ctx.declare("z", 5);
  FiniteModule sq = sqrt_module(y, z);
  require(ctx.equivalent(sq.nonblocking(), ctx.range(y, 6, 16)),
          "sqrt nonblocking differs from (y >= 0)");

  // division 1/y on y in [-3, 3]: only the cell around zero blocks
  Context dctx;
  Variable dy = dctx.declare("y", 7); // values -3 .. 3
  Variable dz = dctx.declare("z", 5); // values -2 .. 2
  ExprOracle inv =
      ExprOracle::interval_ext({Expr::div(Expr::constant(1.0), Expr::input("y"))}, {"y"});
  AbstractionJob job;
  job.name = "inv";
  job.inputs = {{unit_grid(-3, 3), dy}};
  job.outputs = {{unit_grid(-2, 2), dz}};
  job.oracle = &inv;
  FiniteModule dm = abstract_module(job).module;
  require(dctx.equivalent(dm.nonblocking(), dctx.neg(dctx.value_eq(dy, 3))),
          "division nonblocking differs from (y != 0)");
}

// ---- criterion 3: composition nonblocking law ------------------------------

Predicate random_predicate(Context& ctx, const std::vector<Variable>& vars,
                           std::mt19937_64& rng) {
  std::uniform_int_distribution<int> cube_count(1, 5);
  Predicate p = ctx.fls();
  int cubes = cube_count(rng);
  for (int c = 0; c < cubes; ++c) {
    Predicate cube = ctx.tru();
    for (Variable v : vars) {
      std::uint64_t dom = ctx.var_domain(v);
      switch (rng() % 3) {
      case 0: break; // unconstrained
      case 1: cube = ctx.conj(cube, ctx.value_eq(v, rng() % dom)); break;
      default: {
        std::uint64_t a = rng() % dom, b = rng() % dom;
        cube = ctx.conj(cube, ctx.range(v, std::min(a, b), std::max(a, b)));
      }
      }
    }
    p = ctx.disj(p, cube);
  }
  return p;
}

void criterion_composition_law() {
  std::mt19937_64 rng(0xc0117e57);
  std::uniform_int_distribution<std::uint64_t> dom_pick(2, 8); // up to 3 bits
  for (int trial = 0; trial < 1000; ++trial) {
    Context ctx;
    int n_in = 1 + static_cast<int>(rng() % 2), n_shared = 1 + static_cast<int>(rng() % 2);
    std::vector<Variable> ins, shared, outs;
    for (int k = 0; k < n_in; ++k)
      ins.push_back(ctx.declare("i" + std::to_string(k), dom_pick(rng)));
    for (int k = 0; k < n_shared; ++k)
      shared.push_back(ctx.declare("o12_" + std::to_string(k), dom_pick(rng)));
    outs.push_back(ctx.declare("b0", dom_pick(rng)));

    std::vector<Variable> m1_vars = ins;
    m1_vars.insert(m1_vars.end(), shared.begin(), shared.end());
    std::vector<Variable> m2_vars = shared;
    m2_vars.insert(m2_vars.end(), outs.begin(), outs.end());
    FiniteModule m1("m1", ins, shared, random_predicate(ctx, m1_vars, rng));
    FiniteModule m2("m2", shared, outs, random_predicate(ctx, m2_vars, rng));

    Predicate lhs = compose2(m1, m2).nonblocking();
    Predicate both = ctx.conj(m1.constraint(), m2.constraint());
    Predicate joint = ctx.exists(shared, ctx.exists(outs, both));
    Predicate guard = ctx.forall(shared, ctx.implies(m1.constraint(), m2.nonblocking()));
    if (!ctx.equivalent(lhs, ctx.conj(joint, guard)))
      bail("composition law violated at trial " + std::to_string(trial));
  }
}

// ---- criterion 4 & 5: theorem harnesses -----------------------------------

void criterion_theorem2() {
  HarnessStats st = theorem2_harness(1000, 1);
  if (st.failures != 0)
    bail(std::to_string(st.failures) + " of 1000 trials failed (first seed " +
         std::to_string(st.failed.empty() ? 0 : st.failed.front().seed) + ")");
}

void criterion_theorem3() {
  HarnessStats st = theorem3_harness(1000, 2);
  if (st.failures != 0) bail(std::to_string(st.failures) + " of 1000 trials failed");
}

// ---- criterion 6: abstraction soundness on random monotone systems --------

void criterion_abstraction_soundness() {
  std::mt19937_64 rng(0xa151);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int sys = 0; sys < 50; ++sys) {
    // random nondecreasing map, rescaled into the middle of [0, L] so the
    // image can never escape the grid
    double L = 4.0 + 28.0 * unit(rng);
    auto cells = static_cast<std::uint32_t>(8 + rng() % 57); // 8 .. 64
    double eta = L / cells;
    Quantizer grid = Quantizer::uniform({0.0, L}, eta, eta / 2, cells);
    require(grid.check_strict(), "generated grid is not strict");

    double rate = 0.05 + 0.45 * unit(rng);
    double w1 = unit(rng), w2 = unit(rng), w3 = unit(rng);
    ExprPtr xin = Expr::input("x");
    ExprPtr g = Expr::add(
        Expr::add(Expr::mul(Expr::constant(w1), xin),
                  Expr::mul(Expr::constant(w2), Expr::glog(0.0, L, rate, xin))),
        Expr::mul(Expr::constant(w3), Expr::min(xin, Expr::constant(L * unit(rng)))));
    auto g_at = [&](double v) { return *eval(g, {{"x", v}}); };
    double g0 = g_at(0.0), g1 = g_at(L);
    double scale = 0.8 * L / std::max(g1 - g0, 1e-9);
    ExprPtr f = Expr::add(Expr::constant(0.1 * L - scale * g0),
                          Expr::mul(Expr::constant(scale), g));

    Context ctx;
    Variable xa = ctx.declare("xa", cells);
    Variable xp = ctx.declare("xa'", cells);
    ExprOracle oracle = ExprOracle::monotone({f}, {"x"}, {{0.0, L}});
    AbstractionJob job;
    job.name = "sys" + std::to_string(sys);
    job.inputs = {{grid, xa}};
    job.outputs = {{grid, xp}};
    job.oracle = &oracle;
    FiniteModule abstracted = abstract_module(job).module;

    auto fpt = [&](double v) -> std::optional<double> { return eval(f, {{"x", v}}); };
    Finitized fin = finitize_scalar(ctx, "c", fpt, grid, xa, grid, xp, eta / 10);

    AbstractionClaim claim;
    claim.concrete = &fin.module;
    claim.abstracted = &abstracted;
    claim.q_in = fin.q_in;
    claim.q_out = fin.q_out;
    CheckReport rep = check_abstraction(claim);
    if (!rep.pass)
      bail("system " + std::to_string(sys) + " failed (" + rep.note + ")");
  }
}

// ---- criterion 7: gain inverses -------------------------------------------

void criterion_gain_inverse() {
  Context ctx;
  Variable x = ctx.declare("x", 9);
  Variable wf = ctx.declare("wf", 9); // fine intermediate, eta = 1/3
  Variable w = ctx.declare("w", 3);   // coarse intermediate, eta = 1
  Variable z = ctx.declare("z", 9);
  Quantizer qx = Quantizer::uniform({0.0, 9.0}, 1.0, 0.5, 9);
  Quantizer qwf = Quantizer::uniform({0.0, 3.0}, 1.0 / 3, 1.0 / 6, 9);
  Quantizer qw = Quantizer::uniform({0.0, 3.0}, 1.0, 0.5, 3);

  // concrete level: cell centers mapped exactly through x/3 then 3*w; both
  // land strictly inside a single cell, so the relation is a bijection
  Predicate g13c = ctx.fls(), g3c = ctx.fls();
  for (std::uint32_t c = 0; c < 9; ++c) {
    auto down = qwf.quantize(qx.center(c) / 3.0);
    require(down.size() == 1, "x/3 ambiguous on the fine grid");
    g13c = ctx.disj(g13c, ctx.conj(ctx.value_eq(x, c), ctx.value_eq(wf, down[0])));
    auto up = qx.quantize(3.0 * qwf.center(c));
    require(up.size() == 1, "3*w ambiguous on the unit grid");
    g3c = ctx.disj(g3c, ctx.conj(ctx.value_eq(wf, c), ctx.value_eq(z, up[0])));
  }
  FiniteModule c13("gain13c", {x}, {wf}, g13c);
  FiniteModule c3("gain3c", {wf}, {z}, g3c);
  FiniteModule cc = hide(compose2(c13, c3), {wf}, "concrete");
  Predicate diag = ctx.fls();
  for (std::uint64_t c = 0; c < 9; ++c)
    diag = ctx.disj(diag, ctx.conj(ctx.value_eq(x, c), ctx.value_eq(z, c)));
  require(ctx.equivalent(cc.constraint(), diag),
          "concrete composition is not the identity relation");

  // abstract level at eta = 1 everywhere: the coarse intermediate grid adds
  // nondeterminism the identity abstraction does not have
  auto abstract1 = [&](const char* name, ExprPtr e, BoundQuantizer in, BoundQuantizer out) {
    ExprOracle oracle = ExprOracle::interval_ext({std::move(e)}, {"v"});
    AbstractionJob job;
    job.name = name;
    job.inputs = {in};
    job.outputs = {out};
    job.oracle = &oracle;
    return abstract_module(job).module;
  };
  ExprPtr v = Expr::input("v");
  FiniteModule a13 =
      abstract1("gain13", Expr::div(v, Expr::constant(3.0)), {qx, x}, {qw, w});
  FiniteModule a3 = abstract1("gain3", Expr::mul(Expr::constant(3.0), v), {qw, w}, {qx, z});
  FiniteModule aa = hide(compose2(a13, a3), {w}, "abstract");
  FiniteModule aid = abstract1("ident", v, {qx, x}, {qx, z});

  require(ctx.is_tautology(ctx.implies(aid.constraint(), aa.constraint())),
          "abstract composition does not contain the abstract identity");
  require(!ctx.equivalent(aid.constraint(), aa.constraint()),
          "abstract composition added no nondeterminism");
}

// ---- criterion 8: benchmark scaling ---------------------------------------

unsigned __int128 pow_u128(unsigned __int128 b, int e) {
  unsigned __int128 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

void containment_check(const std::string& comp_path, const std::string& mono_path,
                       int n) {
  Context ctx;
  LoadedModule comp = load_module(ctx, comp_path);
  LoadedModule mono = load_module(ctx, mono_path);
  require(ctx.is_tautology(ctx.implies(comp.module.nonblocking(), mono.module.nonblocking())),
          "n=" + std::to_string(n) + ": compositional blocking misses a monolithic one");
  Predicate guarded = ctx.conj(mono.module.constraint(), comp.module.nonblocking());
  require(ctx.is_tautology(ctx.implies(guarded, comp.module.constraint())),
          "n=" + std::to_string(n) + ": monolithic transition outside the compositional set");
}

void criterion_benchmark() {
  // cap the diagram store so a regression dies as MemoryCap instead of
  // taking the whole process down; restore whatever the caller had set
  std::string saved = std::getenv("SYMCOMP_DD_MEM_MB") ? std::getenv("SYMCOMP_DD_MEM_MB") : "";
  setenv("SYMCOMP_DD_MEM_MB", "2048", 1);
  struct Restore {
    std::string saved;
    ~Restore() {
      if (saved.empty()) unsetenv("SYMCOMP_DD_MEM_MB");
      else setenv("SYMCOMP_DD_MEM_MB", saved.c_str(), 1);
    }
  } restore{saved};

  fs::path dir = fs::temp_directory_path() / "symcomp_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  for (int n : {2, 3}) {
    SystemSpec spec = make_bench_spec(n);
    fs::path comp_dir = dir / ("n" + std::to_string(n));
    fs::path mono_dir = dir / ("n" + std::to_string(n) + "m");
    auto t0 = std::chrono::steady_clock::now();
    PipelineFlags flags;
    flags.out_dir = comp_dir.string();
    run_pipeline(spec, flags);
    double comp_s = seconds_since(t0);
    require(comp_s < 60.0, "n=" + std::to_string(n) + " compositional took " +
                               std::to_string(comp_s) + "s (limit 60s)");
    PipelineResult mono = run_monolithic(spec, {}, mono_dir.string());
    require(mono.report.composed.cells == pow_u128(128, n),
            "n=" + std::to_string(n) + " monolithic traversal count is not (32*4)^n");
    containment_check((comp_dir / "composed.json").string(),
                      (mono_dir / "composed.json").string(), n);
  }

  SystemSpec spec6 = make_bench_spec(6);
  auto t6 = std::chrono::steady_clock::now();
  PipelineResult big = run_pipeline(spec6, {});
  double big_s = seconds_since(t6);
  require(big_s < 1800.0, "n=6 compositional took " + std::to_string(big_s) + "s (limit 30min)");
  unsigned __int128 trans = big.report.composed.transitions;
  require(trans >= pow_u128(10, 13) && trans <= pow_u128(10, 16),
          "n=6 transition count " + sci_string(trans) + " outside [1e13, 1e16]");

  bool budget_hit = false;
  try {
    run_monolithic(spec6, 600.0, "");
  } catch (const TimeBudgetExceeded&) {
    budget_hit = true;
  }
  require(budget_hit, "n=6 monolithic finished inside a 10 minute budget");
  fs::remove_all(dir);
}

// ---- criterion 9: synthesis vs. brute force --------------------------------

void criterion_synthesis() {
  // 3 states, 2 controls; (2,a) blocks, (0,b) is nondeterministic
  const std::vector<std::vector<std::vector<int>>> succ = {
      /*s0*/ {{1}, {0, 2}},
      /*s1*/ {{0, 1}, {2}},
      /*s2*/ {{}, {2}},
  };
  Context ctx;
  auto sv = ctx.declare_interleaved({{"s", 3}, {"s'", 3}});
  Variable s = sv[0], sp = sv[1];
  Variable u = ctx.declare("u", 2);
  Predicate t = ctx.fls();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c : succ[a][b])
        t = ctx.disj(t, ctx.conj(ctx.conj(ctx.value_eq(s, a), ctx.value_eq(u, b)),
                                 ctx.value_eq(sp, c)));
  ControlModule sys = as_control(FiniteModule("toy", {s, u}, {sp}, t), {{s, sp}}, {u});

  auto controllable = [&](int mask, int state) {
    for (int b = 0; b < 2; ++b) {
      const auto& nxt = succ[state][b];
      bool ok = !nxt.empty();
      for (int c : nxt) ok = ok && (mask >> c & 1);
      if (ok) return true;
    }
    return false;
  };
  auto domain_mask = [&](const Controller& c) {
    int mask = 0;
    for (std::uint64_t a = 0; a < 3; ++a)
      if (ctx.eval(c.domain(), {s}, {a})) mask |= 1 << a;
    return mask;
  };

  for (int safe = 0; safe < 8; ++safe) {
    int w = safe; // gfp: shrink until stable
    for (;;) {
      int next = 0;
      for (int a = 0; a < 3; ++a)
        if ((w >> a & 1) && controllable(w, a)) next |= 1 << a;
      if (next == w) break;
      w = next;
    }
    Predicate safe_p = ctx.fls();
    for (int a = 0; a < 3; ++a)
      if (safe >> a & 1) safe_p = ctx.disj(safe_p, ctx.value_eq(s, a));
    Controller c = solve_safety(sys, safe_p);
    if (domain_mask(c) != w)
      bail("safety domain mismatch for safe set " + std::to_string(safe));
    // closure: every admitted action keeps the play inside the domain
    for (std::uint64_t a = 0; a < 3; ++a)
      for (std::uint64_t b = 0; b < 2; ++b)
        if (ctx.eval(c.policy, {s, u}, {a, b}))
          for (int nx : succ[a][b])
            require(w >> nx & 1, "safety policy leaves its own domain");
  }

  for (int target = 0; target < 8; ++target) {
    int r = target; // lfp: grow until stable
    for (;;) {
      int next = r;
      for (int a = 0; a < 3; ++a)
        if (controllable(r, a)) next |= 1 << a;
      if (next == r) break;
      r = next;
    }
    Predicate target_p = ctx.fls();
    for (int a = 0; a < 3; ++a)
      if (target >> a & 1) target_p = ctx.disj(target_p, ctx.value_eq(s, a));
    Controller c = solve_reach(sys, target_p);
    if (domain_mask(c) != r)
      bail("reach domain mismatch for target " + std::to_string(target));
    // progress: the chosen action falls into an earlier wave
    for (std::uint64_t a = 0; a < 3; ++a) {
      if (!(r >> a & 1) || (target >> a & 1)) continue;
      std::size_t first = 0;
      while (!ctx.eval(c.waves[first], {s}, {a})) ++first;
      require(first > 0, "non-target state in wave 0");
      bool acted = false;
      for (std::uint64_t b = 0; b < 2; ++b)
        if (ctx.eval(c.policy, {s, u}, {a, b})) {
          acted = true;
          for (int nx : succ[a][b])
            require(ctx.eval(c.waves[first - 1], {s}, {static_cast<std::uint64_t>(nx)}),
                    "reach policy does not make progress");
        }
      require(acted, "reach domain state has no policy action");
    }
  }
}

// ---- criterion 10: predicate laws -----------------------------------------

void criterion_predicate_laws() {
  std::mt19937_64 rng(0x1a75);
  for (int round = 0; round < 300; ++round) {
    Context ctx;
    std::vector<Variable> vars;
    int bits = 0;
    int nv = 2 + static_cast<int>(rng() % 3);
    for (int k = 0; k < nv; ++k) {
      std::uint64_t dom = 2 + rng() % 8;
      int b = 1;
      while ((1ull << b) < dom) ++b;
      if (bits + b > 12) break;
      bits += b;
      vars.push_back(ctx.declare("v" + std::to_string(k), dom));
    }
    Predicate p = random_predicate(ctx, vars, rng);
    Predicate q = random_predicate(ctx, vars, rng);

    std::vector<Variable> sub;
    for (Variable v : vars)
      if (rng() % 2) sub.push_back(v);
    if (sub.empty()) sub.push_back(vars[rng() % vars.size()]);
    if (!ctx.equivalent(ctx.neg(ctx.exists(sub, p)), ctx.forall(sub, ctx.neg(p))))
      bail("quantifier duality violated at round " + std::to_string(round));

    std::uint64_t cp = ctx.count_sat(p, vars), cq = ctx.count_sat(q, vars);
    std::uint64_t cor = ctx.count_sat(ctx.disj(p, q), vars);
    std::uint64_t cand = ctx.count_sat(ctx.conj(p, q), vars);
    if (cp + cq != cor + cand)
      bail("inclusion-exclusion violated at round " + std::to_string(round));

    std::uint64_t full = 1;
    for (Variable v : vars) full *= ctx.var_domain(v);
    if (ctx.count_sat(ctx.tru(), vars) != full)
      bail("padding assignments leaked into the count at round " + std::to_string(round));
    std::uint64_t seen = 0;
    bool in_domain = true;
    ctx.enumerate_sat(p, vars, [&](const std::vector<std::uint64_t>& row) {
      ++seen;
      for (std::size_t k = 0; k < row.size(); ++k)
        in_domain = in_domain && row[k] < ctx.var_domain(vars[k]);
    });
    if (!in_domain || seen != cp)
      bail("enumeration disagrees with the count at round " + std::to_string(round));
  }
}

// ---- driver ----------------------------------------------------------------

struct Criterion {
  const char* label;
  double limit_seconds;
  std::function<void()> run;
};

} // namespace

int main(int, char**) {
  const std::vector<Criterion> criteria = {
      {"sqrt series composition blocks exactly below x = 2", 1.0, criterion_sqrt_composition},
      {"sqrt and division nonblocking identities", 1.0, criterion_nonblocking_identities},
      {"composition nonblocking law on 1000 random pairs", 30.0, criterion_composition_law},
      {"composed abstractions stay abstractions, 1000 trials", 300.0, criterion_theorem2},
      {"hiding preserves abstraction, 1000 trials", 120.0, criterion_theorem3},
      {"grid abstraction sound on 50 random monotone systems", 300.0,
       criterion_abstraction_soundness},
      {"gain-inverse pair: exact concretely, strictly looser abstractly", 10.0,
       criterion_gain_inverse},
      {"saturation benchmark: containment, exact counts, scaling", 3600.0, criterion_benchmark},
      {"safety and reach games match brute force on all set choices", 1.0, criterion_synthesis},
      {"predicate engine laws over random 12-bit predicates", 30.0, criterion_predicate_laws},
  };

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const Criterion& c = criteria[k];
    auto t0 = std::chrono::steady_clock::now();
    std::string reason;
    try {
      c.run();
    } catch (const CriterionFailure& f) {
      reason = f.reason;
    } catch (const std::exception& e) {
      reason = std::string("unexpected error: ") + e.what();
    }
    double sec = seconds_since(t0);
    if (reason.empty() && sec > c.limit_seconds)
      reason = "exceeded the " + std::to_string(c.limit_seconds) + "s limit";
    if (reason.empty()) {
      std::printf("PASS %2zu/10  %-58s %8.2fs\n", k + 1, c.label, sec);
    } else {
      std::printf("FAIL %2zu/10  %-58s %8.2fs  %s\n", k + 1, c.label, sec, reason.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  if (failures) std::printf("%d of 10 criteria failed\n", failures);
  else std::printf("all 10 criteria passed\n");
  return failures ? 1 : 0;
}
