#include "symcomp/refinement.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

#include "symcomp/errors.hpp"

namespace symcomp {

namespace {

std::vector<Variable> sorted_unique(std::vector<Variable> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<Variable> unite(const std::vector<Variable>& a, const std::vector<Variable>& b) {
  std::vector<Variable> u = a;
  u.insert(u.end(), b.begin(), b.end());
  return sorted_unique(u);
}

bool subset_of(const std::vector<Variable>& small, const std::vector<Variable>& big) {
  for (const Variable& v : small)
    if (std::find(big.begin(), big.end(), v) == big.end()) return false;
  return true;
}

std::vector<std::pair<std::string, std::uint64_t>>
witness(Context& ctx, Predicate bad, const std::vector<Variable>& vars) {
  std::vector<std::pair<std::string, std::uint64_t>> out;
  auto pick = ctx.pick_sat(bad, vars);
  if (!pick) return out;  // should not happen: caller found bad satisfiable
  for (std::size_t i = 0; i < vars.size(); ++i)
    out.emplace_back(vars[i].name(), (*pick)[i]);
  return out;
}

std::string fmt_point(const std::vector<std::string>& names, const std::vector<double>& xs) {
  std::string s = "(";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) s += ", ";
    s += names[i] + "=" + format_double(xs[i]);
  }
  return s + ")";
}

}  // namespace

CheckReport check_abstraction(const AbstractionClaim& claim) {
  if (claim.concrete == nullptr || claim.abstracted == nullptr)
    throw ValidationError("abstraction claim needs both a concrete and an abstract module");
  const FiniteModule& con = *claim.concrete;
  const FiniteModule& abs = *claim.abstracted;
  Context& ctx = con.ctx();
  if (&abs.ctx() != &ctx)
    throw ContextMismatch("claim modules live in different contexts");

  const std::vector<Variable> in_vars = unite(con.inputs(), abs.inputs());
  const std::vector<Variable> out_vars = unite(con.outputs(), abs.outputs());
  if (!subset_of(ctx.support_vars(claim.q_in), in_vars))
    throw SupportError("input relation mentions variables outside the claim's inputs");
  if (!subset_of(ctx.support_vars(claim.q_out), out_vars))
    throw SupportError("output relation mentions variables outside the claim's outputs");

  // Strictness: every concrete input (output) assignment must have at least
  // one abstract partner, else the conditions below are vacuous by accident.
  if (!ctx.is_tautology(ctx.exists(abs.inputs(), claim.q_in)))
    throw StrictnessError("input relation is not strict: some concrete input has no abstract counterpart");
  if (!ctx.is_tautology(ctx.exists(abs.outputs(), claim.q_out)))
    throw StrictnessError("output relation is not strict: some concrete output has no abstract counterpart");

  Predicate nb_con = con.nonblocking();
  Predicate nb_abs = abs.nonblocking();

  CheckReport rep;
  rep.method = "exact";

  Predicate cond_nb = ctx.implies(ctx.conj(claim.q_in, nb_abs), nb_con);
  if (!ctx.is_tautology(cond_nb)) {
    rep.violated = CheckReport::Condition::Nonblocking;
    rep.counterexample = witness(ctx, ctx.neg(cond_nb), in_vars);
    rep.note = "abstract module is nonblocking at an input related to a blocking concrete input";
    return rep;
  }

  Predicate lhs = ctx.conj(ctx.conj(claim.q_in, nb_abs), ctx.conj(con.constraint(), claim.q_out));
  Predicate cond_over = ctx.implies(lhs, abs.constraint());
  if (!ctx.is_tautology(cond_over)) {
    rep.violated = CheckReport::Condition::Overapprox;
    rep.counterexample = witness(ctx, ctx.neg(cond_over), unite(in_vars, out_vars));
    rep.note = "a concrete transition maps into abstract cells the abstract module does not allow";
    return rep;
  }

  rep.pass = true;
  // The reverse of the nonblocking condition is fine (an abstraction may be
  // conservative); surface it so a user can tell refinement loss from a bug.
  Predicate conservative = ctx.conj(ctx.conj(claim.q_in, nb_con), ctx.neg(nb_abs));
  if (!ctx.is_unsat(conservative))
    rep.note = "abstract module blocks at some inputs whose related concrete inputs are "
               "nonblocking (allowed: the abstraction is conservative there)";
  return rep;
}

CheckReport check_frr(const ControlModule& concrete, const ControlModule& abstracted,
                      Predicate q_state, Predicate q_primed) {
  if (concrete.controls != abstracted.controls)
    throw TypeMismatch("the two levels must share their control variables verbatim "
                       "(control inputs are related by identity)");
  AbstractionClaim claim;
  claim.concrete = &concrete.module;
  claim.abstracted = &abstracted.module;
  claim.q_in = q_state;
  claim.q_out = q_primed;
  return check_abstraction(claim);
}

Finitized finitize_scalar(Context& ctx, const std::string& prefix,
                          const std::function<std::optional<double>(double)>& f,
                          const Quantizer& in_grid, Variable abs_in,
                          const Quantizer& out_grid, Variable abs_out,
                          double step) {
  if (!(step > 0.0)) throw ValidationError("finitize step must be positive");
  const Interval cov = in_grid.covered();

  std::vector<double> samples;
  for (std::uint64_t k = 0;; ++k) {
    double x = cov.lo + static_cast<double>(k) * step;
    if (x >= cov.hi) break;
    samples.push_back(x);
  }
  samples.push_back(cov.hi);  // always probe the exact upper edge

  std::vector<std::optional<double>> out_at(samples.size());
  std::vector<double> values;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out_at[i] = f(samples[i]);
    if (out_at[i]) values.push_back(*out_at[i]);
  }
  if (values.empty())
    throw ValidationError("map is undefined at every sample; nothing to finitize");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  auto value_index = [&](double y) -> std::uint64_t {
    return static_cast<std::uint64_t>(
        std::lower_bound(values.begin(), values.end(), y) - values.begin());
  };

  Variable sv = ctx.declare(prefix + "_s", samples.size());
  Variable vv = ctx.declare(prefix + "_v", values.size());

  Predicate table = ctx.fls();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!out_at[i]) continue;  // undefined sample: blocking row
    table = ctx.disj(table, ctx.conj(ctx.value_eq(sv, i),
                                     ctx.value_eq(vv, value_index(*out_at[i]))));
  }

  Predicate q_in = relation_predicate(ctx, in_grid, samples, sv, abs_in);

  // Hand-rolled output relation: values that escape the output grid get an
  // empty row (they have no abstract counterpart and the claim checker will
  // report the relation as non-strict, which is the honest answer).
  Predicate q_out = ctx.fls();
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::vector<std::uint32_t> cells;
    try {
      cells = out_grid.quantize(values[i]);
    } catch (const OutOfDomain&) {
      continue;
    }
    for (std::uint32_t c : cells)
      q_out = ctx.disj(q_out, ctx.conj(ctx.value_eq(vv, i), ctx.value_eq(abs_out, c)));
  }

  return Finitized{FiniteModule(prefix, {sv}, {vv}, table),
                   q_in, q_out, sv, vv, std::move(samples), std::move(values)};
}

CheckReport falsify_frr(const SampledSystem& sys) {
  if (sys.abstracted == nullptr) throw ValidationError("falsify_frr needs an abstract module");
  const ControlModule& A = *sys.abstracted;
  const std::size_t nd = sys.next_state.size();
  const std::size_t nc = sys.control_names.size();
  if (sys.state_names.size() != nd || sys.state_grids.size() != nd)
    throw ValidationError("next_state, state_names and state_grids must align");
  if (sys.control_grids.size() != nc)
    throw ValidationError("control_names and control_grids must align");
  if (A.states.size() != nd || A.primed.size() != nd || A.controls.size() != nc)
    throw ValidationError("abstract module arities do not match the sampled system");
  if (!(sys.step > 0.0)) throw ValidationError("sample step must be positive");

  Context& ctx = A.ctx();
  Predicate nb = A.nonblocking();
  Predicate trans = A.module.constraint();

  // Per-dimension sample ladders over the covered state space, upper edge
  // always included.
  std::vector<std::vector<double>> ladder(nd);
  for (std::size_t d = 0; d < nd; ++d) {
    Interval cov = sys.state_grids[d].covered();
    for (std::uint64_t k = 0;; ++k) {
      double x = cov.lo + static_cast<double>(k) * sys.step;
      if (x >= cov.hi) break;
      ladder[d].push_back(x);
    }
    ladder[d].push_back(cov.hi);
  }

  std::vector<Variable> sc_vars = A.states;
  sc_vars.insert(sc_vars.end(), A.controls.begin(), A.controls.end());
  std::vector<Variable> all_vars = sc_vars;
  all_vars.insert(all_vars.end(), A.primed.begin(), A.primed.end());

  CheckReport rep;
  std::uint64_t points = 0;

  std::vector<std::size_t> si(nd, 0);   // state sample odometer
  std::vector<std::size_t> ui(nc, 0);   // control cell odometer
  Valuation val;
  std::vector<double> point(nd), next(nd);

  auto advance = [](std::vector<std::size_t>& idx, const auto& limit) {
    for (std::size_t d = idx.size(); d-- > 0;) {
      if (++idx[d] < limit(d)) return true;
      idx[d] = 0;
    }
    return false;
  };

  do {
    for (std::size_t d = 0; d < nd; ++d) {
      point[d] = ladder[d][si[d]];
      val[sys.state_names[d]] = point[d];
    }
    std::fill(ui.begin(), ui.end(), 0);
    do {
      ++points;
      for (std::size_t c = 0; c < nc; ++c)
        val[sys.control_names[c]] = sys.control_grids[c].center(static_cast<std::uint32_t>(ui[c]));

      bool defined = true;
      for (std::size_t d = 0; d < nd && defined; ++d) {
        auto r = eval(sys.next_state[d], val);
        if (!r) defined = false;
        else next[d] = *r;
      }

      // Abstract cells related to the sampled state (1 or 2 per dimension).
      std::vector<std::vector<std::uint32_t>> xcells(nd);
      for (std::size_t d = 0; d < nd; ++d) xcells[d] = sys.state_grids[d].quantize(point[d]);

      std::vector<std::size_t> xi(nd, 0);
      do {
        std::vector<std::uint64_t> sc_vals;
        sc_vals.reserve(nd + nc);
        for (std::size_t d = 0; d < nd; ++d) sc_vals.push_back(xcells[d][xi[d]]);
        for (std::size_t c = 0; c < nc; ++c) sc_vals.push_back(ui[c]);
        if (!ctx.eval(nb, sc_vars, sc_vals)) continue;  // conservative blocking: fine

        if (!defined) {
          rep.violated = CheckReport::Condition::Nonblocking;
          rep.note = "at " + fmt_point(sys.state_names, point) +
                     " the concrete next state is undefined but a related abstract cell is nonblocking";
          goto done;
        }

        bool escaped = false;
        std::vector<std::vector<std::uint32_t>> ycells(nd);
        for (std::size_t d = 0; d < nd; ++d) {
          try {
            ycells[d] = sys.state_grids[d].quantize(next[d]);
          } catch (const OutOfDomain&) {
            escaped = true;
          }
        }
        if (escaped) {
          rep.violated = CheckReport::Condition::Overapprox;
          rep.note = "at " + fmt_point(sys.state_names, point) +
                     " the next state leaves the state grid, so no abstract cell covers it";
          goto done;
        }

        std::vector<std::size_t> yi(nd, 0);
        do {
          std::vector<std::uint64_t> all_vals = sc_vals;
          for (std::size_t d = 0; d < nd; ++d) all_vals.push_back(ycells[d][yi[d]]);
          if (!ctx.eval(trans, all_vars, all_vals)) {
            rep.violated = CheckReport::Condition::Overapprox;
            rep.note = "at " + fmt_point(sys.state_names, point) +
                       " a concrete successor cell is missing from the abstract transitions";
            goto done;
          }
        } while (advance(yi, [&](std::size_t d) { return ycells[d].size(); }));
      } while (advance(xi, [&](std::size_t d) { return xcells[d].size(); }));
    } while (advance(ui, [&](std::size_t c) { return sys.control_grids[c].cell_count(); }));
  } while (advance(si, [&](std::size_t d) { return ladder[d].size(); }));

  rep.pass = true;
done:
  char buf[64];
  std::snprintf(buf, sizeof buf, "sampled step=%g points=%llu", sys.step,
                static_cast<unsigned long long>(points));
  rep.method = buf;
  return rep;
}

// ---------------------------------------------------------------------------
// Randomized theorem trials

namespace {

// Random relation table: each assignment over `vars` is kept with the given
// probability.  Small domains only (the trials stay at <= 8 values per
// variable), so a plain row loop is fine.
Predicate random_table(Context& ctx, const std::vector<Variable>& vars, double density,
                       std::mt19937_64& rng) {
  std::bernoulli_distribution keep(density);
  std::vector<std::uint64_t> a(vars.size(), 0);
  Predicate acc = ctx.fls();
  for (;;) {
    if (keep(rng)) {
      Predicate cube = ctx.tru();
      for (std::size_t i = 0; i < vars.size(); ++i)
        cube = ctx.conj(cube, ctx.value_eq(vars[i], a[i]));
      acc = ctx.disj(acc, cube);
    }
    std::size_t d = vars.size();
    while (d-- > 0) {
      if (++a[d] < vars[d].domain_size()) break;
      a[d] = 0;
      if (d == 0) return acc;
    }
    if (d == static_cast<std::size_t>(-1)) return acc;
  }
}

// Strict random quantization relation: every concrete value gets a nonempty
// set of abstract partners.  The sets are kept so a sabotaged trial can pick
// a related abstract value deterministically.
struct Cover {
  Predicate pred;
  std::vector<std::vector<std::uint64_t>> sets;  // indexed by concrete value
};

Cover random_cover(Context& ctx, Variable con, Variable abs, std::mt19937_64& rng) {
  std::bernoulli_distribution include(0.4);
  Cover cov;
  cov.pred = ctx.fls();
  for (std::uint64_t v = 0; v < con.domain_size(); ++v) {
    std::vector<std::uint64_t> set;
    for (std::uint64_t w = 0; w < abs.domain_size(); ++w)
      if (include(rng)) set.push_back(w);
    if (set.empty()) set.push_back(rng() % abs.domain_size());
    for (std::uint64_t w : set)
      cov.pred = ctx.disj(cov.pred, ctx.conj(ctx.value_eq(con, v), ctx.value_eq(abs, w)));
    cov.sets.push_back(std::move(set));
  }
  return cov;
}

// The canonical exhaustive abstraction: nonblocking exactly where every
// related concrete input is nonblocking, transitions wherever some related
// concrete transition exists.  Satisfies both claim conditions by
// construction, which makes it the reference generator for the trials.
FiniteModule exhaustive_overapprox(const std::string& name, const FiniteModule& m,
                                   const std::vector<Variable>& abs_in,
                                   const std::vector<Variable>& abs_out,
                                   Predicate q_in, Predicate q_out) {
  Context& ctx = m.ctx();
  Predicate nb_hat = ctx.forall(m.inputs(), ctx.implies(q_in, m.nonblocking()));
  std::vector<Variable> io = m.inputs();
  io.insert(io.end(), m.outputs().begin(), m.outputs().end());
  Predicate lifted = ctx.exists(io, ctx.conj(ctx.conj(q_in, m.constraint()), q_out));
  return FiniteModule(name, abs_in, abs_out, ctx.conj(nb_hat, lifted));
}

std::uint64_t rand_dom(std::mt19937_64& rng) { return 2 + rng() % 7; }

}  // namespace

Theorem2Trial theorem2_trial(std::uint64_t seed, bool sabotage) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 1);
  Context ctx;
  Variable x = ctx.declare("x", rand_dom(rng));
  Variable k = ctx.declare("k", rand_dom(rng));
  Variable y = ctx.declare("y", rand_dom(rng));
  Variable j = ctx.declare("j", rand_dom(rng));
  Variable z = ctx.declare("z", rand_dom(rng));
  Variable xh = ctx.declare("xh", rand_dom(rng));
  Variable kh = ctx.declare("kh", rand_dom(rng));
  Variable yh = ctx.declare("yh", rand_dom(rng));
  Variable jh = ctx.declare("jh", rand_dom(rng));
  Variable zh = ctx.declare("zh", rand_dom(rng));

  std::uniform_real_distribution<double> dens(0.3, 0.7);
  Predicate t1 = random_table(ctx, {x, k, y}, dens(rng), rng);
  Predicate t2 = random_table(ctx, {j, y, z}, dens(rng), rng);

  std::uint64_t j0 = 0, y0 = 0;
  if (sabotage) {
    // Delete every concrete row at one input of M2; the enlarged abstraction
    // below then claims nonblocking at a related abstract input.
    j0 = rng() % j.domain_size();
    y0 = rng() % y.domain_size();
    t2 = ctx.conj(t2, ctx.neg(ctx.conj(ctx.value_eq(j, j0), ctx.value_eq(y, y0))));
  }

  FiniteModule m1("M1", {x}, {k, y}, t1);
  FiniteModule m2("M2", {j, y}, {z}, t2);

  Cover cx = random_cover(ctx, x, xh, rng);
  Cover ck = random_cover(ctx, k, kh, rng);
  Cover cy = random_cover(ctx, y, yh, rng);
  Cover cj = random_cover(ctx, j, jh, rng);
  Cover cz = random_cover(ctx, z, zh, rng);

  Predicate q1_in = cx.pred;
  Predicate q1_out = ctx.conj(ck.pred, cy.pred);
  Predicate q2_in = ctx.conj(cj.pred, cy.pred);
  Predicate q2_out = cz.pred;

  FiniteModule a1 = exhaustive_overapprox("A1", m1, {xh}, {kh, yh}, q1_in, q1_out);
  FiniteModule a2 = exhaustive_overapprox("A2", m2, {jh, yh}, {zh}, q2_in, q2_out);
  if (sabotage) {
    Predicate extra = ctx.conj(ctx.conj(ctx.value_eq(jh, cj.sets[j0][0]),
                                        ctx.value_eq(yh, cy.sets[y0][0])),
                               ctx.value_eq(zh, 0));
    a2 = FiniteModule("A2", {jh, yh}, {zh}, ctx.disj(a2.constraint(), extra));
  }

  Theorem2Trial out;
  CheckReport r1 = check_abstraction({&m1, &a1, q1_in, q1_out});
  CheckReport r2 = check_abstraction({&m2, &a2, q2_in, q2_out});
  out.level1_pass = r1.pass;
  out.level2_pass = r2.pass;

  FiniteModule m12 = compose2(m1, m2, "M12");
  FiniteModule a12 = compose2(a1, a2, "A12");
  Predicate q_in = ctx.conj(cx.pred, cj.pred);
  Predicate q_out = ctx.conj(ctx.conj(ck.pred, cy.pred), cz.pred);
  CheckReport rc = check_abstraction({&m12, &a12, q_in, q_out});
  out.composed_pass = rc.pass;

  if (!out.level1_pass) out.note = "level-1 claim failed: " + r1.note;
  else if (!out.level2_pass) out.note = "level-2 claim failed: " + r2.note;
  else if (!out.composed_pass) out.note = "composed claim failed: " + rc.note;
  return out;
}

Theorem3Trial theorem3_trial(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 2);
  Context ctx;
  Variable x = ctx.declare("x", rand_dom(rng));
  Variable y = ctx.declare("y", rand_dom(rng));
  Variable w = ctx.declare("w", rand_dom(rng));
  Variable xh = ctx.declare("xh", rand_dom(rng));
  Variable yh = ctx.declare("yh", rand_dom(rng));
  Variable wh = ctx.declare("wh", rand_dom(rng));

  std::uniform_real_distribution<double> dens(0.3, 0.7);
  FiniteModule m("M", {x}, {y, w}, random_table(ctx, {x, y, w}, dens(rng), rng));

  Cover cx = random_cover(ctx, x, xh, rng);
  Cover cy = random_cover(ctx, y, yh, rng);
  Cover cw = random_cover(ctx, w, wh, rng);

  Predicate q_out = ctx.conj(cy.pred, cw.pred);
  FiniteModule a = exhaustive_overapprox("A", m, {xh}, {yh, wh}, cx.pred, q_out);

  Theorem3Trial out;
  out.base_pass = check_abstraction({&m, &a, cx.pred, q_out}).pass;

  FiniteModule mh = hide(m, {w}, "Mh");
  FiniteModule ah = hide(a, {wh}, "Ah");
  out.hidden_pass = check_abstraction({&mh, &ah, cx.pred, cy.pred}).pass;
  return out;
}

namespace {

HarnessStats run_harness(int trials, std::uint64_t seed, const TrialCallback& per_trial,
                         const std::function<std::pair<bool, std::string>(std::uint64_t)>& one) {
  if (trials < 0) throw ValidationError("trial count must be nonnegative");
  HarnessStats st;
  st.trials = trials;
  for (int t = 0; t < trials; ++t) {
    std::uint64_t s = seed + static_cast<std::uint64_t>(t);
    auto [ok, note] = one(s);
    TrialRecord rec{t, s, ok, note};
    if (ok) ++st.passes;
    else {
      ++st.failures;
      if (st.failed.size() < 8) st.failed.push_back(rec);
    }
    if (per_trial) per_trial(rec);
  }
  return st;
}

}  // namespace

HarnessStats theorem2_harness(int trials, std::uint64_t seed, const TrialCallback& per_trial) {
  return run_harness(trials, seed, per_trial, [](std::uint64_t s) {
    Theorem2Trial r = theorem2_trial(s, false);
    bool ok = r.level1_pass && r.level2_pass && r.composed_pass;
    return std::make_pair(ok, r.note);
  });
}

HarnessStats theorem3_harness(int trials, std::uint64_t seed, const TrialCallback& per_trial) {
  return run_harness(trials, seed, per_trial, [](std::uint64_t s) {
    Theorem3Trial r = theorem3_trial(s);
    bool ok = r.base_pass && r.hidden_pass;
    std::string note = ok ? "" : (r.base_pass ? "claim broke under hiding" : "base claim failed");
    return std::make_pair(ok, note);
  });
}

}  // namespace symcomp
