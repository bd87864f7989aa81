#include <doctest.h>

#include <cmath>
#include <random>

#include "symcomp/module.hpp"

using namespace symcomp;

namespace {

// relation builder over raw label indices
template <typename F>
Predicate rel2(Context& c, Variable v1, Variable v2, F f) {
  Predicate p = c.fls();
  for (std::uint64_t i = 0; i < v1.domain_size(); ++i)
    for (std::uint64_t j = 0; j < v2.domain_size(); ++j)
      if (f(i, j))
        p = c.disj(p, c.conj(c.value_eq(v1, i), c.value_eq(v2, j)));
  return p;
}

template <typename F>
Predicate rel3(Context& c, Variable v1, Variable v2, Variable v3, F f) {
  Predicate p = c.fls();
  for (std::uint64_t i = 0; i < v1.domain_size(); ++i)
    for (std::uint64_t j = 0; j < v2.domain_size(); ++j)
      for (std::uint64_t k = 0; k < v3.domain_size(); ++k)
        if (f(i, j, k))
          p = c.disj(p, c.conj(c.value_eq(v1, i),
                               c.conj(c.value_eq(v2, j), c.value_eq(v3, k))));
  return p;
}

} // namespace

// The series example: M1 relates x to y with |y-x| <= 2, M2 maps y to the
// integer cell(s) nearest sqrt(y) and blocks on y < 0. Composition must
// reject every x that can reach a blocking y, i.e. keep exactly x >= 2 —
// not the x >= -2 that "some chain of values exists" would give.
TEST_CASE("series composition propagates blocking") {
  Context c;
  Variable x = c.declare("x", 13); // labels -4..8
  Variable y = c.declare("y", 17); // labels -6..10
  Variable z = c.declare("z", 5);  // labels 0..4
  auto xv = [](std::uint64_t i) { return static_cast<double>(i) - 4; };
  auto yv = [](std::uint64_t i) { return static_cast<double>(i) - 6; };

  Predicate p1 = rel2(c, x, y, [&](std::uint64_t i, std::uint64_t j) {
    return std::fabs(yv(j) - xv(i)) <= 2.0;
  });
  Predicate p2 = rel2(c, y, z, [&](std::uint64_t j, std::uint64_t k) {
    double v = yv(j);
    return v >= 0 && std::fabs(static_cast<double>(k) - std::sqrt(v)) <= 0.5;
  });
  FiniteModule m1("band", {x}, {y}, p1);
  FiniteModule m2("root", {y}, {z}, p2);

  CHECK(c.is_tautology(m1.nonblocking()));
  CHECK(m2.nonblocking() == c.range(y, 6, 16)); // y-values 0..10

  FiniteModule m12 = compose2(m1, m2);
  CHECK(m12.inputs() == std::vector<Variable>{x});
  CHECK(m12.outputs() == std::vector<Variable>{y, z});
  CHECK(m12.nonblocking() == c.range(x, 6, 12)); // x-values 2..8, exactly

  // without the guard the naive existence check keeps x >= -2: strictly more
  Predicate naive = c.exists({y, z}, c.conj(p1, p2));
  CHECK(naive == c.range(x, 2, 12));
  CHECK(c.is_unsat(c.conj(m12.nonblocking(), c.neg(naive))));
  CHECK(!c.is_unsat(c.conj(naive, c.neg(m12.nonblocking()))));

  // argument order must not matter
  FiniteModule swapped = compose2(m2, m1);
  CHECK(swapped.constraint() == m12.constraint());

  // spot-check the x=2 row: five y values, one z each
  Predicate row = c.fix(m12.constraint(), x, 6);
  CHECK(c.count_sat(row, {y, z}) == 5);
}

TEST_CASE("division module blocks exactly at zero denominator") {
  Context c;
  Variable xx = c.declare("num", 5); // -2..2
  Variable yy = c.declare("den", 5); // -2..2
  Variable zz = c.declare("quo", 9); // -4..4
  Predicate p = rel3(c, xx, yy, zz, [](std::uint64_t i, std::uint64_t j, std::uint64_t k) {
    double a = static_cast<double>(i) - 2, b = static_cast<double>(j) - 2;
    if (b == 0)
      return false;
    return std::fabs((static_cast<double>(k) - 4) - a / b) <= 0.5;
  });
  FiniteModule div("div", {xx, yy}, {zz}, p);
  CHECK(div.nonblocking() == c.neg(c.value_eq(yy, 2)));
}

TEST_CASE("composed nonblocking matches its closed form on random pairs") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    Context c;
    Variable a = c.declare("a", 3);
    Variable b = c.declare("b", 4);
    Variable cc = c.declare("c", 2);
    Variable d = c.declare("d", 3);
    std::uniform_real_distribution<double> dens(0.3, 0.7);
    std::bernoulli_distribution coin1(dens(rng)), coin2(dens(rng));

    bool t1[3][4], t2[4][2][3];
    for (auto& row : t1)
      for (bool& v : row)
        v = coin1(rng);
    for (auto& plane : t2)
      for (auto& row : plane)
        for (bool& v : row)
          v = coin2(rng);

    Predicate p1 = rel2(c, a, b, [&](std::uint64_t i, std::uint64_t j) { return t1[i][j]; });
    Predicate p2 = rel3(c, b, cc, d, [&](std::uint64_t i, std::uint64_t j,
                                         std::uint64_t k) { return t2[i][j][k]; });
    FiniteModule m1("m1", {a}, {b}, p1);
    FiniteModule m2("m2", {b, cc}, {d}, p2);
    FiniteModule m12 = compose2(m1, m2);
    CHECK(m12.inputs() == std::vector<Variable>{a, cc});
    CHECK(m12.outputs() == std::vector<Variable>{b, d});

    // brute-force the definition
    bool nb2[4][2];
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 2; ++j) {
        nb2[i][j] = false;
        for (int k = 0; k < 3; ++k)
          nb2[i][j] = nb2[i][j] || t2[i][j][k];
      }
    for (std::uint64_t va = 0; va < 3; ++va)
      for (std::uint64_t vc = 0; vc < 2; ++vc) {
        bool guard = true;
        for (int vb = 0; vb < 4; ++vb)
          guard = guard && (!t1[va][vb] || nb2[vb][vc]);
        for (std::uint64_t vb = 0; vb < 4; ++vb)
          for (std::uint64_t vd = 0; vd < 3; ++vd) {
            bool want = t1[va][vb] && t2[vb][vc][vd] && guard;
            CHECK(c.eval(m12.constraint(), {a, b, cc, d}, {va, vb, vc, vd}) == want);
          }
      }

    // the nonblocking set in closed form
    Predicate joint = c.conj(p1, p2);
    Predicate closed = c.conj(c.exists({b, d}, joint),
                              c.forall({b, d}, c.implies(p1, m2.nonblocking())));
    CHECK(m12.nonblocking() == closed);
  }
}

TEST_CASE("chain composition is association-independent") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    Context c;
    Variable a = c.declare("a", 3);
    Variable b = c.declare("b", 3);
    Variable d = c.declare("d", 3);
    Variable e = c.declare("e", 3);
    std::bernoulli_distribution coin(0.55);
    auto randrel = [&](Variable u, Variable v) {
      return rel2(c, u, v, [&](std::uint64_t, std::uint64_t) { return coin(rng); });
    };
    FiniteModule A("A", {a}, {b}, randrel(a, b));
    FiniteModule B("B", {b}, {d}, randrel(b, d));
    FiniteModule C("C", {d}, {e}, randrel(d, e));

    FiniteModule left = compose2(compose2(A, B), C);
    FiniteModule right = compose2(A, compose2(B, C));
    FiniteModule folded = compose_all({A, B, C});
    CHECK(left.constraint() == right.constraint());
    CHECK(folded.constraint() == left.constraint());
    CHECK(folded.inputs() == left.inputs());
    CHECK(folded.outputs() == left.outputs());
  }
}

TEST_CASE("parallel composition is plain conjunction") {
  Context c;
  Variable a = c.declare("a", 4);
  Variable b = c.declare("b", 4);
  Variable p = c.declare("p", 4);
  Variable q = c.declare("q", 4);
  Predicate f1 = rel2(c, a, b, [](std::uint64_t i, std::uint64_t j) { return i <= j; });
  Predicate f2 = rel2(c, p, q, [](std::uint64_t i, std::uint64_t j) { return i + j == 3; });
  FiniteModule m1("m1", {a}, {b}, f1);
  FiniteModule m2("m2", {p}, {q}, f2);
  FiniteModule par = compose2(m1, m2);
  CHECK(par.constraint() == c.conj(f1, f2));
  CHECK(compose2(m2, m1).constraint() == par.constraint());
  CHECK(par.inputs() == std::vector<Variable>{a, p});
  CHECK(par.outputs() == std::vector<Variable>{b, q});
}

TEST_CASE("composition preconditions") {
  Context c;
  Variable a = c.declare("a", 2);
  Variable b = c.declare("b", 2);
  Variable d = c.declare("d", 2);
  FiniteModule fwd("fwd", {a}, {b}, rel2(c, a, b, [](auto, auto) { return true; }));
  FiniteModule back("back", {b}, {a}, rel2(c, b, a, [](auto, auto) { return true; }));
  FiniteModule fwd2("fwd2", {a}, {b}, rel2(c, a, b, [](auto i, auto j) { return i == j; }));
  CHECK_THROWS_AS(compose2(fwd, back), AlgebraicLoop);
  CHECK_THROWS_AS(compose2(fwd, fwd2), OutputClash);

  Context other;
  Variable oa = other.declare("a", 2);
  Variable ob = other.declare("b", 2);
  FiniteModule foreign("f", {oa}, {ob}, other.tru());
  CHECK_THROWS_AS(compose2(fwd, foreign), ContextMismatch);

  // degenerate: a bottom module drags the composition to bottom
  FiniteModule none("none", {b}, {d}, c.fls());
  FiniteModule dead = compose2(fwd, none);
  CHECK(c.is_unsat(dead.constraint()));
  CHECK(c.is_unsat(dead.nonblocking()));
}

TEST_CASE("compose_all orders by dependency, then name") {
  Context c;
  Variable s = c.declare("s", 2);
  Variable t1v = c.declare("t1", 2);
  Variable t2v = c.declare("t2", 2);
  Variable out = c.declare("o", 2);
  auto total = [&](Variable u, Variable v) {
    return rel2(c, u, v, [](auto, auto) { return true; });
  };
  // diamond: src feeds both mids, both mids feed join
  FiniteModule src("src", {s}, {t1v}, total(s, t1v));
  FiniteModule mid("mid", {t1v}, {t2v}, total(t1v, t2v));
  FiniteModule join("join", {t1v, t2v}, {out}, total(t1v, out));
  FiniteModule folded = compose_all({join, src, mid}, "all");
  CHECK(folded.name() == "all");
  CHECK(folded.inputs() == std::vector<Variable>{s});
  FiniteModule manual = compose2(src, compose2(mid, join));
  CHECK(folded.constraint() == manual.constraint());

  // single module round-trips
  FiniteModule alone = compose_all({src});
  CHECK(alone.constraint() == src.constraint());

  CHECK_THROWS_AS(compose_all({}), ValidationError);
  CHECK_THROWS_AS(compose_all({src, src}), ValidationError); // duplicate name

  FiniteModule cyc1("cyc1", {s, t2v}, {t1v}, total(s, t1v));
  FiniteModule cyc2("cyc2", {t1v}, {t2v}, total(t1v, t2v));
  CHECK_THROWS_WITH_AS(compose_all({cyc1, cyc2}),
                       doctest::Contains("cyc1"), AlgebraicLoop);
}

TEST_CASE("hide quantifies outputs away") {
  Context c;
  Variable x = c.declare("x", 4);
  Variable w = c.declare("w", 4);
  Variable y = c.declare("y", 4);
  Predicate p = rel3(c, x, w, y, [](std::uint64_t i, std::uint64_t j, std::uint64_t k) {
    return j == (i + 1) % 4 && k == (j + 1) % 4;
  });
  FiniteModule m("m", {x}, {w, y}, p);
  FiniteModule h = hide(m, {w});
  CHECK(h.outputs() == std::vector<Variable>{y});
  CHECK(h.constraint() == c.exists({w}, p));
  CHECK(h.nonblocking() == m.nonblocking());

  FiniteModule all = hide(m, {w, y});
  CHECK(all.outputs().empty());
  CHECK(all.constraint() == m.nonblocking());

  CHECK_THROWS_AS(hide(m, {x}), NotAnOutput);
  CHECK(hide(m, {}).constraint() == p);
}

TEST_CASE("module construction is validated") {
  Context c;
  Variable x = c.declare("x", 4);
  Variable y = c.declare("y", 4);
  Variable z = c.declare("z", 4);
  Predicate p = rel2(c, x, y, [](auto i, auto j) { return i == j; });
  CHECK_THROWS_AS(FiniteModule("m", {x}, {x}, p), SupportError);
  CHECK_THROWS_AS(FiniteModule("m", {x}, {z}, p), SupportError); // y in support
  Variable joint = c.bundle({x, y});
  CHECK_THROWS_AS(FiniteModule("m", {joint}, {z}, c.tru()), TypeMismatch);
  Context other;
  Variable ox = other.declare("x", 4);
  CHECK_THROWS_AS(FiniteModule("m", {ox}, {y}, p), ContextMismatch);
}

TEST_CASE("as_control pairing") {
  Context c;
  Variable x = c.declare("x", 4);
  Variable u = c.declare("u", 2);
  Variable xp = c.declare("x'", 4);
  Variable lat = c.declare("lat", 3);
  Predicate dyn = rel3(c, x, u, xp, [](std::uint64_t i, std::uint64_t j, std::uint64_t k) {
    return k == (i + j) % 4;
  });
  FiniteModule m("sys", {x, u}, {xp}, dyn);
  ControlModule cm = as_control(m, {{x, xp}}, {u});
  CHECK(cm.states == std::vector<Variable>{x});
  CHECK(cm.primed == std::vector<Variable>{xp});
  CHECK(cm.transitions() == dyn);
  CHECK(c.is_tautology(cm.nonblocking()));

  CHECK_THROWS_AS(as_control(m, {{x, xp}}, {}), PairingError);   // u unpaired
  CHECK_THROWS_AS(as_control(m, {{u, xp}}, {x}), PairingError);  // domain mismatch
  CHECK_THROWS_AS(as_control(m, {{x, x}}, {u}), PairingError);   // not an output
  CHECK_THROWS_AS(as_control(m, {}, {u}), PairingError);

  // latent outputs must be hidden before the control reading
  Predicate dyn2 = c.conj(dyn, rel2(c, x, lat, [](auto i, auto j) { return j == i % 3; }));
  FiniteModule m2("sys2", {x, u}, {xp, lat}, dyn2);
  CHECK_THROWS_AS(as_control(m2, {{x, xp}}, {u}), PairingError);
  ControlModule ok = as_control(hide(m2, {lat}), {{x, xp}}, {u});
  CHECK(ok.module.outputs() == std::vector<Variable>{xp});
}
