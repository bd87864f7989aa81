#include <doctest.h>

#include <cmath>

#include "symcomp/grid.hpp"

using namespace symcomp;

TEST_CASE("quantize boundaries land in both cells") {
  auto q = Quantizer::uniform({0, 4}, 1.0, 0.0, 5);
  CHECK(q.quantize(0.49) == std::vector<std::uint32_t>{0});
  CHECK(q.quantize(0.5) == std::vector<std::uint32_t>{0, 1});
  CHECK(q.quantize(0.51) == std::vector<std::uint32_t>{1});
  CHECK(q.quantize(0.0) == std::vector<std::uint32_t>{0});
  CHECK(q.quantize(4.0) == std::vector<std::uint32_t>{4});
  CHECK_THROWS_AS(q.quantize(4.6), OutOfDomain);
  CHECK_THROWS_AS(q.quantize(-0.6), OutOfDomain);
}

TEST_CASE("benchmark-style grid: anchor half a cell in") {
  // 32 cells on [0,32], centers at 0.5 + c
  auto q = Quantizer::uniform({0, 32}, 1.0, 0.5, 32);
  CHECK(q.concretize(0) == Interval{0.0, 1.0});
  CHECK(q.concretize(31) == Interval{31.0, 32.0});
  CHECK(q.check_strict());
  CHECK(q.quantize(1.0) == std::vector<std::uint32_t>{0, 1});
  CHECK(q.quantize(31.99).front() == 31);
}

TEST_CASE("concretize clips to the declared domain") {
  auto q = Quantizer::uniform({0, 4}, 1.0, 0.0, 5);
  CHECK(q.concretize(0) == Interval{0.0, 0.5}); // clipped on the left
  CHECK(q.concretize(2) == Interval{1.5, 2.5});
  CHECK(q.concretize(4) == Interval{3.5, 4.0});
  CHECK_THROWS_AS(q.concretize(5), BadCell);
}

TEST_CASE("strictness: cover test against dense samples") {
  auto strict = Quantizer::uniform({0, 32}, 1.0, 0.5, 32);
  auto sparse = Quantizer::uniform({0, 32}, 1.0, 0.5, 2); // covers [0,2] only
  CHECK(strict.check_strict());
  CHECK(!sparse.check_strict());
  // oracle: a grid is strict iff every sampled point quantizes somewhere
  for (int i = 0; i <= 640; ++i) {
    double p = 32.0 * i / 640.0;
    CHECK(!strict.quantize(p).empty());
  }
  bool sparse_misses = false;
  for (int i = 0; i <= 640 && !sparse_misses; ++i)
    sparse_misses = sparse.quantize(32.0 * i / 640.0).empty();
  CHECK(sparse_misses);
}

TEST_CASE("identity quantizer") {
  auto q = Quantizer::identity({-2, -1, 1, 2});
  CHECK(q.check_strict());
  CHECK(q.cell_count() == 4);
  CHECK(q.quantize(-2) == std::vector<std::uint32_t>{0});
  CHECK(q.quantize(2) == std::vector<std::uint32_t>{3});
  CHECK_THROWS_AS(q.quantize(0), OutOfDomain);
  CHECK(q.concretize(2) == Interval{1, 1});
  CHECK_THROWS_AS(Quantizer::identity({1, 1}), ValidationError);
}

TEST_CASE("cells_intersecting honors closed boundaries") {
  auto q = Quantizer::uniform({0, 8}, 1.0, 0.5, 8); // cells [c, c+1]
  auto r = q.cells_intersecting({2.0, 3.0});
  REQUIRE(r.has_value());
  CHECK(r->first == 1);  // [1,2] touches at 2
  CHECK(r->second == 3); // [3,4] touches at 3
  auto single = q.cells_intersecting({2.2, 2.8});
  REQUIRE(single.has_value());
  CHECK(single->first == 2);
  CHECK(single->second == 2);
  CHECK(!q.cells_intersecting({9.5, 10.0}).has_value());
  auto idq = Quantizer::identity({-2, -1, 1, 2});
  auto ir = idq.cells_intersecting({-1.5, 1.5});
  REQUIRE(ir.has_value());
  CHECK(ir->first == 1);
  CHECK(ir->second == 2);
}

TEST_CASE("relation predicate links samples to containing cells") {
  Context c;
  Variable s = c.declare("s", 2);
  Variable cell = c.declare("cell", 5);
  auto q = Quantizer::uniform({0, 4}, 1.0, 0.0, 5);
  std::vector<double> samples{0.0, 1.0};
  Predicate rel = relation_predicate(c, q, samples, s, cell);
  CHECK(c.count_sat(rel, {s, cell}) == 2); // exactly (0,c0) and (1,c1)
  CHECK(c.eval(rel, {s, cell}, {0, 0}));
  CHECK(c.eval(rel, {s, cell}, {1, 1}));
  CHECK(!c.eval(rel, {s, cell}, {0, 1}));
  // a boundary sample relates to both neighbours
  std::vector<double> bnd{0.5};
  Variable s1 = c.declare("s1", 1);
  Predicate rel2 = relation_predicate(c, q, bnd, s1, cell);
  CHECK(c.count_sat(rel2, {s1, cell}) == 2);
}

TEST_CASE("joint relation equals conjunction of components") {
  Context c;
  Variable sx = c.declare("sx", 3);
  Variable sy = c.declare("sy", 2);
  Variable cx = c.declare("cx", 4);
  Variable cy = c.declare("cy", 4);
  std::vector<Quantizer> qs{Quantizer::uniform({0, 3}, 1.0, 0.0, 4),
                            Quantizer::uniform({0, 3}, 1.0, 0.0, 4)};
  std::vector<std::vector<double>> samples{{0.2, 1.1, 2.5}, {0.9, 3.0}};
  std::vector<Variable> svars{sx, sy}, cvars{cx, cy};
  Predicate joint = joint_relation_predicate(c, qs, samples, svars, cvars);
  Predicate manual = c.conj(relation_predicate(c, qs[0], samples[0], sx, cx),
                            relation_predicate(c, qs[1], samples[1], sy, cy));
  CHECK(joint == manual);
  // oracle: membership of the sample tuple in the cell product
  for (std::uint64_t a = 0; a < 3; ++a)
    for (std::uint64_t b = 0; b < 2; ++b)
      for (std::uint64_t i = 0; i < 4; ++i)
        for (std::uint64_t j = 0; j < 4; ++j) {
          bool want = qs[0].concretize(i).contains(samples[0][a]) &&
                      qs[1].concretize(j).contains(samples[1][b]);
          CHECK(c.eval(joint, {sx, sy, cx, cy}, {a, b, i, j}) == want);
        }
}
