#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "padictree/builder.hpp"
#include "padictree/errors.hpp"
#include "support.hpp"

using namespace padictree;
using namespace test_support;

namespace {

// 2-adic valuation of a nonzero integer, by repeated halving.
int v2(long long x) {
  int v = 0;
  while (x % 2 == 0) {
    x /= 2;
    ++v;
  }
  return v;
}

std::vector<ProjPoint> eight_point_points(bool with_infinity) {
  std::vector<ProjPoint> xs;
  for (long long c : eight_point_codes()) xs.push_back(int_point(c));
  if (with_infinity) xs.push_back(ProjPoint::infinity(q2()));
  return xs;
}

// The example dendrogram written out by hand; labels 0..7 are x1..x8 and
// 8 is infinity.
MarkedTree eight_point_by_hand() {
  MarkedTree t;
  const auto top = t.add_vertex(0);
  const auto x78 = t.add_vertex(1);
  const auto c2 = t.add_vertex(2);
  const auto x123 = t.add_vertex(5);
  const auto x12 = t.add_vertex(6);
  const auto x456 = t.add_vertex(3);
  const auto x45 = t.add_vertex(4);
  t.add_edge(top, x78, 1);
  t.add_edge(top, c2, 2);
  t.add_edge(c2, x123, 3);
  t.add_edge(x123, x12, 1);
  t.add_edge(c2, x456, 1);
  t.add_edge(x456, x45, 1);
  t.attach_end(8, top);
  t.attach_end(6, x78);
  t.attach_end(7, x78);
  t.attach_end(2, x123);
  t.attach_end(0, x12);
  t.attach_end(1, x12);
  t.attach_end(5, x456);
  t.attach_end(3, x45);
  t.attach_end(4, x45);
  t.set_infinity_end(8);
  return t;
}

}  // namespace

TEST_SUITE_BEGIN("builder");

TEST_CASE("valuation matrix of the example codes") {
  const auto xs = eight_point_points(false);
  const auto w = valuation_matrix(xs);
  const auto& c = eight_point_codes();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(w.at(i, i) == kInfiniteValuation);
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (i != j) CHECK(w.at(i, j) == v2(c[i] - c[j]));
    }
  }
  CHECK(w.at(3, 4) == 4);
  CHECK(w.at(3, 5) == 3);
  CHECK(w.at(6, 7) == 1);
  CHECK(w.at(0, 1) == 6);
  CHECK(is_ultrametric(w));
}

TEST_CASE("valuation matrix small cases") {
  const auto w01 = valuation_matrix({int_point(0), int_point(1)});
  CHECK(w01.at(0, 1) == 0);
  const auto w = valuation_matrix({int_point(0), int_point(2), ProjPoint::infinity(q2())});
  CHECK(w.at(0, 1) == 1);
  CHECK(w.infinity_index == std::size_t{2});
  CHECK(w.at(0, 2) == 0);
  CHECK(w.at(2, 1) == 0);
  // Outside the unit disk the infinity row drops with the smallest entry.
  const auto far = valuation_matrix({PadicNumber::monomial(q2(), 1, -2), int_point(0),
                                     ProjPoint::infinity(q2())});
  CHECK(far.at(0, 1) == -2);
  CHECK(far.at(0, 2) == -2);
  CHECK(is_ultrametric(far));

  CHECK_THROWS_AS(valuation_matrix({int_point(3), int_point(1), int_point(3)}), InputError);
  CHECK_THROWS_AS(valuation_matrix({ProjPoint::infinity(q2()), ProjPoint::infinity(q2())}), InputError);
  const auto third = PadicNumber::from_rational(q2(), 1, 3);
  CHECK_THROWS_AS(valuation_matrix({third, add(third, PadicNumber::monomial(q2(), 1, 70))}),
                  PrecisionError);
}

TEST_CASE("parallel and serial valuation matrices agree") {
  std::mt19937_64 rng(21);
  for (auto f : {q2(), FieldSpec::make(3), FieldSpec::make(2, 2)}) {
    for (int i = 0; i < 20; ++i) {
      const auto xs = random_points(rng, f, 2 + rng() % 40);
      const auto a = valuation_matrix(xs), b = valuation_matrix_serial(xs);
      CHECK(a.w == b.w);
      CHECK(a.infinity_index == b.infinity_index);
      CHECK(is_ultrametric(a));
    }
  }
}

TEST_CASE("vertex of a triple") {
  const auto inf = ProjPoint::infinity(q2());
  auto v = vertex_of_triple(int_point(0), int_point(1), inf);
  CHECK(v.level == 0);
  v = vertex_of_triple(int_point(0), int_point(2), inf);
  CHECK(v.level == 1);
  CHECK(v.center.is_zero());
  v = vertex_of_triple(inf, int_point(2), int_point(6));
  CHECK(v.level == 2);
  // x4, x5, x6: the tripod branches where x4 and x5 split (valuation 4);
  // the level-3 disk only lies on the way to x6.
  v = vertex_of_triple(int_point(4), int_point(20), int_point(12));
  CHECK(v.level == 4);
  CHECK(val_of_difference(v.center, PadicNumber::from_integer(q2(), 4)) >= 4);
  v = vertex_of_triple(int_point(12), int_point(4), int_point(20));
  CHECK(v.level == 4);
  CHECK(val_of_difference(v.center, PadicNumber::from_integer(q2(), 4)) >= 4);
  CHECK_THROWS_AS(vertex_of_triple(int_point(1), int_point(1), inf), InputError);
}

TEST_CASE("tripod") {
  const auto t = build_projective_dendrogram({int_point(0), int_point(1), ProjPoint::infinity(q2())});
  CHECK(t.vertex_count() == 1);
  CHECK(t.ends().size() == 3);
  CHECK(t.root() == VertexId{0});
  CHECK(t.infinity_end() == EndLabel{2});
  CHECK(t.level(0) == 0);
}

TEST_CASE("four points with lambda = 4") {
  const auto t = build_projective_dendrogram(
      {int_point(0), int_point(1), ProjPoint::infinity(q2()), int_point(4)});
  REQUIRE(t.vertex_count() == 2);
  REQUIRE(t.root());
  const VertexId root = *t.root();
  const VertexId inner = 1 - root;
  CHECK(t.ends().at(0) == inner);
  CHECK(t.ends().at(3) == inner);
  CHECK(t.ends().at(1) == root);
  CHECK(t.ends().at(2) == root);
  CHECK(t.edges().at(0).length == 2);
  CHECK(t.level(root) == 0);
  CHECK(t.level(inner) == 2);
}

TEST_CASE("example dendrogram") {
  const auto xs = eight_point_points(true);
  const auto built = build_projective_dendrogram(xs, {false, {}});
  // x1 = 0, x7 = 1 and infinity are among the points, so v_D is the top.
  REQUIRE(built.root());
  CHECK(built.level(*built.root()) == 0);
  CHECK(built.ends().at(8) == *built.root());
  CHECK(labeled_isomorphic(built, eight_point_by_hand()));
  CHECK(labeled_isomorphic(single_linkage_oracle(valuation_matrix(xs)), eight_point_by_hand()));
  // Ids follow (level, smallest label).
  for (VertexId v = 1; v < built.vertex_count(); ++v) CHECK(*built.level(v - 1) <= *built.level(v));

  // A translation by 2^7 keeps every pairwise valuation.
  std::vector<ProjPoint> moved;
  for (const auto& x : xs) moved.push_back(x.is_infinity() ? x : ProjPoint(add(x.value(), PadicNumber::monomial(q2(), 1, 7))));
  CHECK(labeled_isomorphic(build_projective_dendrogram(moved, {false, {}}), built));
}

TEST_CASE("degenerate inputs") {
  const auto one = build_projective_dendrogram({int_point(5)});
  CHECK(one.vertex_count() == 1);
  CHECK(one.ends().size() == 1);
  const auto two = build_projective_dendrogram({int_point(0), int_point(8)});
  CHECK(two.vertex_count() == 1);
  CHECK(two.edges().empty());
  CHECK(two.separation() == 3);
  CHECK(labeled_isomorphic(two, single_linkage_oracle(valuation_matrix({int_point(0), int_point(8)}))));
  const auto half = build_projective_dendrogram({int_point(3), ProjPoint::infinity(q2())});
  CHECK(half.vertex_count() == 1);
  CHECK_FALSE(half.separation());
  CHECK_THROWS_AS(build_projective_dendrogram({}), InputError);
  CHECK_THROWS_AS(build_projective_dendrogram({int_point(1), int_point(2), int_point(1)}), InputError);
}

TEST_CASE("non-normalized roots") {
  const auto inf = ProjPoint::infinity(q2());
  // 0, 1 and infinity present in any order: v_D is still marked.
  const auto t = build_projective_dendrogram({int_point(4), inf, int_point(1), int_point(0)}, {false, {}});
  REQUIRE(t.root());
  CHECK(*t.root() == median_vertex(t, 3, 2, 1));
  CHECK_FALSE(build_projective_dendrogram({int_point(4), inf, int_point(2)}, {false, {}}).root());
}

TEST_CASE("single-linkage oracle examples") {
  ValuationMatrix flat;
  flat.n = 5;
  flat.w.assign(25, 0);
  for (std::size_t i = 0; i < 5; ++i) flat.w[i * 5 + i] = kInfiniteValuation;
  const auto star = single_linkage_oracle(flat);
  CHECK(star.vertex_count() == 1);
  CHECK(star.ends().size() == 5);

  ValuationMatrix m;
  m.n = 3;
  m.w = {kInfiniteValuation, 0, 0, 0, kInfiniteValuation, 5, 0, 5, kInfiniteValuation};
  const auto t = single_linkage_oracle(m);
  CHECK(t.vertex_count() == 1);
  CHECK(t.level(0) == 5);

  m.w[1] = m.w[3] = 7;  // w(0,1)=7, w(1,2)=5, w(0,2)=0
  CHECK_THROWS_AS(single_linkage_oracle(m), InputError);
}

TEST_CASE("builder agrees with the oracle on random sets") {
  std::mt19937_64 rng(99);
  for (auto f : {q2(), FieldSpec::make(3), FieldSpec::make(2, 2), FieldSpec::make(5)}) {
    for (int i = 0; i < 60; ++i) {
      const auto xs = random_points(rng, f, 1 + rng() % 30);
      const auto t = build_projective_dendrogram(xs, {false, {}});
      CHECK(labeled_isomorphic(t, single_linkage_oracle(valuation_matrix(xs))));
      CHECK(t.ends().size() == xs.size());
      CHECK(max_branching(t) <= static_cast<std::size_t>(f->q()) + 1);
      if (xs.size() >= 3) {
        for (VertexId v = 0; v < t.vertex_count(); ++v) CHECK(order(t, v, true) >= 3);
      }
    }
  }
}

TEST_CASE("trees are invariant under Moebius maps") {
  std::mt19937_64 rng(7);
  for (auto f : {q2(), FieldSpec::make(3)}) {
    for (int i = 0; i < 60; ++i) {
      const auto xs = random_points(rng, f, 3 + rng() % 8);
      const auto g = random_mobius(rng, f);
      std::vector<ProjPoint> ys;
      for (const auto& x : xs) ys.push_back(g(x));
      CHECK(labeled_isomorphic(build_projective_dendrogram(xs), build_projective_dendrogram(ys)));
    }
  }
}

TEST_SUITE_END();
