#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "padictree/builder.hpp"
#include "padictree/errors.hpp"
#include "padictree/hidden.hpp"
#include "support.hpp"

using namespace padictree;
using namespace test_support;

namespace {

MarkedTree star_tree(int ends) {
  MarkedTree t;
  const auto v = t.add_vertex();
  for (EndLabel e = 0; e < ends; ++e) t.attach_end(e, v);
  return t;
}

// Hidden vertices given as (number of two-end leaf blocks) along a path.
MarkedTree hidden_path(const std::vector<int>& blocks) {
  MarkedTree t;
  EndLabel next = 0;
  std::optional<VertexId> prev;
  for (int b : blocks) {
    const auto h = t.add_vertex();
    if (prev) t.add_edge(*prev, h, 1);
    for (int i = 0; i < b; ++i) {
      const auto leaf = t.add_vertex();
      t.add_edge(h, leaf, 1);
      t.attach_end(next++, leaf);
      t.attach_end(next++, leaf);
    }
    prev = h;
  }
  return t;
}

}  // namespace

TEST_SUITE_BEGIN("hidden");

TEST_CASE("tripod has no hidden part") {
  const auto r = hidden_report(star_tree(3));
  CHECK(r.n == 3);
  CHECK(r.v_h == 0);
  CHECK(r.b0_h == 0);
  CHECK(r.chi == 0);
  CHECK(r.bounds.theorem);
  CHECK(r.bounds.corollary);
  CHECK(r.bounds.sharp);
}

TEST_CASE("spider") {
  const auto t = hidden_path({3});
  const auto g = hidden_subgraph(t);
  CHECK(g.vertices == std::vector<VertexId>{0});
  CHECK(g.edges.empty());
  const auto r = hidden_report(t);
  CHECK(r.n == 6);
  CHECK(r.v_h == 1);
  CHECK(r.t_h == 0);
  CHECK(r.b0_h == 1);
  CHECK(r.bounds.theorem);
  CHECK(r.bounds.corollary);
  CHECK(r.bounds.sharp);
  // The sharp bound is attained: 3 * 1 == 6 - 3.
  CHECK(3 * r.b0_h == r.n - 3);
}

TEST_CASE("example dendrogram") {
  std::vector<ProjPoint> xs;
  for (long long c : eight_point_codes()) xs.push_back(int_point(c));
  xs.push_back(ProjPoint::infinity(q2()));
  const auto t = build_projective_dendrogram(xs);
  const auto g = hidden_subgraph(t);
  REQUIRE(g.vertices.size() == 1);
  CHECK(t.level(g.vertices[0]) == 2);
  const auto r = hidden_report(t);
  CHECK(r.n == 9);
  CHECK(r.b0_h == 1);
  CHECK(r.bounds.theorem);

  // Without infinity, v_D joins the hidden part: it only keeps two edges to
  // clusters, then is contracted away, leaving the x1..x6 vertex.
  const auto rc = hidden_report(t, true);
  CHECK(rc.n == 8);
}

TEST_CASE("bound arithmetic is exact") {
  HiddenReport r;
  r.n = 10;
  r.v_h = 3;
  r.b0_h = 1;
  // 3 <= 10/4 - 1 + 1 = 2.5 fails; 1 <= 14/8 holds; 1 <= 7/3 holds.
  auto b = check_bounds(r);
  CHECK_FALSE(b.theorem);
  CHECK(b.corollary);
  CHECK(b.sharp);
  r.n = 4;
  r.v_h = 1;
  r.b0_h = 1;
  b = check_bounds(r);
  CHECK(b.theorem);   // 4 <= 4 - 4 + 4
  CHECK(b.corollary); // 8 <= 8
  CHECK_FALSE(b.sharp);
}

TEST_CASE("a hidden path of three vertices") {
  // Outer hidden vertices hold two leaf blocks, the middle one one block.
  const auto r = hidden_report(hidden_path({2, 1, 2}));
  CHECK(r.n == 10);
  CHECK(r.v_h == 3);
  CHECK(r.t_h == 2);
  CHECK(r.b0_h == 1);
  CHECK(r.chi == 1);
  CHECK(4 * r.t_h <= r.n);
  CHECK_FALSE(r.bounds.theorem);
  CHECK(r.bounds.sharp);
}

TEST_CASE("extremal dendrograms attain the sharp bound") {
  for (std::size_t n = 6; n <= 30; ++n) {
    const auto x = extremal_dendrogram(n);
    CHECK_FALSE(x.degenerate);
    x.tree.validate();
    CHECK(x.tree.ends().size() == n);
    for (VertexId v = 0; v < x.tree.vertex_count(); ++v) CHECK(order(x.tree, v, true) >= 3);
    const auto r = hidden_report(x.tree);
    CHECK(r.b0_h == (n - 3) / 3);
    CHECK(r.bounds.sharp);
    CHECK(r.chi == static_cast<std::int64_t>(r.b0_h));
  }
  const auto nine = hidden_report(extremal_dendrogram(9).tree);
  CHECK(nine.b0_h == 2);
  CHECK(nine.v_h == 2);
  const auto small = extremal_dendrogram(4);
  CHECK(small.degenerate);
  CHECK(hidden_report(small.tree).b0_h == 0);
  CHECK_THROWS_AS(extremal_dendrogram(0), InputError);
}

TEST_CASE("shape counts") {
  // Trees with n leaves and no vertex of degree 2, counted independently by
  // filtering all non-isomorphic trees on up to 2n - 2 vertices.
  const std::vector<std::size_t> shapes{1, 2, 3, 7, 13, 32, 73, 190};
  for (std::size_t n = 3; n <= 10; ++n) CHECK(enumerate_shapes(n).size() == shapes[n - 3]);
  // Labeled counts: 1, 4, 26, ... (total partitions, the Schroeder fourth
  // problem).
  const std::vector<std::uint64_t> labeled{1, 4, 26, 236, 2752, 39208, 660032};
  for (std::size_t n = 3; n <= 9; ++n) CHECK(count_labeled_trees(n) == labeled[n - 3]);
  CHECK_THROWS_AS(enumerate_shapes(11), InputError);
  CHECK_THROWS_AS(enumerate_shapes(2), InputError);
  CHECK_NOTHROW(enumerate_shapes(11, 11));
}

TEST_CASE("parallel and serial enumeration agree") {
  for (std::size_t n = 3; n <= 9; ++n) {
    const auto a = enumerate_shapes(n), b = enumerate_shapes_serial(n);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(canonical_form(a[i], {false, false, false}) == canonical_form(b[i], {false, false, false}));
    }
    CHECK(count_labeled_trees(n) == count_labeled_trees_serial(n));
  }
}

TEST_CASE("five labeled ends") {
  std::size_t by_vertices[4] = {0, 0, 0, 0};
  std::set<std::string> seen;
  for_each_labeled_tree(5, [&](const MarkedTree& t) {
    REQUIRE(t.vertex_count() <= 3);
    ++by_vertices[t.vertex_count()];
    seen.insert(canonical_form(t, {false, true, false}));
  });
  CHECK(by_vertices[1] == 1);   // star
  CHECK(by_vertices[2] == 10);  // one edge: choose the pair split off, C(5,2)
  CHECK(by_vertices[3] == 15);  // binary: middle end (5) times pairings (3)
  CHECK(seen.size() == 26);
}

TEST_CASE("labeled enumeration visits each tree once") {
  for (std::size_t n = 3; n <= 7; ++n) {
    std::set<std::string> seen;
    std::size_t visits = 0;
    for_each_labeled_tree(n, [&](const MarkedTree& t) {
      ++visits;
      seen.insert(canonical_form(t, {false, true, false}));
      for (VertexId v = 0; v < t.vertex_count(); ++v) CHECK(order(t, v, true) >= 3);
    });
    CHECK(seen.size() == visits);
  }
}

TEST_CASE("structural facts over all shapes") {
  for (std::size_t n = 3; n <= 10; ++n) {
    for (const auto& t : enumerate_shapes(n)) {
      const auto r = hidden_report(t);
      CHECK(r.chi == static_cast<std::int64_t>(r.b0_h));
      CHECK((r.b0_h == 0) == (r.v_h == 0));
      CHECK(r.bounds.sharp);
      if (r.b0_h == 1 && r.e_h >= 1) CHECK(4 * r.t_h <= r.n);
      if (r.v_h == 1) CHECK(r.n >= 6);
      CHECK(t.vertex_count() <= n - 2);
      // Non-hidden vertices carry an end.
      const auto g = hidden_subgraph(t);
      std::set<VertexId> hidden(g.vertices.begin(), g.vertices.end());
      for (VertexId v = 0; v < t.vertex_count(); ++v) {
        CHECK((star(t, v, true).ends.empty()) == (hidden.count(v) == 1));
      }
    }
  }
}

TEST_CASE("sweep rows") {
  const auto rows = sweep_bounds(3, 10);
  REQUIRE(rows.size() == 8);
  for (const auto& row : rows) {
    CHECK(row.sharp_violations == 0);
    CHECK(row.tip_violations == 0);
    CHECK(row.chi_mismatches == 0);
    CHECK(row.max_b0_h == (row.n >= 6 ? (row.n - 3) / 3 : 0));
  }
}

TEST_SUITE_END();
