#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "padictree/tree.hpp"

namespace padictree {

/// Vertices without ends and the tree edges between them.
Subgraph hidden_subgraph(const MarkedTree& t);

struct BoundChecks {
  bool theorem = false;    // v_h <= n/4 - b0_h + 1
  bool corollary = false;  // b0_h <= (n + 4)/8
  bool sharp = false;      // b0_h <= (n - 3)/3
};

struct HiddenReport {
  std::size_t n = 0;  // ends, infinity included
  std::size_t v_h = 0;
  std::size_t e_h = 0;
  std::size_t t_h = 0;
  std::size_t b0_h = 0;
  std::int64_t chi = 0;
  BoundChecks bounds;
};

/// Exact integer forms of the three bounds.
BoundChecks check_bounds(const HiddenReport& r);

/// With `classical`, the report is taken on classical_view(t) (no infinity
/// end, n one smaller) instead of the projective tree.
HiddenReport hidden_report(const MarkedTree& t, bool classical = false);

struct ExtremalTree {
  MarkedTree tree;
  /// Set for n < 6, where the construction does not apply and a star is
  /// returned instead.
  bool degenerate = false;
};

/// Chain of hidden vertices h_1 - m_1 - h_2 - ... - h_k, k = floor((n-3)/3),
/// where each m_i carries one end, the outer h carry two leaf blocks of two
/// ends and the inner h one; leftover ends go onto the last leaf block.
/// Attains b0_h = floor((n - 3)/3).
ExtremalTree extremal_dendrogram(std::size_t n);

inline constexpr std::size_t kDefaultEnumerationCap = 10;

/// Every tree shape with n ends and all vertices of order >= 3, once each,
/// sorted by unlabeled canonical form. Ends are labeled 0..n-1 arbitrarily
/// and edges have length 1. Grows shapes by inserting an end at a vertex,
/// on an edge, or beside an existing end; the (n-1)-shapes of one round are
/// processed in parallel. Throws InputError outside 3 <= n <= cap.
std::vector<MarkedTree> enumerate_shapes(std::size_t n, std::size_t cap = kDefaultEnumerationCap);
/// Single-threaded reference for enumerate_shapes.
std::vector<MarkedTree> enumerate_shapes_serial(std::size_t n, std::size_t cap = kDefaultEnumerationCap);

/// Visits every end-labeled tree with ends 0..n-1 exactly once. Inserting
/// end n-1 into each labeled tree on n-1 ends at each of its V + E + (n-1)
/// positions reaches every tree once, since deleting that end and
/// stabilizing inverts the insertion.
void for_each_labeled_tree(std::size_t n, const std::function<void(const MarkedTree&)>& visit,
                           std::size_t cap = kDefaultEnumerationCap);
/// Number of labeled trees, counted over positions at the last level and
/// split across threads.
std::uint64_t count_labeled_trees(std::size_t n, std::size_t cap = kDefaultEnumerationCap);
std::uint64_t count_labeled_trees_serial(std::size_t n, std::size_t cap = kDefaultEnumerationCap);

struct SweepRow {
  std::size_t n = 0;
  std::size_t shapes = 0;
  std::size_t theorem_violations = 0;
  std::size_t corollary_violations = 0;
  std::size_t sharp_violations = 0;
  /// 4 t_h <= n when Gamma^h is connected with an edge; n >= 6 when it is a
  /// single vertex.
  std::size_t tip_violations = 0;
  std::size_t chi_mismatches = 0;
  std::size_t max_b0_h = 0;
  /// Unlabeled canonical forms of the first violating shapes.
  std::optional<std::string> theorem_witness;
  std::optional<std::string> corollary_witness;
  std::optional<std::string> sharp_witness;
};

/// Bound checks over all shapes with n_min..n_max ends.
std::vector<SweepRow> sweep_bounds(std::size_t n_min, std::size_t n_max,
                                   std::size_t cap = kDefaultEnumerationCap);

}  // namespace padictree
