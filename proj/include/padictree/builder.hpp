#pragma once

#include <optional>
#include <string>
#include <vector>

#include "padictree/projective.hpp"
#include "padictree/tree.hpp"

namespace padictree {

/// Pairwise valuations w(i, j) = val(x_i - x_j), +inf on the diagonal. The
/// row of the point at infinity (if any) holds min(0, k0) with k0 the
/// smallest finite entry: infinity joins every cluster last, and the value
/// matches the 1/z chart whenever all points lie in the unit disk.
struct ValuationMatrix {
  std::size_t n = 0;
  std::vector<std::int64_t> w;
  std::optional<std::size_t> infinity_index;

  std::int64_t at(std::size_t i, std::size_t j) const { return w[i * n + j]; }
};

/// Rows are split across OpenMP threads. Throws InputError
/// "duplicate_points" on coincident points and PrecisionError when two
/// truncated points cannot be told apart; the reported pair is the first
/// in row-major order, independent of scheduling.
ValuationMatrix valuation_matrix(const std::vector<ProjPoint>& xs);
/// Single-threaded reference for valuation_matrix.
ValuationMatrix valuation_matrix_serial(const std::vector<ProjPoint>& xs);

bool is_ultrametric(const ValuationMatrix& w);

/// A vertex of the Bruhat-Tits tree: the disk {z : val(z - center) >= level}.
struct DiskVertex {
  PadicNumber center;
  std::int64_t level;
};

/// Median of three distinct points, i.e. the branch vertex of the tripod
/// they span. (0, 1, inf) gives the unit disk.
DiskVertex vertex_of_triple(const ProjPoint& x0, const ProjPoint& x1, const ProjPoint& x2);

struct BuildOptions {
  /// Root the tree at v_D, the median of the first three points. This is
  /// the vertex of the unit disk after the Moebius map sending them to
  /// 0, 1, inf; the tree itself does not depend on coordinates. When off,
  /// v_D is only marked if 0, 1 and inf are all among the points.
  bool normalize = true;
  /// Optional display names for the ends, by index.
  std::vector<std::string> names;
};

/// Stabilized projective dendrogram: one end per point (labeled by index),
/// vertices at the branch disks with their valuation levels, edge lengths
/// equal to level gaps. Vertex ids are ordered by (level, smallest label
/// below the vertex).
MarkedTree build_projective_dendrogram(const std::vector<ProjPoint>& xs, const BuildOptions& opts = {});

/// Agglomerative clustering at decreasing thresholds; independent of the
/// builder. Throws InputError "non_ultrametric" on inconsistent input.
MarkedTree single_linkage_oracle(const ValuationMatrix& w);

/// Median vertex of three ends.
VertexId median_vertex(const MarkedTree& t, EndLabel a, EndLabel b, EndLabel c);

/// Largest number of branches (edges plus ends) at any vertex; at most
/// q + 1 in a dendrogram over a field with residue field F_q.
std::size_t max_branching(const MarkedTree& t);

}  // namespace padictree
