#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace padictree {

using VertexId = std::size_t;
/// Ends are labeled by their index in the input point list.
using EndLabel = int;

struct Edge {
  VertexId u;
  VertexId v;
  std::int64_t length;
};

/// Finite tree with integer edge lengths and labeled ends attached to
/// vertices. An end stands for a halfline (a point of P^1(K)); it is not
/// an edge. Vertices may carry the valuation level of their disk.
class MarkedTree {
 public:
  VertexId add_vertex(std::optional<std::int64_t> level = std::nullopt);
  void add_edge(VertexId u, VertexId v, std::int64_t length);
  /// Throws InputError if the label is already attached.
  void attach_end(EndLabel label, VertexId v);
  void detach_end(EndLabel label);

  void set_root(std::optional<VertexId> v);
  void set_infinity_end(std::optional<EndLabel> label) { infinity_end_ = label; }
  void set_name(EndLabel label, std::string name);
  void set_level(VertexId v, std::optional<std::int64_t> level);
  /// Distance between the two ends of a two-point tree, which collapses
  /// to one vertex.
  void set_separation(std::optional<std::int64_t> s) { separation_ = s; }

  std::size_t vertex_count() const noexcept { return levels_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::map<EndLabel, VertexId>& ends() const noexcept { return ends_; }
  std::optional<VertexId> root() const noexcept { return root_; }
  std::optional<EndLabel> infinity_end() const noexcept { return infinity_end_; }
  std::optional<std::int64_t> level(VertexId v) const;
  std::optional<std::int64_t> separation() const noexcept { return separation_; }
  /// Display name; defaults to the label, or "inf" for the infinity end.
  std::string name(EndLabel label) const;
  const std::map<EndLabel, std::string>& names() const noexcept { return names_; }

  struct Adjacency {
    std::vector<std::vector<std::pair<VertexId, std::int64_t>>> neighbors;
    std::vector<std::vector<EndLabel>> ends;  // sorted per vertex
  };
  Adjacency adjacency() const;

  std::int64_t total_length() const;
  /// Throws InputError unless the edges form a tree on all vertices with
  /// positive lengths.
  void validate() const;

 private:
  void check_vertex(VertexId v) const;

  std::vector<std::optional<std::int64_t>> levels_;
  std::vector<Edge> edges_;
  std::map<EndLabel, VertexId> ends_;
  std::map<EndLabel, std::string> names_;
  std::optional<VertexId> root_;
  std::optional<EndLabel> infinity_end_;
  std::optional<std::int64_t> separation_;
};

struct Star {
  VertexId vertex;
  std::vector<std::pair<VertexId, std::int64_t>> edges;  // (neighbor, length)
  std::vector<EndLabel> ends;                             // empty unless requested
};

Star star(const MarkedTree& t, VertexId v, bool include_ends);
std::size_t order(const MarkedTree& t, VertexId v, bool include_ends);

/// Vertex-induced piece of a tree.
struct Subgraph {
  std::vector<VertexId> vertices;
  std::vector<Edge> edges;
};

/// Vertices of order exactly 1 inside the subgraph.
std::vector<VertexId> tips(const Subgraph& g);
std::size_t connected_components(const Subgraph& g);

/// Contracts chains through order-2 vertices (summing lengths), pulls ends
/// across vertices that only hold one end and one edge, and prunes bare
/// leaves. The root is never removed. Surviving vertices keep their
/// relative order.
MarkedTree stabilize(const MarkedTree& t);

/// Drops the infinity halfline; the root becomes the dendrogram root.
MarkedTree classical_view(const MarkedTree& t);

/// Tree with the same vertices, relabeled so that old vertex order[i]
/// becomes vertex i.
MarkedTree renumbered(const MarkedTree& t, const std::vector<VertexId>& order);

struct CanonicalOptions {
  bool lengths = true;
  bool labels = true;
  /// Serialize from the root (must be set). Otherwise labeled forms start at
  /// the vertex holding the smallest label and unlabeled forms take the
  /// minimum over all starting vertices.
  bool rooted = false;
};

/// Sorted recursive serialization: a vertex is "(" items ")" with items its
/// end labels and "len:(child)" (or "(child)" without lengths), sorted as
/// strings. Equal strings iff isomorphic trees.
std::string canonical_form(const MarkedTree& t, const CanonicalOptions& opts = {});

/// Canonical form from a given vertex.
std::string canonical_form_at(const MarkedTree& t, VertexId start, const CanonicalOptions& opts);

/// Isomorphism respecting end labels and lengths; roots must correspond
/// when both trees have one.
bool labeled_isomorphic(const MarkedTree& a, const MarkedTree& b);

/// Inverse of canonical_form for labeled forms (with or without lengths).
/// The starting vertex becomes vertex 0. Throws InputError on bad syntax.
MarkedTree parse_canonical(const std::string& text);

}  // namespace padictree
