#include "padictree/hidden.hpp"

#include <algorithm>
#include <map>

#include "padictree/errors.hpp"

namespace padictree {

Subgraph hidden_subgraph(const MarkedTree& t) {
  std::vector<bool> has_end(t.vertex_count(), false);
  for (const auto& [label, v] : t.ends()) has_end[v] = true;
  Subgraph g;
  for (VertexId v = 0; v < t.vertex_count(); ++v) {
    if (!has_end[v]) g.vertices.push_back(v);
  }
  for (const auto& e : t.edges()) {
    if (!has_end[e.u] && !has_end[e.v]) g.edges.push_back(e);
  }
  return g;
}

BoundChecks check_bounds(const HiddenReport& r) {
  const auto n = static_cast<std::int64_t>(r.n);
  const auto v = static_cast<std::int64_t>(r.v_h);
  const auto b = static_cast<std::int64_t>(r.b0_h);
  return {4 * v <= n - 4 * b + 4, 8 * b <= n + 4, 3 * b <= n - 3};
}

HiddenReport hidden_report(const MarkedTree& t, bool classical) {
  if (classical) return hidden_report(classical_view(t), false);
  const Subgraph g = hidden_subgraph(t);
  HiddenReport r;
  r.n = t.ends().size();
  r.v_h = g.vertices.size();
  r.e_h = g.edges.size();
  r.t_h = tips(g).size();
  r.b0_h = connected_components(g);
  r.chi = static_cast<std::int64_t>(r.v_h) - static_cast<std::int64_t>(r.e_h);
  r.bounds = check_bounds(r);
  return r;
}

ExtremalTree extremal_dendrogram(std::size_t n) {
  if (n == 0) throw InputError("extremal_size", "a dendrogram needs at least one end");
  ExtremalTree out;
  MarkedTree& t = out.tree;
  EndLabel next = 0;
  if (n < 6) {
    const auto v = t.add_vertex();
    while (static_cast<std::size_t>(next) < n) t.attach_end(next++, v);
    out.degenerate = true;
    return out;
  }
  const std::size_t k = (n - 3) / 3;
  auto leaf_block = [&](VertexId h) {
    const auto b = t.add_vertex();
    t.add_edge(h, b, 1);
    t.attach_end(next++, b);
    t.attach_end(next++, b);
    return b;
  };
  VertexId last_block = 0;
  std::optional<VertexId> previous;
  for (std::size_t i = 0; i < k; ++i) {
    const auto h = t.add_vertex();
    if (previous) {
      const auto m = t.add_vertex();
      t.add_edge(*previous, m, 1);
      t.add_edge(m, h, 1);
      t.attach_end(next++, m);
    }
    const std::size_t blocks = k == 1 ? 3 : (i == 0 || i + 1 == k ? 2 : 1);
    for (std::size_t j = 0; j < blocks; ++j) last_block = leaf_block(h);
    previous = h;
  }
  while (static_cast<std::size_t>(next) < n) t.attach_end(next++, last_block);
  return out;
}

namespace {

void check_size(std::size_t n, std::size_t cap) {
  if (n < 3) throw InputError("enumeration_size", "shapes need at least three ends");
  if (n > cap) {
    throw InputError("enumeration_cap", "n = " + std::to_string(n) + " exceeds the enumeration cap " +
                                            std::to_string(cap));
  }
}

MarkedTree tripod() {
  MarkedTree t;
  const auto v = t.add_vertex();
  for (EndLabel e = 0; e < 3; ++e) t.attach_end(e, v);
  return t;
}

std::size_t position_count(const MarkedTree& t) {
  return t.vertex_count() + t.edges().size() + t.ends().size();
}

// Position i: a vertex, then an edge to subdivide, then an end to split off.
MarkedTree insert_end(const MarkedTree& t, std::size_t position, EndLabel label) {
  MarkedTree out = t;
  const std::size_t v = t.vertex_count(), e = t.edges().size();
  if (position < v) {
    out.attach_end(label, position);
    return out;
  }
  if (position < v + e) {
    // Rebuild with the chosen edge replaced by two halves.
    MarkedTree r;
    for (VertexId x = 0; x < v; ++x) r.add_vertex();
    const auto mid = r.add_vertex();
    for (std::size_t i = 0; i < e; ++i) {
      const auto& edge = t.edges()[i];
      if (i == position - v) {
        r.add_edge(edge.u, mid, 1);
        r.add_edge(mid, edge.v, 1);
      } else {
        r.add_edge(edge.u, edge.v, edge.length);
      }
    }
    for (const auto& [l, at] : t.ends()) r.attach_end(l, at);
    r.attach_end(label, mid);
    return r;
  }
  auto it = t.ends().begin();
  std::advance(it, static_cast<std::ptrdiff_t>(position - v - e));
  const auto [old_label, at] = *it;
  const auto w = out.add_vertex();
  out.add_edge(at, w, 1);
  out.detach_end(old_label);
  out.attach_end(old_label, w);
  out.attach_end(label, w);
  return out;
}

const CanonicalOptions kShape{false, false, false};

using ShapeMap = std::map<std::string, MarkedTree>;

std::vector<MarkedTree> grow_shapes(std::size_t n, bool parallel) {
  std::vector<MarkedTree> level{tripod()};
  for (std::size_t ends = 4; ends <= n; ++ends) {
    const auto label = static_cast<EndLabel>(ends - 1);
    const auto count = static_cast<std::ptrdiff_t>(level.size());
    std::vector<ShapeMap> found(level.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const auto& parent = level[static_cast<std::size_t>(i)];
      for (std::size_t p = 0; p < position_count(parent); ++p) {
        MarkedTree child = insert_end(parent, p, label);
        std::string key = canonical_form(child, kShape);
        found[static_cast<std::size_t>(i)].emplace(std::move(key), std::move(child));
      }
    }
    ShapeMap merged;
    for (auto& m : found) merged.merge(m);
    level.clear();
    for (auto& [key, tree] : merged) level.push_back(std::move(tree));
  }
  return level;
}

void labeled_dfs(const MarkedTree& t, std::size_t n, const std::function<void(const MarkedTree&)>& visit) {
  if (t.ends().size() == n) {
    visit(t);
    return;
  }
  const auto label = static_cast<EndLabel>(t.ends().size());
  for (std::size_t p = 0; p < position_count(t); ++p) labeled_dfs(insert_end(t, p, label), n, visit);
}

std::uint64_t count_below(const MarkedTree& t, std::size_t n) {
  if (t.ends().size() == n) return 1;
  if (t.ends().size() + 1 == n) return position_count(t);
  std::uint64_t total = 0;
  const auto label = static_cast<EndLabel>(t.ends().size());
  for (std::size_t p = 0; p < position_count(t); ++p) total += count_below(insert_end(t, p, label), n);
  return total;
}

}  // namespace

std::vector<MarkedTree> enumerate_shapes(std::size_t n, std::size_t cap) {
  check_size(n, cap);
  return grow_shapes(n, true);
}

std::vector<MarkedTree> enumerate_shapes_serial(std::size_t n, std::size_t cap) {
  check_size(n, cap);
  return grow_shapes(n, false);
}

void for_each_labeled_tree(std::size_t n, const std::function<void(const MarkedTree&)>& visit,
                           std::size_t cap) {
  check_size(n, cap);
  labeled_dfs(tripod(), n, visit);
}

std::uint64_t count_labeled_trees_serial(std::size_t n, std::size_t cap) {
  check_size(n, cap);
  return count_below(tripod(), n);
}

std::uint64_t count_labeled_trees(std::size_t n, std::size_t cap) {
  check_size(n, cap);
  // Split at a shallow level and count the subtrees in parallel.
  const std::size_t split = std::min<std::size_t>(n, 6);
  std::vector<MarkedTree> roots;
  labeled_dfs(tripod(), split, [&](const MarkedTree& t) { roots.push_back(t); });
  const auto count = static_cast<std::ptrdiff_t>(roots.size());
  std::uint64_t total = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : total)
  for (std::ptrdiff_t i = 0; i < count; ++i) total += count_below(roots[static_cast<std::size_t>(i)], n);
  return total;
}

std::vector<SweepRow> sweep_bounds(std::size_t n_min, std::size_t n_max, std::size_t cap) {
  std::vector<SweepRow> rows;
  for (std::size_t n = std::max<std::size_t>(n_min, 3); n <= n_max; ++n) {
    const auto shapes = enumerate_shapes(n, cap);
    SweepRow row;
    row.n = n;
    row.shapes = shapes.size();
    // Shapes are sorted, so the first witness is deterministic.
    for (const auto& t : shapes) {
      const auto r = hidden_report(t);
      const bool tip_ok = !(r.b0_h == 1 && r.e_h >= 1 && 4 * r.t_h > r.n) && !(r.v_h == 1 && r.n < 6);
      row.theorem_violations += !r.bounds.theorem;
      row.corollary_violations += !r.bounds.corollary;
      row.sharp_violations += !r.bounds.sharp;
      row.tip_violations += !tip_ok;
      row.chi_mismatches += r.chi != static_cast<std::int64_t>(r.b0_h);
      row.max_b0_h = std::max(row.max_b0_h, r.b0_h);
      if (!r.bounds.theorem && !row.theorem_witness) row.theorem_witness = canonical_form(t, kShape);
      if (!r.bounds.corollary && !row.corollary_witness) row.corollary_witness = canonical_form(t, kShape);
      if (!r.bounds.sharp && !row.sharp_witness) row.sharp_witness = canonical_form(t, kShape);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace padictree
