#include "padictree/builder.hpp"

#include <algorithm>
#include <exception>
#include <numeric>

#include "padictree/errors.hpp"

namespace padictree {

namespace {

[[noreturn]] void duplicate(std::size_t i, std::size_t j) {
  throw InputError("duplicate_points", "points " + std::to_string(i) + " and " + std::to_string(j) +
                                           " coincide; use collide for configurations with collisions");
}

std::int64_t finite_valuation(const std::vector<ProjPoint>& xs, std::size_t i, std::size_t j) {
  const std::int64_t k = val_of_difference(xs[i].value(), xs[j].value());
  if (k == kInfiniteValuation) duplicate(i, j);
  return k;
}

ValuationMatrix prepare(const std::vector<ProjPoint>& xs) {
  ValuationMatrix m;
  m.n = xs.size();
  m.w.assign(m.n * m.n, kInfiniteValuation);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0 && !(*xs[i].field() == *xs[0].field())) {
      throw InputError("field_mismatch", "points live in different fields");
    }
    if (xs[i].is_infinity()) {
      if (m.infinity_index) duplicate(*m.infinity_index, i);
      m.infinity_index = i;
    }
  }
  return m;
}

void fill_infinity_row(ValuationMatrix& m) {
  if (!m.infinity_index) return;
  std::int64_t k0 = 0;
  for (std::size_t i = 0; i < m.n; ++i) {
    for (std::size_t j = i + 1; j < m.n; ++j) {
      if (i != *m.infinity_index && j != *m.infinity_index) k0 = std::min(k0, m.at(i, j));
    }
  }
  const std::size_t r = *m.infinity_index;
  for (std::size_t i = 0; i < m.n; ++i) {
    if (i == r) continue;
    m.w[r * m.n + i] = k0;
    m.w[i * m.n + r] = k0;
  }
}

}  // namespace

ValuationMatrix valuation_matrix_serial(const std::vector<ProjPoint>& xs) {
  ValuationMatrix m = prepare(xs);
  for (std::size_t i = 0; i < m.n; ++i) {
    if (m.infinity_index == i) continue;
    for (std::size_t j = i + 1; j < m.n; ++j) {
      if (m.infinity_index == j) continue;
      m.w[i * m.n + j] = m.w[j * m.n + i] = finite_valuation(xs, i, j);
    }
  }
  fill_infinity_row(m);
  return m;
}

ValuationMatrix valuation_matrix(const std::vector<ProjPoint>& xs) {
  ValuationMatrix m = prepare(xs);
  const auto n = static_cast<std::ptrdiff_t>(m.n);
  std::vector<std::exception_ptr> row_error(m.n);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t si = 0; si < n; ++si) {
    const auto i = static_cast<std::size_t>(si);
    if (m.infinity_index == i) continue;
    try {
      for (std::size_t j = i + 1; j < m.n; ++j) {
        if (m.infinity_index == j) continue;
        m.w[i * m.n + j] = m.w[j * m.n + i] = finite_valuation(xs, i, j);
      }
    } catch (...) {
      row_error[i] = std::current_exception();
    }
  }
  for (const auto& e : row_error) {
    if (e) std::rethrow_exception(e);
  }
  fill_infinity_row(m);
  return m;
}

bool is_ultrametric(const ValuationMatrix& m) {
  for (std::size_t i = 0; i < m.n; ++i) {
    if (m.at(i, i) != kInfiniteValuation) return false;
    for (std::size_t j = 0; j < m.n; ++j) {
      if (m.at(i, j) != m.at(j, i)) return false;
      for (std::size_t k = 0; k < m.n; ++k) {
        if (m.at(i, k) < std::min(m.at(i, j), m.at(j, k))) return false;
      }
    }
  }
  return true;
}

DiskVertex vertex_of_triple(const ProjPoint& x0, const ProjPoint& x1, const ProjPoint& x2) {
  const ProjPoint* pts[3] = {&x0, &x1, &x2};
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (compare(*pts[i], *pts[j]) == Comparison::equal) {
        throw InputError("coincident_points", "vertex of a triple needs three distinct points");
      }
    }
  }
  for (int i = 0; i < 3; ++i) {
    if (!pts[i]->is_infinity()) continue;
    // The tripod through infinity branches at the smallest disk holding the
    // two finite points.
    const auto& a = pts[(i + 1) % 3]->value();
    const auto& b = pts[(i + 2) % 3]->value();
    const auto& first = i == 0 ? a : x0.value();
    return {first, val_of_difference(a, b)};
  }
  const auto w01 = val_of_difference(x0.value(), x1.value());
  const auto w02 = val_of_difference(x0.value(), x2.value());
  const auto w12 = val_of_difference(x1.value(), x2.value());
  // Two of the three valuations agree; the median is the disk around the
  // closest pair.
  const auto top = std::max({w01, w02, w12});
  return {top == w12 && w01 != top && w02 != top ? x1.value() : x0.value(), top};
}

namespace {

struct Node {
  std::int64_t level;
  EndLabel min_label;
  std::vector<std::size_t> children;  // node indices
  std::vector<EndLabel> ends;
};

// Splits sorted[lo, hi) at its minimal adjacent common prefixes.
std::size_t build_nodes(const std::vector<std::size_t>& sorted, const std::vector<std::int64_t>& lcp,
                        std::size_t lo, std::size_t hi, std::vector<Node>& nodes) {
  std::int64_t level = kInfiniteValuation;
  for (std::size_t i = lo; i + 1 < hi; ++i) level = std::min(level, lcp[i]);
  const std::size_t id = nodes.size();
  nodes.push_back({level, std::numeric_limits<EndLabel>::max(), {}, {}});
  std::size_t start = lo;
  for (std::size_t i = lo; i < hi; ++i) {
    if (i + 1 < hi && lcp[i] != level) continue;
    if (i == start) {
      nodes[id].ends.push_back(static_cast<EndLabel>(sorted[i]));
      nodes[id].min_label = std::min(nodes[id].min_label, static_cast<EndLabel>(sorted[i]));
    } else {
      const std::size_t child = build_nodes(sorted, lcp, start, i + 1, nodes);
      nodes[id].children.push_back(child);
      nodes[id].min_label = std::min(nodes[id].min_label, nodes[child].min_label);
    }
    start = i + 1;
  }
  return id;
}

std::vector<VertexId> path(const MarkedTree::Adjacency& adj, VertexId from, VertexId to) {
  std::vector<VertexId> parent(adj.neighbors.size(), adj.neighbors.size());
  std::vector<VertexId> stack{from};
  parent[from] = from;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    for (const auto& nb : adj.neighbors[v]) {
      if (parent[nb.first] == adj.neighbors.size()) {
        parent[nb.first] = v;
        stack.push_back(nb.first);
      }
    }
  }
  std::vector<VertexId> out{to};
  while (out.back() != from) out.push_back(parent[out.back()]);
  std::sort(out.begin(), out.end());
  return out;
}

bool is_exactly(const ProjPoint& x, int value) {
  if (x.is_infinity() || !x.value().exact()) return false;
  return x.value() == PadicNumber::from_integer(x.field(), value);
}

}  // namespace

VertexId median_vertex(const MarkedTree& t, EndLabel a, EndLabel b, EndLabel c) {
  const auto adj = t.adjacency();
  const VertexId va = t.ends().at(a), vb = t.ends().at(b), vc = t.ends().at(c);
  const auto ab = path(adj, va, vb), ac = path(adj, va, vc), bc = path(adj, vb, vc);
  std::vector<VertexId> tmp, common;
  std::set_intersection(ab.begin(), ab.end(), ac.begin(), ac.end(), std::back_inserter(tmp));
  std::set_intersection(tmp.begin(), tmp.end(), bc.begin(), bc.end(), std::back_inserter(common));
  return common.front();
}

MarkedTree build_projective_dendrogram(const std::vector<ProjPoint>& xs, const BuildOptions& opts) {
  if (xs.empty()) throw InputError("empty_points", "no points given");
  const ValuationMatrix shape = prepare(xs);
  std::vector<std::size_t> finite;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!xs[i].is_infinity()) finite.push_back(i);
  }

  // Lexicographic order of digit strings read from the lowest index: points
  // of every disk are contiguous, and the common prefix of a range is the
  // minimum of adjacent ones.
  std::sort(finite.begin(), finite.end(), [&](std::size_t i, std::size_t j) {
    const std::int64_t k = val_of_difference(xs[i].value(), xs[j].value());
    if (k == kInfiniteValuation) duplicate(std::min(i, j), std::max(i, j));
    return xs[i].value().digit_at(k) < xs[j].value().digit_at(k);
  });
  std::vector<std::int64_t> lcp;
  for (std::size_t i = 0; i + 1 < finite.size(); ++i) {
    lcp.push_back(finite_valuation(xs, finite[i], finite[i + 1]));
  }

  MarkedTree t;
  if (finite.empty()) {
    t.attach_end(static_cast<EndLabel>(*shape.infinity_index), t.add_vertex());
  } else {
    std::vector<Node> nodes;
    const std::size_t top = build_nodes(finite, lcp, 0, finite.size(), nodes);
    if (finite.size() == 1) nodes[top].level = xs[finite[0]].value().is_zero() ? 0 : xs[finite[0]].value().v0();
    std::vector<std::size_t> order(nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::tie(nodes[a].level, nodes[a].min_label) < std::tie(nodes[b].level, nodes[b].min_label);
    });
    std::vector<VertexId> vertex(nodes.size());
    for (std::size_t id : order) vertex[id] = t.add_vertex(nodes[id].level);
    for (std::size_t id = 0; id < nodes.size(); ++id) {
      for (EndLabel e : nodes[id].ends) t.attach_end(e, vertex[id]);
      for (std::size_t c : nodes[id].children) {
        t.add_edge(vertex[id], vertex[c], nodes[c].level - nodes[id].level);
      }
    }
    if (shape.infinity_index) {
      t.attach_end(static_cast<EndLabel>(*shape.infinity_index), vertex[top]);
    } else if (finite.size() == 2) {
      t.set_separation(lcp[0]);
    }
  }
  if (shape.infinity_index) t.set_infinity_end(static_cast<EndLabel>(*shape.infinity_index));
  for (std::size_t i = 0; i < opts.names.size() && i < xs.size(); ++i) {
    t.set_name(static_cast<EndLabel>(i), opts.names[i]);
  }
  t = stabilize(t);

  if (xs.size() >= 3) {
    if (opts.normalize) {
      t.set_root(median_vertex(t, 0, 1, 2));
    } else if (shape.infinity_index) {
      std::optional<EndLabel> zero, one;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (is_exactly(xs[i], 0)) zero = static_cast<EndLabel>(i);
        if (is_exactly(xs[i], 1)) one = static_cast<EndLabel>(i);
      }
      if (zero && one) t.set_root(median_vertex(t, *zero, *one, static_cast<EndLabel>(*shape.infinity_index)));
    }
  }
  return t;
}

MarkedTree single_linkage_oracle(const ValuationMatrix& w) {
  if (!is_ultrametric(w)) throw InputError("non_ultrametric", "valuation matrix is not ultrametric");
  MarkedTree t;
  if (w.infinity_index) t.set_infinity_end(static_cast<EndLabel>(*w.infinity_index));
  if (w.n == 0) return t;

  struct Cluster {
    std::vector<std::size_t> members;
    std::optional<VertexId> vertex;
    std::int64_t level = kInfiniteValuation;
  };
  std::vector<Cluster> clusters;
  for (std::size_t i = 0; i < w.n; ++i) clusters.push_back({{i}, std::nullopt, kInfiniteValuation});

  std::vector<std::int64_t> thresholds;
  for (std::size_t i = 0; i < w.n; ++i) {
    for (std::size_t j = i + 1; j < w.n; ++j) thresholds.push_back(w.at(i, j));
  }
  std::sort(thresholds.rbegin(), thresholds.rend());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  for (std::int64_t level : thresholds) {
    const std::size_t c = clusters.size();
    std::vector<std::size_t> group(c);
    std::iota(group.begin(), group.end(), 0);
    auto find = [&](std::size_t x) {
      while (group[x] != x) x = group[x] = group[group[x]];
      return x;
    };
    for (std::size_t a = 0; a < c; ++a) {
      for (std::size_t b = a + 1; b < c; ++b) {
        bool linked = false;
        for (std::size_t i : clusters[a].members) {
          for (std::size_t j : clusters[b].members) linked = linked || w.at(i, j) >= level;
        }
        if (linked) group[find(a)] = find(b);
      }
    }
    std::vector<Cluster> next;
    std::vector<std::vector<std::size_t>> by_group(c);
    for (std::size_t a = 0; a < c; ++a) by_group[find(a)].push_back(a);
    for (const auto& members : by_group) {
      if (members.empty()) continue;
      if (members.size() == 1) {
        next.push_back(std::move(clusters[members[0]]));
        continue;
      }
      Cluster merged;
      merged.level = level;
      merged.vertex = t.add_vertex(level);
      for (std::size_t a : members) {
        auto& child = clusters[a];
        merged.members.insert(merged.members.end(), child.members.begin(), child.members.end());
        if (child.vertex) {
          t.add_edge(*merged.vertex, *child.vertex, child.level - level);
        } else {
          t.attach_end(static_cast<EndLabel>(child.members[0]), *merged.vertex);
        }
      }
      next.push_back(std::move(merged));
    }
    clusters = std::move(next);
  }
  if (w.n == 1) t.attach_end(0, t.add_vertex());
  if (w.n == 2 && !w.infinity_index) t.set_separation(w.at(0, 1));
  return stabilize(t);
}

std::size_t max_branching(const MarkedTree& t) {
  std::vector<std::size_t> count(t.vertex_count(), 0);
  for (const auto& e : t.edges()) {
    ++count[e.u];
    ++count[e.v];
  }
  for (const auto& [label, v] : t.ends()) ++count[v];
  return count.empty() ? 0 : *std::max_element(count.begin(), count.end());
}

}  // namespace padictree
