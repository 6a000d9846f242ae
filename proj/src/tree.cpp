#include "padictree/tree.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#include "padictree/errors.hpp"

namespace padictree {

VertexId MarkedTree::add_vertex(std::optional<std::int64_t> level) {
  levels_.push_back(level);
  return levels_.size() - 1;
}

void MarkedTree::check_vertex(VertexId v) const {
  if (v >= levels_.size()) {
    throw InputError("unknown_vertex", "vertex " + std::to_string(v) + " is not in the tree");
  }
}

void MarkedTree::add_edge(VertexId u, VertexId v, std::int64_t length) {
  check_vertex(u);
  check_vertex(v);
  edges_.push_back({u, v, length});
}

void MarkedTree::attach_end(EndLabel label, VertexId v) {
  check_vertex(v);
  if (!ends_.emplace(label, v).second) {
    throw InputError("duplicate_end", "end " + std::to_string(label) + " attached twice");
  }
}

void MarkedTree::detach_end(EndLabel label) { ends_.erase(label); }

void MarkedTree::set_root(std::optional<VertexId> v) {
  if (v) check_vertex(*v);
  root_ = v;
}

void MarkedTree::set_name(EndLabel label, std::string name) { names_[label] = std::move(name); }

void MarkedTree::set_level(VertexId v, std::optional<std::int64_t> level) {
  check_vertex(v);
  levels_[v] = level;
}

std::optional<std::int64_t> MarkedTree::level(VertexId v) const {
  check_vertex(v);
  return levels_[v];
}

std::string MarkedTree::name(EndLabel label) const {
  if (auto it = names_.find(label); it != names_.end()) return it->second;
  if (infinity_end_ == label) return "inf";
  return std::to_string(label);
}

MarkedTree::Adjacency MarkedTree::adjacency() const {
  Adjacency a;
  a.neighbors.resize(vertex_count());
  a.ends.resize(vertex_count());
  for (const auto& e : edges_) {
    a.neighbors[e.u].emplace_back(e.v, e.length);
    a.neighbors[e.v].emplace_back(e.u, e.length);
  }
  for (const auto& [label, v] : ends_) a.ends[v].push_back(label);
  return a;
}

std::int64_t MarkedTree::total_length() const {
  std::int64_t s = 0;
  for (const auto& e : edges_) s += e.length;
  return s;
}

void MarkedTree::validate() const {
  const std::size_t n = vertex_count();
  if (n == 0) {
    if (!edges_.empty() || !ends_.empty()) throw InputError("tree", "edges or ends without vertices");
    return;
  }
  if (edges_.size() != n - 1) {
    throw InputError("tree", "a tree on " + std::to_string(n) + " vertices needs " +
                                 std::to_string(n - 1) + " edges");
  }
  std::vector<VertexId> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](VertexId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges_) {
    if (e.u >= n || e.v >= n) throw InputError("unknown_vertex", "edge endpoint out of range");
    if (e.length <= 0) throw InputError("edge_length", "edge lengths must be positive");
    const auto a = find(e.u), b = find(e.v);
    if (a == b) throw InputError("tree", "edge set contains a cycle");
    parent[a] = b;
  }
}

Star star(const MarkedTree& t, VertexId v, bool include_ends) {
  if (v >= t.vertex_count()) {
    throw InputError("unknown_vertex", "vertex " + std::to_string(v) + " is not in the tree");
  }
  Star s{v, {}, {}};
  for (const auto& e : t.edges()) {
    if (e.u == v) s.edges.emplace_back(e.v, e.length);
    if (e.v == v) s.edges.emplace_back(e.u, e.length);
  }
  if (include_ends) {
    for (const auto& [label, at] : t.ends()) {
      if (at == v) s.ends.push_back(label);
    }
  }
  return s;
}

std::size_t order(const MarkedTree& t, VertexId v, bool include_ends) {
  const Star s = star(t, v, include_ends);
  return s.edges.size() + s.ends.size();
}

std::vector<VertexId> tips(const Subgraph& g) {
  std::map<VertexId, std::size_t> deg;
  for (VertexId v : g.vertices) deg[v] = 0;
  for (const auto& e : g.edges) {
    ++deg[e.u];
    ++deg[e.v];
  }
  std::vector<VertexId> out;
  for (const auto& [v, d] : deg) {
    if (d == 1) out.push_back(v);
  }
  return out;
}

std::size_t connected_components(const Subgraph& g) {
  std::map<VertexId, VertexId> parent;
  for (VertexId v : g.vertices) parent[v] = v;
  auto find = [&](VertexId x) {
    while (parent.at(x) != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t count = g.vertices.size();
  for (const auto& e : g.edges) {
    const auto a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --count;
    }
  }
  return count;
}

MarkedTree renumbered(const MarkedTree& t, const std::vector<VertexId>& order) {
  if (order.size() != t.vertex_count()) {
    throw InputError("renumbering", "renumbering must list every vertex once");
  }
  std::vector<VertexId> new_id(t.vertex_count(), t.vertex_count());
  MarkedTree out;
  for (VertexId old : order) {
    if (old >= t.vertex_count() || new_id[old] != t.vertex_count()) {
      throw InputError("renumbering", "renumbering must list every vertex once");
    }
    new_id[old] = out.add_vertex(t.level(old));
  }
  for (const auto& e : t.edges()) {
    const auto [a, b] = std::minmax(new_id[e.u], new_id[e.v]);
    out.add_edge(a, b, e.length);
  }
  for (const auto& [label, v] : t.ends()) out.attach_end(label, new_id[v]);
  for (const auto& [label, name] : t.names()) out.set_name(label, name);
  if (t.root()) out.set_root(new_id[*t.root()]);
  out.set_infinity_end(t.infinity_end());
  out.set_separation(t.separation());
  return out;
}

MarkedTree stabilize(const MarkedTree& t) {
  const std::size_t n = t.vertex_count();
  struct LiveEdge {
    VertexId u, v;
    std::int64_t length;
    bool alive = true;
  };
  std::vector<LiveEdge> edges;
  std::vector<std::set<std::size_t>> incident(n);
  std::vector<std::set<EndLabel>> ends_at(n);
  std::vector<bool> alive(n, true);
  for (const auto& e : t.edges()) {
    incident[e.u].insert(edges.size());
    incident[e.v].insert(edges.size());
    edges.push_back({e.u, e.v, e.length});
  }
  for (const auto& [label, v] : t.ends()) ends_at[v].insert(label);

  auto other = [&](std::size_t ei, VertexId v) { return edges[ei].u == v ? edges[ei].v : edges[ei].u; };
  auto drop_edge = [&](std::size_t ei) {
    edges[ei].alive = false;
    incident[edges[ei].u].erase(ei);
    incident[edges[ei].v].erase(ei);
  };

  std::deque<VertexId> queue(n);
  std::iota(queue.begin(), queue.end(), 0);
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    if (!alive[v] || t.root() == v) continue;
    const std::size_t deg = incident[v].size();
    const std::size_t k = ends_at[v].size();
    if (deg == 2 && k == 0) {
      const std::size_t e1 = *incident[v].begin();
      const std::size_t e2 = *std::next(incident[v].begin());
      const VertexId a = other(e1, v), b = other(e2, v);
      const std::int64_t len = edges[e1].length + edges[e2].length;
      drop_edge(e1);
      drop_edge(e2);
      alive[v] = false;
      incident[a].insert(edges.size());
      incident[b].insert(edges.size());
      edges.push_back({a, b, len});
      queue.push_back(a);
      queue.push_back(b);
    } else if (deg == 1 && k <= 1) {
      const std::size_t e = *incident[v].begin();
      const VertexId w = other(e, v);
      drop_edge(e);
      alive[v] = false;
      ends_at[w].insert(ends_at[v].begin(), ends_at[v].end());
      ends_at[v].clear();
      queue.push_back(w);
    }
  }

  MarkedTree out;
  std::vector<VertexId> new_id(n, n);
  for (VertexId v = 0; v < n; ++v) {
    if (alive[v]) new_id[v] = out.add_vertex(t.level(v));
  }
  for (const auto& e : edges) {
    if (!e.alive) continue;
    const auto [a, b] = std::minmax(new_id[e.u], new_id[e.v]);
    out.add_edge(a, b, e.length);
  }
  for (VertexId v = 0; v < n; ++v) {
    for (EndLabel label : ends_at[v]) out.attach_end(label, new_id[v]);
  }
  for (const auto& [label, name] : t.names()) out.set_name(label, name);
  if (t.root()) out.set_root(new_id[*t.root()]);
  out.set_infinity_end(t.infinity_end());
  out.set_separation(t.separation());
  return out;
}

MarkedTree classical_view(const MarkedTree& t) {
  if (!t.infinity_end() || !t.ends().count(*t.infinity_end())) {
    throw InputError("missing_infinity", "classical view needs the infinity end");
  }
  if (!t.root()) throw InputError("missing_root", "classical view needs a root vertex");
  MarkedTree copy = t;
  copy.detach_end(*t.infinity_end());
  copy.set_infinity_end(std::nullopt);
  return stabilize(copy);
}

namespace {

std::string serialize(const MarkedTree::Adjacency& adj, VertexId v, VertexId parent, bool has_parent,
                      const CanonicalOptions& opts) {
  std::vector<std::string> items;
  for (EndLabel label : adj.ends[v]) items.push_back(opts.labels ? std::to_string(label) : "e");
  for (const auto& [w, len] : adj.neighbors[v]) {
    if (has_parent && w == parent) continue;
    std::string child = serialize(adj, w, v, true, opts);
    items.push_back(opts.lengths ? std::to_string(len) + ":" + child : child);
  }
  std::sort(items.begin(), items.end());
  std::string out = "(";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += items[i];
  }
  out += ')';
  return out;
}

std::string with_separation(std::string s, const MarkedTree& t, const CanonicalOptions& opts) {
  if (opts.lengths && t.separation()) s += "|" + std::to_string(*t.separation());
  return s;
}

}  // namespace

std::string canonical_form_at(const MarkedTree& t, VertexId start, const CanonicalOptions& opts) {
  if (start >= t.vertex_count()) throw InputError("unknown_vertex", "canonical start out of range");
  return with_separation(serialize(t.adjacency(), start, 0, false, opts), t, opts);
}

std::string canonical_form(const MarkedTree& t, const CanonicalOptions& opts) {
  if (t.vertex_count() == 0) return "";
  const auto adj = t.adjacency();
  if (opts.rooted) {
    if (!t.root()) throw InputError("missing_root", "rooted canonical form of an unrooted tree");
    return with_separation(serialize(adj, *t.root(), 0, false, opts), t, opts);
  }
  if (opts.labels && !t.ends().empty()) {
    const VertexId start = t.ends().begin()->second;
    return with_separation(serialize(adj, start, 0, false, opts), t, opts);
  }
  std::string best;
  for (VertexId v = 0; v < t.vertex_count(); ++v) {
    std::string s = serialize(adj, v, 0, false, opts);
    if (v == 0 || s < best) best = std::move(s);
  }
  return with_separation(std::move(best), t, opts);
}

bool labeled_isomorphic(const MarkedTree& a, const MarkedTree& b) {
  if (canonical_form(a) != canonical_form(b)) return false;
  if (a.root() && b.root()) {
    return canonical_form(a, {true, true, true}) == canonical_form(b, {true, true, true});
  }
  return true;
}

namespace {

class CanonicalParser {
 public:
  explicit CanonicalParser(const std::string& text) : s_(text) {}

  MarkedTree parse() {
    if (s_.empty()) return tree_;
    node();
    if (pos_ < s_.size() && s_[pos_] == '|') {
      ++pos_;
      tree_.set_separation(number());
    }
    if (pos_ != s_.size()) fail("trailing characters");
    tree_.validate();
    return tree_;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("canonical_syntax", "canonical form, offset " + std::to_string(pos_) + ": " + what);
  }
  void expect(char c) {
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::int64_t number() {
    const std::size_t start = pos_;
    if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start || (pos_ == start + 1 && s_[start] == '-')) fail("expected a number");
    return std::stoll(s_.substr(start, pos_ - start));
  }
  VertexId node() {
    expect('(');
    const VertexId v = tree_.add_vertex();
    if (pos_ < s_.size() && s_[pos_] == ')') {
      ++pos_;
      return v;
    }
    while (true) {
      if (pos_ < s_.size() && s_[pos_] == '(') {
        tree_.add_edge(v, node(), 1);
      } else {
        const std::int64_t x = number();
        if (pos_ < s_.size() && s_[pos_] == ':') {
          ++pos_;
          if (x <= 0) fail("edge lengths must be positive");
          tree_.add_edge(v, node(), x);
        } else {
          tree_.attach_end(static_cast<EndLabel>(x), v);
        }
      }
      if (pos_ < s_.size() && s_[pos_] == ',') {
        ++pos_;
        continue;
      }
      expect(')');
      return v;
    }
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  MarkedTree tree_;
};

}  // namespace

MarkedTree parse_canonical(const std::string& text) { return CanonicalParser(text).parse(); }

}  // namespace padictree
