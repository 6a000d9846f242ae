#include "padictree/tree_io.hpp"

#include <algorithm>
#include <sstream>

#include "padictree/errors.hpp"

namespace padictree {

namespace {

VertexId display_root(const MarkedTree& t) {
  if (t.root()) return *t.root();
  if (!t.ends().empty()) return t.ends().begin()->second;
  return 0;
}

std::string newick_name(const std::string& name) {
  if (name.find_first_of("(),:;[]' \t") == std::string::npos && !name.empty()) return name;
  std::string out = "'";
  for (char c : name) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

struct Orientation {
  std::vector<VertexId> parent;
  std::vector<std::vector<std::pair<VertexId, std::int64_t>>> children;
};

// Orients the tree away from `root`; siblings sorted by the canonical form
// of the branch they span.
Orientation orient(const MarkedTree& t, VertexId root) {
  const auto adj = t.adjacency();
  Orientation o;
  o.parent.assign(t.vertex_count(), t.vertex_count());
  o.children.resize(t.vertex_count());
  std::vector<std::string> key(t.vertex_count());
  // Post-order keys.
  std::vector<VertexId> stack{root}, order;
  o.parent[root] = root;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (const auto& [w, len] : adj.neighbors[v]) {
      if (w == o.parent[v]) continue;
      o.parent[w] = v;
      o.children[v].emplace_back(w, len);
      stack.push_back(w);
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const VertexId v = *it;
    std::vector<std::string> items;
    for (EndLabel label : adj.ends[v]) items.push_back(std::to_string(label));
    for (const auto& [w, len] : o.children[v]) items.push_back(std::to_string(len) + ":" + key[w]);
    std::sort(items.begin(), items.end());
    std::string s = "(";
    for (std::size_t i = 0; i < items.size(); ++i) s += (i ? "," : "") + items[i];
    key[v] = s + ")";
    std::sort(o.children[v].begin(), o.children[v].end(), [&](const auto& a, const auto& b) {
      return std::tie(key[a.first], a.second) < std::tie(key[b.first], b.second);
    });
  }
  return o;
}

void write_newick(std::ostream& out, const MarkedTree& t, const Orientation& o,
                  const MarkedTree::Adjacency& adj, VertexId v, VertexId top) {
  std::vector<std::string> items;
  for (EndLabel label : adj.ends[v]) {
    if (v == top && t.root() && t.infinity_end() == label) continue;
    items.push_back(newick_name(t.name(label)) + ":inf");
  }
  for (const auto& [w, len] : o.children[v]) {
    std::ostringstream sub;
    write_newick(sub, t, o, adj, w, top);
    items.push_back(sub.str() + ":" + std::to_string(len));
  }
  out << '(';
  for (std::size_t i = 0; i < items.size(); ++i) out << (i ? "," : "") << items[i];
  out << ')';
  if (v == top && t.root()) out << "root";
}

}  // namespace

std::string to_newick(const MarkedTree& t) {
  if (t.vertex_count() == 0) return ";";
  const VertexId top = display_root(t);
  const Orientation o = orient(t, top);
  std::ostringstream out;
  write_newick(out, t, o, t.adjacency(), top, top);
  out << ';';
  return out.str();
}

std::string to_dot(const MarkedTree& t) {
  std::ostringstream out;
  out << "digraph dendrogram {\n";
  if (t.vertex_count() > 0) {
    const VertexId top = display_root(t);
    const Orientation o = orient(t, top);
    for (VertexId v = 0; v < t.vertex_count(); ++v) {
      out << "  v" << v << " [shape=point";
      out << ", xlabel=\"" << (v == top && t.root() ? "root" : "v" + std::to_string(v));
      if (auto lv = t.level(v)) out << " @" << *lv;
      out << "\"];\n";
    }
    for (const auto& [label, v] : t.ends()) {
      std::string name = t.name(label);
      std::string escaped;
      for (char c : name) {
        if (c == '"' || c == '\\') escaped += '\\';
        escaped += c;
      }
      out << "  e" << label << " [shape=plaintext, label=\"" << escaped << "\"];\n";
    }
    std::vector<VertexId> stack{top};
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      for (const auto& [w, len] : o.children[v]) {
        out << "  v" << v << " -> v" << w << " [label=\"" << len << "\"];\n";
        stack.push_back(w);
      }
    }
    for (const auto& [label, v] : t.ends()) {
      if (t.infinity_end() == label) {
        out << "  e" << label << " -> v" << v << " [style=dashed];\n";
      } else {
        out << "  v" << v << " -> e" << label << " [style=dashed];\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

nlohmann::json to_json(const MarkedTree& t) {
  using nlohmann::json;
  json j;
  j["format_version"] = kFormatVersion;
  json vertices = json::array();
  for (VertexId v = 0; v < t.vertex_count(); ++v) {
    json vj{{"id", v}};
    if (auto lv = t.level(v)) {
      vj["level"] = *lv;
    } else {
      vj["level"] = nullptr;
    }
    vertices.push_back(vj);
  }
  j["vertices"] = vertices;
  json edges = json::array();
  for (const auto& e : t.edges()) edges.push_back({{"u", e.u}, {"v", e.v}, {"length", e.length}});
  j["edges"] = edges;
  json ends = json::array();
  for (const auto& [label, v] : t.ends()) {
    ends.push_back({{"label", label}, {"name", t.name(label)}, {"vertex", v}});
  }
  j["ends"] = ends;
  j["root"] = t.root() ? json(*t.root()) : json(nullptr);
  j["infinity_end"] = t.infinity_end() ? json(*t.infinity_end()) : json(nullptr);
  j["separation"] = t.separation() ? json(*t.separation()) : json(nullptr);
  return j;
}

MarkedTree tree_from_json(const nlohmann::json& j) {
  try {
    MarkedTree t;
    for (const auto& vj : j.at("vertices")) {
      if (vj.at("id").get<VertexId>() != t.vertex_count()) {
        throw InputError("tree_json", "vertex ids must be 0, 1, 2, ... in order");
      }
      const auto& lv = vj.contains("level") ? vj.at("level") : nlohmann::json(nullptr);
      t.add_vertex(lv.is_null() ? std::nullopt : std::optional<std::int64_t>(lv.get<std::int64_t>()));
    }
    for (const auto& ej : j.at("edges")) {
      t.add_edge(ej.at("u").get<VertexId>(), ej.at("v").get<VertexId>(),
                 ej.at("length").get<std::int64_t>());
    }
    if (j.contains("infinity_end") && !j.at("infinity_end").is_null()) {
      t.set_infinity_end(j.at("infinity_end").get<EndLabel>());
    }
    for (const auto& ej : j.at("ends")) {
      const auto label = ej.at("label").get<EndLabel>();
      t.attach_end(label, ej.at("vertex").get<VertexId>());
      if (ej.contains("name")) {
        const auto name = ej.at("name").get<std::string>();
        if (name != t.name(label)) t.set_name(label, name);
      }
    }
    if (j.contains("root") && !j.at("root").is_null()) t.set_root(j.at("root").get<VertexId>());
    if (j.contains("separation") && !j.at("separation").is_null()) {
      t.set_separation(j.at("separation").get<std::int64_t>());
    }
    t.validate();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("tree_json", std::string("malformed tree document: ") + e.what());
  }
}

}  // namespace padictree
