#include "padictree/encoder.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

#include "padictree/builder.hpp"
#include "padictree/errors.hpp"
#include "padictree/projective.hpp"
#include "padictree/tree_io.hpp"

namespace padictree {

std::vector<std::string> ClassicalDendrogram::leaves() const {
  std::vector<std::string> out;
  std::function<void(std::size_t)> walk = [&](std::size_t v) {
    if (is_leaf(v)) out.push_back(*nodes[v].label);
    for (std::size_t c : nodes[v].children) walk(c);
  };
  if (!nodes.empty()) walk(root);
  return out;
}

std::size_t ClassicalDendrogram::max_branching() const {
  std::size_t b = 0;
  for (const auto& n : nodes) b = std::max(b, n.children.size());
  return b;
}

void ClassicalDendrogram::validate() const {
  if (nodes.empty() || root >= nodes.size()) throw InputError("dendrogram", "empty dendrogram");
  if (is_leaf(root)) throw InputError("dendrogram", "the root must be an internal node");
  if (nodes[root].level < 0) throw InputError("dendrogram", "the root level must be nonnegative");
  std::set<std::string> labels;
  std::vector<bool> seen(nodes.size(), false);
  std::function<void(std::size_t)> walk = [&](std::size_t v) {
    if (seen[v]) throw InputError("dendrogram", "node reached twice");
    seen[v] = true;
    const auto& n = nodes[v];
    if (n.label) {
      if (!n.children.empty()) throw InputError("dendrogram", "a leaf cannot have children");
      if (!labels.insert(*n.label).second) {
        throw InputError("dendrogram", "leaf label '" + *n.label + "' appears twice");
      }
      return;
    }
    if (n.children.size() < (v == root ? 1u : 2u)) {
      throw InputError("dendrogram", "internal nodes need at least two children");
    }
    for (std::size_t c : n.children) {
      if (c >= nodes.size()) throw InputError("dendrogram", "child index out of range");
      if (!is_leaf(c) && nodes[c].level <= n.level) {
        throw InputError("dendrogram", "levels must increase away from the root (" +
                                           std::to_string(n.level) + " then " +
                                           std::to_string(nodes[c].level) + ")");
      }
      walk(c);
    }
  };
  walk(root);
}

namespace {

class NewickParser {
 public:
  explicit NewickParser(const std::string& s) : s_(s) {}

  ClassicalDendrogram parse() {
    skip();
    d_.root = node();
    skip();
    if (pos_ < s_.size() && s_[pos_] == ';') ++pos_;
    skip();
    if (pos_ != s_.size()) fail("trailing characters");
    d_.validate();
    return d_;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("newick_syntax", "newick, offset " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  std::string name() {
    skip();
    std::string out;
    if (pos_ < s_.size() && s_[pos_] == '\'') {
      ++pos_;
      while (true) {
        if (pos_ >= s_.size()) fail("unterminated quoted label");
        if (s_[pos_] == '\'') {
          if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '\'') {
            out += '\'';
            pos_ += 2;
            continue;
          }
          ++pos_;
          break;
        }
        out += s_[pos_++];
      }
      return out;
    }
    while (pos_ < s_.size() && std::string_view("(),:;").find(s_[pos_]) == std::string_view::npos &&
           !std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      out += s_[pos_++];
    }
    return out;
  }
  std::size_t node() {
    skip();
    const std::size_t id = d_.nodes.size();
    d_.nodes.emplace_back();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      std::vector<std::size_t> children;
      while (true) {
        children.push_back(node());
        skip();
        if (pos_ < s_.size() && s_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (pos_ < s_.size() && s_[pos_] == ')') {
          ++pos_;
          break;
        }
        fail("expected ',' or ')'");
      }
      d_.nodes[id].children = std::move(children);
      const std::string level = name();
      if (level.empty()) fail("internal node without a level");
      try {
        std::size_t used = 0;
        d_.nodes[id].level = std::stoll(level, &used);
        if (used != level.size()) throw std::invalid_argument(level);
      } catch (const std::exception&) {
        fail("level '" + level + "' is not an integer");
      }
    } else {
      std::string label = name();
      if (label.empty()) fail("empty leaf label");
      d_.nodes[id].label = std::move(label);
    }
    skip();
    if (pos_ < s_.size() && s_[pos_] == ':') fail("branch lengths are implied by levels");
    return id;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  ClassicalDendrogram d_;
};

std::string quoted(const std::string& name) {
  if (!name.empty() && name.find_first_of("(),:;[]' \t") == std::string::npos) return name;
  std::string out = "'";
  for (char c : name) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

}  // namespace

ClassicalDendrogram parse_dendrogram_newick(const std::string& text) { return NewickParser(text).parse(); }

std::string to_newick(const ClassicalDendrogram& d) {
  std::function<std::string(std::size_t)> write = [&](std::size_t v) -> std::string {
    const auto& n = d.nodes[v];
    if (n.label) return quoted(*n.label);
    std::string s = "(";
    for (std::size_t i = 0; i < n.children.size(); ++i) s += (i ? "," : "") + write(n.children[i]);
    return s + ")" + std::to_string(n.level);
  };
  return write(d.root) + ";";
}

nlohmann::json to_json(const ClassicalDendrogram& d) {
  using nlohmann::json;
  json nodes = json::array();
  for (const auto& n : d.nodes) {
    if (n.label) {
      nodes.push_back({{"label", *n.label}});
    } else {
      nodes.push_back({{"level", n.level}, {"children", n.children}});
    }
  }
  return {{"format_version", kFormatVersion}, {"root", d.root}, {"nodes", nodes}};
}

ClassicalDendrogram dendrogram_from_json(const nlohmann::json& j) {
  try {
    ClassicalDendrogram d;
    d.root = j.at("root").get<std::size_t>();
    for (const auto& nj : j.at("nodes")) {
      ClassicalDendrogram::Node n;
      if (nj.contains("label")) {
        n.label = nj.at("label").get<std::string>();
      } else {
        n.level = nj.at("level").get<std::int64_t>();
        n.children = nj.at("children").get<std::vector<std::size_t>>();
      }
      d.nodes.push_back(std::move(n));
    }
    d.validate();
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("dendrogram_json", std::string("malformed dendrogram document: ") + e.what());
  }
}

std::string canonical_form(const ClassicalDendrogram& d) {
  std::function<std::string(std::size_t)> form = [&](std::size_t v) -> std::string {
    const auto& n = d.nodes[v];
    if (n.label) return quoted(*n.label);
    std::vector<std::string> items;
    for (std::size_t c : n.children) items.push_back(form(c));
    std::sort(items.begin(), items.end());
    std::string s = "(";
    for (std::size_t i = 0; i < items.size(); ++i) s += (i ? "," : "") + items[i];
    return s + ")" + std::to_string(n.level);
  };
  return form(d.root);
}

MarkedTree to_marked_tree(const ClassicalDendrogram& d) {
  d.validate();
  MarkedTree t;
  EndLabel next = 0;
  std::function<VertexId(std::size_t)> walk = [&](std::size_t v) -> VertexId {
    const auto& n = d.nodes[v];
    const VertexId id = t.add_vertex(n.level);
    for (std::size_t c : n.children) {
      if (d.is_leaf(c)) {
        t.attach_end(next, id);
        t.set_name(next, *d.nodes[c].label);
        ++next;
      } else {
        t.add_edge(id, walk(c), d.nodes[c].level - n.level);
      }
    }
    return id;
  };
  t.set_root(walk(d.root));
  return t;
}

ClassicalDendrogram from_marked_tree(const MarkedTree& t) {
  if (!t.root()) throw InputError("missing_root", "a classical dendrogram needs a root");
  const auto adj = t.adjacency();
  ClassicalDendrogram d;
  // Smallest end label in each branch, for the child order.
  std::function<EndLabel(VertexId, VertexId)> smallest = [&](VertexId v, VertexId parent) {
    EndLabel m = std::numeric_limits<EndLabel>::max();
    for (EndLabel e : adj.ends[v]) m = std::min(m, e);
    for (const auto& [w, len] : adj.neighbors[v]) {
      if (w != parent) m = std::min(m, smallest(w, v));
    }
    return m;
  };
  std::function<std::size_t(VertexId, VertexId)> walk = [&](VertexId v, VertexId parent) -> std::size_t {
    const auto level = t.level(v);
    if (!level) throw InputError("missing_level", "vertex " + std::to_string(v) + " has no level");
    const std::size_t id = d.nodes.size();
    d.nodes.emplace_back();
    d.nodes[id].level = *level;
    std::vector<std::pair<EndLabel, std::optional<VertexId>>> items;
    for (EndLabel e : adj.ends[v]) items.emplace_back(e, std::nullopt);
    for (const auto& [w, len] : adj.neighbors[v]) {
      if (w != parent) items.emplace_back(smallest(w, v), w);
    }
    std::sort(items.begin(), items.end());
    for (const auto& [key, child] : items) {
      std::size_t c;
      if (child) {
        c = walk(*child, v);
      } else {
        c = d.nodes.size();
        d.nodes.emplace_back();
        d.nodes[c].label = t.name(key);
      }
      d.nodes[id].children.push_back(c);
    }
    return id;
  };
  d.root = walk(*t.root(), *t.root());
  return d;
}

FieldPtr choose_field(std::size_t max_branching, std::int64_t p, std::int64_t precision) {
  if (max_branching < 1) throw InputError("branching", "max_branching must be at least 1");
  int m = 1;
  std::int64_t q = p;
  while (q < static_cast<std::int64_t>(max_branching)) {
    q *= p;
    ++m;
  }
  return FieldSpec::make(p, m, precision);
}

CodeAssignment encode_dendrogram(const ClassicalDendrogram& d, const FieldPtr& field,
                                 const EncodeOptions& opts) {
  d.validate();
  FieldPtr f = field;
  const std::size_t branching = d.max_branching();
  if (static_cast<std::int64_t>(branching) > f->q()) {
    FieldPtr bigger = choose_field(branching, f->p(), f->precision());
    if (!opts.auto_promote) {
      throw FieldTooSmallError(static_cast<int>(branching), bigger->m(),
                               "a node has " + std::to_string(branching) + " children but q = " +
                                   std::to_string(f->q()) + "; residue degree " +
                                   std::to_string(bigger->m()) + " suffices");
    }
    f = bigger;
  }
  CodeAssignment out{f, {}};
  // digits[level] along the current path.
  std::vector<std::pair<std::int64_t, Digit>> path;
  std::function<void(std::size_t)> walk = [&](std::size_t v) {
    const auto& n = d.nodes[v];
    if (n.label) {
      std::int64_t top = 0;
      for (const auto& [level, digit] : path) top = std::max(top, level);
      std::vector<Digit> ds(static_cast<std::size_t>(top) + 1, 0);
      for (const auto& [level, digit] : path) ds[static_cast<std::size_t>(level)] = digit;
      out.codes.emplace_back(*n.label, PadicNumber::from_digits(f, 0, std::move(ds), true));
      return;
    }
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      path.emplace_back(n.level, static_cast<Digit>(i));
      walk(n.children[i]);
      path.pop_back();
    }
  };
  walk(d.root);
  return out;
}

ClassicalDendrogram decode_codes(const CodeAssignment& c) {
  if (c.codes.empty()) throw InputError("empty_points", "no codes given");
  std::vector<ProjPoint> xs;
  BuildOptions opts{false, {}};
  for (const auto& [label, code] : c.codes) {
    xs.push_back(code);
    opts.names.push_back(label);
  }
  const auto inf = static_cast<EndLabel>(xs.size());
  xs.push_back(ProjPoint::infinity(c.field));
  opts.names.push_back("inf");
  MarkedTree t = build_projective_dendrogram(xs, opts);
  t.set_root(t.ends().at(inf));
  return from_marked_tree(classical_view(t));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted_field = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted_field) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          out.back() += '"';
          ++i;
        } else {
          quoted_field = false;
        }
      } else {
        out.back() += ch;
      }
    } else if (ch == '"') {
      quoted_field = true;
    } else if (ch == ',') {
      out.emplace_back();
    } else if (ch != '\r') {
      out.back() += ch;
    }
  }
  if (quoted_field) throw InputError("csv_syntax", "unterminated quote");
  return out;
}

std::string to_csv(const CodeAssignment& c) {
  std::ostringstream out;
  out << "# format_version=" << kFormatVersion << "\nlabel,code\n";
  for (const auto& [label, code] : c.codes) {
    out << csv_field(label) << ',' << csv_field(format_scalar(code)) << '\n';
  }
  return out.str();
}

CodeAssignment parse_codes_csv(const std::string& text, FieldPtr field) {
  if (!field) {
    const auto tag = sniff_field_tag(text);
    if (!tag) throw InputError("csv_field", "no field given and no p^m tag found in the codes");
    field = FieldSpec::make(tag->first, tag->second);
  }
  CodeAssignment out{field, {}};
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool header = true;
  std::set<std::string> labels;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_csv_line(line);
    if (header && cells.size() >= 2 && cells[0] == "label" && cells[1] == "code") {
      header = false;
      continue;
    }
    header = false;
    if (cells.size() < 2) {
      throw InputError("csv_syntax", "line " + std::to_string(lineno) + ": expected label,code");
    }
    // Unquoted digit lists spill over into extra cells.
    std::string code = cells[1];
    for (std::size_t i = 2; i < cells.size(); ++i) code += "," + cells[i];
    try {
      out.codes.emplace_back(cells[0], parse_scalar(code, field));
    } catch (const InputError& e) {
      throw InputError(e.reason(), "line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!labels.insert(cells[0]).second) {
      throw InputError("duplicate_label", "line " + std::to_string(lineno) + ": label repeated");
    }
  }
  return out;
}

}  // namespace padictree
