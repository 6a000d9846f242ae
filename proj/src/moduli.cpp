#include "padictree/moduli.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <set>
#include <sstream>

#include "padictree/builder.hpp"
#include "padictree/encoder.hpp"
#include "padictree/errors.hpp"
#include "padictree/tree_io.hpp"

namespace padictree {

namespace {

bool is_exactly(const ProjPoint& x, int value) {
  return !x.is_infinity() && compare(x, PadicNumber::from_integer(x.field(), value)) == Comparison::equal;
}

bool same_point(const ProjPoint& a, const ProjPoint& b) {
  switch (compare(a, b)) {
    case Comparison::equal:
      return true;
    case Comparison::different:
      return false;
    case Comparison::indeterminate:
      break;
  }
  throw PrecisionError("cannot decide whether " + format_point(a) + " and " + format_point(b) +
                       " coincide");
}

const CanonicalOptions kShapeWithLabels{false, true, false};

}  // namespace

std::pair<Mobius, Configuration> normalize(const Configuration& x) {
  if (x.points.size() < 3) throw InputError("too_few_points", "normalization needs three points");
  const auto& p = x.points;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (same_point(p[i], p[j])) {
        throw InputError("coincident_points", "points " + std::to_string(i) + " and " + std::to_string(j) +
                                                  " coincide; use collide");
      }
    }
  }
  const FieldPtr& f = p[0].field();
  if (is_exactly(p[0], 0) && is_exactly(p[1], 1) && p[2].is_infinity()) {
    return {Mobius::identity(f), Configuration{p, true}};
  }
  const Mobius alpha = normalizing_mobius(p[0], p[1], p[2]);
  Configuration out{{}, true};
  for (const auto& z : p) out.points.push_back(alpha(z));
  return {alpha, out};
}

StratumCode stratum_code(const Configuration& x) {
  if (x.points.size() < 3) throw InputError("too_few_points", "strata need three points");
  return {canonical_form(build_projective_dendrogram(x.points), kShapeWithLabels)};
}

std::string m04_name(const StratumCode& c) {
  const MarkedTree t = stabilize(parse_canonical(c.text));
  std::set<EndLabel> labels;
  for (const auto& [label, v] : t.ends()) labels.insert(label);
  if (labels != std::set<EndLabel>{0, 1, 2, 3}) {
    throw InputError("not_m04", "M_{0,4} strata need the labels 0, 1, 2, 3");
  }
  if (t.vertex_count() == 1) return "v";
  const VertexId at = t.ends().at(0);
  if (t.ends().at(1) == at) return "A";
  if (t.ends().at(3) == at) return "B";
  return "C";
}

namespace {

MarkedTree contract(const MarkedTree& t, std::size_t edge) {
  const auto& e = t.edges()[edge];
  MarkedTree out;
  std::vector<VertexId> id(t.vertex_count());
  for (VertexId v = 0; v < t.vertex_count(); ++v) {
    if (v != e.v) id[v] = out.add_vertex();
  }
  id[e.v] = id[e.u];
  for (std::size_t i = 0; i < t.edges().size(); ++i) {
    if (i != edge) out.add_edge(id[t.edges()[i].u], id[t.edges()[i].v], t.edges()[i].length);
  }
  for (const auto& [label, v] : t.ends()) out.attach_end(label, id[v]);
  return out;
}

}  // namespace

bool strata_adjacent(const StratumCode& a, const StratumCode& b) {
  MarkedTree ta = stabilize(parse_canonical(a.text)), tb = stabilize(parse_canonical(b.text));
  std::set<EndLabel> la, lb;
  for (const auto& [label, v] : ta.ends()) la.insert(label);
  for (const auto& [label, v] : tb.ends()) lb.insert(label);
  if (la != lb) throw InputError("label_mismatch", "strata of different label sets");
  if (ta.vertex_count() < tb.vertex_count()) std::swap(ta, tb);
  if (ta.vertex_count() != tb.vertex_count() + 1) return false;
  const std::string target = canonical_form(tb, kShapeWithLabels);
  for (std::size_t e = 0; e < ta.edges().size(); ++e) {
    if (canonical_form(contract(ta, e), kShapeWithLabels) == target) return true;
  }
  return false;
}

Family parse_family_csv(const std::string& text, FieldPtr field) {
  if (!field) {
    const auto tag = sniff_field_tag(text);
    if (!tag) throw InputError("csv_field", "no field given and no p^m tag found in the family");
    field = FieldSpec::make(tag->first, tag->second);
  }
  Family f{field, {}, {}, {}};
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line == "\r") continue;
    auto cells = split_csv_line(line);
    if (first && !cells.empty() && cells[0] == "time") {
      f.point_names.assign(cells.begin() + 1, cells.end());
      first = false;
      continue;
    }
    first = false;
    if (cells.size() < 2) throw InputError("csv_syntax", "line " + std::to_string(lineno) + ": empty row");
    std::vector<ProjPoint> row;
    for (std::size_t i = 1; i < cells.size(); ++i) {
      try {
        row.push_back(parse_point(cells[i], field));
      } catch (const InputError& e) {
        throw InputError(e.reason(), "line " + std::to_string(lineno) + ", column " + std::to_string(i) +
                                         ": " + e.what());
      }
    }
    if (!f.rows.empty() && row.size() != f.rows[0].size()) {
      throw InputError("ragged_family", "line " + std::to_string(lineno) + ": rows must have equal length");
    }
    f.times.push_back(cells[0]);
    f.rows.push_back(std::move(row));
  }
  if (!f.point_names.empty() && !f.rows.empty() && f.point_names.size() != f.rows[0].size()) {
    throw InputError("ragged_family", "header and rows differ in length");
  }
  return f;
}

std::string to_csv(const Family& f) {
  std::ostringstream out;
  out << "# format_version=" << kFormatVersion << '\n';
  if (!f.point_names.empty()) {
    out << "time";
    for (const auto& n : f.point_names) out << ',' << csv_field(n);
    out << '\n';
  }
  for (std::size_t j = 0; j < f.rows.size(); ++j) {
    out << csv_field(f.times[j]);
    for (const auto& x : f.rows[j]) out << ',' << csv_field(format_point(x));
    out << '\n';
  }
  return out.str();
}

Slice slice(const Family& f, std::size_t j) {
  if (j >= f.rows.size()) throw InputError("row_range", "row " + std::to_string(j) + " does not exist");
  const auto& row = f.rows[j];
  std::vector<std::size_t> kept;
  std::vector<std::pair<std::size_t, std::size_t>> duplicates;
  for (std::size_t i = 0; i < row.size(); ++i) {
    std::optional<std::size_t> twin;
    for (std::size_t k : kept) {
      if (same_point(row[i], row[k])) {
        twin = k;
        break;
      }
    }
    if (twin) {
      duplicates.emplace_back(i, *twin);
    } else {
      kept.push_back(i);
    }
  }
  if (kept.size() < 3) {
    throw InputError("too_few_points", "row " + std::to_string(j) + " has " + std::to_string(kept.size()) +
                                           " distinct points; three are needed");
  }
  Configuration x;
  for (std::size_t i : kept) x.points.push_back(row[i]);
  const Mobius alpha = normalizing_mobius(x.points[0], x.points[1], x.points[2]);
  // The tree is built in the given coordinates; alpha only moves it.
  const MarkedTree built = build_projective_dendrogram(x.points);
  MarkedTree tree;
  for (VertexId v = 0; v < built.vertex_count(); ++v) tree.add_vertex(built.level(v));
  for (const auto& e : built.edges()) tree.add_edge(e.u, e.v, e.length);
  for (const auto& [label, v] : built.ends()) {
    const auto column = static_cast<EndLabel>(kept[static_cast<std::size_t>(label)]);
    tree.attach_end(column, v);
    if (column < static_cast<EndLabel>(f.point_names.size())) {
      tree.set_name(column, f.point_names[static_cast<std::size_t>(column)]);
    }
    if (built.infinity_end() == label) tree.set_infinity_end(column);
  }
  tree.set_root(built.root());
  return {alpha, tree, kept, duplicates};
}

std::vector<Slice> slice_all_serial(const Family& f) {
  std::vector<Slice> out;
  for (std::size_t j = 0; j < f.rows.size(); ++j) out.push_back(slice(f, j));
  return out;
}

std::vector<Slice> slice_all(const Family& f) {
  const auto m = static_cast<std::ptrdiff_t>(f.rows.size());
  std::vector<std::optional<Slice>> results(f.rows.size());
  std::vector<std::exception_ptr> errors(f.rows.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t j = 0; j < m; ++j) {
    const auto row = static_cast<std::size_t>(j);
    try {
      results[row] = slice(f, row);
    } catch (...) {
      errors[row] = std::current_exception();
    }
  }
  std::vector<Slice> out;
  for (std::size_t j = 0; j < results.size(); ++j) {
    if (errors[j]) std::rethrow_exception(errors[j]);
    out.push_back(std::move(*results[j]));
  }
  return out;
}

namespace {

// 0, 1, inf, 2, 3, ...
ProjPoint canonical_position(const FieldPtr& f, std::size_t k) {
  if (k == 2) return ProjPoint::infinity(f);
  return PadicNumber::from_integer(f, static_cast<long long>(k < 2 ? k : k - 1));
}

std::size_t special_count(const Component& c) { return c.marks.size() + c.double_points.size(); }

}  // namespace

StableTree collide(const std::vector<ProjPoint>& xs) {
  if (xs.empty()) throw InputError("empty_points", "no points given");
  const FieldPtr& f = xs[0].field();
  std::vector<std::vector<std::size_t>> groups;
  std::vector<ProjPoint> positions;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    bool placed = false;
    for (std::size_t g = 0; g < groups.size() && !placed; ++g) {
      if (same_point(xs[i], positions[g])) {
        groups[g].push_back(i);
        placed = true;
      }
    }
    if (!placed) {
      groups.push_back({i});
      positions.push_back(xs[i]);
    }
  }
  if (groups.size() == 1 && xs.size() > 1) {
    throw InputError("no_base", "all points coincide; there is no base configuration");
  }
  const bool collisions = groups.size() < xs.size();
  if (!collisions && xs.size() < 3) {
    throw InputError("too_few_points", "a stable line needs three special points");
  }

  StableTree s{f, {Component{}}};
  std::size_t links = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].size() == 1) {
      s.components[0].marks.push_back({static_cast<EndLabel>(groups[g][0]), positions[g]});
      continue;
    }
    Component bubble;
    for (std::size_t k = 0; k < groups[g].size(); ++k) {
      bubble.marks.push_back({static_cast<EndLabel>(groups[g][k]), canonical_position(f, k)});
    }
    bubble.double_points.push_back({canonical_position(f, groups[g].size()), links});
    bubble.nesting_ambiguous = groups[g].size() >= 3;
    s.components[0].double_points.push_back({positions[g], links});
    ++links;
    s.components.push_back(std::move(bubble));
  }

  // A base line with two special points is not stable: remove it.
  Component& base = s.components[0];
  if (s.components.size() > 1 && special_count(base) == 2) {
    auto owner = [&](std::size_t link) {
      for (std::size_t c = 1; c < s.components.size(); ++c) {
        for (auto& d : s.components[c].double_points) {
          if (d.link == link) return std::pair<std::size_t, DoublePoint*>{c, &d};
        }
      }
      throw std::logic_error("dangling link");
    };
    if (base.double_points.size() == 1) {
      // The remaining mark takes the place of the node on the bubble.
      auto [c, d] = owner(base.double_points[0].link);
      Mark moved{base.marks[0].label, d->position};
      auto& dps = s.components[c].double_points;
      dps.erase(dps.begin() + (d - dps.data()));
      s.components[c].marks.push_back(moved);
    } else {
      // Two bubbles meet directly; keep the first link id on both.
      const std::size_t keep = base.double_points[0].link;
      owner(base.double_points[1].link).second->link = keep;
    }
    s.components.erase(s.components.begin());
  }
  return s;
}

std::vector<Violation> validate_stable(const StableTree& s) {
  std::vector<Violation> out;
  const std::size_t n = s.components.size();
  std::map<std::size_t, std::vector<std::size_t>> link_owners;
  for (std::size_t c = 0; c < n; ++c) {
    for (const auto& d : s.components[c].double_points) link_owners[d.link].push_back(c);
  }
  for (const auto& [link, owners] : link_owners) {
    if (owners.size() != 2 || owners[0] == owners[1]) {
      out.push_back({"ordinary_double_point", "node " + std::to_string(link) + " does not join exactly two lines"});
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    const auto& comp = s.components[c];
    const std::string where = "line " + std::to_string(c);
    for (std::size_t a = 0; a < comp.double_points.size(); ++a) {
      for (std::size_t b = a + 1; b < comp.double_points.size(); ++b) {
        if (same_point(comp.double_points[a].position, comp.double_points[b].position)) {
          out.push_back({"ordinary_double_point", where + ": two nodes at " + format_point(comp.double_points[a].position)});
        }
      }
    }
    if (special_count(comp) < 3) {
      out.push_back({"three_special_points", where + " carries " + std::to_string(special_count(comp)) +
                                                 " special points"});
    }
    for (const auto& m : comp.marks) {
      for (const auto& d : comp.double_points) {
        if (same_point(m.position, d.position)) {
          out.push_back({"regular_marks", where + ": mark " + std::to_string(m.label) + " sits on a node"});
        }
      }
    }
    for (std::size_t a = 0; a < comp.marks.size(); ++a) {
      for (std::size_t b = a + 1; b < comp.marks.size(); ++b) {
        if (same_point(comp.marks[a].position, comp.marks[b].position)) {
          out.push_back({"distinct_marks", where + ": marks " + std::to_string(comp.marks[a].label) + " and " +
                                               std::to_string(comp.marks[b].label) + " coincide"});
        }
      }
    }
  }
  std::set<EndLabel> labels;
  for (const auto& comp : s.components) {
    for (const auto& m : comp.marks) {
      if (!labels.insert(m.label).second) {
        out.push_back({"distinct_marks", "label " + std::to_string(m.label) + " appears twice"});
      }
    }
  }
  // Intersection graph: connected with one edge fewer than lines.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  bool cycle = false;
  std::size_t parts = n;
  for (const auto& [link, owners] : link_owners) {
    if (owners.size() != 2) continue;
    const auto a = find(owners[0]), b = find(owners[1]);
    if (a == b) {
      cycle = true;
    } else {
      parent[a] = b;
      --parts;
    }
  }
  if (cycle) out.push_back({"tree", "the intersection graph has a cycle"});
  if (parts > 1) out.push_back({"tree", "the intersection graph is disconnected"});
  return out;
}

nlohmann::json to_json(const StableTree& s) {
  using nlohmann::json;
  json comps = json::array();
  for (std::size_t c = 0; c < s.components.size(); ++c) {
    const auto& comp = s.components[c];
    json marks = json::array(), nodes = json::array();
    for (const auto& m : comp.marks) marks.push_back({{"label", m.label}, {"position", format_point(m.position)}});
    for (const auto& d : comp.double_points) {
      nodes.push_back({{"link", d.link}, {"position", format_point(d.position)}});
    }
    comps.push_back({{"id", c}, {"marks", marks}, {"double_points", nodes},
                     {"nesting_ambiguous", comp.nesting_ambiguous}});
  }
  return {{"format_version", kFormatVersion},
          {"field", {{"p", s.field->p()}, {"m", s.field->m()}, {"precision", s.field->precision()}}},
          {"components", comps}};
}

StableTree stable_tree_from_json(const nlohmann::json& j) {
  try {
    const auto& fj = j.at("field");
    StableTree s{FieldSpec::make(fj.at("p").get<std::int64_t>(), fj.at("m").get<int>(),
                                 fj.value("precision", kDefaultPrecision)),
                 {}};
    for (const auto& cj : j.at("components")) {
      Component comp;
      for (const auto& mj : cj.at("marks")) {
        comp.marks.push_back({mj.at("label").get<EndLabel>(), parse_point(mj.at("position").get<std::string>(), s.field)});
      }
      for (const auto& dj : cj.at("double_points")) {
        comp.double_points.push_back(
            {parse_point(dj.at("position").get<std::string>(), s.field), dj.at("link").get<std::size_t>()});
      }
      comp.nesting_ambiguous = cj.value("nesting_ambiguous", false);
      s.components.push_back(std::move(comp));
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("stable_json", std::string("malformed stable tree document: ") + e.what());
  }
}

std::string to_dot(const StableTree& s) {
  std::ostringstream out;
  out << "graph stable_tree {\n";
  std::map<std::size_t, std::vector<std::pair<std::size_t, std::string>>> links;
  for (std::size_t c = 0; c < s.components.size(); ++c) {
    const auto& comp = s.components[c];
    out << "  L" << c << " [shape=box, label=\"L" << c;
    for (const auto& m : comp.marks) out << "\\n" << m.label << " @ " << format_point(m.position);
    if (comp.nesting_ambiguous) out << "\\n(nesting ambiguous)";
    out << "\"];\n";
    for (const auto& d : comp.double_points) links[d.link].emplace_back(c, format_point(d.position));
  }
  for (const auto& [link, ends] : links) {
    if (ends.size() != 2) continue;
    out << "  L" << ends[0].first << " -- L" << ends[1].first << " [label=\"" << ends[0].second << " ~ "
        << ends[1].second << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace padictree
