#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "padictree/projective.hpp"
#include "padictree/tree.hpp"

namespace padictree {

struct Configuration {
  std::vector<ProjPoint> points;
  /// First three points are exactly 0, 1, inf.
  bool normalized = false;
};

/// alpha_X sending the first three points to 0, 1, inf, and the moved
/// configuration. Coincident leading points raise InputError
/// "coincident_points": such configurations belong to collide().
std::pair<Mobius, Configuration> normalize(const Configuration& x);

/// Labeled shape of the dendrogram, lengths forgotten: the canonical string
/// of the tree (see canonical_form).
struct StratumCode {
  std::string text;
  friend bool operator==(const StratumCode&, const StratumCode&) = default;
};

/// Needs pairwise distinct points (at least three); does not depend on
/// the coordinates chosen, so X need not be normalized.
StratumCode stratum_code(const Configuration& x);

/// Names the four strata of M_{0,4} for labels 0, 1, 2 (= inf), 3 (= lambda):
/// "A" = {0,1}|{2,3}, "B" = {0,3}|{1,2}, "C" = {0,2}|{1,3}, "v" = the star.
std::string m04_name(const StratumCode& c);

/// True iff contracting exactly one internal edge of one shape gives the
/// other. Throws InputError when the label sets differ.
bool strata_adjacent(const StratumCode& a, const StratumCode& b);

/// Rows X_j of points x_{ij} at times t_j.
struct Family {
  FieldPtr field;
  std::vector<std::string> times;
  std::vector<std::string> point_names;  // may be empty
  std::vector<std::vector<ProjPoint>> rows;
};

/// Rows after a "time" header (optional), one per line: the time label then
/// one quoted scalar per point; '#' lines are comments. The field is taken
/// from the cells unless given.
Family parse_family_csv(const std::string& text, FieldPtr field = nullptr);
std::string to_csv(const Family& f);

struct Slice {
  Mobius alpha;
  /// Ends are labeled by column; a duplicate keeps its first column.
  MarkedTree tree;
  std::vector<std::size_t> kept;
  /// (column, column it duplicates).
  std::vector<std::pair<std::size_t, std::size_t>> duplicates;
};

/// pi_j: deduplicate row j, normalize by its first three distinct points,
/// and build the dendrogram. Throws InputError with fewer than three
/// distinct points.
Slice slice(const Family& f, std::size_t j);
/// All rows, computed in parallel; the error of the first failing row is
/// rethrown.
std::vector<Slice> slice_all(const Family& f);
std::vector<Slice> slice_all_serial(const Family& f);

struct DoublePoint {
  ProjPoint position;
  std::size_t link;  // both ends of a node share the link id
};

struct Mark {
  EndLabel label;
  ProjPoint position;
};

struct Component {
  std::vector<Mark> marks;
  std::vector<DoublePoint> double_points;
  /// Three or more points collided; their bubbles could also nest.
  bool nesting_ambiguous = false;
};

/// Tree of projective lines with marked points.
struct StableTree {
  FieldPtr field;
  std::vector<Component> components;
};

/// Bubbles every group of coincident points onto its own line attached at
/// the collision point; the group's marks sit at 0, 1, inf, 2, 3, ... and
/// the node at the next free position. A base line left with fewer than
/// three special points is contracted. Throws InputError when all points
/// coincide or fewer than three points are given without collisions.
StableTree collide(const std::vector<ProjPoint>& xs);

struct Violation {
  /// ordinary_double_point, tree, three_special_points, regular_marks or
  /// distinct_marks.
  std::string property;
  std::string detail;
};

std::vector<Violation> validate_stable(const StableTree& s);

nlohmann::json to_json(const StableTree& s);
StableTree stable_tree_from_json(const nlohmann::json& j);
/// Intersection graph: one node per line, one edge per double point.
std::string to_dot(const StableTree& s);

}  // namespace padictree
