#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "padictree/padic.hpp"
#include "padictree/tree.hpp"

namespace padictree {

/// Rooted dendrogram with integer merge levels, growing away from the root.
/// Each node is either a leaf (has a label) or an internal node with a
/// level and children in their canonical order.
struct ClassicalDendrogram {
  struct Node {
    std::int64_t level = 0;
    std::vector<std::size_t> children;
    std::optional<std::string> label;
  };
  std::vector<Node> nodes;
  std::size_t root = 0;

  bool is_leaf(std::size_t v) const { return nodes[v].label.has_value(); }
  /// Leaf labels in depth-first order.
  std::vector<std::string> leaves() const;
  std::size_t max_branching() const;
  /// Throws InputError: internal nodes need two children (the root one),
  /// child levels must exceed their parent's, labels must be unique, the
  /// root level must be nonnegative.
  void validate() const;
};

/// Newick with levels as internal node names, e.g. "((a,b)3,c)0;".
/// Labels may be single-quoted.
ClassicalDendrogram parse_dendrogram_newick(const std::string& text);
std::string to_newick(const ClassicalDendrogram& d);
nlohmann::json to_json(const ClassicalDendrogram& d);
ClassicalDendrogram dendrogram_from_json(const nlohmann::json& j);

/// Order-insensitive form; equal strings iff the dendrograms agree as
/// leaf-labeled level trees.
std::string canonical_form(const ClassicalDendrogram& d);

/// Rooted marked tree: leaves become ends labeled by depth-first index (with
/// their names), edge lengths are level gaps.
MarkedTree to_marked_tree(const ClassicalDendrogram& d);
/// Inverse of to_marked_tree for rooted trees with vertex levels. Children
/// are ordered by the smallest end label below them.
ClassicalDendrogram from_marked_tree(const MarkedTree& t);

struct CodeAssignment {
  FieldPtr field;
  std::vector<std::pair<std::string, PadicNumber>> codes;
};

/// Smallest residue degree m with p^m >= max_branching.
FieldPtr choose_field(std::size_t max_branching, std::int64_t p,
                      std::int64_t precision = kDefaultPrecision);

struct EncodeOptions {
  /// On excess branching, move to choose_field(branching, p) instead of
  /// throwing FieldTooSmallError.
  bool auto_promote = false;
};

/// Children of a node take digits 0, 1, ... in order; a leaf's code is the
/// sum of digit * p^level over the internal nodes above it.
CodeAssignment encode_dendrogram(const ClassicalDendrogram& d, const FieldPtr& field,
                                 const EncodeOptions& opts = {});

/// Projective dendrogram of the codes plus infinity, viewed from the disk
/// where infinity attaches.
ClassicalDendrogram decode_codes(const CodeAssignment& c);

/// "label,code" rows after a "# format_version=1" comment and a header;
/// fields quoted as CSV requires.
std::string to_csv(const CodeAssignment& c);
/// Reads the field from the codes unless one is given.
CodeAssignment parse_codes_csv(const std::string& text, FieldPtr field = nullptr);

/// Splits one CSV record (RFC 4180 quoting, no embedded newlines).
std::vector<std::string> split_csv_line(const std::string& line);
std::string csv_field(const std::string& s);

}  // namespace padictree
