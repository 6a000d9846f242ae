#pragma once

#include <string>

#include "json.hpp"
#include "padictree/tree.hpp"

namespace padictree {

inline constexpr int kFormatVersion = 1;

/// Newick rooted at the root (or the canonical start vertex). Ends print as
/// `name:inf`; the infinity end is left implicit when it sits at the root,
/// being the segment above it. The root is named "root".
std::string to_newick(const MarkedTree& t);

/// Digraph directed away from the root; ends are plaintext nodes.
std::string to_dot(const MarkedTree& t);

nlohmann::json to_json(const MarkedTree& t);
/// Throws InputError on malformed documents or non-tree edge sets.
MarkedTree tree_from_json(const nlohmann::json& j);

}  // namespace padictree
