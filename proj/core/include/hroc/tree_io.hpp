#pragma once

// JSON form of a lamination tree:
//   leaf:  {"F": [[..], ..], "depth": k}
//   split: {"F": .., "depth": k, "lambda": l, "R": {"a": [..], "b": [..], "index": i},
//           "plus": {..}, "minus": {..}}
// lambda is the volume fraction of the minus child.

#include "hroc/lamination_tree.hpp"

#include <string>
#include <string_view>

namespace hroc {

/// indent < 0 produces a compact single line.
std::string tree_to_json(const TreeNode& root, int indent = -1);

/// Throws std::invalid_argument on malformed input.
TreeNode tree_from_json(std::string_view text);

std::string matrix_to_json(const Matrix& m);

}  // namespace hroc
