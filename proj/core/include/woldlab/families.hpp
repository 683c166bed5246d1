#pragma once

#include <string>
#include <string_view>

#include "woldlab/tree.hpp"
#include "woldlab/weights.hpp"

namespace woldlab {

/// Builds a tree from "zpath", "tkinf:k=3" (or "tkinf:3"), "tqb", or
/// "file:<path>" (adjacency format).
TreePtr make_tree(std::string_view spec);

/// Builds weights from "constant:c=1" (or "constant:1"), "ex52",
/// "prop51:a=<rule>,b=<rule>", "tkinf-isometric:k=3", or "file:<path>" (CSV).
/// Families that only make sense on one tree check the kernel.
WeightsPtr make_weights(std::string_view spec, const TreePtr& kernel);

/// Parses "vertex,weight" CSV. Pair-encoded vertices must be quoted
/// ("0,1",0.5); a "*" row sets the default weight.
WeightsPtr parse_weight_csv(std::string_view text, const TreeKernel& kernel);

}  // namespace woldlab
