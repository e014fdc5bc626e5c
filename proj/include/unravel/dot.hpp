#pragma once

// Graphviz output. Taboo nodes are boxes tagged with the loser, payoff
// leaves get a double border. Node order is id order, so output is stable.

#include <functional>
#include <string>

#include "unravel/core.hpp"
#include "unravel/covering.hpp"

namespace unravel {

using NodeLabel = std::function<std::string(NodeId)>;

/// Throws ResourceLimit when the tree has more than node_max nodes.
std::string tree_to_dot(const GameTree& t, const LeafSet* payoff, std::size_t node_max);

/// Both trees side by side with the position map as dashed cross-links.
/// `source_label` names source nodes; target nodes show their position.
std::string covering_to_dot(const Covering& c, const LeafSet* payoff, const NodeLabel& source_label,
                            std::size_t node_max);

}  // namespace unravel
