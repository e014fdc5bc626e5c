#pragma once

// The closed-set unraveling. At a level-k position p and a move a for I, the
// unraveled tree lets I play a decorated move (a, X) with X a subset of the
// Z-set of (p, a): the minimal non-terminal extensions of p^a below which I
// can no longer reach the payoff. II then either accepts (play continues as
// in the original tree until a Z position ends it) or challenges one r in X
// (play continues inside the subtree at r).

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "unravel/core.hpp"
#include "unravel/covering.hpp"
#include "unravel/payoff.hpp"

namespace unravel {

struct UnravelLimits {
    std::size_t z_max = 10;
    std::size_t node_max = 200000;

    /// Defaults, with node_max overridden by UNRAVEL_NODE_MAX when set.
    static UnravelLimits from_environment();
};

/// Z-set of the level-(k+1) node `anchor` in lexicographic order.
std::vector<NodeId> compute_Z(const GameTree& t, const LeafSet& a, NodeId anchor);
/// Same, addressed by position: the anchor is p^a.
std::vector<Position> compute_Z(const GameTree& t, const LeafSet& a, const Position& p, MoveLabel move);

enum class BranchKind : std::uint8_t { Copied, Decorated, Accept, Challenge };

namespace detail {
struct BaseData;
}

class BaseCovering {
public:
    /// One level-(k+1) node of the original tree and what hangs off it.
    struct Branches {
        NodeId decorated = kNoNode;    // the (a, X) node
        std::vector<NodeId> accept;    // accept child per original child of the anchor
        std::vector<NodeId> challenge; // challenge child per Z index, kNoNode when not in X
    };
    struct Anchor {
        NodeId node = kNoNode;          // p^a in the original tree
        std::vector<NodeId> z;          // original ids, lexicographic
        std::vector<Branches> by_subset; // indexed by subset bitmask over z
    };

    const Covering& covering() const noexcept { return covering_; }
    int level() const noexcept;
    const GameTree& original() const noexcept { return *covering_.target; }
    const GameTree& unraveled() const noexcept { return *covering_.source; }
    const ClosedSpec& spec() const noexcept;
    /// Realization of spec() on the original tree.
    const LeafSet& payoff() const noexcept;

    const std::vector<Anchor>& anchors() const noexcept;
    BranchKind kind(NodeId unraveled_node) const;
    /// Index into anchors(), or -1 for copied nodes.
    int anchor_index(NodeId unraveled_node) const;
    std::uint32_t subset(NodeId unraveled_node) const;
    /// Challenged Z index for nodes in a challenge branch, else -1.
    int challenged(NodeId unraveled_node) const;

    /// Human-readable move into the node: "(1,{1/0})", "accept 0", "challenge 1/0".
    std::string move_label(NodeId unraveled_node) const;

    /// Full-depth plays in which II accepted.
    LeafSet accept_branch_plays() const;

private:
    friend BaseCovering build_base_covering(TreePtr, const ClosedSpec&, int, const UnravelLimits&);

    std::shared_ptr<const detail::BaseData> data_;
    Covering covering_;
};

/// Builds the unraveling of the closed set `spec` that is the identity up to
/// level k (odd k is rounded up).
BaseCovering build_base_covering(TreePtr t, const ClosedSpec& spec, int k,
                                 const UnravelLimits& limits = UnravelLimits::from_environment());
BaseCovering build_base_covering(const GameTree& t, const ClosedSpec& spec, int k,
                                 const UnravelLimits& limits = UnravelLimits::from_environment());

}  // namespace unravel
