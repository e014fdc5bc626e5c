#pragma once

// Ground truth by backward induction, taboo-strategies and taboo-pruning.

#include <array>
#include <optional>
#include <vector>

#include "unravel/core.hpp"

namespace unravel {

struct Solution {
    Player winner = Player::I;
    Strategy strategy;
};

/// Winner of the subgame at every node. Levels are processed bottom-up and
/// each level is split across OpenMP threads.
std::vector<Player> node_winners(const GameTree& t, const LeafSet& a);

/// Recursive single-threaded reference for node_winners.
std::vector<Player> node_winners_serial(const GameTree& t, const LeafSet& a);

/// Strategy for `owner` that picks the least child won by `owner` wherever
/// one exists and the least child otherwise.
Strategy strategy_from_winners(const GameTree& t, const std::vector<Player>& winners, Player owner);

Solution solve(const GameTree& t, const LeafSet& a);
Solution solve_serial(const GameTree& t, const LeafSet& a);

/// Per node: can `player` force every continuation to end taboo for the opponent?
std::vector<char> taboo_winning(const GameTree& t, Player player);

/// Taboo-strategy for `player` in the subtree at p, expressed on t's node ids:
/// the forced move along p above p, the taboo-forcing move below, and the
/// least move everywhere else.
std::optional<Strategy> taboo_strategy(const GameTree& t, const Position& p, Player player);

struct PruneResult {
    /// Set when the root itself is taboo-determined; `pruned` is then empty.
    std::optional<Player> root_determined;
    GameTree pruned;
    std::vector<NodeId> to_original;  // pruned id -> original id
    std::vector<NodeId> to_pruned;    // original id -> pruned id or kNoNode
    /// Positions with a taboo-determined prefix (the removed part).
    std::vector<char> removed;
    /// Per player, per node: taboo-determined for that player.
    std::array<std::vector<char>, 2> taboo_determined;
    /// Per player: one strategy realising every taboo-determination at once.
    std::array<Strategy, 2> witness;

    bool is_taboo_determined(NodeId v, Player p) const {
        return taboo_determined[static_cast<std::size_t>(p)][static_cast<std::size_t>(v)] != 0;
    }
};

PruneResult prune(const GameTree& t);

/// Restricts a payoff set on t to the pruned tree.
LeafSet restrict_to_pruned(const PruneResult& pr, const LeafSet& a);

/// Strategy on the original tree that follows `pruned_strategy` inside the
/// pruned tree and switches to the stored taboo-strategy on first entering a
/// removed position. Throws InvariantViolation if the opponent can enter a
/// position taboo-determined against the owner.
Strategy transfer_from_pruned(const GameTree& t, const PruneResult& pr, const Strategy& pruned_strategy);

}  // namespace unravel
