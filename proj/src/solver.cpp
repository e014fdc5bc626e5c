#include "unravel/solver.hpp"

#include <string>

#include "unravel/errors.hpp"

namespace unravel {

namespace {

std::size_t idx(NodeId v) { return static_cast<std::size_t>(v); }

Player leaf_winner(const GameTree& t, NodeId v, const LeafSet& a) {
    if (t.depth(v) == t.depth_bound()) return a.contains(v) ? Player::I : Player::II;
    return opponent(*t.taboo(v));
}

Player inner_winner(const GameTree& t, NodeId v, const std::vector<Player>& w) {
    const Player mover = mover_at(t.depth(v));
    for (NodeId c : t.children(v))
        if (w[idx(c)] == mover) return mover;
    return opponent(mover);
}

Player winners_rec(const GameTree& t, NodeId v, const LeafSet& a, std::vector<Player>& w) {
    if (t.is_terminal(v)) return w[idx(v)] = leaf_winner(t, v, a);
    for (NodeId c : t.children(v)) winners_rec(t, c, a, w);
    return w[idx(v)] = inner_winner(t, v, w);
}

}  // namespace

std::vector<Player> node_winners(const GameTree& t, const LeafSet& a) {
    validate_leaf_set(t, a);
    std::vector<Player> w(t.size(), Player::I);
    for (int d = t.depth_bound(); d >= 0; --d) {
        const auto level = t.nodes_at_depth(d);
        const auto n = static_cast<std::ptrdiff_t>(level.size());
#pragma omp parallel for schedule(static) if (n > 2048)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const NodeId v = level[static_cast<std::size_t>(i)];
            w[idx(v)] = t.is_terminal(v) ? leaf_winner(t, v, a) : inner_winner(t, v, w);
        }
    }
    return w;
}

std::vector<Player> node_winners_serial(const GameTree& t, const LeafSet& a) {
    validate_leaf_set(t, a);
    std::vector<Player> w(t.size(), Player::I);
    winners_rec(t, t.root(), a, w);
    return w;
}

Strategy strategy_from_winners(const GameTree& t, const std::vector<Player>& winners, Player owner) {
    Strategy s(owner, t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto v = static_cast<NodeId>(i);
        if (t.is_terminal(v) || mover_at(t.depth(v)) != owner) continue;
        NodeId pick = t.children(v).front();
        for (NodeId c : t.children(v))
            if (winners[idx(c)] == owner) {
                pick = c;
                break;
            }
        s.set_choice(v, pick);
    }
    return s;
}

Solution solve(const GameTree& t, const LeafSet& a) {
    const auto w = node_winners(t, a);
    const Player winner = w[idx(t.root())];
    return {winner, strategy_from_winners(t, w, winner)};
}

Solution solve_serial(const GameTree& t, const LeafSet& a) {
    const auto w = node_winners_serial(t, a);
    const Player winner = w[idx(t.root())];
    return {winner, strategy_from_winners(t, w, winner)};
}

std::vector<char> taboo_winning(const GameTree& t, Player player) {
    std::vector<char> win(t.size(), 0);
    for (std::size_t i = t.size(); i-- > 0;) {
        const auto v = static_cast<NodeId>(i);
        if (t.is_terminal(v)) {
            win[i] = t.taboo(v) == opponent(player);
            continue;
        }
        const bool mine = mover_at(t.depth(v)) == player;
        bool any = false;
        bool all = true;
        for (NodeId c : t.children(v)) {
            any = any || win[idx(c)];
            all = all && win[idx(c)];
        }
        win[i] = mine ? any : all;
    }
    return win;
}

namespace {

Strategy taboo_witness(const GameTree& t, const std::vector<char>& win, Player player) {
    Strategy s(player, t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto v = static_cast<NodeId>(i);
        if (t.is_terminal(v) || mover_at(t.depth(v)) != player) continue;
        NodeId pick = t.children(v).front();
        for (NodeId c : t.children(v))
            if (win[idx(c)]) {
                pick = c;
                break;
            }
        s.set_choice(v, pick);
    }
    return s;
}

}  // namespace

std::optional<Strategy> taboo_strategy(const GameTree& t, const Position& p, Player player) {
    const auto at = t.find(p);
    if (!at) throw InvalidInput("taboo_strategy: unknown position " + format_position(p));
    const auto win = taboo_winning(t, player);
    if (!win[idx(*at)]) return std::nullopt;
    Strategy s = taboo_witness(t, win, player);
    // Above p the subtree T_p has a single continuation.
    for (NodeId v = *at; v != t.root(); v = t.parent(v))
        if (mover_at(t.depth(t.parent(v))) == player) s.set_choice(t.parent(v), v);
    return s;
}

PruneResult prune(const GameTree& t) {
    PruneResult pr;
    for (Player p : {Player::I, Player::II}) {
        auto& det = pr.taboo_determined[static_cast<std::size_t>(p)];
        det = taboo_winning(t, p);
        pr.witness[static_cast<std::size_t>(p)] = taboo_witness(t, det, p);
    }
    for (std::size_t i = 0; i < t.size(); ++i)
        if (pr.taboo_determined[0][i] && pr.taboo_determined[1][i])
            throw InvariantViolation("position taboo-determined for both players: " +
                                     format_position(t.position(static_cast<NodeId>(i))));

    pr.removed.assign(t.size(), 0);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto v = static_cast<NodeId>(i);
        const bool here = pr.taboo_determined[0][i] || pr.taboo_determined[1][i];
        pr.removed[i] = here || (v != t.root() && pr.removed[idx(t.parent(v))]);
    }
    pr.to_pruned.assign(t.size(), kNoNode);
    if (pr.removed[idx(t.root())]) {
        pr.root_determined = pr.taboo_determined[0][idx(t.root())] ? Player::I : Player::II;
        return pr;
    }

    GameTreeBuilder b(t.depth_bound());
    std::vector<NodeId> built(t.size(), kNoNode);
    built[idx(t.root())] = b.root();
    std::vector<NodeId> back{t.root()};
    for (std::size_t i = 1; i < t.size(); ++i) {
        const auto v = static_cast<NodeId>(i);
        if (pr.removed[i]) continue;
        built[i] = b.add_child(built[idx(t.parent(v))], t.label(v));
        back.push_back(v);
    }
    std::vector<NodeId> remap;
    try {
        pr.pruned = b.build(&remap);
    } catch (const InvalidInput& e) {
        throw InvariantViolation(std::string("pruned tree is not a pruned game tree: ") + e.what());
    }
    pr.to_original.assign(pr.pruned.size(), kNoNode);
    for (std::size_t bi = 0; bi < back.size(); ++bi) {
        const NodeId pid = remap[bi];
        pr.to_original[idx(pid)] = back[bi];
        pr.to_pruned[idx(back[bi])] = pid;
    }
    for (NodeId v : pr.pruned.plays())
        if (pr.pruned.depth(v) != pr.pruned.depth_bound())
            throw InvariantViolation("pruned tree has an early terminal");
    return pr;
}

LeafSet restrict_to_pruned(const PruneResult& pr, const LeafSet& a) {
    LeafSet out(pr.pruned.size());
    for (NodeId v : a.members())
        if (pr.to_pruned[idx(v)] != kNoNode) out.insert(pr.to_pruned[idx(v)]);
    return out;
}

Strategy transfer_from_pruned(const GameTree& t, const PruneResult& pr, const Strategy& pruned_strategy) {
    if (pr.root_determined) throw InvalidInput("transfer_from_pruned: root is taboo-determined, nothing to transfer");
    validate_strategy(pr.pruned, pruned_strategy);
    const Player owner = pruned_strategy.owner();
    const Player other = opponent(owner);
    const auto& witness = pr.witness[static_cast<std::size_t>(owner)];

    Strategy s = default_strategy(t, owner);
    // entry[v]: the first removed position on the path to v, or kNoNode.
    std::vector<NodeId> entry(t.size(), kNoNode);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto v = static_cast<NodeId>(i);
        const NodeId up = v == t.root() ? kNoNode : entry[idx(t.parent(v))];
        entry[i] = up != kNoNode ? up : (pr.removed[i] ? v : kNoNode);
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto v = static_cast<NodeId>(i);
        if (t.is_terminal(v) || mover_at(t.depth(v)) != owner) continue;
        const NodeId q = entry[i];
        if (q == kNoNode) {
            const NodeId c = pruned_strategy.choice(pr.to_pruned[i]);
            s.set_choice(v, pr.to_original[idx(c)]);
        } else if (pr.is_taboo_determined(q, owner) && pr.is_taboo_determined(v, owner)) {
            s.set_choice(v, witness.choice(v));
        }
    }

    // Along consistent positions the opponent must never enter a position
    // that is taboo-determined against the owner.
    std::vector<NodeId> stack{t.root()};
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        if (pr.removed[idx(v)]) {
            if (pr.is_taboo_determined(v, other))
                throw InvariantViolation("transfer: opponent entered " + format_position(t.position(v)) +
                                         ", which is taboo-determined against " + to_string(owner));
            continue;
        }
        if (t.is_terminal(v)) continue;
        if (mover_at(t.depth(v)) == owner)
            stack.push_back(s.choice(v));
        else
            for (NodeId c : t.children(v)) stack.push_back(c);
    }
    return s;
}

}  // namespace unravel
