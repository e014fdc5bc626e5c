#pragma once

// The worked examples shared by the unit and acceptance suites.
//   EX1: complete binary tree of depth 4, no early terminals.
//   EX2: EX1 with node 0/0 cut into a terminal that is taboo for II.
//   EX3: a single path of length 2, then binary down to depth 4.

#include "unravel/core.hpp"
#include "unravel/payoff.hpp"

namespace fixtures {

using namespace unravel;

inline void complete_binary(GameTreeBuilder& b, NodeId v, int depth, int bound) {
    if (depth == bound) return;
    for (MoveLabel a : {0u, 1u}) complete_binary(b, b.add_child(v, a), depth + 1, bound);
}

inline GameTree complete_binary_tree(int depth) {
    GameTreeBuilder b(depth);
    complete_binary(b, b.root(), 0, depth);
    return b.build();
}

inline GameTree ex1() { return complete_binary_tree(4); }

inline GameTree ex2() {
    GameTreeBuilder b(4);
    for (MoveLabel x : {0u, 1u}) {
        const NodeId n1 = b.add_child(b.root(), x);
        for (MoveLabel y : {0u, 1u}) {
            const NodeId n2 = b.add_child(n1, y);
            if (x == 0 && y == 0) {
                b.set_taboo(n2, Player::II);
                continue;
            }
            complete_binary(b, n2, 2, 4);
        }
    }
    return b.build();
}

inline GameTree ex3() {
    GameTreeBuilder b(4);
    const NodeId n2 = b.add_position({0, 0});
    complete_binary(b, n2, 2, 4);
    return b.build();
}

/// EX3 with 0/0/0 cut into a terminal that is taboo for II.
inline GameTree ex3_with_taboo() {
    GameTreeBuilder b(4);
    const NodeId n2 = b.add_position({0, 0});
    b.set_taboo(b.add_child(n2, 0), Player::II);
    complete_binary(b, b.add_child(n2, 1), 3, 4);
    return b.build();
}

/// No branching at all: one play of depth 4.
inline GameTree single_path() {
    GameTreeBuilder b(4);
    b.add_position({0, 0, 0, 0});
    return b.build();
}

/// Strategy that always plays the move labelled `label` where it exists.
inline Strategy constant_strategy(const GameTree& t, Player owner, MoveLabel label) {
    Strategy s = default_strategy(t, owner);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto v = static_cast<NodeId>(i);
        if (s.choice(v) == kNoNode) continue;
        if (auto c = t.child_with_label(v, label)) s.set_choice(v, *c);
    }
    return s;
}

inline LeafSet leaves_where(const GameTree& t, bool (*pred)(const Position&)) {
    LeafSet s(t.size());
    for (NodeId v : t.nodes_at_depth(t.depth_bound()))
        if (pred(t.position(v))) s.insert(v);
    return s;
}

inline LeafSet starting_with_zero(const GameTree& t) {
    return leaves_where(t, [](const Position& p) { return p[0] == 0; });
}

}  // namespace fixtures
