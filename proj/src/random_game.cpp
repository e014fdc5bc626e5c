#include "unravel/random_game.hpp"

#include <algorithm>
#include <numeric>

#include "unravel/errors.hpp"

namespace unravel {

GameTree random_tree(Rng& rng, const RandomGameParams& params) {
    if (params.branch < 1) throw InvalidInput("random_tree: branch must be positive");
    GameTreeBuilder full(params.depth);
    std::vector<NodeId> frontier{full.root()};
    std::vector<MoveLabel> labels(static_cast<std::size_t>(params.branch));
    while (!frontier.empty()) {
        const NodeId v = frontier.back();
        frontier.pop_back();
        if (full.depth(v) == params.depth) continue;
        const int count = rng.between(1, params.branch);
        std::iota(labels.begin(), labels.end(), MoveLabel{0});
        for (std::size_t i = labels.size(); i > 1; --i) std::swap(labels[i - 1], labels[rng.below(i)]);
        std::vector<MoveLabel> pick(labels.begin(), labels.begin() + count);
        std::sort(pick.begin(), pick.end());
        for (MoveLabel a : pick) frontier.push_back(full.add_child(v, a));
    }
    GameTree shape = full.build();

    // Cut a few inner subtrees into taboo terminals.
    std::vector<char> cut(shape.size(), 0);
    std::vector<std::pair<NodeId, Player>> tags;
    const int taboos = params.max_taboos > 0 ? rng.between(0, params.max_taboos) : 0;
    std::vector<NodeId> candidates;
    for (int d = 1; d < params.depth; ++d)
        for (NodeId v : shape.nodes_at_depth(d)) candidates.push_back(v);
    for (int i = 0; i < taboos && !candidates.empty(); ++i) {
        const NodeId v = candidates[rng.below(candidates.size())];
        tags.emplace_back(v, rng.coin() ? Player::I : Player::II);
    }
    for (auto [v, tag] : tags) {
        bool covered = false;
        for (NodeId u = v; u != shape.root(); u = shape.parent(u)) covered = covered || (cut[static_cast<std::size_t>(u)] && u != v);
        if (!covered) cut[static_cast<std::size_t>(v)] = 1;
    }

    GameTreeBuilder b(params.depth);
    std::vector<NodeId> built(shape.size(), kNoNode);
    built[0] = b.root();
    for (std::size_t i = 1; i < shape.size(); ++i) {
        const auto v = static_cast<NodeId>(i);
        const NodeId parent = shape.parent(v);
        if (built[static_cast<std::size_t>(parent)] == kNoNode || cut[static_cast<std::size_t>(parent)]) continue;
        built[i] = b.add_child(built[static_cast<std::size_t>(parent)], shape.label(v));
    }
    for (auto [v, tag] : tags)
        if (cut[static_cast<std::size_t>(v)] && built[static_cast<std::size_t>(v)] != kNoNode)
            b.set_taboo(built[static_cast<std::size_t>(v)], tag);
    return b.build();
}

ClosedSpec random_closed_spec(Rng& rng, const GameTree& t, int max_generators, int min_depth) {
    std::vector<NodeId> candidates;
    for (int d = std::max(1, min_depth); d < t.depth_bound(); ++d)
        for (NodeId v : t.nodes_at_depth(d))
            if (!t.is_terminal(v)) candidates.push_back(v);
    ClosedSpec spec;
    if (candidates.empty() || max_generators <= 0) return spec;
    const int count = rng.between(0, max_generators);
    std::vector<NodeId> chosen;
    for (int i = 0; i < count; ++i) {
        const NodeId v = candidates[rng.below(candidates.size())];
        if (std::find(chosen.begin(), chosen.end(), v) == chosen.end()) chosen.push_back(v);
    }
    std::sort(chosen.begin(), chosen.end());
    for (NodeId v : chosen) spec.generators.push_back(t.position(v));
    return spec;
}

}  // namespace unravel
