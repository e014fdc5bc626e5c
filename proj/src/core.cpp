#include "unravel/core.hpp"

#include <algorithm>
#include <ostream>

#include "unravel/errors.hpp"

namespace unravel {

namespace {

constexpr std::int8_t kNoTaboo = -1;

std::size_t idx(NodeId v) { return static_cast<std::size_t>(v); }

}  // namespace

std::string to_string(Player p) { return p == Player::I ? "I" : "II"; }

std::ostream& operator<<(std::ostream& os, Player p) { return os << to_string(p); }

std::string to_string(PlayOutcome o) {
    switch (o) {
        case PlayOutcome::Infinite: return "Infinite";
        case PlayOutcome::TabooI: return "TabooI";
        case PlayOutcome::TabooII: return "TabooII";
    }
    return "?";
}

std::string format_position(const Position& p) {
    if (p.empty()) return ".";
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += '/';
        out += std::to_string(p[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// GameTree

std::span<const NodeId> GameTree::children(NodeId v) const {
    const auto b = child_begin_[idx(v)];
    const auto e = child_begin_[idx(v) + 1];
    return {child_list_.data() + b, e - b};
}

std::optional<Player> GameTree::taboo(NodeId v) const {
    const auto t = taboo_[idx(v)];
    if (t == kNoTaboo) return std::nullopt;
    return static_cast<Player>(t);
}

std::span<const NodeId> GameTree::nodes_at_depth(int d) const {
    if (d < 0 || d > depth_bound_) return {};
    const auto b = level_begin_[static_cast<std::size_t>(d)];
    const auto e = level_begin_[static_cast<std::size_t>(d) + 1];
    return {level_list_.data() + b, e - b};
}

std::vector<NodeId> GameTree::infinite_plays() const {
    auto level = nodes_at_depth(depth_bound_);
    return {level.begin(), level.end()};
}

Position GameTree::position(NodeId v) const {
    Position p(static_cast<std::size_t>(depth(v)));
    for (NodeId u = v; u != root(); u = parent(u)) p[static_cast<std::size_t>(depth(u) - 1)] = label(u);
    return p;
}

std::optional<NodeId> GameTree::child_with_label(NodeId v, MoveLabel a) const {
    auto ch = children(v);
    auto it = std::lower_bound(ch.begin(), ch.end(), a,
                               [this](NodeId c, MoveLabel x) { return label(c) < x; });
    if (it == ch.end() || label(*it) != a) return std::nullopt;
    return *it;
}

std::optional<NodeId> GameTree::find(const Position& p) const {
    if (empty()) return std::nullopt;
    NodeId v = root();
    for (MoveLabel a : p) {
        auto c = child_with_label(v, a);
        if (!c) return std::nullopt;
        v = *c;
    }
    return v;
}

NodeId GameTree::ancestor_at(NodeId v, int d) const {
    while (depth(v) > d) v = parent(v);
    return v;
}

bool GameTree::is_prefix(NodeId u, NodeId v) const {
    return depth(u) <= depth(v) && ancestor_at(v, depth(u)) == u;
}

// ---------------------------------------------------------------------------
// GameTreeBuilder

GameTreeBuilder::GameTreeBuilder(int depth_bound) : depth_bound_(depth_bound) {
    parent_.push_back(kNoNode);
    label_.push_back(0);
    depth_.push_back(0);
    taboo_.push_back(kNoTaboo);
    children_.emplace_back();
}

NodeId GameTreeBuilder::add_child(NodeId parent, MoveLabel label) {
    if (parent < 0 || idx(parent) >= parent_.size()) throw InvalidInput("add_child: unknown parent");
    const auto id = static_cast<NodeId>(parent_.size());
    parent_.push_back(parent);
    label_.push_back(label);
    depth_.push_back(depth_[idx(parent)] + 1);
    taboo_.push_back(kNoTaboo);
    children_.emplace_back();
    children_[idx(parent)].push_back(id);
    return id;
}

void GameTreeBuilder::set_taboo(NodeId node, Player loser) {
    if (node < 0 || idx(node) >= parent_.size()) throw InvalidInput("set_taboo: unknown node");
    taboo_[idx(node)] = static_cast<std::int8_t>(loser);
}

NodeId GameTreeBuilder::add_position(const Position& p) {
    NodeId v = root();
    for (MoveLabel a : p) {
        NodeId next = kNoNode;
        for (NodeId c : children_[idx(v)])
            if (label_[idx(c)] == a) next = c;
        v = next == kNoNode ? add_child(v, a) : next;
    }
    return v;
}

GameTree GameTreeBuilder::build(std::vector<NodeId>* remap) const {
    if (depth_bound_ < 2 || depth_bound_ % 2 != 0)
        throw InvalidInput("depth bound must be even and at least 2");

    const std::size_t n = parent_.size();
    std::vector<std::vector<NodeId>> sorted = children_;
    for (auto& ch : sorted) {
        std::sort(ch.begin(), ch.end(), [this](NodeId a, NodeId b) { return label_[idx(a)] < label_[idx(b)]; });
        for (std::size_t i = 1; i < ch.size(); ++i)
            if (label_[idx(ch[i - 1])] == label_[idx(ch[i])])
                throw InvalidInput("duplicate sibling label " + std::to_string(label_[idx(ch[i])]));
    }

    // Preorder renumbering.
    std::vector<NodeId> order;
    order.reserve(n);
    std::vector<NodeId> stack{0};
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (auto it = sorted[idx(v)].rbegin(); it != sorted[idx(v)].rend(); ++it) stack.push_back(*it);
    }
    std::vector<NodeId> new_id(n, kNoNode);
    for (std::size_t i = 0; i < order.size(); ++i) new_id[idx(order[i])] = static_cast<NodeId>(i);

    GameTree t;
    t.depth_bound_ = depth_bound_;
    t.parent_.resize(n);
    t.label_.resize(n);
    t.depth_.resize(n);
    t.taboo_.resize(n);
    t.child_begin_.assign(n + 1, 0);
    t.child_list_.reserve(n ? n - 1 : 0);

    for (std::size_t i = 0; i < n; ++i) {
        const NodeId old = order[i];
        const auto o = idx(old);
        t.parent_[i] = old == 0 ? kNoNode : new_id[idx(parent_[o])];
        t.label_[i] = label_[o];
        t.depth_[i] = depth_[o];
        t.taboo_[i] = taboo_[o];
        t.child_begin_[i] = static_cast<std::uint32_t>(t.child_list_.size());
        for (NodeId c : sorted[o]) t.child_list_.push_back(new_id[idx(c)]);

        const bool terminal = sorted[o].empty();
        const int d = depth_[o];
        auto where = [&] { return std::string(" at depth ") + std::to_string(d) + " (node " + std::to_string(i) + ")"; };
        if (d > depth_bound_) throw InvalidInput("node deeper than depth bound" + where());
        if (d == depth_bound_ && taboo_[o] != kNoTaboo) throw InvalidInput("taboo at full depth" + where());
        if (d < depth_bound_ && terminal && taboo_[o] == kNoTaboo)
            throw InvalidInput("early terminal without taboo tag" + where());
        if (!terminal && taboo_[o] != kNoTaboo) throw InvalidInput("taboo on non-terminal node" + where());
    }
    t.child_begin_[n] = static_cast<std::uint32_t>(t.child_list_.size());

    t.level_begin_.assign(static_cast<std::size_t>(depth_bound_) + 2, 0);
    for (std::size_t i = 0; i < n; ++i) ++t.level_begin_[static_cast<std::size_t>(t.depth_[i]) + 1];
    for (std::size_t d = 1; d < t.level_begin_.size(); ++d) t.level_begin_[d] += t.level_begin_[d - 1];
    t.level_list_.resize(n);
    {
        auto fill = t.level_begin_;
        for (std::size_t i = 0; i < n; ++i)
            t.level_list_[fill[static_cast<std::size_t>(t.depth_[i])]++] = static_cast<NodeId>(i);
    }
    for (std::size_t i = 0; i < n; ++i)
        if (t.child_begin_[i] == t.child_begin_[i + 1]) t.plays_.push_back(static_cast<NodeId>(i));

    if (remap) *remap = std::move(new_id);
    return t;
}

// ---------------------------------------------------------------------------
// Strategies and leaf sets

Strategy default_strategy(const GameTree& t, Player owner) {
    Strategy s(owner, t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto v = static_cast<NodeId>(i);
        if (mover_at(t.depth(v)) == owner && !t.is_terminal(v)) s.set_choice(v, t.children(v).front());
    }
    return s;
}

void validate_strategy(const GameTree& t, const Strategy& s) {
    if (s.tree_size() != t.size()) throw InvalidInput("strategy belongs to a different tree");
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto v = static_cast<NodeId>(i);
        const bool decides = mover_at(t.depth(v)) == s.owner() && !t.is_terminal(v);
        const NodeId c = s.choice(v);
        if (!decides) {
            if (c != kNoNode) throw InvalidInput("strategy assigns a move at a node it does not own");
            continue;
        }
        if (c == kNoNode) throw InvalidInput("strategy is not total at " + format_position(t.position(v)));
        if (c < 0 || idx(c) >= t.size() || t.parent(c) != v)
            throw InvalidInput("strategy chooses a non-child at " + format_position(t.position(v)));
    }
}

void LeafSet::insert(NodeId v) {
    auto& b = bits_[idx(v)];
    if (!b) {
        b = 1;
        ++count_;
    }
}

void LeafSet::erase(NodeId v) {
    auto& b = bits_[idx(v)];
    if (b) {
        b = 0;
        --count_;
    }
}

std::vector<NodeId> LeafSet::members() const {
    std::vector<NodeId> out;
    out.reserve(count_);
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) out.push_back(static_cast<NodeId>(i));
    return out;
}

void validate_leaf_set(const GameTree& t, const LeafSet& a) {
    if (a.universe() != t.size()) throw InvalidInput("payoff set belongs to a different tree");
    for (NodeId v : a.members())
        if (t.depth(v) != t.depth_bound())
            throw InvalidInput("payoff set contains a finite play " + format_position(t.position(v)));
}

LeafSet all_infinite_plays(const GameTree& t) {
    LeafSet s(t.size());
    for (NodeId v : t.nodes_at_depth(t.depth_bound())) s.insert(v);
    return s;
}

LeafSet complement_within(const GameTree& t, const LeafSet& a) {
    LeafSet s(t.size());
    for (NodeId v : t.nodes_at_depth(t.depth_bound()))
        if (!a.contains(v)) s.insert(v);
    return s;
}

// ---------------------------------------------------------------------------
// Operations

GameTree subtree_at(const GameTree& t, const Position& p) {
    const auto target = t.find(p);
    if (!target) throw InvalidInput("subtree_at: unknown position " + format_position(p));
    GameTreeBuilder b(t.depth_bound());
    // Path to p, then everything below it.
    NodeId built = b.root();
    for (int d = 1; d <= t.depth(*target); ++d) built = b.add_child(built, p[static_cast<std::size_t>(d - 1)]);
    std::vector<std::pair<NodeId, NodeId>> stack{{*target, built}};
    while (!stack.empty()) {
        auto [v, bv] = stack.back();
        stack.pop_back();
        if (auto tag = t.taboo(v)) b.set_taboo(bv, *tag);
        for (NodeId c : t.children(v)) stack.emplace_back(c, b.add_child(bv, t.label(c)));
    }
    return b.build();
}

PlayOutcome classify_play(const GameTree& t, NodeId x) {
    if (x < 0 || idx(x) >= t.size()) throw InvalidInput("classify_play: unknown node");
    if (!t.is_terminal(x)) throw InvalidInput("classify_play: " + format_position(t.position(x)) + " is not terminal");
    if (t.depth(x) == t.depth_bound()) return PlayOutcome::Infinite;
    return *t.taboo(x) == Player::I ? PlayOutcome::TabooI : PlayOutcome::TabooII;
}

bool is_consistent(const GameTree& t, NodeId x, const Strategy& s) {
    for (NodeId v = x; v != t.root(); v = t.parent(v)) {
        const NodeId p = t.parent(v);
        if (mover_at(t.depth(p)) == s.owner() && s.choice(p) != v) return false;
    }
    return true;
}

std::vector<NodeId> plays_consistent(const GameTree& t, const Strategy& s) {
    std::vector<NodeId> out;
    std::vector<NodeId> stack{t.root()};
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        if (t.is_terminal(v)) {
            out.push_back(v);
            continue;
        }
        if (mover_at(t.depth(v)) == s.owner()) {
            stack.push_back(s.choice(v));
        } else {
            auto ch = t.children(v);
            for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
        }
    }
    return out;
}

Player evaluate_play(const GameTree& t, NodeId x, const LeafSet& a) {
    validate_leaf_set(t, a);
    switch (classify_play(t, x)) {
        case PlayOutcome::TabooII: return Player::I;
        case PlayOutcome::TabooI: return Player::II;
        case PlayOutcome::Infinite: return a.contains(x) ? Player::I : Player::II;
    }
    return Player::II;
}

bool is_winning_strategy(const GameTree& t, const LeafSet& a, const Strategy& s) {
    validate_leaf_set(t, a);
    validate_strategy(t, s);
    for (NodeId x : plays_consistent(t, s)) {
        const bool i_wins = t.depth(x) == t.depth_bound() ? a.contains(x) : *t.taboo(x) == Player::II;
        if ((i_wins ? Player::I : Player::II) != s.owner()) return false;
    }
    return true;
}

}  // namespace unravel
