#pragma once

// Finite game trees with taboos.
//
// A tree has an even depth bound D. Leaves at depth D stand for the infinite
// plays of the modelled game; every terminal node above depth D is a finite
// play and carries exactly one taboo tag naming the player who loses it.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace unravel {

enum class Player : std::uint8_t { I = 0, II = 1 };

constexpr Player opponent(Player p) noexcept { return p == Player::I ? Player::II : Player::I; }

/// Player to move at a position of the given length: I at even, II at odd.
constexpr Player mover_at(int length) noexcept { return length % 2 == 0 ? Player::I : Player::II; }

std::string to_string(Player p);
std::ostream& operator<<(std::ostream& os, Player p);

using MoveLabel = std::uint32_t;
using Position = std::vector<MoveLabel>;
using NodeId = std::int32_t;

inline constexpr NodeId kNoNode = -1;

/// "0/1/0"; the root prints as ".".
std::string format_position(const Position& p);

enum class PlayOutcome : std::uint8_t { Infinite, TabooI, TabooII };

std::string to_string(PlayOutcome o);

/// Immutable arena of positions. Node ids are assigned in preorder with
/// siblings ordered by label, so id order is lexicographic order on positions.
class GameTree {
public:
    GameTree() = default;

    int depth_bound() const noexcept { return depth_bound_; }
    std::size_t size() const noexcept { return parent_.size(); }
    bool empty() const noexcept { return parent_.empty(); }
    NodeId root() const noexcept { return 0; }

    NodeId parent(NodeId v) const { return parent_[static_cast<std::size_t>(v)]; }
    MoveLabel label(NodeId v) const { return label_[static_cast<std::size_t>(v)]; }
    int depth(NodeId v) const { return depth_[static_cast<std::size_t>(v)]; }
    std::span<const NodeId> children(NodeId v) const;
    bool is_terminal(NodeId v) const { return children(v).empty(); }

    /// Player for whom the finite play ending at v is taboo, if any.
    std::optional<Player> taboo(NodeId v) const;

    /// Nodes of the given depth in id order.
    std::span<const NodeId> nodes_at_depth(int d) const;

    /// Terminal nodes (finite and full-depth plays) in id order.
    const std::vector<NodeId>& plays() const noexcept { return plays_; }

    /// Depth-D leaves in id order.
    std::vector<NodeId> infinite_plays() const;

    Position position(NodeId v) const;
    std::optional<NodeId> find(const Position& p) const;
    std::optional<NodeId> child_with_label(NodeId v, MoveLabel a) const;

    /// Ancestor of v at depth d (v itself when d == depth(v)).
    NodeId ancestor_at(NodeId v, int d) const;
    /// True iff u is a prefix of (or equal to) v.
    bool is_prefix(NodeId u, NodeId v) const;

    friend bool operator==(const GameTree&, const GameTree&) = default;

private:
    friend class GameTreeBuilder;

    int depth_bound_ = 0;
    std::vector<NodeId> parent_;
    std::vector<MoveLabel> label_;
    std::vector<std::int32_t> depth_;
    std::vector<std::int8_t> taboo_;
    std::vector<std::uint32_t> child_begin_;
    std::vector<NodeId> child_list_;
    std::vector<std::uint32_t> level_begin_;
    std::vector<NodeId> level_list_;
    std::vector<NodeId> plays_;
};

/// Mutable staging area for a GameTree; build() validates every invariant.
class GameTreeBuilder {
public:
    explicit GameTreeBuilder(int depth_bound);

    NodeId root() const noexcept { return 0; }
    NodeId add_child(NodeId parent, MoveLabel label);
    /// Marks the (terminal) node as a finite play lost by `loser`.
    void set_taboo(NodeId node, Player loser);
    /// Adds the whole path, reusing existing prefixes.
    NodeId add_position(const Position& p);

    std::size_t size() const noexcept { return parent_.size(); }
    int depth(NodeId v) const { return depth_[static_cast<std::size_t>(v)]; }

    /// Throws InvalidInput when an invariant fails. When `remap` is given it
    /// receives the builder-id to tree-id mapping.
    GameTree build(std::vector<NodeId>* remap = nullptr) const;

private:
    int depth_bound_;
    std::vector<NodeId> parent_;
    std::vector<MoveLabel> label_;
    std::vector<std::int32_t> depth_;
    std::vector<std::int8_t> taboo_;
    std::vector<std::vector<NodeId>> children_;
};

/// Per-player choice table. choice(v) is a child of v for every non-terminal
/// v of the owner's parity, kNoNode elsewhere. A strategy is tied to the tree
/// it was built for.
class Strategy {
public:
    Strategy() = default;
    Strategy(Player owner, std::size_t tree_size) : owner_(owner), choice_(tree_size, kNoNode) {}

    Player owner() const noexcept { return owner_; }
    std::size_t tree_size() const noexcept { return choice_.size(); }
    NodeId choice(NodeId v) const { return choice_[static_cast<std::size_t>(v)]; }
    void set_choice(NodeId v, NodeId child) { choice_[static_cast<std::size_t>(v)] = child; }

    friend bool operator==(const Strategy&, const Strategy&) = default;

private:
    Player owner_ = Player::I;
    std::vector<NodeId> choice_;
};

/// Lexicographically least move everywhere.
Strategy default_strategy(const GameTree& t, Player owner);

/// Throws InvalidInput unless s is total and well-formed on t.
void validate_strategy(const GameTree& t, const Strategy& s);

/// Set of depth-D plays of one tree, indexed by node id.
class LeafSet {
public:
    LeafSet() = default;
    explicit LeafSet(std::size_t tree_size) : bits_(tree_size, 0) {}

    std::size_t universe() const noexcept { return bits_.size(); }
    std::size_t size() const noexcept { return count_; }
    bool empty() const noexcept { return count_ == 0; }
    bool contains(NodeId v) const { return bits_[static_cast<std::size_t>(v)] != 0; }
    void insert(NodeId v);
    void erase(NodeId v);
    std::vector<NodeId> members() const;

    friend bool operator==(const LeafSet&, const LeafSet&) = default;

private:
    std::vector<std::uint8_t> bits_;
    std::size_t count_ = 0;
};

/// Throws InvalidInput unless every member is a depth-D leaf of t.
void validate_leaf_set(const GameTree& t, const LeafSet& a);

/// All depth-D leaves of t.
LeafSet all_infinite_plays(const GameTree& t);
/// Depth-D leaves of t outside a.
LeafSet complement_within(const GameTree& t, const LeafSet& a);

GameTree subtree_at(const GameTree& t, const Position& p);

PlayOutcome classify_play(const GameTree& t, NodeId x);

bool is_consistent(const GameTree& t, NodeId x, const Strategy& s);

/// Terminal positions consistent with s, in id order.
std::vector<NodeId> plays_consistent(const GameTree& t, const Strategy& s);

Player evaluate_play(const GameTree& t, NodeId x, const LeafSet& a);

bool is_winning_strategy(const GameTree& t, const LeafSet& a, const Strategy& s);

}  // namespace unravel
