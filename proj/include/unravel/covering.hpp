#pragma once

// Coverings of a game tree with taboos: a source tree, a length-preserving
// position map into the target, a strategy map back, and a constructive lift
// witnessing the lifting condition.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "unravel/core.hpp"
#include "unravel/payoff.hpp"
#include "unravel/solver.hpp"

namespace unravel {

using TreePtr = std::shared_ptr<const GameTree>;

/// Maps a strategy on the source tree to one for the same player on the target.
using StrategyMap = std::function<Strategy(const Strategy&)>;

/// For a fixed source strategy: maps each target play consistent with its
/// image to a source play.
using PlayLift = std::function<NodeId(NodeId)>;
using LiftMap = std::function<PlayLift(const Strategy&)>;

struct Covering {
    TreePtr source;
    TreePtr target;
    int level = 0;                     // identity on positions of length <= level
    std::vector<NodeId> position_map;  // source id -> target id
    StrategyMap strategy_map;
    LiftMap lift;

    NodeId project(NodeId source_node) const {
        return position_map[static_cast<std::size_t>(source_node)];
    }
    Strategy map_strategy(const Strategy& s) const { return strategy_map(s); }
};

Covering identity_covering(TreePtr t);

struct CheckResult {
    bool ok = true;
    std::string detail;
    NodeId node = kNoNode;

    explicit operator bool() const noexcept { return ok; }
    static CheckResult pass() { return {}; }
    static CheckResult fail(std::string why, NodeId at = kNoNode) { return {false, std::move(why), at}; }
};

/// Conditions (i)-(iv) of a position map plus the level-k identity, by full scan.
CheckResult check_position_map(const Covering& c);

/// Mutation test of strategy-map locality. Also checks that the image agrees
/// with the source strategy on positions shorter than the covering level.
CheckResult check_strategy_locality(const Covering& c, int trials, std::uint64_t seed);

struct LiftReport {
    NodeId play = kNoNode;
    NodeId lifted = kNoNode;
    bool consistent = false;     // lifted play consistent with the source strategy
    bool projects_into = false;  // its image is a prefix of the play
    bool exact_or_taboo = false; // image equals the play, or lifted play is taboo for the owner

    bool ok() const noexcept { return consistent && projects_into && exact_or_taboo; }
};

/// Lifts one play; `image` must be c.map_strategy(source_strategy).
LiftReport verify_lift(const Covering& c, const Strategy& source_strategy, const Strategy& image, NodeId play);
LiftReport verify_lift(const Covering& c, const Strategy& source_strategy, NodeId play);

/// verify_lift over every play consistent with the image of `source_strategy`.
CheckResult verify_all_lifts(const Covering& c, const Strategy& source_strategy);

/// Full-depth leaves of the source whose projection lies in `a`.
LeafSet pullback(const Covering& c, const LeafSet& a);

/// Generators of the pulled-back closed set, expressed on the source tree.
ClosedSpec pullback(const Covering& c, const ClosedSpec& spec);

/// c1 covers T0 by T1, c2 covers T1 by T2; the result covers T0 by T2.
Covering compose(const Covering& c1, const Covering& c2);

/// Every winning source strategy for the pulled-back game maps to a winning
/// target strategy. Checks the solver's witness plus `samples` random
/// winning strategies.
CheckResult check_liftstrat(const Covering& c, const LeafSet& a, int samples, std::uint64_t seed);

/// Solves the pulled-back game on the source and transfers the strategy.
/// Throws NotUnraveled unless the pullback is d-decided.
Solution solve_via_covering(const Covering& c, const LeafSet& a, int d);

/// Random total strategy; used by the sampling checks.
Strategy random_strategy(const GameTree& t, Player owner, std::uint64_t seed);

/// Random strategy that stays inside the owner's winning region wherever it can.
Strategy random_winning_strategy(const GameTree& t, const std::vector<Player>& winners, Player owner,
                                 std::uint64_t seed);

}  // namespace unravel
