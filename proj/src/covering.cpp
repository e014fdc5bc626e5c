#include "unravel/covering.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "unravel/errors.hpp"
#include "unravel/rng.hpp"

namespace unravel {

namespace {

std::size_t idx(NodeId v) { return static_cast<std::size_t>(v); }

std::string where(const GameTree& t, NodeId v) { return format_position(t.position(v)); }

bool owns(const GameTree& t, NodeId v, Player p) { return !t.is_terminal(v) && mover_at(t.depth(v)) == p; }

// Target node -> source node for positions of length <= level.
std::vector<NodeId> low_level_inverse(const Covering& c) {
    std::vector<NodeId> inv(c.target->size(), kNoNode);
    const int top = std::min(c.level, c.source->depth_bound());
    for (int d = 0; d <= top; ++d)
        for (NodeId v : c.source->nodes_at_depth(d)) inv[idx(c.project(v))] = v;
    return inv;
}

LiftReport check_one_lift(const Covering& c, const Strategy& source_strategy, const Strategy& image,
                          const PlayLift& lifter, NodeId play) {
    const GameTree& t = *c.target;
    const GameTree& s = *c.source;
    if (play < 0 || idx(play) >= t.size() || !t.is_terminal(play))
        throw InvalidInput("verify_lift: input is not a play of the target tree");
    if (!is_consistent(t, play, image))
        throw InvalidInput("verify_lift: play " + where(t, play) + " is not consistent with the mapped strategy");

    LiftReport r;
    r.play = play;
    r.lifted = lifter(play);
    if (r.lifted < 0 || idx(r.lifted) >= s.size()) return r;
    const NodeId image_of_lift = c.project(r.lifted);
    r.consistent = s.is_terminal(r.lifted) && is_consistent(s, r.lifted, source_strategy);
    r.projects_into = t.is_prefix(image_of_lift, play);
    r.exact_or_taboo = image_of_lift == play || s.taboo(r.lifted) == source_strategy.owner();
    return r;
}

}  // namespace

Covering identity_covering(TreePtr t) {
    Covering c;
    c.source = t;
    c.target = t;
    c.level = t->depth_bound();
    c.position_map.resize(t->size());
    std::iota(c.position_map.begin(), c.position_map.end(), NodeId{0});
    c.strategy_map = [](const Strategy& s) { return s; };
    c.lift = [](const Strategy&) -> PlayLift { return [](NodeId x) { return x; }; };
    return c;
}

CheckResult check_position_map(const Covering& c) {
    const GameTree& s = *c.source;
    const GameTree& t = *c.target;
    if (c.position_map.size() != s.size()) return CheckResult::fail("position map does not cover the source tree");
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto v = static_cast<NodeId>(i);
        const NodeId pv = c.project(v);
        if (pv < 0 || idx(pv) >= t.size()) return CheckResult::fail("position map leaves the target tree", v);
        if (t.depth(pv) != s.depth(v))
            return CheckResult::fail("length not preserved at " + where(s, v), v);
        if (v == s.root() ? pv != t.root() : c.project(s.parent(v)) != t.parent(pv))
            return CheckResult::fail("prefix order not preserved at " + where(s, v), v);
        if (auto tag = t.taboo(pv); tag && s.taboo(v) != tag)
            return CheckResult::fail("image of " + where(s, v) + " is taboo for " + to_string(*tag) +
                                         " but the position is not",
                                     v);
    }

    // Identity on the first `level` levels.
    const int top = std::min(c.level, s.depth_bound());
    std::vector<char> hit(t.size(), 0);
    for (int d = 0; d <= top; ++d) {
        for (NodeId v : s.nodes_at_depth(d)) {
            const NodeId pv = c.project(v);
            if ((d > 0 && s.label(v) != t.label(pv)) || s.taboo(v) != t.taboo(pv) ||
                s.is_terminal(v) != t.is_terminal(pv))
                return CheckResult::fail("not the identity below level " + std::to_string(c.level) + " at " +
                                             where(s, v),
                                         v);
            if (hit[idx(pv)]++) return CheckResult::fail("two positions map to " + where(t, pv), v);
        }
        for (NodeId w : t.nodes_at_depth(d))
            if (!hit[idx(w)])
                return CheckResult::fail("target position " + where(t, w) + " missing below level " +
                                         std::to_string(c.level));
    }
    return CheckResult::pass();
}

Strategy random_strategy(const GameTree& t, Player owner, std::uint64_t seed) {
    Rng rng(seed);
    Strategy s(owner, t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto v = static_cast<NodeId>(i);
        if (!owns(t, v, owner)) continue;
        auto ch = t.children(v);
        s.set_choice(v, ch[rng.below(ch.size())]);
    }
    return s;
}

Strategy random_winning_strategy(const GameTree& t, const std::vector<Player>& winners, Player owner,
                                 std::uint64_t seed) {
    Rng rng(seed);
    Strategy s(owner, t.size());
    std::vector<NodeId> good;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto v = static_cast<NodeId>(i);
        if (!owns(t, v, owner)) continue;
        auto ch = t.children(v);
        good.clear();
        for (NodeId x : ch)
            if (winners[idx(x)] == owner) good.push_back(x);
        s.set_choice(v, good.empty() ? ch[rng.below(ch.size())] : good[rng.below(good.size())]);
    }
    return s;
}

CheckResult check_strategy_locality(const Covering& c, int trials, std::uint64_t seed) {
    const GameTree& s = *c.source;
    const GameTree& t = *c.target;
    const auto inverse = low_level_inverse(c);
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
        const Player owner = rng.coin() ? Player::I : Player::II;
        const Strategy first = random_strategy(s, owner, rng.next());
        const int cut = rng.between(0, s.depth_bound());

        Strategy second = first;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const auto v = static_cast<NodeId>(i);
            if (!owns(s, v, owner) || s.depth(v) < cut || !rng.coin()) continue;
            auto ch = s.children(v);
            second.set_choice(v, ch[rng.below(ch.size())]);
        }

        const Strategy image_first = c.map_strategy(first);
        const Strategy image_second = c.map_strategy(second);
        if (image_first.owner() != owner || image_second.owner() != owner)
            return CheckResult::fail("strategy map changed the owner");
        validate_strategy(t, image_first);
        validate_strategy(t, image_second);

        for (std::size_t i = 0; i < t.size(); ++i) {
            const auto v = static_cast<NodeId>(i);
            if (!owns(t, v, owner)) continue;
            if (t.depth(v) < cut && image_first.choice(v) != image_second.choice(v)) {
                std::ostringstream why;
                why << "trial " << trial << ": strategies agreeing below length " << cut
                    << " map to strategies differing at " << where(t, v);
                return CheckResult::fail(why.str(), v);
            }
            if (t.depth(v) < c.level) {
                const NodeId sv = inverse[i];
                if (sv == kNoNode || c.project(first.choice(sv)) != image_first.choice(v))
                    return CheckResult::fail("strategy map is not the identity below level " +
                                                 std::to_string(c.level) + " at " + where(t, v),
                                             v);
            }
        }
    }
    return CheckResult::pass();
}

LiftReport verify_lift(const Covering& c, const Strategy& source_strategy, const Strategy& image, NodeId play) {
    return check_one_lift(c, source_strategy, image, c.lift(source_strategy), play);
}

LiftReport verify_lift(const Covering& c, const Strategy& source_strategy, NodeId play) {
    return verify_lift(c, source_strategy, c.map_strategy(source_strategy), play);
}

CheckResult verify_all_lifts(const Covering& c, const Strategy& source_strategy) {
    const Strategy image = c.map_strategy(source_strategy);
    const PlayLift lifter = c.lift(source_strategy);
    for (NodeId x : plays_consistent(*c.target, image)) {
        const LiftReport r = check_one_lift(c, source_strategy, image, lifter, x);
        if (!r.ok()) {
            std::ostringstream why;
            why << "lift of " << where(*c.target, x) << " for " << to_string(source_strategy.owner()) << " failed:";
            if (!r.consistent) why << " not a consistent play;";
            if (!r.projects_into) why << " image not a prefix;";
            if (!r.exact_or_taboo) why << " neither exact nor taboo for the owner;";
            return CheckResult::fail(why.str(), x);
        }
    }
    return CheckResult::pass();
}

LeafSet pullback(const Covering& c, const LeafSet& a) {
    validate_leaf_set(*c.target, a);
    const GameTree& s = *c.source;
    LeafSet out(s.size());
    for (NodeId v : s.nodes_at_depth(s.depth_bound()))
        if (a.contains(c.project(v))) out.insert(v);
    return out;
}

ClosedSpec pullback(const Covering& c, const ClosedSpec& spec) {
    validate_closed_spec(*c.target, spec);
    std::vector<char> generator(c.target->size(), 0);
    for (const auto& g : spec.generators) generator[idx(*c.target->find(g))] = 1;
    ClosedSpec out;
    const GameTree& s = *c.source;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto v = static_cast<NodeId>(i);
        // Terminal preimages carry no full-depth leaf, so dropping them keeps the set.
        if (generator[idx(c.project(v))] && !s.is_terminal(v)) out.generators.push_back(s.position(v));
    }
    return out;
}

Covering compose(const Covering& c1, const Covering& c2) {
    if (c2.target != c1.source && !(*c2.target == *c1.source))
        throw InvalidInput("compose: the second covering does not cover the first one's source");
    Covering out;
    out.source = c2.source;
    out.target = c1.target;
    out.level = std::min(c1.level, c2.level);
    out.position_map.resize(c2.position_map.size());
    for (std::size_t i = 0; i < c2.position_map.size(); ++i)
        out.position_map[i] = c1.project(c2.project(static_cast<NodeId>(i)));
    auto phi1 = c1.strategy_map;
    auto phi2 = c2.strategy_map;
    out.strategy_map = [phi1, phi2](const Strategy& s) { return phi1(phi2(s)); };
    auto lift1 = c1.lift;
    auto lift2 = c2.lift;
    out.lift = [phi2, lift1, lift2](const Strategy& s) -> PlayLift {
        PlayLift outer = lift1(phi2(s));
        PlayLift inner = lift2(s);
        return [outer, inner](NodeId x) { return inner(outer(x)); };
    };
    return out;
}

CheckResult check_liftstrat(const Covering& c, const LeafSet& a, int samples, std::uint64_t seed) {
    const GameTree& s = *c.source;
    const GameTree& t = *c.target;
    const LeafSet lifted_payoff = pullback(c, a);
    const auto winners = node_winners(s, lifted_payoff);
    const Player w = winners[idx(s.root())];

    auto check = [&](const Strategy& sigma, const std::string& label) -> CheckResult {
        if (!is_winning_strategy(s, lifted_payoff, sigma))
            throw InvariantViolation("check_liftstrat: sampled " + label + " is not winning on the source");
        const Strategy image = c.map_strategy(sigma);
        for (NodeId x : plays_consistent(t, image)) {
            const Player got = evaluate_play(t, x, a);
            if (got != w)
                return CheckResult::fail(label + " for " + to_string(w) + " maps to a strategy losing the play " +
                                             where(t, x),
                                         x);
        }
        return CheckResult::pass();
    };

    if (auto r = check(strategy_from_winners(s, winners, w), "solver witness"); !r) return r;
    for (int i = 0; i < samples; ++i) {
        const Strategy sigma = random_winning_strategy(s, winners, w, derive_seed(seed, static_cast<std::uint64_t>(i)));
        if (auto r = check(sigma, "sample " + std::to_string(i)); !r) return r;
    }
    return CheckResult::pass();
}

Solution solve_via_covering(const Covering& c, const LeafSet& a, int d) {
    const LeafSet lifted_payoff = pullback(c, a);
    if (!is_d_decided(*c.source, lifted_payoff, d))
        throw NotUnraveled("covering does not unravel A at depth " + std::to_string(d));
    const Solution upstairs = solve(*c.source, lifted_payoff);
    Solution out{upstairs.winner, c.map_strategy(upstairs.strategy)};
    if (out.strategy.owner() != out.winner || !is_winning_strategy(*c.target, a, out.strategy))
        throw InvariantViolation("transferred strategy for " + to_string(out.winner) + " is not winning");
    return out;
}

}  // namespace unravel
