#include "doctest.h"

#include "fixtures.hpp"
#include "unravel/base_covering.hpp"
#include "unravel/covering.hpp"
#include "unravel/errors.hpp"

using namespace unravel;

namespace {

TreePtr shared(GameTree t) { return std::make_shared<const GameTree>(std::move(t)); }

NodeId at(const GameTree& t, const Position& p) { return *t.find(p); }

// Identity covering whose strategy map lets I's first move copy I's move at 0/0.
Covering peeking_covering(TreePtr t) {
    Covering c = identity_covering(t);
    c.level = 0;
    c.strategy_map = [t](const Strategy& s) {
        Strategy out = s;
        if (s.owner() == Player::I) {
            const MoveLabel ahead = t->label(s.choice(at(*t, {0, 0})));
            out.set_choice(t->root(), *t->child_with_label(t->root(), ahead));
        }
        return out;
    };
    return c;
}

}  // namespace

TEST_CASE("identity covering passes every check") {
    const TreePtr t = shared(fixtures::ex2());
    const Covering c = identity_covering(t);
    CHECK(c.level == t->depth_bound());
    CHECK(check_position_map(c));
    CHECK(check_strategy_locality(c, 50, 1));
    for (Player p : {Player::I, Player::II})
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const Strategy s = random_strategy(*t, p, seed);
            CHECK(verify_all_lifts(c, s));
            for (NodeId x : plays_consistent(*t, s)) {
                const LiftReport r = verify_lift(c, s, x);
                CHECK(r.lifted == x);
                CHECK(r.ok());
            }
        }
}

TEST_CASE("check_position_map catches a length mismatch") {
    const TreePtr t = shared(fixtures::ex1());
    Covering c = identity_covering(t);
    c.level = 0;
    c.position_map[static_cast<std::size_t>(at(*t, {0, 1}))] = at(*t, {0});
    const CheckResult r = check_position_map(c);
    CHECK_FALSE(r);
    CHECK(r.node != kNoNode);
}

TEST_CASE("check_position_map catches a dropped taboo") {
    const TreePtr t = shared(fixtures::ex2());
    GameTreeBuilder b(4);
    fixtures::complete_binary(b, b.root(), 0, 4);
    Covering c = identity_covering(t);
    c.source = shared(b.build());
    c.level = 0;
    c.position_map.clear();
    for (std::size_t i = 0; i < c.source->size(); ++i) {
        Position p = c.source->position(static_cast<NodeId>(i));
        while (!t->find(p)) p.pop_back();
        c.position_map.push_back(at(*t, p));
    }
    CHECK_FALSE(check_position_map(c));
}

TEST_CASE("check_strategy_locality catches a map that reads ahead") {
    const Covering c = peeking_covering(shared(fixtures::ex1()));
    CHECK(check_position_map(c));
    const CheckResult r = check_strategy_locality(c, 200, 5);
    CHECK_FALSE(r);
    CHECK(r.detail.find("differing") != std::string::npos);
}

TEST_CASE("verify_lift rejects an inconsistent play") {
    const TreePtr t = shared(fixtures::ex1());
    const Covering c = identity_covering(t);
    const Strategy s = fixtures::constant_strategy(*t, Player::I, 0);
    CHECK_THROWS_AS(verify_lift(c, s, at(*t, {1, 0, 0, 0})), InvalidInput);
}

TEST_CASE("pullback") {
    const TreePtr t = shared(fixtures::ex1());
    const Covering id = identity_covering(t);
    const LeafSet a = fixtures::starting_with_zero(*t);
    CHECK(pullback(id, a) == a);
    CHECK(pullback(id, LeafSet(t->size())).empty());
    const BaseCovering base = build_base_covering(t, ClosedSpec{{{1}}}, 0);
    CHECK(pullback(base.covering(), LeafSet(t->size())).empty());
}

TEST_CASE("compose") {
    const TreePtr t = shared(fixtures::ex1());
    const BaseCovering base = build_base_covering(t, ClosedSpec{{{1}}}, 0);
    const Covering& c = base.covering();
    const Covering left = compose(identity_covering(t), c);
    const Covering right = compose(c, identity_covering(c.source));
    for (const Covering* k : {&left, &right}) {
        CHECK(k->level == c.level);
        CHECK(k->position_map == c.position_map);
        for (Player p : {Player::I, Player::II})
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                const Strategy s = random_strategy(*c.source, p, seed);
                CHECK(k->map_strategy(s) == c.map_strategy(s));
                const PlayLift a = k->lift(s);
                const PlayLift b = c.lift(s);
                for (NodeId x : plays_consistent(*t, c.map_strategy(s))) CHECK(a(x) == b(x));
            }
    }
    CHECK_THROWS_AS(compose(c, identity_covering(shared(fixtures::ex2()))), InvalidInput);

    SUBCASE("levels take the minimum") {
        const TreePtr deep = shared(fixtures::complete_binary_tree(8));
        const BaseCovering lower = build_base_covering(deep, ClosedSpec{{{0, 1, 0}}}, 2);
        const BaseCovering upper = build_base_covering(lower.covering().source, ClosedSpec{}, 4);
        CHECK(lower.level() == 2);
        CHECK(upper.level() == 4);
        const Covering both = compose(lower.covering(), upper.covering());
        CHECK(both.level == 2);
        CHECK(check_position_map(both));
        CHECK(check_strategy_locality(both, 20, 3));
    }
}

TEST_CASE("check_liftstrat and solve_via_covering on the identity") {
    const TreePtr t = shared(fixtures::ex1());
    const Covering c = identity_covering(t);
    const LeafSet a = fixtures::starting_with_zero(*t);
    CHECK(check_liftstrat(c, a, 20, 9));
    const Solution s = solve_via_covering(c, a, 2);
    CHECK(s.winner == solve(*t, a).winner);
    CHECK(s.strategy == solve(*t, a).strategy);
    const LeafSet x3 = fixtures::leaves_where(*t, [](const Position& p) { return p[3] == 0; });
    CHECK_THROWS_WITH_AS(solve_via_covering(c, x3, 2), "covering does not unravel A at depth 2", NotUnraveled);
}
