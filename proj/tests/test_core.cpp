#include "doctest.h"

#include "fixtures.hpp"
#include "oracles.hpp"
#include "unravel/errors.hpp"
#include "unravel/covering.hpp"
#include "unravel/random_game.hpp"

using namespace unravel;
using fixtures::constant_strategy;

namespace {

std::vector<Position> positions(const GameTree& t, const std::vector<NodeId>& ids) {
    std::vector<Position> out;
    for (NodeId v : ids) out.push_back(t.position(v));
    return out;
}

NodeId at(const GameTree& t, const Position& p) { return *t.find(p); }

}  // namespace

TEST_CASE("worked examples have the expected shape") {
    CHECK(fixtures::ex1().size() == 31);
    CHECK(fixtures::ex2().size() == 25);
    CHECK(fixtures::ex3().size() == 9);
    CHECK(fixtures::ex1().plays().size() == 16);
    const GameTree t = fixtures::ex2();
    CHECK(t.taboo(at(t, {0, 0})) == Player::II);
}

TEST_CASE("node ids follow lexicographic order") {
    const GameTree t = fixtures::ex1();
    for (std::size_t i = 1; i < t.size(); ++i)
        CHECK(t.position(static_cast<NodeId>(i - 1)) < t.position(static_cast<NodeId>(i)));
}

TEST_CASE("builder rejects broken trees") {
    SUBCASE("odd depth bound") { CHECK_THROWS_AS(GameTreeBuilder(3).build(), InvalidInput); }
    SUBCASE("taboo at full depth") {
        GameTreeBuilder b(2);
        b.set_taboo(b.add_position({0, 0}), Player::I);
        CHECK_THROWS_WITH_AS(b.build(), doctest::Contains("taboo at full depth"), InvalidInput);
    }
    SUBCASE("untagged early terminal") {
        GameTreeBuilder b(4);
        b.add_position({0, 0});
        CHECK_THROWS_AS(b.build(), InvalidInput);
    }
    SUBCASE("taboo on an inner node") {
        GameTreeBuilder b(2);
        const NodeId v = b.add_position({0});
        b.add_child(v, 0);
        b.set_taboo(v, Player::II);
        CHECK_THROWS_AS(b.build(), InvalidInput);
    }
    SUBCASE("duplicate sibling labels") {
        GameTreeBuilder b(2);
        b.add_child(b.add_child(b.root(), 1), 0);
        b.add_child(b.add_child(b.root(), 1), 0);
        CHECK_THROWS_AS(b.build(), InvalidInput);
    }
    SUBCASE("too deep") {
        GameTreeBuilder b(2);
        b.add_position({0, 0, 0});
        CHECK_THROWS_AS(b.build(), InvalidInput);
    }
}

TEST_CASE("subtree_at") {
    const GameTree ex1 = fixtures::ex1();
    CHECK(subtree_at(ex1, {}) == ex1);

    const GameTree right = subtree_at(ex1, {1});
    CHECK(right.children(right.root()).size() == 1);
    CHECK(right.size() == 1 + 15);
    CHECK(right.find({0}) == std::nullopt);

    // Set comprehension oracle: positions comparable with 0/0.
    const GameTree ex2 = fixtures::ex2();
    const GameTree sub = subtree_at(ex2, {0, 0});
    std::vector<Position> expected;
    for (const auto& p : oracle::explicit_game(ex2).positions)
        if (oracle::is_prefix(p, {0, 0}) || oracle::is_prefix({0, 0}, p)) expected.push_back(p);
    CHECK(oracle::explicit_game(sub).positions == expected);
    CHECK(expected == std::vector<Position>{{}, {0}, {0, 0}});
    CHECK(sub.taboo(at(sub, {0, 0})) == Player::II);

    CHECK_THROWS_AS(subtree_at(ex1, {2}), InvalidInput);
}

TEST_CASE("classify_play") {
    const GameTree ex1 = fixtures::ex1();
    for (NodeId v : ex1.nodes_at_depth(4)) CHECK(classify_play(ex1, v) == PlayOutcome::Infinite);
    const GameTree ex2 = fixtures::ex2();
    CHECK(classify_play(ex2, at(ex2, {0, 0})) == PlayOutcome::TabooII);
    CHECK(classify_play(ex2, at(ex2, {1, 1, 0, 0})) == PlayOutcome::Infinite);
    CHECK_THROWS_AS(classify_play(ex2, at(ex2, {1})), InvalidInput);
}

TEST_CASE("is_consistent") {
    const GameTree t = fixtures::ex1();
    const Strategy zero = constant_strategy(t, Player::I, 0);
    CHECK(is_consistent(t, t.root(), zero));
    CHECK(is_consistent(t, t.root(), constant_strategy(t, Player::II, 1)));
    CHECK(is_consistent(t, at(t, {0, 1, 0, 1}), zero));
    CHECK_FALSE(is_consistent(t, at(t, {1, 0, 0, 0}), zero));
}

TEST_CASE("plays_consistent matches the filtering oracle") {
    SUBCASE("no branching") {
        const GameTree t = fixtures::single_path();
        for (Player p : {Player::I, Player::II})
            CHECK(positions(t, plays_consistent(t, default_strategy(t, p))) == std::vector<Position>{{0, 0, 0, 0}});
    }
    SUBCASE("EX1, I always plays 0") {
        const GameTree t = fixtures::ex1();
        const Strategy s = constant_strategy(t, Player::I, 0);
        const auto got = positions(t, plays_consistent(t, s));
        CHECK(got == oracle::consistent_plays(oracle::explicit_game(t), Player::I, oracle::choice_map(t, s)));
        CHECK(got == std::vector<Position>{{0, 0, 0, 0}, {0, 0, 0, 1}, {0, 1, 0, 0}, {0, 1, 0, 1}});
    }
    SUBCASE("EX2, II always plays 1") {
        const GameTree t = fixtures::ex2();
        const Strategy s = constant_strategy(t, Player::II, 1);
        const auto got = positions(t, plays_consistent(t, s));
        CHECK(got == oracle::consistent_plays(oracle::explicit_game(t), Player::II, oracle::choice_map(t, s)));
        CHECK(got == std::vector<Position>{{0, 1, 0, 1}, {0, 1, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 1}});
    }
    SUBCASE("EX3 branches after the path") {
        const GameTree t = fixtures::ex3();
        const Strategy s = constant_strategy(t, Player::I, 0);
        CHECK(positions(t, plays_consistent(t, s)) == std::vector<Position>{{0, 0, 0, 0}, {0, 0, 0, 1}});
    }
}

TEST_CASE("evaluate_play") {
    const GameTree t = fixtures::ex2();
    const LeafSet none(t.size());
    CHECK(evaluate_play(t, at(t, {0, 0}), none) == Player::I);
    CHECK(evaluate_play(t, at(t, {1, 0, 1, 1}), none) == Player::II);
    LeafSet one(t.size());
    one.insert(at(t, {1, 0, 1, 1}));
    CHECK(evaluate_play(t, at(t, {1, 0, 1, 1}), one) == Player::I);

    LeafSet bad(t.size());
    bad.insert(at(t, {0, 0}));
    CHECK_THROWS_AS(evaluate_play(t, at(t, {1, 0, 1, 1}), bad), InvalidInput);
}

TEST_CASE("is_winning_strategy") {
    const GameTree ex1 = fixtures::ex1();
    const LeafSet a = fixtures::starting_with_zero(ex1);
    CHECK(is_winning_strategy(ex1, a, constant_strategy(ex1, Player::I, 0)));
    CHECK_FALSE(is_winning_strategy(ex1, a, constant_strategy(ex1, Player::I, 1)));
    const GameTree ex2 = fixtures::ex2();
    CHECK(is_winning_strategy(ex2, LeafSet(ex2.size()), constant_strategy(ex2, Player::II, 1)));
}

TEST_CASE("random trees: partition, prefix closure, non-empty consistent plays") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        const GameTree t = random_tree(rng, {2 + 2 * static_cast<int>(seed % 3), 3, 3, 0});
        const auto g = oracle::explicit_game(t);
        for (const auto& p : g.positions)
            for (std::size_t len = 0; len < p.size(); ++len)
                REQUIRE(g.index.count(Position(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(len))));
        for (NodeId x : t.plays()) {
            const bool full = t.depth(x) == t.depth_bound();
            const bool tagged = t.taboo(x).has_value();
            CHECK(full != tagged);
        }
        for (Player p : {Player::I, Player::II})
            CHECK_FALSE(plays_consistent(t, random_strategy(t, p, seed)).empty());
    }
}
