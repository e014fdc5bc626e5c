#include "doctest.h"

#include "fixtures.hpp"
#include "oracles.hpp"
#include "unravel/covering.hpp"
#include "unravel/errors.hpp"
#include "unravel/random_game.hpp"
#include "unravel/solver.hpp"

using namespace unravel;

namespace {

NodeId at(const GameTree& t, const Position& p) { return *t.find(p); }

// I can steer 0/0 into a taboo for II, but 0/0 hangs off a choice of II's.
GameTree deviation_tree() {
    GameTreeBuilder b(4);
    b.set_taboo(b.add_position({0, 0, 0}), Player::II);
    b.add_position({0, 0, 1, 0});
    b.add_position({0, 1, 0, 0});
    b.add_position({1, 0, 0, 0});
    return b.build();
}

}  // namespace

TEST_CASE("solve worked examples") {
    const GameTree ex1 = fixtures::ex1();
    const Solution s1 = solve(ex1, fixtures::starting_with_zero(ex1));
    CHECK(s1.winner == Player::I);
    CHECK(ex1.label(s1.strategy.choice(ex1.root())) == 0);
    CHECK(is_winning_strategy(ex1, fixtures::starting_with_zero(ex1), s1.strategy));

    const GameTree ex2 = fixtures::ex2();
    const Solution s2 = solve(ex2, LeafSet(ex2.size()));
    CHECK(s2.winner == Player::II);
    CHECK(ex2.label(s2.strategy.choice(at(ex2, {0}))) == 1);

    const GameTree ex3 = fixtures::ex3_with_taboo();
    const auto g3 = oracle::explicit_game(ex3);
    CHECK(solve(ex3, LeafSet(ex3.size())).winner == Player::I);
    CHECK(oracle::minimax(g3, {}) == Player::I);
    CHECK(solve(fixtures::ex3(), LeafSet(fixtures::ex3().size())).winner == Player::II);
}

TEST_CASE("solve agrees with the serial reference, minimax and exhaustive strategies") {
    int exhaustive = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(derive_seed(7, seed));
        const GameTree t = random_tree(rng, {2 + 2 * rng.between(0, 2), 3, 3, 3});
        const LeafSet a = realize(t, random_closed_spec(rng, t, 3));
        const Solution s = solve(t, a);
        const Solution r = solve_serial(t, a);
        REQUIRE(s.winner == r.winner);
        REQUIRE(s.strategy == r.strategy);
        REQUIRE(is_winning_strategy(t, a, s.strategy));

        const auto g = oracle::explicit_game(t);
        const auto ap = oracle::positions_of(t, a);
        REQUIRE(oracle::minimax(g, ap) == s.winner);
        const auto mine = oracle::has_winning_strategy(g, ap, s.winner);
        const auto theirs = oracle::has_winning_strategy(g, ap, opponent(s.winner));
        if (mine) CHECK(*mine);
        if (theirs) CHECK_FALSE(*theirs);
        exhaustive += mine.has_value();
    }
    CHECK(exhaustive > 50);
}

TEST_CASE("taboo_strategy") {
    const GameTree ex2 = fixtures::ex2();
    const auto s = taboo_strategy(ex2, {0, 0}, Player::I);
    REQUIRE(s);
    CHECK(s->owner() == Player::I);
    CHECK_FALSE(taboo_strategy(ex2, {0}, Player::I));
    const GameTree ex1 = fixtures::ex1();
    CHECK_FALSE(taboo_strategy(ex1, {}, Player::I));
    CHECK_FALSE(taboo_strategy(ex1, {}, Player::II));
    CHECK_THROWS_AS(taboo_strategy(ex1, {2}, Player::I), InvalidInput);

    // Every play through the position consistent with the witness is taboo
    // for the opponent.
    const GameTree d = deviation_tree();
    const auto w = taboo_strategy(d, {0, 0}, Player::I);
    REQUIRE(w);
    for (NodeId x : plays_consistent(d, *w)) {
        if (!d.is_prefix(at(d, {0, 0}), x)) continue;
        CHECK(d.taboo(x) == Player::II);
    }
}

TEST_CASE("prune") {
    SUBCASE("nothing to prune") {
        const GameTree ex1 = fixtures::ex1();
        const PruneResult pr = prune(ex1);
        CHECK_FALSE(pr.root_determined);
        CHECK(pr.pruned == ex1);
        CHECK(std::count(pr.removed.begin(), pr.removed.end(), 1) == 0);
    }
    SUBCASE("EX2 loses one node") {
        const GameTree ex2 = fixtures::ex2();
        const PruneResult pr = prune(ex2);
        std::vector<Position> removed;
        for (std::size_t i = 0; i < ex2.size(); ++i)
            if (pr.removed[i]) removed.push_back(ex2.position(static_cast<NodeId>(i)));
        CHECK(removed == std::vector<Position>{{0, 0}});
        CHECK(pr.pruned.size() == ex2.size() - 1);
        CHECK(pr.pruned.find({0, 0}) == std::nullopt);
        CHECK(pr.pruned.plays().size() == pr.pruned.infinite_plays().size());
    }
    SUBCASE("removed part is the upward closure") {
        const GameTree d = deviation_tree();
        const PruneResult pr = prune(d);
        CHECK(pr.is_taboo_determined(at(d, {0, 0}), Player::I));
        CHECK_FALSE(pr.is_taboo_determined(at(d, {0, 0, 1}), Player::I));
        CHECK(pr.removed[static_cast<std::size_t>(at(d, {0, 0, 1, 0}))]);
        CHECK(pr.pruned.size() == 13 - 4);
    }
    SUBCASE("taboo-determined root") {
        GameTreeBuilder b(2);
        b.set_taboo(b.add_position({0}), Player::I);
        b.set_taboo(b.add_position({1}), Player::I);
        const PruneResult pr = prune(b.build());
        CHECK(pr.root_determined == Player::II);
    }
}

TEST_CASE("transfer_from_pruned") {
    SUBCASE("identity when nothing is removed") {
        const GameTree ex1 = fixtures::ex1();
        const PruneResult pr = prune(ex1);
        const Strategy s = random_strategy(pr.pruned, Player::II, 3);
        CHECK(transfer_from_pruned(ex1, pr, s) == s);
    }
    SUBCASE("EX2 with A empty") {
        const GameTree ex2 = fixtures::ex2();
        const PruneResult pr = prune(ex2);
        const LeafSet a(ex2.size());
        const Solution s = solve(pr.pruned, restrict_to_pruned(pr, a));
        CHECK(s.winner == Player::II);
        CHECK(is_winning_strategy(ex2, a, transfer_from_pruned(ex2, pr, s.strategy)));
    }
    SUBCASE("II deviates into a position determined for I") {
        const GameTree d = deviation_tree();
        const PruneResult pr = prune(d);
        const LeafSet a = all_infinite_plays(d);
        const Solution s = solve(pr.pruned, restrict_to_pruned(pr, a));
        REQUIRE(s.winner == Player::I);
        const Strategy moved = transfer_from_pruned(d, pr, s.strategy);
        CHECK(moved.choice(at(d, {0, 0})) == at(d, {0, 0, 0}));
        CHECK(is_winning_strategy(d, a, moved));
        // Here the witness ignores the pruned strategy, whatever it was.
        for (NodeId x : plays_consistent(d, moved))
            if (d.is_prefix(at(d, {0, 0}), x)) CHECK(classify_play(d, x) == PlayOutcome::TabooII);
    }
    SUBCASE("random games") {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            Rng rng(derive_seed(11, seed));
            const GameTree t = random_tree(rng, {2 + 2 * rng.between(0, 2), 3, 3, 3});
            const LeafSet a = realize(t, random_closed_spec(rng, t, 3));
            const PruneResult pr = prune(t);
            const Player winner = solve(t, a).winner;
            if (pr.root_determined) {
                CHECK(*pr.root_determined == winner);
                continue;
            }
            CHECK(pr.pruned.plays().size() == pr.pruned.infinite_plays().size());
            const Solution s = solve(pr.pruned, restrict_to_pruned(pr, a));
            REQUIRE(s.winner == winner);
            REQUIRE(is_winning_strategy(t, a, transfer_from_pruned(t, pr, s.strategy)));
            for (std::size_t i = 0; i < t.size(); ++i)
                if (pr.removed[i] && (pr.taboo_determined[0][i] || pr.taboo_determined[1][i])) {
                    const Player p = pr.taboo_determined[0][i] ? Player::I : Player::II;
                    CHECK(taboo_strategy(t, t.position(static_cast<NodeId>(i)), p));
                }
        }
    }
}
