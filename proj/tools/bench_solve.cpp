// Times the level-parallel solver against the recursive reference on
// complete trees and checks that they agree.

#include <omp.h>

#include <chrono>
#include <cstdio>

#include "unravel/payoff.hpp"
#include "unravel/random_game.hpp"
#include "unravel/solver.hpp"

using namespace unravel;

namespace {

GameTree complete_tree(int depth, MoveLabel branch) {
    GameTreeBuilder b(depth);
    std::vector<NodeId> frontier{b.root()};
    for (int d = 0; d < depth; ++d) {
        std::vector<NodeId> next;
        for (NodeId v : frontier)
            for (MoveLabel a = 0; a < branch; ++a) next.push_back(b.add_child(v, a));
        frontier.swap(next);
    }
    return b.build();
}

template <class F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - t0;
        best = std::min(best, ms.count());
    }
    return best;
}

}  // namespace

int main() {
    std::printf("threads %d\n", omp_get_max_threads());
    std::printf("%6s %6s %10s %12s %12s %6s\n", "depth", "branch", "nodes", "serial_ms", "parallel_ms", "agree");
    for (auto [depth, branch] : {std::pair{8, 3u}, std::pair{10, 3u}, std::pair{12, 3u}, std::pair{16, 2u}, std::pair{20, 2u}}) {
        const GameTree t = complete_tree(depth, branch);
        Rng rng(static_cast<std::uint64_t>(depth));
        const LeafSet a = realize(t, random_closed_spec(rng, t, 3));
        std::vector<Player> serial, parallel;
        const double s = best_of(3, [&] { serial = node_winners_serial(t, a); });
        const double p = best_of(3, [&] { parallel = node_winners(t, a); });
        std::printf("%6d %6u %10zu %12.3f %12.3f %6s\n", depth, branch, t.size(), s, p, serial == parallel ? "yes" : "NO");
    }
}
