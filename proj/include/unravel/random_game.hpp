#pragma once

#include "unravel/core.hpp"
#include "unravel/payoff.hpp"
#include "unravel/rng.hpp"

namespace unravel {

struct RandomGameParams {
    int depth = 4;           // even
    int branch = 2;          // children per node drawn from 1..branch
    int max_taboos = 3;      // early terminals cut into the tree
    int max_generators = 3;
};

GameTree random_tree(Rng& rng, const RandomGameParams& params);

/// Random non-terminal generators of depth in [min_depth, D-1]; may be empty.
ClosedSpec random_closed_spec(Rng& rng, const GameTree& t, int max_generators, int min_depth = 1);

}  // namespace unravel
