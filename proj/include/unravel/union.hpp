#pragma once

// Finite unions of closed sets: unravel each part in turn on the tree left by
// the previous stage, at strictly increasing levels, then unravel the
// complement of the (now decided) union once more at the base level.

#include <vector>

#include "unravel/base_covering.hpp"

namespace unravel {

struct UnionStage {
    int level = 0;
    std::size_t generators = 0;    // generators of the pulled-back part
    std::size_t source_nodes = 0;  // size of the tree this stage produced
};

struct UnionUnraveling {
    Covering covering;
    /// The pulled-back union is decided by prefixes of this length.
    int certificate_depth = 0;
    std::vector<UnionStage> stages;
};

UnionUnraveling unravel_union(TreePtr t, const std::vector<ClosedSpec>& parts, int k,
                              const UnravelLimits& limits = UnravelLimits::from_environment());

}  // namespace unravel
