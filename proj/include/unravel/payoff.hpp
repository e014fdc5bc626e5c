#pragma once

// Symbolic payoff sets. Closedness is structural: a closed set is the set of
// full-depth plays extending none of a finite list of generator positions.

#include <variant>
#include <vector>

#include "unravel/core.hpp"

namespace unravel {

/// Closed set [T] minus the basic opens of the generators. Generators sit at
/// depth 1..D-1 and are non-terminal.
struct ClosedSpec {
    std::vector<Position> generators;
    friend bool operator==(const ClosedSpec&, const ClosedSpec&) = default;
};

/// Complement of a closed set.
struct OpenSpec {
    ClosedSpec complement;
    friend bool operator==(const OpenSpec&, const OpenSpec&) = default;
};

/// Finite, non-empty union of closed sets.
struct UnionSpec {
    std::vector<ClosedSpec> parts;
    friend bool operator==(const UnionSpec&, const UnionSpec&) = default;
};

using PayoffSpec = std::variant<ClosedSpec, OpenSpec, UnionSpec>;

/// Throws InvalidInput when a generator is missing, terminal, or at depth 0 or D.
void validate_closed_spec(const GameTree& t, const ClosedSpec& spec);

LeafSet realize(const GameTree& t, const ClosedSpec& spec);
LeafSet realize(const GameTree& t, const PayoffSpec& spec);

/// Per-node flag: some full-depth leaf at or below the node lies in `a`.
std::vector<char> meets_table(const GameTree& t, const LeafSet& a);

bool meets_A(const GameTree& t, NodeId q, const LeafSet& a);
bool meets_A(const GameTree& t, const Position& q, const LeafSet& a);

/// Membership in `s` of every full-depth leaf is a function of its length-d prefix.
bool is_d_decided(const GameTree& t, const LeafSet& s, int d);

/// Swaps Closed and Open; throws InvalidInput for unions.
PayoffSpec complement_spec(const PayoffSpec& spec);

/// Generators at depth d whose full-depth descendants all lie in `s`; the
/// resulting closed set realizes to the complement of `s`.
ClosedSpec decided_set_to_closed_spec(const GameTree& t, const LeafSet& s, int d);

}  // namespace unravel
