#include "unravel/payoff.hpp"

#include <string>

#include "unravel/errors.hpp"

namespace unravel {

namespace {

std::size_t idx(NodeId v) { return static_cast<std::size_t>(v); }

// Marks every node at or below one of the generators.
std::vector<char> excluded_nodes(const GameTree& t, const ClosedSpec& spec) {
    std::vector<char> excluded(t.size(), 0);
    for (const auto& g : spec.generators) excluded[idx(*t.find(g))] = 1;
    // Preorder ids: parents precede children.
    for (std::size_t i = 1; i < t.size(); ++i)
        if (excluded[idx(t.parent(static_cast<NodeId>(i)))]) excluded[i] = 1;
    return excluded;
}

}  // namespace

void validate_closed_spec(const GameTree& t, const ClosedSpec& spec) {
    for (const auto& g : spec.generators) {
        const auto v = t.find(g);
        if (!v) throw InvalidInput("generator " + format_position(g) + " is not a position of the tree");
        if (g.empty() || static_cast<int>(g.size()) >= t.depth_bound())
            throw InvalidInput("generator " + format_position(g) + " must have depth between 1 and D-1");
        if (t.is_terminal(*v)) throw InvalidInput("generator " + format_position(g) + " is terminal");
    }
}

LeafSet realize(const GameTree& t, const ClosedSpec& spec) {
    validate_closed_spec(t, spec);
    const auto excluded = excluded_nodes(t, spec);
    LeafSet out(t.size());
    for (NodeId v : t.nodes_at_depth(t.depth_bound()))
        if (!excluded[idx(v)]) out.insert(v);
    return out;
}

LeafSet realize(const GameTree& t, const PayoffSpec& spec) {
    if (const auto* c = std::get_if<ClosedSpec>(&spec)) return realize(t, *c);
    if (const auto* o = std::get_if<OpenSpec>(&spec)) return complement_within(t, realize(t, o->complement));
    const auto& u = std::get<UnionSpec>(spec);
    if (u.parts.empty()) throw InvalidInput("union of closed sets must be non-empty");
    LeafSet out(t.size());
    for (const auto& part : u.parts)
        for (NodeId v : realize(t, part).members()) out.insert(v);
    return out;
}

std::vector<char> meets_table(const GameTree& t, const LeafSet& a) {
    std::vector<char> meets(t.size(), 0);
    for (std::size_t i = t.size(); i-- > 0;) {
        const auto v = static_cast<NodeId>(i);
        if (t.depth(v) == t.depth_bound() && a.contains(v)) meets[i] = 1;
        if (meets[i] && v != t.root()) meets[idx(t.parent(v))] = 1;
    }
    return meets;
}

bool meets_A(const GameTree& t, NodeId q, const LeafSet& a) {
    for (NodeId leaf : t.nodes_at_depth(t.depth_bound()))
        if (a.contains(leaf) && t.is_prefix(q, leaf)) return true;
    return false;
}

bool meets_A(const GameTree& t, const Position& q, const LeafSet& a) {
    const auto v = t.find(q);
    if (!v) throw InvalidInput("meets_A: unknown position " + format_position(q));
    return meets_A(t, *v, a);
}

bool is_d_decided(const GameTree& t, const LeafSet& s, int d) {
    if (d < 0 || d > t.depth_bound()) throw InvalidInput("is_d_decided: d out of range");
    // verdict[u] for each depth-d ancestor: -1 unseen, else membership of the first leaf seen.
    std::vector<std::int8_t> verdict(t.size(), -1);
    for (NodeId leaf : t.nodes_at_depth(t.depth_bound())) {
        const NodeId anchor = t.ancestor_at(leaf, d);
        const auto in = static_cast<std::int8_t>(s.contains(leaf));
        auto& seen = verdict[idx(anchor)];
        if (seen == -1)
            seen = in;
        else if (seen != in)
            return false;
    }
    return true;
}

PayoffSpec complement_spec(const PayoffSpec& spec) {
    if (const auto* c = std::get_if<ClosedSpec>(&spec)) return OpenSpec{*c};
    if (const auto* o = std::get_if<OpenSpec>(&spec)) return o->complement;
    throw InvalidInput("the complement of a union of closed sets has no spec representation");
}

ClosedSpec decided_set_to_closed_spec(const GameTree& t, const LeafSet& s, int d) {
    if (d < 1 || d >= t.depth_bound())
        throw InvalidInput("decided_set_to_closed_spec: d must lie in 1..D-1, got " + std::to_string(d));
    if (!is_d_decided(t, s, d))
        throw InvalidInput("decided_set_to_closed_spec: set is not " + std::to_string(d) + "-decided");
    // Decidedness makes "all descendants in s" equivalent to "some descendant in s".
    const auto meets = meets_table(t, s);
    ClosedSpec out;
    for (NodeId v : t.nodes_at_depth(d))
        if (!t.is_terminal(v) && meets[idx(v)]) out.generators.push_back(t.position(v));
    return out;
}

}  // namespace unravel
