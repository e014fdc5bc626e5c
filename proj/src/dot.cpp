#include "unravel/dot.hpp"

#include <sstream>

#include "unravel/errors.hpp"

namespace unravel {

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + '"';
}

void emit_tree(std::ostringstream& out, const GameTree& t, const LeafSet* payoff, const std::string& prefix,
               const NodeLabel& label, const std::string& indent) {
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto v = static_cast<NodeId>(i);
        out << indent << prefix << i << " [label=" << quoted(label(v));
        if (const auto loser = t.taboo(v)) out << ", shape=box, xlabel=" << quoted("taboo " + to_string(*loser));
        if (payoff && t.depth(v) == t.depth_bound() && payoff->contains(v)) out << ", peripheries=2";
        out << "];\n";
    }
    for (std::size_t i = 1; i < t.size(); ++i)
        out << indent << prefix << t.parent(static_cast<NodeId>(i)) << " -> " << prefix << i << ";\n";
}

void check_size(std::size_t n, std::size_t node_max) {
    if (n > node_max)
        throw ResourceLimit("graph has " + std::to_string(n) + " nodes, over the cap of " + std::to_string(node_max));
}

}  // namespace

std::string tree_to_dot(const GameTree& t, const LeafSet* payoff, std::size_t node_max) {
    check_size(t.size(), node_max);
    std::ostringstream out;
    out << "digraph game {\n";
    out << "  node [shape=ellipse];\n";
    emit_tree(out, t, payoff, "n", [&](NodeId v) { return format_position(t.position(v)); }, "  ");
    out << "}\n";
    return out.str();
}

std::string covering_to_dot(const Covering& c, const LeafSet* payoff, const NodeLabel& source_label,
                            std::size_t node_max) {
    const GameTree& s = *c.source;
    const GameTree& t = *c.target;
    check_size(s.size() + t.size(), node_max);
    std::ostringstream out;
    out << "digraph covering {\n";
    out << "  node [shape=ellipse];\n";
    out << "  subgraph cluster_source {\n";
    out << "    label=\"source\";\n";
    if (payoff) {
        const LeafSet pulled = pullback(c, *payoff);
        emit_tree(out, s, &pulled, "s", source_label, "    ");
    } else {
        emit_tree(out, s, nullptr, "s", source_label, "    ");
    }
    out << "  }\n";
    out << "  subgraph cluster_target {\n";
    out << "    label=\"target\";\n";
    emit_tree(out, t, payoff, "t", [&](NodeId v) { return format_position(t.position(v)); }, "    ");
    out << "  }\n";
    for (std::size_t i = 0; i < s.size(); ++i)
        out << "  s" << i << " -> t" << c.project(static_cast<NodeId>(i)) << " [style=dashed, constraint=false];\n";
    out << "}\n";
    return out.str();
}

}  // namespace unravel
