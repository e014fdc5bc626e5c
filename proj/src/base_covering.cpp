#include "unravel/base_covering.hpp"

#include <cstdlib>
#include <sstream>

#include "unravel/errors.hpp"

namespace unravel {

namespace {

std::size_t idx(NodeId v) { return static_cast<std::size_t>(v); }

}  // namespace

UnravelLimits UnravelLimits::from_environment() {
    UnravelLimits l;
    if (const char* env = std::getenv("UNRAVEL_NODE_MAX")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) l.node_max = static_cast<std::size_t>(v);
    }
    return l;
}

namespace {

std::vector<NodeId> z_from_meets(const GameTree& t, const std::vector<char>& meets, NodeId anchor) {
    std::vector<NodeId> z;
    std::vector<NodeId> stack;
    auto ch = t.children(anchor);
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    while (!stack.empty()) {
        const NodeId q = stack.back();
        stack.pop_back();
        if (t.is_terminal(q)) continue;
        if (!meets[idx(q)]) {
            z.push_back(q);
            continue;
        }
        auto qc = t.children(q);
        for (auto it = qc.rbegin(); it != qc.rend(); ++it) stack.push_back(*it);
    }
    return z;
}

}  // namespace

std::vector<NodeId> compute_Z(const GameTree& t, const LeafSet& a, NodeId anchor) {
    validate_leaf_set(t, a);
    if (anchor <= 0 || idx(anchor) >= t.size()) throw InvalidInput("compute_Z: unknown anchor");
    if (t.depth(anchor) % 2 != 1) throw InvalidInput("compute_Z: the anchor must follow a move by I");
    if (t.is_terminal(anchor)) throw InvalidInput("compute_Z: anchor " + format_position(t.position(anchor)) + " is terminal");
    return z_from_meets(t, meets_table(t, a), anchor);
}

std::vector<Position> compute_Z(const GameTree& t, const LeafSet& a, const Position& p, MoveLabel move) {
    Position anchor = p;
    anchor.push_back(move);
    const auto v = t.find(anchor);
    if (!v) throw InvalidInput("compute_Z: " + format_position(anchor) + " is not a position");
    std::vector<Position> out;
    for (NodeId q : compute_Z(t, a, *v)) out.push_back(t.position(q));
    return out;
}

namespace detail {

struct BaseData {
    TreePtr original;
    TreePtr unraveled;
    int level = 0;
    ClosedSpec spec;
    LeafSet payoff;

    std::vector<NodeId> pi;           // unraveled -> original
    std::vector<NodeId> copy_of;      // original -> unraveled, depth <= level
    std::vector<int> anchor_of_node;  // original level-(k+1) node -> anchor index
    std::vector<int> z_index;         // original node -> index in its anchor's Z, or -1
    std::vector<BaseCovering::Anchor> anchors;

    std::vector<BranchKind> kind;     // per unraveled node
    std::vector<int> anchor;          // per unraveled node
    std::vector<std::uint32_t> mask;  // per unraveled node
    std::vector<int> challenged;      // per unraveled node

    // Child of an unraveled node whose image is the original node `target`.
    NodeId child_over(NodeId tilde, NodeId target) const {
        for (NodeId c : unraveled->children(tilde))
            if (pi[idx(c)] == target) return c;
        throw InvariantViolation("unraveled tree is missing a mirrored child");
    }

    // Walks a challenge branch from its level-(k+2) node down to original node `to`.
    NodeId descend(NodeId tilde, NodeId to) const {
        const GameTree& t = *original;
        for (int d = unraveled->depth(tilde) + 1; d <= t.depth(to); ++d) tilde = child_over(tilde, t.ancestor_at(to, d));
        return tilde;
    }
};

}  // namespace detail

namespace {

using detail::BaseData;

// Where the simulated play of the unraveled game stands for one original node.
struct Cursor {
    NodeId tilde = kNoNode;    // kNoNode: the strategy plays the least move from here on
    std::uint32_t mask = 0;
    bool challenge = false;
    NodeId conceded = kNoNode; // accept node at a conceded Z position
};

// Simulation of the unraveled game behind one source strategy.
class Simulation {
public:
    Simulation(const BaseData& data, const Strategy& sigma) : d_(data), sigma_(sigma) {
        if (sigma.tree_size() != d_.unraveled->size()) throw InvalidInput("strategy is not on the unraveled tree");
        if (sigma.owner() == Player::II) prepare_second_player();
    }

    Cursor root() const { return {d_.copy_of[idx(d_.original->root())], 0, false, kNoNode}; }

    // Cursor at child c of original node v; free once the simulated play is abandoned.
    Cursor step(const Cursor& at, NodeId v, NodeId c) const {
        const GameTree& t = *d_.original;
        const int dc = t.depth(c);
        const int k = d_.level;
        if (dc <= k) return {d_.copy_of[idx(c)], 0, false, kNoNode};
        if (dc == k + 1) {
            const int ai = d_.anchor_of_node[idx(c)];
            const auto& anchor = d_.anchors[static_cast<std::size_t>(ai)];
            if (sigma_.owner() == Player::I) {
                const NodeId chosen = sigma_.choice(d_.copy_of[idx(v)]);
                if (d_.pi[idx(chosen)] != c) return {};
                return {chosen, d_.mask[idx(chosen)], false, kNoNode};
            }
            const std::uint32_t y = y_mask_[static_cast<std::size_t>(ai)];
            return {anchor.by_subset[y].decorated, y, false, kNoNode};
        }
        if (at.tilde == kNoNode) return {};
        Cursor next = at;
        if (dc == k + 2) {
            const int ai = d_.anchor_of_node[idx(v)];
            const auto& anchor = d_.anchors[static_cast<std::size_t>(ai)];
            const auto ch = t.children(v);
            std::size_t pos = 0;
            while (ch[pos] != c) ++pos;
            next.tilde = anchor.by_subset[at.mask].accept[pos];
        } else {
            next.tilde = d_.child_over(at.tilde, c);
        }
        if (next.challenge) return next;

        const int zi = d_.z_index[idx(c)];
        if (zi < 0) return next;
        const int ai = d_.anchor[idx(next.tilde)];
        const auto& anchor = d_.anchors[static_cast<std::size_t>(ai)];
        const std::uint32_t bit = 1u << zi;
        if (sigma_.owner() == Player::I) {
            if (!(at.mask & bit)) return {kNoNode, 0, false, next.tilde};
            const NodeId start = anchor.by_subset[at.mask].challenge[static_cast<std::size_t>(zi)];
            return {d_.descend(start, c), at.mask, true, kNoNode};
        }
        if (at.mask & bit) return {kNoNode, 0, false, next.tilde};
        const std::uint32_t x = least_challenger_[static_cast<std::size_t>(ai)][static_cast<std::size_t>(zi)];
        const NodeId start = anchor.by_subset[x].challenge[static_cast<std::size_t>(zi)];
        return {d_.descend(start, c), x, true, kNoNode};
    }

private:
    void prepare_second_player() {
        y_mask_.resize(d_.anchors.size());
        least_challenger_.resize(d_.anchors.size());
        for (std::size_t ai = 0; ai < d_.anchors.size(); ++ai) {
            const auto& anchor = d_.anchors[ai];
            const std::size_t n = anchor.z.size();
            const std::uint32_t full = n == 0 ? 0u : static_cast<std::uint32_t>((1ull << n) - 1);
            auto& least = least_challenger_[ai];
            least.assign(n, full + 1);
            std::uint32_t challenged = 0;
            for (std::uint32_t m = 0; m < anchor.by_subset.size(); ++m) {
                const NodeId dn = anchor.by_subset[m].decorated;
                if (d_.unraveled->is_terminal(dn)) continue;
                const NodeId reply = sigma_.choice(dn);
                if (d_.kind[idx(reply)] != BranchKind::Challenge) continue;
                const int zi = d_.challenged[idx(reply)];
                challenged |= 1u << zi;
                if (least[static_cast<std::size_t>(zi)] > full) least[static_cast<std::size_t>(zi)] = m;
            }
            y_mask_[ai] = full & ~challenged;
            const NodeId dy = anchor.by_subset[y_mask_[ai]].decorated;
            if (!d_.unraveled->is_terminal(dy) && d_.kind[idx(sigma_.choice(dy))] != BranchKind::Accept)
                throw InvariantViolation("reply to the never-challenged set is not an accept move");
        }
    }

    const BaseData& d_;
    const Strategy& sigma_;
    std::vector<std::uint32_t> y_mask_;
    std::vector<std::vector<std::uint32_t>> least_challenger_;
};

Strategy map_strategy(const BaseData& d, const Strategy& sigma) {
    const GameTree& t = *d.original;
    Simulation sim(d, sigma);
    const Player owner = sigma.owner();
    Strategy out(owner, t.size());
    std::vector<Cursor> at(t.size());
    at[idx(t.root())] = sim.root();
    // Preorder ids: a parent's cursor is final before its children are visited.
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto v = static_cast<NodeId>(i);
        if (t.is_terminal(v)) continue;
        for (NodeId c : t.children(v)) at[idx(c)] = sim.step(at[i], v, c);
        if (mover_at(t.depth(v)) != owner) continue;
        const NodeId tilde = at[i].tilde;
        out.set_choice(v, tilde == kNoNode ? t.children(v).front() : d.pi[idx(sigma.choice(tilde))]);
    }
    return out;
}

NodeId lift_play(const BaseData& d, const Strategy& sigma, NodeId play) {
    const GameTree& t = *d.original;
    if (play < 0 || idx(play) >= t.size() || !t.is_terminal(play)) throw InvalidInput("lift: not a play");
    std::vector<NodeId> path;
    for (NodeId v = play; v != t.root(); v = t.parent(v)) path.push_back(v);
    Simulation sim(d, sigma);
    Cursor cur = sim.root();
    NodeId v = t.root();
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
        cur = sim.step(cur, v, *it);
        v = *it;
        if (cur.conceded != kNoNode) return cur.conceded;
        if (cur.tilde == kNoNode)
            throw InvalidInput("lift: play " + format_position(t.position(play)) +
                               " is not consistent with the mapped strategy");
    }
    return cur.tilde;
}

std::string subset_text(const GameTree& t, const std::vector<NodeId>& z, std::uint32_t mask) {
    std::string s = "{";
    bool first = true;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!(mask & (1u << i))) continue;
        if (!first) s += ",";
        s += format_position(t.position(z[i]));
        first = false;
    }
    return s + "}";
}

}  // namespace

int BaseCovering::level() const noexcept { return data_->level; }
const ClosedSpec& BaseCovering::spec() const noexcept { return data_->spec; }
const LeafSet& BaseCovering::payoff() const noexcept { return data_->payoff; }
const std::vector<BaseCovering::Anchor>& BaseCovering::anchors() const noexcept { return data_->anchors; }
BranchKind BaseCovering::kind(NodeId v) const { return data_->kind[idx(v)]; }
int BaseCovering::anchor_index(NodeId v) const { return data_->anchor[idx(v)]; }
std::uint32_t BaseCovering::subset(NodeId v) const { return data_->mask[idx(v)]; }
int BaseCovering::challenged(NodeId v) const { return data_->challenged[idx(v)]; }

std::string BaseCovering::move_label(NodeId v) const {
    const auto& d = *data_;
    const GameTree& t = *d.original;
    const GameTree& u = *d.unraveled;
    if (v == u.root()) return ".";
    const int depth = u.depth(v);
    const NodeId image = d.pi[idx(v)];
    if (depth <= d.level || depth > d.level + 2) return std::to_string(t.label(image));
    const auto& anchor = d.anchors[static_cast<std::size_t>(d.anchor[idx(v)])];
    if (depth == d.level + 1)
        return "(" + std::to_string(t.label(image)) + "," + subset_text(t, anchor.z, d.mask[idx(v)]) + ")";
    if (d.kind[idx(v)] == BranchKind::Accept) return "accept " + std::to_string(t.label(image));
    const NodeId r = anchor.z[static_cast<std::size_t>(d.challenged[idx(v)])];
    return "challenge " + format_position(t.position(r));
}

LeafSet BaseCovering::accept_branch_plays() const {
    const GameTree& u = unraveled();
    LeafSet out(u.size());
    for (NodeId v : u.nodes_at_depth(u.depth_bound()))
        if (data_->kind[idx(v)] == BranchKind::Accept) out.insert(v);
    return out;
}

BaseCovering build_base_covering(const GameTree& t, const ClosedSpec& spec, int k, const UnravelLimits& limits) {
    return build_base_covering(std::make_shared<const GameTree>(t), spec, k, limits);
}

BaseCovering build_base_covering(TreePtr tree, const ClosedSpec& spec, int k, const UnravelLimits& limits) {
    const GameTree& t = *tree;
    if (k < 0) throw InvalidInput("build_base_covering: level must be non-negative");
    if (k % 2) ++k;
    const int depth_bound = t.depth_bound();
    if (k + 2 > depth_bound)
        throw InvalidInput("build_base_covering: level " + std::to_string(k) + " leaves no room below depth " +
                           std::to_string(depth_bound));
    validate_closed_spec(t, spec);
    if (!spec.generators.empty() && k + 2 >= depth_bound)
        throw InvalidInput("build_base_covering: generator-depth violation, a non-empty closed spec needs level + 2 < D");

    auto data = std::make_shared<BaseData>();
    data->original = tree;
    data->level = k;
    data->spec = spec;
    data->payoff = realize(t, spec);
    const auto meets = meets_table(t, data->payoff);

    data->anchor_of_node.assign(t.size(), -1);
    data->z_index.assign(t.size(), -1);
    for (NodeId p : t.nodes_at_depth(k)) {
        for (NodeId a : t.children(p)) {
            BaseCovering::Anchor anchor;
            anchor.node = a;
            if (!t.is_terminal(a)) anchor.z = z_from_meets(t, meets, a);
            if (anchor.z.size() > limits.z_max || anchor.z.size() > 24)
                throw ResourceLimit("Z-set of " + format_position(t.position(a)) + " has " +
                                    std::to_string(anchor.z.size()) + " members, cap is " +
                                    std::to_string(limits.z_max));
            for (std::size_t i = 0; i < anchor.z.size(); ++i) data->z_index[idx(anchor.z[i])] = static_cast<int>(i);
            data->anchor_of_node[idx(a)] = static_cast<int>(data->anchors.size());
            data->anchors.push_back(std::move(anchor));
        }
    }

    // Build in builder ids; everything is remapped once the tree is frozen.
    GameTreeBuilder b(depth_bound);
    std::vector<NodeId> pi{t.root()};
    std::vector<BranchKind> kind{BranchKind::Copied};
    std::vector<int> anchor_of{-1};
    std::vector<std::uint32_t> mask_of{0};
    std::vector<int> challenged_of{-1};
    std::vector<NodeId> copy_b(t.size(), kNoNode);

    auto add = [&](NodeId parent, MoveLabel label, NodeId image, BranchKind kd, int ai, std::uint32_t m, int ch) {
        if (b.size() >= limits.node_max)
            throw ResourceLimit("unraveled tree exceeds the node cap of " + std::to_string(limits.node_max));
        const NodeId id = b.add_child(parent, label);
        pi.push_back(image);
        kind.push_back(kd);
        anchor_of.push_back(ai);
        mask_of.push_back(m);
        challenged_of.push_back(ch);
        return id;
    };
    auto copy_tag = [&](NodeId from, NodeId to) {
        if (auto tag = t.taboo(from)) b.set_taboo(to, *tag);
    };

    copy_b[idx(t.root())] = b.root();
    copy_tag(t.root(), b.root());
    for (std::size_t i = 1; i < t.size(); ++i) {
        const auto v = static_cast<NodeId>(i);
        if (t.depth(v) > k) continue;
        copy_b[i] = add(copy_b[idx(t.parent(v))], t.label(v), v, BranchKind::Copied, -1, 0, -1);
        copy_tag(v, copy_b[i]);
    }

    struct Pending {
        NodeId original;
        NodeId built;
    };
    for (NodeId p : t.nodes_at_depth(k)) {
        MoveLabel next_label = 0;
        for (NodeId a : t.children(p)) {
            const int ai = data->anchor_of_node[idx(a)];
            auto& anchor = data->anchors[static_cast<std::size_t>(ai)];
            const std::size_t zn = anchor.z.size();
            const std::uint32_t subsets = 1u << zn;
            anchor.by_subset.resize(subsets);
            for (std::uint32_t m = 0; m < subsets; ++m) {
                auto& br = anchor.by_subset[m];
                const NodeId dn = add(copy_b[idx(p)], next_label++, a, BranchKind::Decorated, ai, m, -1);
                br.decorated = dn;
                if (t.is_terminal(a)) {
                    copy_tag(a, dn);
                    continue;
                }
                MoveLabel reply_label = 0;
                for (NodeId c : t.children(a)) {
                    const NodeId acc = add(dn, reply_label++, c, BranchKind::Accept, ai, m, -1);
                    br.accept.push_back(acc);
                    std::vector<Pending> stack{{c, acc}};
                    while (!stack.empty()) {
                        const auto [w, wb] = stack.back();
                        stack.pop_back();
                        const int zi = data->z_index[idx(w)];
                        if (zi >= 0) {
                            b.set_taboo(wb, (m >> zi) & 1u ? Player::II : Player::I);
                            continue;
                        }
                        copy_tag(w, wb);
                        for (NodeId x : t.children(w))
                            stack.push_back({x, add(wb, t.label(x), x, BranchKind::Accept, ai, m, -1)});
                    }
                }
                br.challenge.assign(zn, kNoNode);
                for (std::size_t zi = 0; zi < zn; ++zi) {
                    if (!((m >> zi) & 1u)) continue;
                    const NodeId r = anchor.z[zi];
                    const NodeId c = t.ancestor_at(r, k + 2);
                    const auto ci = static_cast<int>(zi);
                    const NodeId ch = add(dn, reply_label++, c, BranchKind::Challenge, ai, m, ci);
                    br.challenge[zi] = ch;
                    std::vector<Pending> stack{{c, ch}};
                    while (!stack.empty()) {
                        const auto [w, wb] = stack.back();
                        stack.pop_back();
                        if (t.depth(w) < t.depth(r)) {
                            if (t.is_terminal(w))
                                throw InvariantViolation("challenge branch meets a terminal above the challenged position");
                            const NodeId x = t.ancestor_at(r, t.depth(w) + 1);
                            stack.push_back({x, add(wb, t.label(x), x, BranchKind::Challenge, ai, m, ci)});
                            continue;
                        }
                        copy_tag(w, wb);
                        for (NodeId x : t.children(w))
                            stack.push_back({x, add(wb, t.label(x), x, BranchKind::Challenge, ai, m, ci)});
                    }
                }
            }
        }
    }

    std::vector<NodeId> remap;
    auto unraveled = std::make_shared<const GameTree>(b.build(&remap));
    const std::size_t n = unraveled->size();
    data->unraveled = unraveled;
    data->pi.assign(n, kNoNode);
    data->kind.assign(n, BranchKind::Copied);
    data->anchor.assign(n, -1);
    data->mask.assign(n, 0);
    data->challenged.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const auto to = idx(remap[i]);
        data->pi[to] = pi[i];
        data->kind[to] = kind[i];
        data->anchor[to] = anchor_of[i];
        data->mask[to] = mask_of[i];
        data->challenged[to] = challenged_of[i];
    }
    data->copy_of.assign(t.size(), kNoNode);
    for (std::size_t i = 0; i < t.size(); ++i)
        if (copy_b[i] != kNoNode) data->copy_of[i] = remap[idx(copy_b[i])];
    auto fix = [&](NodeId& v) {
        if (v != kNoNode) v = remap[idx(v)];
    };
    for (auto& anchor : data->anchors)
        for (auto& br : anchor.by_subset) {
            fix(br.decorated);
            for (auto& v : br.accept) fix(v);
            for (auto& v : br.challenge) fix(v);
        }

    BaseCovering out;
    out.data_ = data;
    Covering& c = out.covering_;
    c.source = unraveled;
    c.target = tree;
    c.level = k;
    c.position_map = data->pi;
    std::shared_ptr<const BaseData> shared = data;
    c.strategy_map = [shared](const Strategy& s) { return map_strategy(*shared, s); };
    c.lift = [shared](const Strategy& s) -> PlayLift {
        return [shared, s](NodeId x) { return lift_play(*shared, s, x); };
    };
    return out;
}

}  // namespace unravel
