#include "unravel/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "unravel/base_covering.hpp"
#include "unravel/dot.hpp"
#include "unravel/errors.hpp"
#include "unravel/game_format.hpp"
#include "unravel/random_game.hpp"
#include "unravel/solver.hpp"
#include "unravel/union.hpp"

namespace unravel {

namespace {

std::size_t idx(NodeId v) { return static_cast<std::size_t>(v); }

class Report {
public:
    explicit Report(std::string command) { add("command", std::move(command)); }

    void add(const std::string& key, const std::string& value) { lines_.push_back(key + ": " + value); }
    void add(const std::string& key, std::size_t value) { add(key, std::to_string(value)); }
    void add(const std::string& key, int value) { add(key, std::to_string(value)); }
    void raw(const std::string& line) { lines_.push_back(line); }

    void check(const std::string& name, const CheckResult& r) {
        add("check " + name, r.ok ? std::string("ok") : "FAIL " + r.detail);
        if (!r.ok) {
            failed_ = true;
            if (counterexample_.empty()) counterexample_ = name + ": " + r.detail;
        }
    }
    void check(const std::string& name, bool ok, const std::string& detail = "") {
        check(name, ok ? CheckResult::pass() : CheckResult::fail(detail));
    }
    bool failed() const { return failed_; }

    int finish(std::ostream& out, std::chrono::steady_clock::time_point started) const {
        for (const auto& l : lines_) out << l << '\n';
        if (!counterexample_.empty()) out << "counterexample: " << counterexample_ << '\n';
        out << "verdict: " << (failed_ ? "violation" : "ok") << '\n';
        const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - started;
        out << "time_ms: " << std::fixed << std::setprecision(3) << ms.count() << '\n';
        return failed_ ? kExitViolation : kExitOk;
    }

private:
    std::vector<std::string> lines_;
    std::string counterexample_;
    bool failed_ = false;
};

std::string payoff_kind(const PayoffSpec& p) {
    switch (p.index()) {
        case 0: return "closed";
        case 1: return "open";
        default: return "union";
    }
}

void strategy_table(Report& r, const GameTree& t, const Strategy& s) {
    r.raw("strategy:");
    std::vector<NodeId> stack{t.root()};
    std::vector<NodeId> owned;
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        if (t.is_terminal(v)) continue;
        if (mover_at(t.depth(v)) == s.owner()) {
            owned.push_back(v);
            stack.push_back(s.choice(v));
        } else {
            for (NodeId c : t.children(v)) stack.push_back(c);
        }
    }
    std::sort(owned.begin(), owned.end());
    for (NodeId v : owned)
        r.raw("  " + format_position(t.position(v)) + " -> " + std::to_string(t.label(s.choice(v))));
}

// A covering of the document's tree together with the certificate depth.
struct Built {
    TreePtr tree;
    LeafSet payoff;
    Covering covering;
    int certificate = 0;
    std::optional<BaseCovering> base;
    std::optional<UnionUnraveling> chain;
};

Built build_covering(const GameDocument& doc, int k, bool force_union, const UnravelLimits& limits) {
    Built b;
    b.tree = std::make_shared<const GameTree>(doc.tree);
    b.payoff = realize(doc.tree, doc.payoff);
    if (k < 0) throw InvalidInput("--k must be non-negative");
    if (const auto* u = std::get_if<UnionSpec>(&doc.payoff); u || force_union) {
        if (std::holds_alternative<OpenSpec>(doc.payoff)) throw InvalidInput("--union needs a closed or union payoff");
        const std::vector<ClosedSpec> parts = u ? u->parts : std::vector<ClosedSpec>{std::get<ClosedSpec>(doc.payoff)};
        b.chain = unravel_union(b.tree, parts, k, limits);
        b.covering = b.chain->covering;
        b.certificate = b.chain->certificate_depth;
        return b;
    }
    // An open payoff is unravelled through its closed complement.
    const ClosedSpec& spec = std::holds_alternative<ClosedSpec>(doc.payoff)
                                 ? std::get<ClosedSpec>(doc.payoff)
                                 : std::get<OpenSpec>(doc.payoff).complement;
    b.base = build_base_covering(b.tree, spec, k, limits);
    b.covering = b.base->covering();
    b.certificate = b.base->level() + 2;
    return b;
}

void describe(Report& r, const Built& b) {
    const GameTree& s = *b.covering.source;
    r.add("level", b.covering.level);
    if (b.base) {
        for (const auto& anchor : b.base->anchors()) {
            std::string members;
            for (NodeId z : anchor.z) members += (members.empty() ? "" : ", ") + format_position(b.tree->position(z));
            r.add("z " + format_position(b.tree->position(anchor.node)), "{" + members + "}");
        }
        r.add("level_" + std::to_string(b.covering.level + 1) + "_nodes", s.nodes_at_depth(b.covering.level + 1).size());
    }
    if (b.chain)
        for (std::size_t i = 0; i < b.chain->stages.size(); ++i) {
            const auto& st = b.chain->stages[i];
            r.add("stage " + std::to_string(i), "level " + std::to_string(st.level) + ", generators " +
                                                    std::to_string(st.generators) + ", nodes " +
                                                    std::to_string(st.source_nodes));
        }
    r.add("target_nodes", b.tree->size());
    r.add("source_nodes", s.size());
    r.add("certificate_depth", b.certificate);
}

void transfer_checks(Report& r, const Built& b) {
    const GameTree& s = *b.covering.source;
    const std::string why = "not decided by prefixes of length " + std::to_string(b.certificate);
    r.check("pullback_decided", is_d_decided(s, pullback(b.covering, b.payoff), b.certificate), why);
    r.check("complement_decided",
            is_d_decided(s, pullback(b.covering, complement_within(*b.tree, b.payoff)), b.certificate), why);
    const Player direct = solve(*b.tree, b.payoff).winner;
    try {
        const Solution via = solve_via_covering(b.covering, b.payoff, b.certificate);
        r.add("winner", to_string(via.winner));
        r.check("winner_matches_solve", via.winner == direct, "solve says " + to_string(direct));
    } catch (const NotUnraveled& e) {
        r.check("transfer", false, e.what());
    } catch (const InvariantViolation& e) {
        r.check("transfer", false, e.what());
    }
}

struct Options {
    std::string file;
    int k = 0;
    bool use_union = false;
    int samples = 20;
    std::uint64_t seed = 1;
    int depth = 6;
    int branch = 3;
    std::size_t zmax = 10;
    bool covering = false;
    std::string output;
    int certificate = -1;  // overrides the construction's depth when set
};

int cmd_solve(const Options& o, std::ostream& out) {
    const auto started = std::chrono::steady_clock::now();
    const GameDocument doc = read_game_file(o.file);
    const LeafSet a = realize(doc.tree, doc.payoff);
    Report r("solve");
    r.add("file", o.file);
    r.add("nodes", doc.tree.size());
    r.add("payoff", payoff_kind(doc.payoff));
    r.add("payoff_leaves", a.size());
    const Solution s = solve(doc.tree, a);
    r.add("winner", to_string(s.winner));
    strategy_table(r, doc.tree, s.strategy);
    r.check("winning_strategy", is_winning_strategy(doc.tree, a, s.strategy));
    return r.finish(out, started);
}

int cmd_prune(const Options& o, std::ostream& out) {
    const auto started = std::chrono::steady_clock::now();
    const GameDocument doc = read_game_file(o.file);
    const GameTree& t = doc.tree;
    const LeafSet a = realize(t, doc.payoff);
    Report r("prune");
    r.add("file", o.file);
    const PruneResult pr = prune(t);
    std::size_t removed = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        removed += pr.removed[i] != 0;
        for (Player p : {Player::I, Player::II})
            if (pr.is_taboo_determined(static_cast<NodeId>(i), p) &&
                (i == 0 || !pr.removed[idx(t.parent(static_cast<NodeId>(i)))]))
                r.add("taboo_determined " + format_position(t.position(static_cast<NodeId>(i))), "for " + to_string(p));
    }
    r.add("removed", removed);
    const Player direct = solve(t, a).winner;
    if (pr.root_determined) {
        r.add("root_taboo_determined", to_string(*pr.root_determined));
        r.check("winner_matches_solve", *pr.root_determined == direct, "solve says " + to_string(direct));
        return r.finish(out, started);
    }
    r.add("pruned_nodes", pr.pruned.size());
    const Solution s = solve(pr.pruned, restrict_to_pruned(pr, a));
    r.add("winner", to_string(s.winner));
    r.check("winner_matches_solve", s.winner == direct, "solve says " + to_string(direct));
    try {
        const Strategy moved = transfer_from_pruned(t, pr, s.strategy);
        r.check("transferred_strategy_wins", is_winning_strategy(t, a, moved));
    } catch (const InvariantViolation& e) {
        r.check("transfer", false, e.what());
    }
    return r.finish(out, started);
}

int cmd_unravel(const Options& o, std::ostream& out) {
    const auto started = std::chrono::steady_clock::now();
    const GameDocument doc = read_game_file(o.file);
    Built b = build_covering(doc, o.k, o.use_union, UnravelLimits::from_environment());
    if (o.certificate >= 0) b.certificate = o.certificate;
    Report r("unravel");
    r.add("file", o.file);
    r.add("k", o.k);
    r.add("payoff", payoff_kind(doc.payoff));
    describe(r, b);
    transfer_checks(r, b);
    return r.finish(out, started);
}

int cmd_verify(const Options& o, std::ostream& out) {
    const auto started = std::chrono::steady_clock::now();
    const GameDocument doc = read_game_file(o.file);
    Built b = build_covering(doc, o.k, o.use_union, UnravelLimits::from_environment());
    if (o.certificate >= 0) b.certificate = o.certificate;
    Report r("verify");
    r.add("file", o.file);
    r.add("k", o.k);
    r.add("samples", o.samples);
    r.add("seed", std::to_string(o.seed));
    describe(r, b);
    r.check("position_map", check_position_map(b.covering));
    r.check("strategy_locality", check_strategy_locality(b.covering, o.samples, o.seed));
    CheckResult lifts;
    for (int i = 0; i < o.samples && lifts.ok; ++i)
        for (Player p : {Player::I, Player::II}) {
            const auto stream = static_cast<std::uint64_t>(2 * i + (p == Player::II ? 1 : 0));
            const Strategy s = random_strategy(*b.covering.source, p, derive_seed(o.seed, stream));
            if (lifts = verify_all_lifts(b.covering, s); !lifts.ok) break;
        }
    r.check("lifts", lifts);
    transfer_checks(r, b);
    r.check("liftstrat", check_liftstrat(b.covering, b.payoff, o.samples, o.seed));
    return r.finish(out, started);
}

// One randomized sample of the fuzz command.
struct Sample {
    bool ok = true;
    bool covering_skipped = false;
    std::string failure;
};

Sample fuzz_one(std::uint64_t seed, const Options& o) {
    Sample out;
    auto fail = [&](const std::string& why) {
        out.ok = false;
        out.failure = why;
        return out;
    };
    try {
        Rng rng(seed);
        RandomGameParams params;
        params.depth = 2 * rng.between(1, o.depth / 2);
        params.branch = o.branch;
        const GameTree t = random_tree(rng, params);
        const ClosedSpec spec = random_closed_spec(rng, t, params.max_generators);
        const LeafSet a = realize(t, spec);

        const Solution s = solve(t, a);
        if (!is_winning_strategy(t, a, s.strategy)) return fail("solver strategy does not win");
        if (solve_serial(t, a).winner != s.winner) return fail("serial and parallel solvers disagree");

        const PruneResult pr = prune(t);
        if (pr.root_determined) {
            if (*pr.root_determined != s.winner) return fail("taboo-determined root disagrees with solve");
        } else {
            const Solution ps = solve(pr.pruned, restrict_to_pruned(pr, a));
            if (ps.winner != s.winner) return fail("pruned game has another winner");
            if (!is_winning_strategy(t, a, transfer_from_pruned(t, pr, ps.strategy)))
                return fail("transferred strategy from the pruned tree loses");
        }

        const int k = t.depth_bound() >= 6 && rng.coin() ? 2 : 0;
        const ClosedSpec used = k + 2 < t.depth_bound() ? spec : ClosedSpec{};
        UnravelLimits limits = UnravelLimits::from_environment();
        limits.z_max = o.zmax;
        std::optional<BaseCovering> b;
        try {
            b = build_base_covering(std::make_shared<const GameTree>(t), used, k, limits);
        } catch (const ResourceLimit&) {
            out.covering_skipped = true;
            return out;
        }
        const Covering& c = b->covering();
        const LeafSet pa = b->payoff();
        if (auto r = check_position_map(c); !r) return fail("position map: " + r.detail);
        if (auto r = check_strategy_locality(c, 10, seed); !r) return fail("locality: " + r.detail);
        for (std::uint64_t i = 0; i < 5; ++i)
            for (Player p : {Player::I, Player::II})
                if (auto r = verify_all_lifts(c, random_strategy(*c.source, p, derive_seed(seed, i))); !r)
                    return fail("lift: " + r.detail);
        const LeafSet pulled = pullback(c, pa);
        if (!is_d_decided(*c.source, pulled, b->level() + 2)) return fail("pullback not decided");
        if (!(pulled == b->accept_branch_plays()))
            return fail("pullback differs from the accept-branch plays");
        if (auto r = check_liftstrat(c, pa, 5, seed); !r) return fail("liftstrat: " + r.detail);
        if (solve_via_covering(c, pa, b->level() + 2).winner != solve(t, pa).winner)
            return fail("covering transfer disagrees with solve");
    } catch (const std::exception& e) {
        return fail(std::string("exception: ") + e.what());
    }
    return out;
}

int cmd_fuzz(const Options& o, std::ostream& out) {
    const auto started = std::chrono::steady_clock::now();
    if (o.samples < 0) throw InvalidInput("--samples must be non-negative");
    if (o.depth < 2 || o.depth % 2 != 0) throw InvalidInput("--depth must be even and at least 2");
    if (o.branch < 1) throw InvalidInput("--branch must be positive");
    Report r("fuzz");
    r.add("samples", o.samples);
    r.add("seed", std::to_string(o.seed));
    r.add("depth", o.depth);
    r.add("branch", o.branch);
    r.add("zmax", o.zmax);
    std::vector<Sample> results(static_cast<std::size_t>(o.samples));
    const auto n = static_cast<std::ptrdiff_t>(o.samples);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        results[static_cast<std::size_t>(i)] = fuzz_one(derive_seed(o.seed, static_cast<std::uint64_t>(i)), o);
    std::size_t passed = 0;
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        passed += results[i].ok;
        skipped += results[i].covering_skipped;
        if (!results[i].ok) r.check("sample " + std::to_string(i), false, results[i].failure);
    }
    r.add("passed", std::to_string(passed) + "/" + std::to_string(results.size()));
    r.add("covering_skipped", skipped);
    return r.finish(out, started);
}

int cmd_export_dot(const Options& o, std::ostream& out) {
    const GameDocument doc = read_game_file(o.file);
    const UnravelLimits limits = UnravelLimits::from_environment();
    const LeafSet a = realize(doc.tree, doc.payoff);
    std::string text;
    if (!o.covering) {
        text = tree_to_dot(doc.tree, &a, limits.node_max);
    } else {
        const Built b = build_covering(doc, o.k, o.use_union, limits);
        NodeLabel label;
        if (b.base)
            label = [&](NodeId v) { return b.base->move_label(v); };
        else
            label = [&](NodeId v) { return format_position(b.covering.source->position(v)); };
        text = covering_to_dot(b.covering, &a, label, limits.node_max);
    }
    if (o.output.empty()) {
        out << text;
    } else {
        std::ofstream f(o.output, std::ios::binary);
        if (!(f << text)) throw InvalidInput("cannot write " + o.output);
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Solve and unravel finite games with taboos", "unravel"};
    app.require_subcommand(1);
    Options o;

    auto* solve_cmd = app.add_subcommand("solve", "Solve the game by backward induction");
    solve_cmd->add_option("file", o.file, "Game file")->required();

    auto* prune_cmd = app.add_subcommand("prune", "Remove taboo-determined positions and transfer back");
    prune_cmd->add_option("file", o.file, "Game file")->required();

    auto* unravel_cmd = app.add_subcommand("unravel", "Build a covering that unravels the payoff and solve through it");
    unravel_cmd->add_option("file", o.file, "Game file")->required();
    unravel_cmd->add_option("--k", o.k, "Level up to which the covering is the identity")->required();
    unravel_cmd->add_flag("--union", o.use_union, "Use the iterated construction for unions");
    unravel_cmd->add_option("--d", o.certificate, "Certify at this prefix length instead")->check(CLI::NonNegativeNumber);

    auto* verify_cmd = app.add_subcommand("verify", "Check the covering axioms by sampling");
    verify_cmd->add_option("file", o.file, "Game file")->required();
    verify_cmd->add_option("--k", o.k, "Covering level")->required();
    verify_cmd->add_option("--samples", o.samples, "Sampled strategies and trials")->check(CLI::NonNegativeNumber);
    verify_cmd->add_option("--seed", o.seed, "Random seed");
    verify_cmd->add_flag("--union", o.use_union, "Use the iterated construction for unions");
    verify_cmd->add_option("--d", o.certificate, "Certify at this prefix length instead")->check(CLI::NonNegativeNumber);

    auto* fuzz_cmd = app.add_subcommand("fuzz", "Run the randomized property suite");
    fuzz_cmd->add_option("--samples", o.samples, "Number of random games")->required()->check(CLI::NonNegativeNumber);
    fuzz_cmd->add_option("--seed", o.seed, "Random seed")->required();
    fuzz_cmd->add_option("--depth", o.depth, "Largest depth bound (even)");
    fuzz_cmd->add_option("--branch", o.branch, "Largest branching");
    fuzz_cmd->add_option("--zmax", o.zmax, "Largest Z-set the covering may decorate");

    auto* dot_cmd = app.add_subcommand("export-dot", "Write the tree, or a covering of it, as Graphviz");
    dot_cmd->add_option("file", o.file, "Game file")->required();
    dot_cmd->add_flag("--covering", o.covering, "Export the base covering next to the tree");
    dot_cmd->add_option("--k", o.k, "Covering level");
    dot_cmd->add_flag("--union", o.use_union, "Use the iterated construction for unions");
    dot_cmd->add_option("-o,--output", o.output, "Output file instead of standard output");

    std::vector<std::string> argv_storage{"unravel"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (solve_cmd->parsed()) return cmd_solve(o, out);
        if (prune_cmd->parsed()) return cmd_prune(o, out);
        if (unravel_cmd->parsed()) return cmd_unravel(o, out);
        if (verify_cmd->parsed()) return cmd_verify(o, out);
        if (fuzz_cmd->parsed()) return cmd_fuzz(o, out);
        if (dot_cmd->parsed()) return cmd_export_dot(o, out);
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ResourceLimit& e) {
        err << "error: resource limit: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NotUnraveled& e) {
        err << "violation: " << e.what() << '\n';
        return kExitViolation;
    } catch (const InvariantViolation& e) {
        err << "violation: " << e.what() << '\n';
        return kExitViolation;
    }
    return kExitUsage;
}

}  // namespace unravel
