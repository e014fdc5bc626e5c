#include "unravel/union.hpp"

#include <string>

#include "unravel/errors.hpp"

namespace unravel {

namespace {

std::string stage_name(std::size_t n) { return "stage " + std::to_string(n); }

}  // namespace

UnionUnraveling unravel_union(TreePtr t, const std::vector<ClosedSpec>& parts, int k, const UnravelLimits& limits) {
    if (k < 0) throw InvalidInput("unravel_union: level must be non-negative");
    UnionUnraveling out;
    if (parts.empty()) {
        out.covering = identity_covering(t);
        out.certificate_depth = 0;
        return out;
    }
    const int base = k + k % 2;
    const int depth_bound = t->depth_bound();
    for (const auto& part : parts) validate_closed_spec(*t, part);

    if (parts.size() == 1) {
        BaseCovering only = build_base_covering(t, parts.front(), base, limits);
        out.stages.push_back({base, parts.front().generators.size(), only.unraveled().size()});
        out.covering = only.covering();
        out.certificate_depth = base + 2;
        return out;
    }

    Covering composite = identity_covering(t);
    TreePtr current = t;
    int last_level = base;
    for (std::size_t n = 0; n < parts.size(); ++n) {
        const int level = base + 2 * static_cast<int>(n);
        if (level + 2 >= depth_bound)
            throw InvalidInput(stage_name(n) + ": depth exhausted, level " + std::to_string(level) +
                               " needs level + 2 < D = " + std::to_string(depth_bound));
        const ClosedSpec pulled = pullback(composite, parts[n]);
        BaseCovering stage = [&] {
            try {
                return build_base_covering(current, pulled, level, limits);
            } catch (const InvalidInput& e) {
                throw InvalidInput(stage_name(n) + ": " + e.what());
            } catch (const ResourceLimit& e) {
                throw ResourceLimit(stage_name(n) + ": " + e.what());
            }
        }();
        composite = compose(composite, stage.covering());
        current = stage.covering().source;
        out.stages.push_back({level, pulled.generators.size(), current->size()});
        last_level = level;
    }

    // Every part is now decided by its stage's level + 2, which later stages
    // leave untouched, so the whole union is decided at the last one.
    const LeafSet union_set = realize(*t, PayoffSpec{UnionSpec{parts}});
    const LeafSet pulled_union = pullback(composite, union_set);
    const int decided_at = last_level + 2;
    if (!is_d_decided(*current, pulled_union, decided_at))
        throw InvariantViolation("pulled-back union is not " + std::to_string(decided_at) + "-decided");
    const ClosedSpec complement = decided_set_to_closed_spec(*current, pulled_union, decided_at);

    BaseCovering last = [&] {
        try {
            return build_base_covering(current, complement, base, limits);
        } catch (const ResourceLimit& e) {
            throw ResourceLimit("final stage: " + std::string(e.what()));
        }
    }();
    composite = compose(composite, last.covering());
    out.stages.push_back({base, complement.generators.size(), last.unraveled().size()});
    out.covering = std::move(composite);
    out.certificate_depth = base + 2;
    return out;
}

}  // namespace unravel
