#pragma once

#include <string>
#include <vector>

namespace crfuchs {

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    std::string joined() const
    {
        std::string s;
        for (const auto& v : violations) {
            if (!s.empty()) s += "; ";
            s += v;
        }
        return s;
    }
};

/// One order inequality `ord subject >= bound` instantiated at concrete indices.
struct OrderCondition {
    std::string subject;    // "h[2,3]" or "Phi[1,3]"
    std::string bound_expr; // "2m-2"
    int bound = 0;
    int ord = 0;            // large sentinel when the series vanishes to its cap
    bool decidable = true;
    bool holds = true;

    std::string describe() const
    {
        if (!decidable)
            return "ord " + subject + " undecided at the current caps (need " + bound_expr +
                   " = " + std::to_string(bound) + ")";
        std::string o = ord >= (1 << 20) ? std::string("inf") : std::to_string(ord);
        std::string rel = holds ? " >= " : " < ";
        return "ord " + subject + " = " + o + rel + bound_expr + " = " + std::to_string(bound);
    }
};

/// Builds an OrderCondition from an order read on a truncated series.
/// `vanishes_to_cap` means the series is identically zero up to `depth_avail`;
/// `representable` is false when the series lies beyond the stored index caps.
inline OrderCondition make_order_condition(std::string subject, std::string bound_expr, int bound,
                                           bool vanishes_to_cap, int ord, int depth_avail,
                                           bool representable)
{
    OrderCondition c;
    c.subject = std::move(subject);
    c.bound_expr = std::move(bound_expr);
    c.bound = bound;
    if (!representable) {
        c.decidable = false;
        c.holds = false;
        c.ord = 1 << 20;
        return c;
    }
    if (vanishes_to_cap) {
        c.ord = 1 << 20;
        if (depth_avail + 1 >= bound) {
            c.holds = true;
        } else {
            c.decidable = false;
            c.holds = false;
        }
    } else {
        c.ord = ord;
        c.holds = ord >= bound;
    }
    return c;
}

struct FuchsVerdict {
    bool decidable = true;
    bool fuchsian = true;
    std::vector<OrderCondition> conditions;

    const OrderCondition* first_violation() const
    {
        for (const auto& c : conditions)
            if (c.decidable && !c.holds) return &c;
        return nullptr;
    }
    const OrderCondition* first_undecidable() const
    {
        for (const auto& c : conditions)
            if (!c.decidable) return &c;
        return nullptr;
    }

    /// Recomputes the summary flags. A definite violation decides the
    /// question even when other entries are open.
    void finalize()
    {
        decidable = true;
        fuchsian = true;
        for (const auto& c : conditions) {
            if (!c.decidable)
                decidable = false;
            else if (!c.holds)
                fuchsian = false;
        }
        if (!fuchsian) decidable = true;
    }
};

} // namespace crfuchs
