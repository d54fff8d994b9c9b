#pragma once

#include <cstdint>
#include <optional>
#include <string>

// Aggregation algebra: what each node computes locally and how partial
// results combine on the way to the root. Merge is commutative and
// associative (AVG up to floating-point rounding), the (value=0, obs=0)
// element is neutral, so results do not depend on arrival order.

namespace manetmon {

enum class AggKind { Avg, Sum, Count, Min, Max };

struct MonitorFunction {
    AggKind kind = AggKind::Avg;
    std::string metric;    // e.g. "cpu"; opaque to the algebra

    bool operator==(const MonitorFunction&) const = default;
};

// Wire syntax "<kind>(<metric>)", e.g. "avg(cpu)".
std::optional<MonitorFunction> parse_function(const std::string& s);
std::string to_string(const MonitorFunction& f);

struct PartialAggregate {
    double value = 0.0;
    std::uint64_t observations = 0;

    bool operator==(const PartialAggregate&) const = default;
};

inline constexpr PartialAggregate kNeutralPartial{0.0, 0};

// One node's own contribution.
PartialAggregate local_observe(double value, const MonitorFunction& f);

PartialAggregate merge(const PartialAggregate& a, const PartialAggregate& b,
                       const MonitorFunction& f);

// Collapses a partial into the final verdict value. The neutral element has
// no observations to report, so finalizing it throws std::logic_error.
double finalize(const PartialAggregate& p, const MonitorFunction& f);

}  // namespace manetmon
