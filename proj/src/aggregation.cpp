#include "manetmon/aggregation.hpp"

#include <algorithm>
#include <stdexcept>

namespace manetmon {

std::optional<MonitorFunction> parse_function(const std::string& s) {
    auto open = s.find('(');
    if (open == std::string::npos || s.empty() || s.back() != ')') return std::nullopt;
    std::string kind = s.substr(0, open);
    std::string metric = s.substr(open + 1, s.size() - open - 2);
    if (metric.empty()) return std::nullopt;

    MonitorFunction f;
    f.metric = metric;
    if (kind == "avg")        f.kind = AggKind::Avg;
    else if (kind == "sum")   f.kind = AggKind::Sum;
    else if (kind == "count") f.kind = AggKind::Count;
    else if (kind == "min")   f.kind = AggKind::Min;
    else if (kind == "max")   f.kind = AggKind::Max;
    else return std::nullopt;
    return f;
}

std::string to_string(const MonitorFunction& f) {
    const char* kind = "?";
    switch (f.kind) {
        case AggKind::Avg:   kind = "avg"; break;
        case AggKind::Sum:   kind = "sum"; break;
        case AggKind::Count: kind = "count"; break;
        case AggKind::Min:   kind = "min"; break;
        case AggKind::Max:   kind = "max"; break;
    }
    return std::string(kind) + "(" + f.metric + ")";
}

PartialAggregate local_observe(double value, const MonitorFunction& f) {
    if (f.kind == AggKind::Count) return {1.0, 1};
    return {value, 1};
}

PartialAggregate merge(const PartialAggregate& a, const PartialAggregate& b,
                       const MonitorFunction& f) {
    if (a.observations == 0) return b;    // neutral absorbs exactly
    if (b.observations == 0) return a;

    PartialAggregate out;
    out.observations = a.observations + b.observations;
    switch (f.kind) {
        case AggKind::Avg:
            out.value = (a.value * static_cast<double>(a.observations) +
                         b.value * static_cast<double>(b.observations)) /
                        static_cast<double>(out.observations);
            break;
        case AggKind::Sum:
        case AggKind::Count:
            out.value = a.value + b.value;
            break;
        case AggKind::Min:
            out.value = std::min(a.value, b.value);
            break;
        case AggKind::Max:
            out.value = std::max(a.value, b.value);
            break;
    }
    return out;
}

double finalize(const PartialAggregate& p, const MonitorFunction&) {
    if (p.observations == 0)
        throw std::logic_error("cannot finalize an empty aggregate");
    return p.value;
}

}  // namespace manetmon
