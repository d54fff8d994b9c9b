#pragma once

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "manetmon/aggregation.hpp"
#include "manetmon/wire.hpp"

// Per-node protocol automaton. step() is a pure function from
// (context, event) to (context', effects): no I/O, no clocks, no RNG.
// The host (simulator or a real transport) owns timers and radio.
//
// States: INITIAL (idle) -> Q1 (query sent, no child yet) -> Q2 (children
// acked, collecting results) -> A1/A2/A3 (own result sent; waiting for an
// ack, then escalating via routed resend and relay forwarding).

namespace manetmon {

enum class AutomatonState { Initial, Q1, Q2, A1, A2, A3 };

const char* state_name(AutomatonState s);

// A Q2 node must outwait a child that walks the whole A1->A2->A3 ladder
// (three timeouts) before its forward arrives, so Q2 arms a longer window.
inline constexpr int kQ2WaitFactor = 4;

struct NodeCtx {
    std::string self_addr;
    double observation = 0.0;          // this node's own metric sample
    bool is_root = false;
    AutomatonState state = AutomatonState::Initial;
    std::optional<std::string> parent;
    std::vector<std::string> own_relay_set;     // fallback ancestors, nearest first
    MonitorFunction function;
    int timeout_ms = 0;
    std::set<std::string> acked_children;       // adopted us during dissemination
    std::set<std::string> merged_sources;       // already folded into partial
    PartialAggregate partial;
    std::vector<std::string> forward_candidates;  // remaining A3 targets
    bool timer_active = false;

    bool operator==(const NodeCtx&) const = default;
};

NodeCtx make_node(std::string addr, double observation);

// ---- events -------------------------------------------------------------

enum class Via { Broadcast, Unicast, Routed };

struct EvStart {                       // root only, begins a round
    MonitorFunction function;
};
struct EvMessage {
    Message msg;
    Via via = Via::Broadcast;
};
struct EvTimerFired {};

using Event = std::variant<EvStart, EvMessage, EvTimerFired>;

// ---- effects ------------------------------------------------------------

struct SendBroadcast { Message msg; bool operator==(const SendBroadcast&) const = default; };
struct SendUnicast   { std::string dest; Message msg; bool operator==(const SendUnicast&) const = default; };
struct SendRouted    { std::string dest; Message msg; bool operator==(const SendRouted&) const = default; };
struct SetTimer      { int ms = 0; bool operator==(const SetTimer&) const = default; };
struct CancelTimer   { bool operator==(const CancelTimer&) const = default; };
struct Verdict       { double value = 0.0; std::uint64_t observations = 0;
                       bool operator==(const Verdict&) const = default; };
struct ReportError   { std::string reason; bool operator==(const ReportError&) const = default; };

using Effect = std::variant<SendBroadcast, SendUnicast, SendRouted, SetTimer,
                            CancelTimer, Verdict, ReportError>;

struct StepResult {
    NodeCtx ctx;
    std::vector<Effect> effects;
};

// Total over every (state, event) pair; unexpected input is discarded with
// an unchanged context rather than rejected with a throw.
StepResult step(NodeCtx ctx, const Event& ev);

}  // namespace manetmon
