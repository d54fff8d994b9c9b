#include "manetmon/protocol.hpp"

#include <algorithm>

#include "manetmon/vht.hpp"

namespace manetmon {

const char* state_name(AutomatonState s) {
    switch (s) {
        case AutomatonState::Initial: return "INITIAL";
        case AutomatonState::Q1:      return "Q1";
        case AutomatonState::Q2:      return "Q2";
        case AutomatonState::A1:      return "A1";
        case AutomatonState::A2:      return "A2";
        case AutomatonState::A3:      return "A3";
    }
    return "?";
}

NodeCtx make_node(std::string addr, double observation) {
    NodeCtx ctx;
    ctx.self_addr = std::move(addr);
    ctx.observation = observation;
    return ctx;
}

namespace {

// Wire parent field carries the sender's own parent; the root, having none,
// stamps its own address as the sentinel.
std::string wire_parent(const NodeCtx& ctx) {
    return ctx.parent ? *ctx.parent : ctx.self_addr;
}

Message own_aggregate(const NodeCtx& ctx, MessageType type, const std::string& destination) {
    Message m;
    m.type = type;
    m.parent = wire_parent(ctx);
    m.source = ctx.self_addr;
    m.timeout_ms = ctx.timeout_ms;
    m.aggregate = AggregatePayload{ctx.partial.value, destination, ctx.partial.observations};
    return m;
}

void arm(StepResult& r, int ms) {
    r.effects.push_back(SetTimer{ms});
    r.ctx.timer_active = true;
}

// Own result goes out as a broadcast: the parent merges it, everyone else
// ignores it, and our own children waiting in A1 hear it as their ack.
void send_own_result(StepResult& r) {
    NodeCtx& ctx = r.ctx;
    r.effects.push_back(SendBroadcast{own_aggregate(ctx, MessageType::Aggregate, *ctx.parent)});
    ctx.state = AutomatonState::A1;
    arm(r, ctx.timeout_ms);
}

void finish_round_as_root(StepResult& r, bool timer_pending) {
    NodeCtx& ctx = r.ctx;
    r.effects.push_back(Verdict{finalize(ctx.partial, ctx.function), ctx.partial.observations});
    // Final broadcast addressed to self: carries the round's result and acks
    // every child still waiting in A1.
    r.effects.push_back(SendBroadcast{own_aggregate(ctx, MessageType::Aggregate, ctx.self_addr)});
    if (timer_pending) {
        r.effects.push_back(CancelTimer{});
        ctx.timer_active = false;
    }
    ctx.state = AutomatonState::Initial;
}

StepResult handle_start(NodeCtx ctx, const EvStart& ev) {
    StepResult r{std::move(ctx), {}};
    if (!r.ctx.is_root || r.ctx.state != AutomatonState::Initial)
        return r;    // only an idle root may begin a round

    NodeCtx& c = r.ctx;
    c.function = ev.function;
    c.parent.reset();
    c.own_relay_set.clear();
    c.acked_children.clear();
    c.merged_sources.clear();
    c.forward_candidates.clear();
    c.partial = local_observe(c.observation, c.function);

    Message q;
    q.type = MessageType::Query;
    q.parent = c.self_addr;
    q.source = c.self_addr;
    q.timeout_ms = c.timeout_ms;
    q.query = QueryPayload{to_string(c.function), advertise_relay_set(c)};
    r.effects.push_back(SendBroadcast{q});
    c.state = AutomatonState::Q1;
    arm(r, c.timeout_ms);
    return r;
}

StepResult handle_query(NodeCtx ctx, const Message& msg) {
    StepResult r{std::move(ctx), {}};
    NodeCtx& c = r.ctx;

    if (c.state == AutomatonState::Initial) {
        // Adopt unconditionally: first query heard wins the parent slot.
        c.is_root = false;
        c.parent = msg.source;
        auto f = parse_function(msg.query->function);
        if (!f) return r;    // unparseable function slips past wire checks only in tests
        c.function = *f;
        c.timeout_ms = msg.timeout_ms;
        c.own_relay_set = msg.query->relay_set;
        c.acked_children.clear();
        c.merged_sources.clear();
        c.forward_candidates.clear();
        c.partial = local_observe(c.observation, c.function);

        Message rebroadcast;
        rebroadcast.type = MessageType::Query;
        rebroadcast.parent = *c.parent;    // doubles as our ack to the parent
        rebroadcast.source = c.self_addr;
        rebroadcast.timeout_ms = c.timeout_ms;
        rebroadcast.query = QueryPayload{msg.query->function, advertise_relay_set(c)};
        r.effects.push_back(SendBroadcast{rebroadcast});
        c.state = AutomatonState::Q1;
        arm(r, c.timeout_ms);
        return r;
    }

    if ((c.state == AutomatonState::Q1 || c.state == AutomatonState::Q2) &&
        msg.parent == c.self_addr) {
        // A neighbor adopted us: its rebroadcast is our QueryACK.
        c.acked_children.insert(msg.source);
        c.state = AutomatonState::Q2;
        arm(r, c.timeout_ms * kQ2WaitFactor);
        return r;
    }

    return r;    // someone else's dissemination; drop
}

StepResult handle_aggregate_family(NodeCtx ctx, const Message& msg, Via via) {
    StepResult r{std::move(ctx), {}};
    NodeCtx& c = r.ctx;
    const AggregatePayload& in = *msg.aggregate;

    // Ack classification for nodes that already sent their own result.
    if (c.state == AutomatonState::A1 || c.state == AutomatonState::A2 ||
        c.state == AutomatonState::A3) {
        const bool explicit_ack =
            msg.type == MessageType::AggregateAck && in.destination == c.self_addr;
        const bool overheard_parent =
            msg.type == MessageType::Aggregate && via == Via::Broadcast &&
            c.parent && msg.source == *c.parent;
        if (explicit_ack || overheard_parent) {
            r.effects.push_back(CancelTimer{});
            c.timer_active = false;
            c.state = AutomatonState::Initial;
        }
        return r;    // anything else (late grandchild data, foreign traffic): drop
    }

    if (c.state != AutomatonState::Q2 || msg.type == MessageType::AggregateAck)
        return r;
    if (in.destination != c.self_addr) return r;
    if (c.merged_sources.count(msg.source)) return r;    // duplicate; already folded

    c.partial = merge(c.partial, PartialAggregate{in.outcome, in.observations}, c.function);
    c.merged_sources.insert(msg.source);

    if (via == Via::Routed) {
        // Sender is out of earshot, so it can't overhear our own broadcast
        // later; ack it explicitly over the same multi-hop routing.
        Message ack;
        ack.type = MessageType::AggregateAck;
        ack.parent = wire_parent(c);
        ack.source = c.self_addr;
        ack.timeout_ms = c.timeout_ms;
        ack.aggregate = AggregatePayload{in.outcome, msg.source, in.observations};
        r.effects.push_back(SendRouted{msg.source, ack});
    }

    const bool all_children_in = std::includes(
        c.merged_sources.begin(), c.merged_sources.end(),
        c.acked_children.begin(), c.acked_children.end());
    if (all_children_in) {
        if (c.is_root) {
            finish_round_as_root(r, /*timer_pending=*/true);
        } else {
            send_own_result(r);
        }
    } else {
        arm(r, c.timeout_ms * kQ2WaitFactor);
    }
    return r;
}

StepResult handle_timer(NodeCtx ctx) {
    StepResult r{std::move(ctx), {}};
    NodeCtx& c = r.ctx;
    if (!c.timer_active) return r;
    c.timer_active = false;

    switch (c.state) {
        case AutomatonState::Initial:
            return r;

        case AutomatonState::Q1:
            if (c.is_root) {
                // Nobody adopted us: a single-node network. Report our own sample.
                r.effects.push_back(Verdict{finalize(c.partial, c.function),
                                            c.partial.observations});
                r.effects.push_back(CancelTimer{});
                c.state = AutomatonState::Initial;
            } else {
                send_own_result(r);    // leaf: nothing below us to wait for
            }
            return r;

        case AutomatonState::Q2:
            // Some acked child never reported; proceed with what we have.
            if (c.is_root) {
                finish_round_as_root(r, /*timer_pending=*/false);
            } else {
                send_own_result(r);
            }
            return r;

        case AutomatonState::A1:
            // No ack: maybe the parent moved out of range. Retry over routing.
            r.effects.push_back(SendRouted{
                *c.parent, own_aggregate(c, MessageType::AggregateRoute, *c.parent)});
            c.state = AutomatonState::A2;
            arm(r, c.timeout_ms);
            return r;

        case AutomatonState::A2:
            c.forward_candidates = c.own_relay_set;
            [[fallthrough]];    // first forward is the same move as a retry

        case AutomatonState::A3:
            if (c.forward_candidates.empty()) {
                r.effects.push_back(ReportError{
                    c.state == AutomatonState::A2
                        ? "no relay candidates"
                        : "node unreachable: out of network range or major outage"});
                c.state = AutomatonState::Initial;
                return r;
            }
            {
                std::string relay = c.forward_candidates.front();
                c.forward_candidates.erase(c.forward_candidates.begin());
                r.effects.push_back(SendRouted{
                    relay, own_aggregate(c, MessageType::AggregateForward, relay)});
                c.state = AutomatonState::A3;
                arm(r, c.timeout_ms);
            }
            return r;
    }
    return r;
}

}  // namespace

StepResult step(NodeCtx ctx, const Event& ev) {
    if (const auto* start = std::get_if<EvStart>(&ev))
        return handle_start(std::move(ctx), *start);

    if (std::holds_alternative<EvTimerFired>(ev))
        return handle_timer(std::move(ctx));

    const auto& me = std::get<EvMessage>(ev);
    if (!validate(me.msg).empty())
        return {std::move(ctx), {}};    // never act on a malformed packet

    if (me.msg.type == MessageType::Query)
        return handle_query(std::move(ctx), me.msg);
    return handle_aggregate_family(std::move(ctx), me.msg, me.via);
}

}  // namespace manetmon
