#include "manetmon/simulator.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <queue>
#include <set>
#include <stdexcept>

namespace manetmon {

using ordered_json = nlohmann::ordered_json;

// ---- randomness ---------------------------------------------------------

static std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

std::uint64_t Rng::next_below(std::uint64_t n) { return n ? next_u64() % n : 0; }

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t s = a;
    s = splitmix64(s) ^ b;
    s = splitmix64(s) ^ c;
    return splitmix64(s);
}

// Stream tags keep the independent random streams decoupled from each other.
namespace stream {
constexpr std::uint64_t kPlacement = 1;
constexpr std::uint64_t kObservations = 2;
constexpr std::uint64_t kRoot = 3;
constexpr std::uint64_t kDelivery = 4;
constexpr std::uint64_t kWaypoints = 5;
}  // namespace stream

// ---- geometry and placement ---------------------------------------------

bool adjacent(const Vec2& a, const Vec2& b, double range) {
    if (&a == &b) return false;
    double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy <= range * range;
}

std::vector<Vec2> place_grid(int n, double spacing, double area_w, double area_h) {
    if (n < 1) throw std::invalid_argument("node_count must be >= 1");
    if (spacing <= 0) throw std::invalid_argument("grid_spacing must be > 0");
    int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    double extent = (side - 1) * spacing;
    if (extent > area_w || extent > area_h)
        throw std::invalid_argument("grid_spacing: lattice does not fit the area");
    std::vector<Vec2> pos;
    pos.reserve(n);
    for (int k = 0; k < n; ++k)
        pos.push_back({(k % side) * spacing, (k / side) * spacing});
    return pos;
}

std::vector<Vec2> place_random(int n, double area_w, double area_h, std::uint64_t seed) {
    Rng rng(mix_seed(seed, stream::kPlacement));
    std::vector<Vec2> pos;
    pos.reserve(n);
    for (int k = 0; k < n; ++k)
        pos.push_back({rng.next_in(0.0, area_w), rng.next_in(0.0, area_h)});
    return pos;
}

std::vector<int> routed_path(int from, int to, const std::vector<Vec2>& pos, double range) {
    const int n = static_cast<int>(pos.size());
    if (from == to || from < 0 || to < 0 || from >= n || to >= n) return {};
    std::vector<int> prev(n, -1);
    std::deque<int> frontier{from};
    prev[from] = from;
    while (!frontier.empty()) {
        int cur = frontier.front();
        frontier.pop_front();
        if (cur == to) break;
        for (int next = 0; next < n; ++next) {
            if (prev[next] != -1 || next == cur) continue;
            if (!adjacent(pos[cur], pos[next], range)) continue;
            prev[next] = cur;
            frontier.push_back(next);
        }
    }
    if (prev[to] == -1) return {};
    std::vector<int> path;
    for (int cur = to; cur != from; cur = prev[cur]) path.push_back(cur);
    path.push_back(from);
    std::reverse(path.begin(), path.end());
    return path;
}

RwpState rwp_step(RwpState s, double dt_s, double speed, double pause_s,
                  double area_w, double area_h, Rng& rng) {
    double left = dt_s;
    while (left > 1e-12) {
        if (s.pause_left_s > 0.0) {
            double consumed = std::min(s.pause_left_s, left);
            s.pause_left_s -= consumed;
            left -= consumed;
            continue;
        }
        double dx = s.target.x - s.pos.x, dy = s.target.y - s.pos.y;
        double dist = std::hypot(dx, dy);
        double reach = speed * left;
        if (reach < dist) {
            s.pos.x += dx / dist * reach;
            s.pos.y += dy / dist * reach;
            left = 0.0;
        } else {
            s.pos = s.target;
            left -= (speed > 0.0 ? dist / speed : left);
            s.pause_left_s = pause_s;
            s.target = {rng.next_in(0.0, area_w), rng.next_in(0.0, area_h)};
        }
    }
    return s;
}

// ---- config -------------------------------------------------------------

std::vector<std::string> validate_config(const ScenarioConfig& cfg) {
    std::vector<std::string> bad;
    if (cfg.node_count < 1) bad.push_back("node_count: must be >= 1");
    if (cfg.area_w <= 0 || cfg.area_h <= 0) bad.push_back("area: must be positive");
    if (cfg.radio_range <= 0) bad.push_back("radio_range: must be > 0");
    if (cfg.placement == Placement::Grid && cfg.node_count >= 1 && cfg.area_w > 0 &&
        cfg.area_h > 0) {
        if (cfg.grid_spacing <= 0) {
            bad.push_back("grid_spacing: must be > 0");
        } else {
            int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(cfg.node_count))));
            double extent = (side - 1) * cfg.grid_spacing;
            if (extent > cfg.area_w || extent > cfg.area_h)
                bad.push_back("grid_spacing: lattice does not fit the area");
        }
    }
    if (cfg.root_index < -1 || cfg.root_index >= cfg.node_count)
        bad.push_back("root: index out of range");
    if (cfg.function.metric.empty()) bad.push_back("function: metric is empty");
    if (cfg.timeout_ms <= 0) bad.push_back("timeout_ms: must be > 0");
    if (cfg.hop_latency_base_ms <= 0) bad.push_back("hop_latency_base_ms: must be > 0");
    if (cfg.hop_latency_jitter_ms < 0 || cfg.hop_latency_jitter_ms > cfg.hop_latency_base_ms)
        bad.push_back("hop_latency_jitter_ms: must be in [0, base]");
    if (cfg.loss_prob < 0 || cfg.loss_prob > 1) bad.push_back("loss_prob: must be in [0, 1]");
    if (cfg.mobility == MobilityModel::RandomWaypoint && cfg.rwp_speed <= 0)
        bad.push_back("rwp_speed: must be > 0 when mobility = rwp");
    if (cfg.rwp_pause_s < 0) bad.push_back("rwp_pause_s: must be >= 0");
    if (cfg.move_update_ms <= 0) bad.push_back("move_update_ms: must be > 0");
    if (cfg.duration_ms <= 0) bad.push_back("duration_ms: must be > 0");
    if (cfg.observation_min > cfg.observation_max)
        bad.push_back("observation: min must be <= max");
    for (const auto& mv : cfg.scripted_moves)
        if (mv.node < 0 || mv.node >= cfg.node_count || mv.at_ms < 0)
            bad.push_back("scripted_moves: bad node index or time");
    return bad;
}

std::string node_address(int index) {
    int host = index + 1;    // skip the .0 address
    return "10.0." + std::to_string(host / 256) + "." + std::to_string(host % 256);
}

// ---- engine -------------------------------------------------------------

namespace {

// Lower kind value pops first at equal timestamps: scripted moves reshape the
// world, then arrivals, then timers (a timeout means nothing arrived in the
// window, so a coinciding arrival must win), then motion ticks.
enum EventKind { kScript = 0, kDeliver = 1, kTimer = 2, kMove = 3 };

struct SimEvent {
    std::int64_t t_us = 0;
    int kind = kDeliver;
    std::uint64_t seq = 0;
    // deliver
    int to = -1;
    Message msg;
    Via via = Via::Broadcast;
    std::map<int, int> covered;    // oracle: node index -> times folded into msg's aggregate
    // timer
    int node = -1;
    std::uint64_t timer_gen = 0;
    // script
    int script_index = -1;
};

struct EventOrder {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
        if (a.t_us != b.t_us) return a.t_us > b.t_us;
        if (a.kind != b.kind) return a.kind > b.kind;
        return a.seq > b.seq;
    }
};

class Simulation {
public:
    Simulation(const ScenarioConfig& cfg, const RunOptions& opts)
        : cfg_(cfg), opts_(opts), delivery_rng_(mix_seed(cfg.seed, stream::kDelivery)) {}

    RunMetrics run();

private:
    const ScenarioConfig& cfg_;
    RunOptions opts_;
    Rng delivery_rng_;
    std::int64_t now_us_ = 0;
    std::uint64_t next_seq_ = 0;
    std::priority_queue<SimEvent, std::vector<SimEvent>, EventOrder> queue_;

    std::vector<NodeCtx> nodes_;
    std::vector<Vec2> pos_;
    std::vector<RwpState> motion_;
    std::vector<Rng> waypoint_rng_;
    std::vector<std::uint64_t> timer_gen_;
    std::vector<std::map<int, int>> covered_;
    std::map<std::string, int> index_of_;
    int root_ = 0;
    RunMetrics metrics_;
    std::string trace_;
    bool vht_emitted_ = false;

    void push(SimEvent ev) {
        ev.seq = next_seq_++;
        queue_.push(std::move(ev));
    }

    std::int64_t hop_delay_us() {
        double ms = cfg_.hop_latency_base_ms;
        if (cfg_.hop_latency_jitter_ms > 0)
            ms += cfg_.hop_latency_jitter_ms * (2.0 * delivery_rng_.next_unit() - 1.0);
        auto us = static_cast<std::int64_t>(std::llround(ms * 1000.0));
        return std::max<std::int64_t>(us, 1);
    }

    bool lost() { return cfg_.loss_prob > 0 && delivery_rng_.next_unit() < cfg_.loss_prob; }

    double t_ms() const { return static_cast<double>(now_us_) / 1000.0; }

    void trace_record(ordered_json j) {
        if (!opts_.record_trace) return;
        trace_ += j.dump();
        trace_ += '\n';
    }

    ordered_json payload_json(const Message& m) { return ordered_json::parse(encode_message(m)); }

    void record_send(int from, const Message& msg, const char* via) {
        std::string bytes = encode_message(msg);
        metrics_.messages_total++;
        metrics_.messages_by_type[type_tag(msg.type)]++;
        metrics_.total_bytes += static_cast<std::int64_t>(bytes.size());
        if (opts_.record_trace) {
            ordered_json j;
            j["t"] = t_ms();
            j["node"] = nodes_[from].self_addr;
            j["kind"] = "send";
            j["via"] = via;
            j["payload"] = ordered_json::parse(bytes);
            trace_record(std::move(j));
        }
    }

    void emit_vht() {
        if (vht_emitted_) return;
        vht_emitted_ = true;
        metrics_.vht = extract_vht(nodes_);
        if (!opts_.record_trace) return;
        ordered_json j;
        j["t"] = t_ms();
        j["node"] = nodes_[root_].self_addr;
        j["kind"] = "vht";
        j["root"] = metrics_.vht.root;
        ordered_json edges = ordered_json::array();
        for (const auto& e : metrics_.vht.edges)
            edges.push_back(ordered_json::array({e.child, e.parent}));
        j["edges"] = std::move(edges);
        j["unreached"] = metrics_.vht.unreached;
        trace_record(std::move(j));
    }

    // A node can legitimately be folded twice: its parent merged the
    // broadcast, the ack back got lost, and the escalated forward delivered
    // the same data again through a relay. The oracle therefore carries
    // multiplicities; duplicates are reported, not treated as corruption.
    void check_verdict(const Verdict& v) {
        const std::map<int, int>& covered = covered_[root_];
        auto mismatch = [&](std::string why) {
            metrics_.aggregation_check_ok = false;
            metrics_.aggregation_check_detail = std::move(why);
        };
        std::uint64_t tally = 0;
        for (const auto& [i, times] : covered) {
            tally += static_cast<std::uint64_t>(times);
            metrics_.duplicate_observations += times - 1;
        }
        if (v.observations != tally)
            return mismatch("verdict counts " + std::to_string(v.observations) +
                            " observations, direct tally is " + std::to_string(tally));
        // Direct fold, deliberately not reusing the merge path.
        double expected = 0.0;
        switch (cfg_.function.kind) {
            case AggKind::Avg: {
                double sum = 0.0;
                for (const auto& [i, times] : covered) sum += times * nodes_[i].observation;
                expected = sum / static_cast<double>(tally);
                break;
            }
            case AggKind::Sum: {
                double sum = 0.0;
                for (const auto& [i, times] : covered) sum += times * nodes_[i].observation;
                expected = sum;
                break;
            }
            case AggKind::Count:
                expected = static_cast<double>(tally);
                break;
            case AggKind::Min: {
                expected = nodes_[covered.begin()->first].observation;
                for (const auto& [i, times] : covered)
                    expected = std::min(expected, nodes_[i].observation);
                break;
            }
            case AggKind::Max: {
                expected = nodes_[covered.begin()->first].observation;
                for (const auto& [i, times] : covered)
                    expected = std::max(expected, nodes_[i].observation);
                break;
            }
        }
        double tolerance = 1e-9 * std::max(1.0, std::abs(expected));
        if (std::abs(v.value - expected) > tolerance)
            mismatch("verdict " + std::to_string(v.value) + " differs from direct fold " +
                     std::to_string(expected));
    }

    void apply_effects(int i, const std::vector<Effect>& effects);
    void start_round();
    void process(const SimEvent& ev);
    void handle_deliver(const SimEvent& ev);
};

void Simulation::apply_effects(int i, const std::vector<Effect>& effects) {
    for (const Effect& effect : effects) {
        if (const auto* send = std::get_if<SendBroadcast>(&effect)) {
            record_send(i, send->msg, "broadcast");
            std::map<int, int> covered =
                send->msg.aggregate ? covered_[i] : std::map<int, int>{};
            // Neighborhood is evaluated here, at send time.
            for (int j = 0; j < cfg_.node_count; ++j) {
                if (j == i || !adjacent(pos_[i], pos_[j], cfg_.radio_range)) continue;
                if (lost()) continue;
                SimEvent ev;
                ev.t_us = now_us_ + hop_delay_us();
                ev.kind = kDeliver;
                ev.to = j;
                ev.msg = send->msg;
                ev.via = Via::Broadcast;
                ev.covered = covered;
                push(std::move(ev));
            }
        } else if (const auto* send = std::get_if<SendUnicast>(&effect)) {
            record_send(i, send->msg, "unicast");
            auto it = index_of_.find(send->dest);
            if (it == index_of_.end()) continue;
            int j = it->second;
            if (!adjacent(pos_[i], pos_[j], cfg_.radio_range) || lost()) continue;
            SimEvent ev;
            ev.t_us = now_us_ + hop_delay_us();
            ev.kind = kDeliver;
            ev.to = j;
            ev.msg = send->msg;
            ev.via = Via::Unicast;
            if (send->msg.aggregate) ev.covered = covered_[i];
            push(std::move(ev));
        } else if (const auto* send = std::get_if<SendRouted>(&effect)) {
            record_send(i, send->msg, "routed");
            auto it = index_of_.find(send->dest);
            if (it == index_of_.end()) continue;
            auto path = routed_path(i, it->second, pos_, cfg_.radio_range);
            if (path.empty() || lost()) continue;
            std::int64_t delay = 0;
            for (size_t hop = 1; hop < path.size(); ++hop) delay += hop_delay_us();
            SimEvent ev;
            ev.t_us = now_us_ + delay;
            ev.kind = kDeliver;
            ev.to = it->second;
            ev.msg = send->msg;
            ev.via = Via::Routed;
            if (send->msg.aggregate) ev.covered = covered_[i];
            push(std::move(ev));
        } else if (const auto* set = std::get_if<SetTimer>(&effect)) {
            ++timer_gen_[i];
            SimEvent ev;
            ev.t_us = now_us_ + static_cast<std::int64_t>(set->ms) * 1000;
            ev.kind = kTimer;
            ev.node = i;
            ev.timer_gen = timer_gen_[i];
            push(std::move(ev));
            if (opts_.record_trace) {
                ordered_json j;
                j["t"] = t_ms();
                j["node"] = nodes_[i].self_addr;
                j["kind"] = "set_timer";
                j["ms"] = set->ms;
                trace_record(std::move(j));
            }
        } else if (std::get_if<CancelTimer>(&effect)) {
            ++timer_gen_[i];
            if (opts_.record_trace) {
                ordered_json j;
                j["t"] = t_ms();
                j["node"] = nodes_[i].self_addr;
                j["kind"] = "cancel_timer";
                trace_record(std::move(j));
            }
        } else if (const auto* verdict = std::get_if<Verdict>(&effect)) {
            if (!metrics_.converged) {
                metrics_.converged = true;
                metrics_.convergence_ms = t_ms();
                metrics_.verdict_value = verdict->value;
                metrics_.verdict_observations = verdict->observations;
                check_verdict(*verdict);
            }
            if (opts_.record_trace) {
                ordered_json j;
                j["t"] = t_ms();
                j["node"] = nodes_[i].self_addr;
                j["kind"] = "verdict";
                j["value"] = verdict->value;
                j["observations"] = verdict->observations;
                trace_record(std::move(j));
            }
            emit_vht();
        } else if (const auto* err = std::get_if<ReportError>(&effect)) {
            metrics_.errors++;
            if (opts_.record_trace) {
                ordered_json j;
                j["t"] = t_ms();
                j["node"] = nodes_[i].self_addr;
                j["kind"] = "error";
                j["reason"] = err->reason;
                trace_record(std::move(j));
            }
        }
    }
}

void Simulation::handle_deliver(const SimEvent& ev) {
    int i = ev.to;
    const NodeCtx before = nodes_[i];
    StepResult r = step(std::move(nodes_[i]), EvMessage{ev.msg, ev.via});
    nodes_[i] = std::move(r.ctx);
    const NodeCtx& after = nodes_[i];

    if (!before.parent && after.parent) {
        // Adopted: seed the oracle set and log where the link was evaluated.
        covered_[i] = {{i, 1}};
        metrics_.adoption_time_us[after.self_addr] = now_us_;
        auto src = index_of_.find(ev.msg.source);
        if (src != index_of_.end())
            metrics_.adoption_edge_pos[after.self_addr] = {pos_[i], pos_[src->second]};
    }
    if (after.merged_sources.size() > before.merged_sources.size())
        for (const auto& [idx, times] : ev.covered) covered_[i][idx] += times;

    if (opts_.record_trace) {
        ordered_json j;
        j["t"] = t_ms();
        j["node"] = after.self_addr;
        j["kind"] = "deliver";
        j["via"] = ev.via == Via::Broadcast ? "broadcast"
                 : ev.via == Via::Unicast   ? "unicast"
                                            : "routed";
        j["state"] = state_name(after.state);
        j["payload"] = payload_json(ev.msg);
        trace_record(std::move(j));
    }
    apply_effects(i, r.effects);
}

void Simulation::start_round() {
    StepResult r = step(std::move(nodes_[root_]), EvStart{cfg_.function});
    nodes_[root_] = std::move(r.ctx);
    metrics_.adoption_time_us[nodes_[root_].self_addr] = now_us_;
    if (opts_.record_trace) {
        ordered_json j;
        j["t"] = t_ms();
        j["node"] = nodes_[root_].self_addr;
        j["kind"] = "start";
        j["state"] = state_name(nodes_[root_].state);
        trace_record(std::move(j));
    }
    apply_effects(root_, r.effects);
}

void Simulation::process(const SimEvent& ev) {
    now_us_ = ev.t_us;
    switch (ev.kind) {
        case kScript: {
            if (ev.script_index < 0) {
                start_round();
                break;
            }
            const auto& mv = cfg_.scripted_moves[ev.script_index];
            pos_[mv.node] = {mv.x, mv.y};
            if (cfg_.mobility == MobilityModel::RandomWaypoint) {
                motion_[mv.node].pos = pos_[mv.node];
                motion_[mv.node].target = pos_[mv.node];
            }
            if (opts_.record_trace) {
                ordered_json j;
                j["t"] = t_ms();
                j["node"] = nodes_[mv.node].self_addr;
                j["kind"] = "move";
                j["x"] = mv.x;
                j["y"] = mv.y;
                trace_record(std::move(j));
            }
            break;
        }
        case kDeliver:
            handle_deliver(ev);
            break;
        case kTimer: {
            int i = ev.node;
            if (ev.timer_gen != timer_gen_[i]) break;    // superseded or cancelled
            StepResult r = step(std::move(nodes_[i]), EvTimerFired{});
            nodes_[i] = std::move(r.ctx);
            if (opts_.record_trace) {
                ordered_json j;
                j["t"] = t_ms();
                j["node"] = nodes_[i].self_addr;
                j["kind"] = "timer";
                j["state"] = state_name(nodes_[i].state);
                trace_record(std::move(j));
            }
            apply_effects(i, r.effects);
            break;
        }
        case kMove: {
            double dt_s = static_cast<double>(cfg_.move_update_ms) / 1000.0;
            for (int i = 0; i < cfg_.node_count; ++i) {
                motion_[i] = rwp_step(motion_[i], dt_s, cfg_.rwp_speed, cfg_.rwp_pause_s,
                                      cfg_.area_w, cfg_.area_h, waypoint_rng_[i]);
                pos_[i] = motion_[i].pos;
                if (opts_.record_trace) {
                    ordered_json j;
                    j["t"] = t_ms();
                    j["node"] = nodes_[i].self_addr;
                    j["kind"] = "move";
                    j["x"] = pos_[i].x;
                    j["y"] = pos_[i].y;
                    trace_record(std::move(j));
                }
            }
            std::int64_t next = now_us_ + static_cast<std::int64_t>(cfg_.move_update_ms) * 1000;
            if (next <= static_cast<std::int64_t>(cfg_.duration_ms) * 1000) {
                SimEvent tick;
                tick.t_us = next;
                tick.kind = kMove;
                push(std::move(tick));
            }
            break;
        }
    }
}

RunMetrics Simulation::run() {
    auto bad = validate_config(cfg_);
    if (!bad.empty()) throw std::invalid_argument("scenario config: " + bad.front());

    const int n = cfg_.node_count;
    metrics_.seed = cfg_.seed;

    pos_ = cfg_.placement == Placement::Grid
               ? place_grid(n, cfg_.grid_spacing, cfg_.area_w, cfg_.area_h)
               : place_random(n, cfg_.area_w, cfg_.area_h, cfg_.seed);

    Rng obs_rng(mix_seed(cfg_.seed, stream::kObservations));
    nodes_.reserve(n);
    for (int i = 0; i < n; ++i) {
        double value = cfg_.observation_source == ObservationSource::Constant
                           ? cfg_.observation_constant
                           : obs_rng.next_in(cfg_.observation_min, cfg_.observation_max);
        nodes_.push_back(make_node(node_address(i), value));
        index_of_[nodes_.back().self_addr] = i;
        metrics_.observations.push_back(value);
    }

    root_ = cfg_.root_index >= 0
                ? cfg_.root_index
                : static_cast<int>(Rng(mix_seed(cfg_.seed, stream::kRoot)).next_below(n));
    metrics_.root_index = root_;
    nodes_[root_].is_root = true;
    nodes_[root_].timeout_ms = cfg_.timeout_ms;

    timer_gen_.assign(n, 0);
    covered_.assign(n, {});
    covered_[root_] = {{root_, 1}};

    if (cfg_.mobility == MobilityModel::RandomWaypoint) {
        motion_.resize(n);
        for (int i = 0; i < n; ++i) {
            waypoint_rng_.emplace_back(mix_seed(cfg_.seed, stream::kWaypoints, i));
            motion_[i].pos = pos_[i];
            motion_[i].target = {waypoint_rng_[i].next_in(0.0, cfg_.area_w),
                                 waypoint_rng_[i].next_in(0.0, cfg_.area_h)};
        }
        SimEvent tick;
        tick.t_us = static_cast<std::int64_t>(cfg_.move_update_ms) * 1000;
        tick.kind = kMove;
        push(std::move(tick));
    }

    for (size_t k = 0; k < cfg_.scripted_moves.size(); ++k) {
        SimEvent ev;
        ev.t_us = static_cast<std::int64_t>(cfg_.scripted_moves[k].at_ms) * 1000;
        ev.kind = kScript;
        ev.script_index = static_cast<int>(k);
        push(std::move(ev));
    }

    // The round begins at t = 0, after any scripted move scheduled there.
    SimEvent start;
    start.t_us = 0;
    start.kind = kScript;
    start.script_index = -1;
    push(std::move(start));

    const std::int64_t end_us = static_cast<std::int64_t>(cfg_.duration_ms) * 1000;
    while (!queue_.empty()) {
        SimEvent ev = queue_.top();
        if (ev.t_us > end_us) break;
        queue_.pop();
        process(ev);
    }
    now_us_ = std::min(end_us, now_us_);

    emit_vht();
    for (const auto& node : nodes_) {
        metrics_.final_states[state_name(node.state)]++;
        if (node.parent || node.is_root) metrics_.nodes_reached++;
    }
    metrics_.trace = std::move(trace_);
    return metrics_;
}

}  // namespace

RunMetrics run_scenario_once(const ScenarioConfig& cfg, const RunOptions& opts) {
    return Simulation(cfg, opts).run();
}

}  // namespace manetmon
