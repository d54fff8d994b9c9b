#include "manetmon/scenario.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace manetmon {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

bool to_double(const std::string& s, double& out) {
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end && *end == '\0' && !s.empty();
}

bool to_int(const std::string& s, int& out) {
    char* end = nullptr;
    long v = std::strtol(s.c_str(), &end, 10);
    if (!end || *end != '\0' || s.empty()) return false;
    out = static_cast<int>(v);
    return true;
}

bool to_u64(const std::string& s, std::uint64_t& out) {
    char* end = nullptr;
    out = std::strtoull(s.c_str(), &end, 10);
    return end && *end == '\0' && !s.empty();
}

}  // namespace

std::string apply_config_field(ScenarioConfig& cfg, const std::string& key,
                               const std::string& value) {
    auto bad = [&](const char* what) { return key + ": " + what + " (got \"" + value + "\")"; };

    if (key == "node_count") {
        if (!to_int(value, cfg.node_count)) return bad("expected an integer");
    } else if (key == "area") {
        auto parts = split(value, 'x');
        if (parts.size() != 2 || !to_double(parts[0], cfg.area_w) ||
            !to_double(parts[1], cfg.area_h))
            return bad("expected WIDTHxHEIGHT");
    } else if (key == "placement") {
        if (value == "grid") cfg.placement = Placement::Grid;
        else if (value == "random") cfg.placement = Placement::UniformRandom;
        else return bad("expected grid or random");
    } else if (key == "grid_spacing") {
        if (!to_double(value, cfg.grid_spacing)) return bad("expected a number");
    } else if (key == "radio_range") {
        if (!to_double(value, cfg.radio_range)) return bad("expected a number");
    } else if (key == "root") {
        if (value == "random") cfg.root_index = -1;
        else if (!to_int(value, cfg.root_index)) return bad("expected an index or random");
    } else if (key == "function") {
        auto fn = parse_function(value);
        if (!fn) return bad("expected kind(metric), e.g. avg(cpu)");
        cfg.function = *fn;
    } else if (key == "timeout_ms") {
        if (!to_int(value, cfg.timeout_ms)) return bad("expected an integer");
    } else if (key == "hop_latency_base_ms") {
        if (!to_double(value, cfg.hop_latency_base_ms)) return bad("expected a number");
    } else if (key == "hop_latency_jitter_ms") {
        if (!to_double(value, cfg.hop_latency_jitter_ms)) return bad("expected a number");
    } else if (key == "loss_prob") {
        if (!to_double(value, cfg.loss_prob)) return bad("expected a number");
    } else if (key == "mobility") {
        if (value == "none") cfg.mobility = MobilityModel::None;
        else if (value == "rwp") cfg.mobility = MobilityModel::RandomWaypoint;
        else return bad("expected none or rwp");
    } else if (key == "rwp_speed") {
        if (!to_double(value, cfg.rwp_speed)) return bad("expected a number");
    } else if (key == "rwp_pause_s") {
        if (!to_double(value, cfg.rwp_pause_s)) return bad("expected a number");
    } else if (key == "move_update_ms") {
        if (!to_int(value, cfg.move_update_ms)) return bad("expected an integer");
    } else if (key == "duration_ms") {
        if (!to_int(value, cfg.duration_ms)) return bad("expected an integer");
    } else if (key == "seed") {
        if (!to_u64(value, cfg.seed)) return bad("expected an unsigned integer");
    } else if (key == "observation") {
        size_t open = value.find('(');
        if (open == std::string::npos || value.back() != ')')
            return bad("expected constant(v) or random(lo,hi)");
        std::string kind = trim(value.substr(0, open));
        std::string args = value.substr(open + 1, value.size() - open - 2);
        if (kind == "constant") {
            if (!to_double(trim(args), cfg.observation_constant))
                return bad("expected constant(<number>)");
            cfg.observation_source = ObservationSource::Constant;
        } else if (kind == "random") {
            auto parts = split(args, ',');
            if (parts.size() != 2 || !to_double(parts[0], cfg.observation_min) ||
                !to_double(parts[1], cfg.observation_max))
                return bad("expected random(<lo>,<hi>)");
            cfg.observation_source = ObservationSource::SeededRandom;
        } else {
            return bad("expected constant(v) or random(lo,hi)");
        }
    } else {
        return key + ": unknown field";
    }
    return "";
}

SweepSpec parse_scenario_text(const std::string& text, const std::string& origin) {
    SweepSpec spec;
    bool seed_base_set = false;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::string stripped = trim(line);
        size_t hash = stripped.find('#');
        if (hash != std::string::npos) stripped = trim(stripped.substr(0, hash));
        if (stripped.empty()) continue;
        size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                     ": expected key = value");
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        std::string err;
        if (key.rfind("sweep.", 0) == 0) {
            std::string field = key.substr(6);
            auto values = split(value, ',');
            if (field.empty() || values.empty())
                err = "sweep: expected sweep.<field> = v1,v2,...";
            else {
                // Probe each value against a scratch config now so a bad
                // sweep list fails at parse time, not mid-sweep.
                ScenarioConfig scratch = spec.base;
                for (const auto& v : values)
                    if (err.empty()) err = apply_config_field(scratch, field, v);
                if (err.empty()) spec.vary.emplace_back(field, values);
            }
        } else if (key == "repetitions") {
            if (!to_int(value, spec.repetitions) || spec.repetitions < 1)
                err = "repetitions: expected a positive integer";
        } else if (key == "seed_base") {
            if (!to_u64(value, spec.seed_base))
                err = "seed_base: expected an unsigned integer";
            seed_base_set = true;
        } else {
            err = apply_config_field(spec.base, key, value);
        }
        if (!err.empty())
            throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": " + err);
    }
    if (!seed_base_set) spec.seed_base = spec.base.seed;
    return spec;
}

SweepSpec load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), path);
}

std::vector<Variant> expand_variants(const SweepSpec& spec) {
    std::vector<Variant> out;
    out.push_back({spec.base, {}, ""});
    for (const auto& [field, values] : spec.vary) {
        std::vector<Variant> next;
        for (const auto& v : out) {
            for (const auto& value : values) {
                Variant nv = v;
                std::string err = apply_config_field(nv.cfg, field, value);
                if (!err.empty()) throw std::runtime_error("sweep: " + err);
                nv.overrides[field] = value;
                if (!nv.label.empty()) nv.label += ' ';
                nv.label += field + "=" + value;
                next.push_back(std::move(nv));
            }
        }
        out = std::move(next);
    }
    return out;
}

std::uint64_t run_seed(const SweepSpec& spec, size_t variant_index, int repetition) {
    return spec.seed_base +
           static_cast<std::uint64_t>(variant_index) *
               static_cast<std::uint64_t>(spec.repetitions) +
           static_cast<std::uint64_t>(repetition);
}

}  // namespace manetmon
