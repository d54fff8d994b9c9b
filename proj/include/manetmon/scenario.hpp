#pragma once

#include "manetmon/simulator.hpp"

#include <map>
#include <string>
#include <vector>

namespace manetmon {

// A sweep multiplies a base config by every combination of the listed field
// values, then repeats each combination with consecutive seeds.
struct SweepSpec {
    ScenarioConfig base;
    std::vector<std::pair<std::string, std::vector<std::string>>> vary;
    int repetitions = 1;
    std::uint64_t seed_base = 1;
};

struct Variant {
    ScenarioConfig cfg;             // seed field is the base for this variant
    std::map<std::string, std::string> overrides;
    std::string label;              // "node_count=25 rwp_speed=5"
};

// Applies "key = value" to a config. Returns an error string on failure,
// empty on success. Shared by the file parser and CLI overrides.
std::string apply_config_field(ScenarioConfig& cfg, const std::string& key,
                               const std::string& value);

// Parses the flat key = value format. Throws std::runtime_error with the
// offending line number on bad input.
SweepSpec load_scenario_file(const std::string& path);
SweepSpec parse_scenario_text(const std::string& text, const std::string& origin);

// Cross product of the vary lists, applied left to right.
std::vector<Variant> expand_variants(const SweepSpec& spec);

// Seed for repetition k of variant v: seed_base + v * repetitions + k.
std::uint64_t run_seed(const SweepSpec& spec, size_t variant_index, int repetition);

}  // namespace manetmon
