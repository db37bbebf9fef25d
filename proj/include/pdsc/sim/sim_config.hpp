#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "pdsc/common/key_value_config.hpp"

namespace pdsc::sim {

struct SimConfig {
    double lane_length = 150.0;          // m
    double vmax_default = 13.89;         // m/s
    double accel = 2.0;                  // m/s^2
    double decel = 4.5;                  // m/s^2
    double vehicle_length = 5.0;         // m
    double min_gap = 2.5;                // m
    double amber_duration = 4.0;         // s
    double min_green = 5.0;              // s
    double time_step = 1.0;              // s
    double arrival_rate = 0.10;          // vehicles/s per approach
    double detection_rate = 1.0;         // probability
    double wait_speed_threshold = 0.1;   // m/s
    std::uint64_t rng_seed = 1;

    // Throws ConfigError on a violated invariant.
    void validate() const;

    // floor(lane_length / (vehicle_length + min_gap)).
    int lane_capacity() const;
};

enum class Scenario { Sparse, Medium, Dense };

SimConfig scenario_preset(Scenario name);

// Accepts "sparse" / "simple-sparse" and likewise for medium and dense.
std::optional<Scenario> parse_scenario(std::string_view name);
std::string_view to_string(Scenario s);

// Reads the flat keys of section `section` (field names verbatim) over `base`.
SimConfig load_sim_config(const KeyValueConfig& config, SimConfig base = {},
                          const std::string& section = "sim");

}  // namespace pdsc::sim
