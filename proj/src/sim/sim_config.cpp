#include "pdsc/sim/sim_config.hpp"

#include <cmath>

namespace pdsc::sim {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError(std::string("sim config: ") + name + " must be strictly positive");
    }
}

}  // namespace

void SimConfig::validate() const {
    require_positive(lane_length, "lane_length");
    require_positive(vmax_default, "vmax_default");
    require_positive(accel, "accel");
    require_positive(decel, "decel");
    require_positive(vehicle_length, "vehicle_length");
    require_positive(min_gap, "min_gap");
    require_positive(amber_duration, "amber_duration");
    require_positive(min_green, "min_green");
    require_positive(time_step, "time_step");
    require_positive(wait_speed_threshold, "wait_speed_threshold");
    if (!(arrival_rate >= 0.0) || !std::isfinite(arrival_rate)) {
        throw ConfigError("sim config: arrival_rate must be non-negative");
    }
    if (!(detection_rate >= 0.0 && detection_rate <= 1.0)) {
        throw ConfigError("sim config: detection_rate must lie in [0,1]");
    }
    if (lane_capacity() < 1) {
        throw ConfigError("sim config: lane shorter than one vehicle slot");
    }
}

int SimConfig::lane_capacity() const {
    return static_cast<int>(std::floor(lane_length / (vehicle_length + min_gap)));
}

SimConfig scenario_preset(Scenario name) {
    SimConfig config;
    switch (name) {
        case Scenario::Sparse: config.arrival_rate = 0.02; break;
        case Scenario::Medium: config.arrival_rate = 0.10; break;
        case Scenario::Dense: config.arrival_rate = 0.25; break;
    }
    return config;
}

std::optional<Scenario> parse_scenario(std::string_view name) {
    if (name.starts_with("simple-")) name.remove_prefix(7);
    if (name == "sparse") return Scenario::Sparse;
    if (name == "medium") return Scenario::Medium;
    if (name == "dense") return Scenario::Dense;
    return std::nullopt;
}

std::string_view to_string(Scenario s) {
    switch (s) {
        case Scenario::Sparse: return "simple-sparse";
        case Scenario::Medium: return "simple-medium";
        case Scenario::Dense: return "simple-dense";
    }
    return "?";
}

SimConfig load_sim_config(const KeyValueConfig& config, SimConfig base, const std::string& section) {
    const std::string p = section + ".";
    config.read(p + "lane_length", base.lane_length);
    config.read(p + "vmax_default", base.vmax_default);
    config.read(p + "accel", base.accel);
    config.read(p + "decel", base.decel);
    config.read(p + "vehicle_length", base.vehicle_length);
    config.read(p + "min_gap", base.min_gap);
    config.read(p + "amber_duration", base.amber_duration);
    config.read(p + "min_green", base.min_green);
    config.read(p + "time_step", base.time_step);
    config.read(p + "arrival_rate", base.arrival_rate);
    config.read(p + "detection_rate", base.detection_rate);
    config.read(p + "wait_speed_threshold", base.wait_speed_threshold);
    config.read(p + "rng_seed", base.rng_seed);
    base.validate();
    return base;
}

}  // namespace pdsc::sim
