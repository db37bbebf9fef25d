#include "pdsc/env/environment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pdsc::env {

std::string_view to_string(RewardMode mode) { return mode == RewardMode::Full ? "full" : "partial"; }

RewardMode parse_reward_mode(std::string_view text) {
    if (text == "full") return RewardMode::Full;
    if (text == "partial") return RewardMode::Partial;
    throw ConfigError("unknown reward_mode '" + std::string(text) + "' (expected full or partial)");
}

std::size_t EnvConfig::observation_size() const {
    return Observation::kBaseSize + (include_time_of_day ? 1 : 0);
}

std::int64_t EnvConfig::episode_steps() const {
    return static_cast<std::int64_t>(std::llround(episode_length / sim.time_step));
}

void EnvConfig::validate() const {
    sim.validate();
    const double ratio = episode_length / sim.time_step;
    if (!(episode_length > 0.0) || std::abs(ratio - std::round(ratio)) > 1e-9) {
        throw ConfigError("env config: episode_length must be a positive multiple of time_step");
    }
}

EnvConfig load_env_config(const KeyValueConfig& config, EnvConfig base) {
    base.sim = sim::load_sim_config(config, base.sim);
    if (auto mode = config.get_string("env.reward_mode")) base.reward_mode = parse_reward_mode(*mode);
    config.read("env.episode_length", base.episode_length);
    config.read("env.include_time_of_day", base.include_time_of_day);
    base.validate();
    return base;
}

Observation build_observation(const sim::SimState& state, const EnvConfig& config) {
    std::vector<double> slots(config.observation_size(), 0.0);
    const double capacity = static_cast<double>(config.lane_capacity());
    for (sim::Approach a : sim::kApproaches) {
        const std::size_t i = sim::index_of(a);
        int count = 0;
        double nearest = config.sim.lane_length;
        for (const auto& v : state.lanes[i]) {
            if (!v.detected) continue;
            ++count;
            nearest = std::min(nearest, v.position);
        }
        slots[Observation::kCountOffset + i] = std::min(1.0, count / capacity);
        slots[Observation::kDistanceOffset + i] = std::clamp(nearest / config.sim.lane_length, 0.0, 1.0);
    }
    slots[Observation::kPhaseTime] = state.signal.phase_elapsed;
    slots[Observation::kAmber] = state.signal.in_amber ? 1.0 : 0.0;
    slots[Observation::kPhase] = static_cast<double>(state.signal.current_phase);
    if (config.include_time_of_day) {
        constexpr double kDay = 86400.0;
        slots[Observation::kTimeOfDay] = std::fmod(state.clock, kDay) / kDay;
    }
    return Observation(std::move(slots));
}

RewardBreakdown compute_reward(const sim::SimState& state) {
    RewardBreakdown r;
    for (const auto& lane : state.lanes) {
        for (const auto& v : lane) {
            const double deficit = (v.vmax - v.speed) / v.vmax;
            (v.detected ? r.detected_deficit : r.undetected_deficit) += deficit;
        }
    }
    r.partial = -r.detected_deficit;
    r.full = -(r.detected_deficit + r.undetected_deficit);
    return r;
}

Environment::Environment(EnvConfig config) : config_(std::move(config)), sim_(config_.sim) {
    config_.validate();
}

Observation Environment::reset() {
    sim_.reset();
    steps_ = 0;
    return build_observation(sim_.state(), config_);
}

Observation Environment::reset(std::uint64_t seed) {
    config_.sim.rng_seed = seed;
    sim_.mutable_config().rng_seed = seed;
    return reset();
}

StepResult Environment::step(Action action) {
    if (done()) {
        throw EpisodeDoneError("step() called on a finished episode; call reset() first");
    }
    sim_.step(action == Action::Switch ? sim::SignalCommand::Switch : sim::SignalCommand::Keep);
    ++steps_;

    StepResult result;
    result.observation = build_observation(sim_.state(), config_);
    result.info.reward = compute_reward(sim_.state());
    result.info.metrics = sim_.metrics();
    result.reward = result.info.reward.select(config_.reward_mode);
    result.done = done();
    return result;
}

void Environment::set_detection_rate(double rate) {
    if (!(rate >= 0.0 && rate <= 1.0)) throw ConfigError("detection rate must lie in [0,1]");
    config_.sim.detection_rate = rate;
    sim_.mutable_config().detection_rate = rate;
}

}  // namespace pdsc::env
