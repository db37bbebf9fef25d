#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "pdsc/common/key_value_config.hpp"
#include "pdsc/sim/simulator.hpp"

namespace pdsc::env {

enum class Action : std::uint8_t { Keep = 0, Switch = 1 };
inline constexpr int kActionCount = 2;

enum class RewardMode { Full, Partial };

std::string_view to_string(RewardMode mode);
RewardMode parse_reward_mode(std::string_view text);

struct EnvConfig {
    sim::SimConfig sim;
    RewardMode reward_mode = RewardMode::Partial;
    double episode_length = 3600.0;  // s
    bool include_time_of_day = false;

    int lane_capacity() const { return sim.lane_capacity(); }
    std::size_t observation_size() const;
    std::int64_t episode_steps() const;
    void validate() const;
};

// Reads [env] keys (reward_mode, episode_length, include_time_of_day) and the [sim] section.
EnvConfig load_env_config(const KeyValueConfig& config, EnvConfig base = {});

// Compact state vector. Slot layout:
//   [0,4)  detected vehicle count per approach / lane capacity, clamped to 1
//   [4,8)  nearest detected vehicle distance / lane length, 1 when none
//   8      seconds elapsed in the current phase
//   9      amber indicator
//   10     current phase index (phase being exited while in amber)
//   11     optional fraction of the simulated day
class Observation {
public:
    static constexpr std::size_t kCountOffset = 0;
    static constexpr std::size_t kDistanceOffset = 4;
    static constexpr std::size_t kPhaseTime = 8;
    static constexpr std::size_t kAmber = 9;
    static constexpr std::size_t kPhase = 10;
    static constexpr std::size_t kTimeOfDay = 11;
    static constexpr std::size_t kBaseSize = 11;

    Observation() = default;
    explicit Observation(std::vector<double> values) : values_(std::move(values)) {}

    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    double detected_count(sim::Approach a) const { return values_[kCountOffset + sim::index_of(a)]; }
    double nearest_detected_distance(sim::Approach a) const {
        return values_[kDistanceOffset + sim::index_of(a)];
    }
    double phase_time() const { return values_[kPhaseTime]; }
    double amber_flag() const { return values_[kAmber]; }
    double current_phase() const { return values_[kPhase]; }
    bool has_time_of_day() const { return values_.size() > kTimeOfDay; }
    double time_of_day() const { return values_.at(kTimeOfDay); }

    friend bool operator==(const Observation&, const Observation&) = default;

private:
    std::vector<double> values_;
};

struct RewardBreakdown {
    double full = 0.0;
    double partial = 0.0;
    double detected_deficit = 0.0;
    double undetected_deficit = 0.0;

    double select(RewardMode mode) const { return mode == RewardMode::Full ? full : partial; }
};

struct StepInfo {
    RewardBreakdown reward;
    sim::MetricsSnapshot metrics;
};

struct StepResult {
    Observation observation;
    double reward = 0.0;
    bool done = false;
    StepInfo info;
};

class EpisodeDoneError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

Observation build_observation(const sim::SimState& state, const EnvConfig& config);

// Normalized speed deficits over every vehicle on an approach (full) and over detected
// vehicles only (partial).
RewardBreakdown compute_reward(const sim::SimState& state);

class Environment {
public:
    explicit Environment(EnvConfig config);

    Observation reset();
    // Re-seeds the arrival stream before resetting.
    Observation reset(std::uint64_t seed);
    StepResult step(Action action);

    bool done() const { return steps_ >= config_.episode_steps(); }
    std::int64_t steps_taken() const { return steps_; }

    // Affects vehicles spawned from the next step on.
    void set_detection_rate(double rate);

    const EnvConfig& config() const { return config_; }
    const sim::SimState& state() const { return sim_.state(); }
    sim::SimState& mutable_state() { return sim_.mutable_state(); }
    sim::MetricsSnapshot metrics() const { return sim_.metrics(); }

private:
    EnvConfig config_;
    sim::Simulator sim_;
    std::int64_t steps_ = 0;
};

}  // namespace pdsc::env
