#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>

#include "pdsc/sim/sim_config.hpp"
#include "pdsc/sim/types.hpp"

namespace pdsc::sim {

struct ClassAccumulator {
    double total_wait = 0.0;
    std::uint64_t count = 0;

    void add(double wait) {
        total_wait += wait;
        ++count;
    }
    std::optional<double> mean() const {
        if (count == 0) return std::nullopt;
        return total_wait / static_cast<double>(count);
    }
};

// Arrival that could not enter because the lane entrance was occupied.
struct PendingArrival {
    double arrival_time = 0.0;
    bool detected = false;
};

struct SimState {
    double clock = 0.0;
    SignalState signal;
    // Per approach, ordered front (nearest the stop line) to back.
    std::array<std::deque<Vehicle>, kApproachCount> lanes;
    std::array<std::deque<PendingArrival>, kApproachCount> pending;
    std::uint64_t next_id = 0;
    std::uint64_t spawned_count = 0;
    std::uint64_t exited_count = 0;
    ClassAccumulator detected;
    ClassAccumulator undetected;
    ClassAccumulator all;
    std::mt19937_64 rng;

    std::size_t vehicle_count() const;
};

SimState initial_state(const SimConfig& config);

struct MetricsSnapshot {
    std::optional<double> wait_all;
    std::optional<double> wait_detected;
    std::optional<double> wait_undetected;
    std::uint64_t count_all = 0;
    std::uint64_t count_detected = 0;
    std::uint64_t count_undetected = 0;
    double total_wait_all = 0.0;
    double total_wait_detected = 0.0;
    double total_wait_undetected = 0.0;
    // Vehicles currently below the waiting-speed threshold, per approach.
    std::array<int, kApproachCount> queue_lengths{};
    std::uint64_t spawned = 0;
    std::uint64_t exited = 0;
};

// Poisson arrivals per approach; each new vehicle detected with probability detection_rate.
// Arrivals blocked at the lane entrance wait in `pending` for a later step.
void spawn_step(SimState& state, const SimConfig& config);

// Car following, stop-line compliance, exits and waiting-time accounting.
void kinematics_step(SimState& state, const SimConfig& config);

// Signal state machine: amber auto-completes, min-green guards switching.
void signal_step(SimState& state, SignalCommand command, const SimConfig& config);

// Waiting times are over exited vehicles only; wait_threshold defines a queued vehicle.
MetricsSnapshot metrics_snapshot(const SimState& state, double wait_threshold = 0.1);

// Largest speed from which a vehicle can still stop within `gap` after moving one step.
double safe_speed(double gap, double decel, double dt);

// Owns a configuration and state; one step = signal, spawn, kinematics, clock advance.
class Simulator {
public:
    explicit Simulator(SimConfig config);

    void reset();
    void step(SignalCommand command);

    const SimConfig& config() const { return config_; }
    SimConfig& mutable_config() { return config_; }
    const SimState& state() const { return state_; }
    SimState& mutable_state() { return state_; }
    MetricsSnapshot metrics() const { return metrics_snapshot(state_, config_.wait_speed_threshold); }

private:
    SimConfig config_;
    SimState state_;
};

}  // namespace pdsc::sim
