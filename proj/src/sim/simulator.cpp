#include "pdsc/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pdsc::sim {

namespace {

constexpr double kTimeEpsilon = 1e-9;
// Speeds below this are snapped to rest.
constexpr double kRestSpeed = 1e-3;

}  // namespace

std::size_t SimState::vehicle_count() const {
    std::size_t n = 0;
    for (const auto& lane : lanes) n += lane.size();
    return n;
}

SimState initial_state(const SimConfig& config) {
    SimState state;
    state.rng.seed(config.rng_seed);
    return state;
}

double safe_speed(double gap, double decel, double dt) {
    if (gap <= 0.0) return 0.0;
    // Solve v*dt + v^2 / (2*decel) = gap for v >= 0.
    return decel * (-dt + std::sqrt(dt * dt + 2.0 * gap / decel));
}

void spawn_step(SimState& state, const SimConfig& config) {
    const double dt = config.time_step;
    const double mean_arrivals = config.arrival_rate * dt;
    std::bernoulli_distribution detect(config.detection_rate);

    for (Approach approach : kApproaches) {
        const std::size_t i = index_of(approach);
        if (mean_arrivals > 0.0) {
            std::poisson_distribution<int> arrivals(mean_arrivals);
            const int n = arrivals(state.rng);
            for (int k = 0; k < n; ++k) {
                state.pending[i].push_back({state.clock, detect(state.rng)});
            }
        }

        auto& lane = state.lanes[i];
        auto& queue = state.pending[i];
        while (!queue.empty()) {
            double gap = std::numeric_limits<double>::infinity();
            if (!lane.empty()) {
                gap = config.lane_length - (lane.back().position + config.vehicle_length + config.min_gap);
            }
            if (gap < 0.0) break;

            const PendingArrival arrival = queue.front();
            queue.pop_front();

            Vehicle v;
            v.id = state.next_id++;
            v.approach = approach;
            v.position = config.lane_length;
            v.vmax = config.vmax_default;
            v.speed = std::min(v.vmax, safe_speed(gap, config.decel, dt));
            v.detected = arrival.detected;
            v.spawn_time = arrival.arrival_time;
            v.cumulative_wait = state.clock - arrival.arrival_time;
            lane.push_back(v);
            ++state.spawned_count;
        }
    }
}

void kinematics_step(SimState& state, const SimConfig& config) {
    const double dt = config.time_step;
    const double inf = std::numeric_limits<double>::infinity();

    for (Approach approach : kApproaches) {
        auto& lane = state.lanes[index_of(approach)];
        const bool green = !state.signal.in_amber && green_axis(state.signal.current_phase) == axis_of(approach);

        bool has_leader = false;
        double leader_position = 0.0;
        std::size_t exits = 0;

        for (auto& v : lane) {
            double gap = green ? inf : v.position;
            if (has_leader) {
                gap = std::min(gap, v.position - (leader_position + config.vehicle_length + config.min_gap));
            }

            double speed = std::min(v.vmax, v.speed + config.accel * dt);
            if (gap < inf) speed = std::min(speed, safe_speed(gap, config.decel, dt));
            if (speed < kRestSpeed) speed = 0.0;
            v.speed = speed;

            const double next = v.position - speed * dt;
            if (next < 0.0 && green && !has_leader) {
                if (v.detected) {
                    state.detected.add(v.cumulative_wait);
                } else {
                    state.undetected.add(v.cumulative_wait);
                }
                state.all.add(v.cumulative_wait);
                ++state.exited_count;
                ++exits;
                continue;
            }
            v.position = std::max(next, 0.0);
            if (v.speed < config.wait_speed_threshold) v.cumulative_wait += dt;
            has_leader = true;
            leader_position = v.position;
        }
        lane.erase(lane.begin(), lane.begin() + static_cast<std::ptrdiff_t>(exits));
    }
}

void signal_step(SimState& state, SignalCommand command, const SimConfig& config) {
    auto& s = state.signal;
    const double dt = config.time_step;
    if (s.in_amber) {
        s.amber_elapsed += dt;
        if (s.amber_elapsed >= config.amber_duration - kTimeEpsilon) {
            s.current_phase = opposite(s.current_phase);
            s.in_amber = false;
            s.amber_elapsed = 0.0;
            s.phase_elapsed = 0.0;
        }
        return;
    }
    if (command == SignalCommand::Switch && s.phase_elapsed >= config.min_green - kTimeEpsilon) {
        s.in_amber = true;
        s.amber_elapsed = 0.0;
        return;
    }
    s.phase_elapsed += dt;
}

MetricsSnapshot metrics_snapshot(const SimState& state, double wait_threshold) {
    MetricsSnapshot m;
    m.wait_all = state.all.mean();
    m.wait_detected = state.detected.mean();
    m.wait_undetected = state.undetected.mean();
    m.count_all = state.all.count;
    m.count_detected = state.detected.count;
    m.count_undetected = state.undetected.count;
    m.total_wait_all = state.all.total_wait;
    m.total_wait_detected = state.detected.total_wait;
    m.total_wait_undetected = state.undetected.total_wait;
    for (std::size_t i = 0; i < kApproachCount; ++i) {
        m.queue_lengths[i] = static_cast<int>(std::count_if(
            state.lanes[i].begin(), state.lanes[i].end(),
            [wait_threshold](const Vehicle& v) { return v.speed < wait_threshold; }));
    }
    m.spawned = state.spawned_count;
    m.exited = state.exited_count;
    return m;
}

Simulator::Simulator(SimConfig config) : config_(config), state_(initial_state(config_)) {
    config_.validate();
}

void Simulator::reset() { state_ = initial_state(config_); }

void Simulator::step(SignalCommand command) {
    signal_step(state_, command, config_);
    spawn_step(state_, config_);
    kinematics_step(state_, config_);
    state_.clock += config_.time_step;
}

}  // namespace pdsc::sim
