#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdsc/adapt/schedule.hpp"
#include "pdsc/agents/agent.hpp"
#include "pdsc/common/key_value_config.hpp"
#include "pdsc/env/environment.hpp"

namespace pdsc::adapt {

struct DeploymentConfig {
    std::int64_t total_steps = 200000;
    // Ramp from 0.1 to 1.0 across the whole horizon (time_step 1 s).
    DetectionSchedule schedule = DetectionSchedule::linear_ramp(0.0, 0.1, 200000.0, 1.0);
    // Steps between online updates; nullopt runs the agent frozen.
    std::optional<std::int64_t> update_period = 256;
    // Steps per timeline point; each point averages the vehicles that cleared during it.
    std::int64_t window = 2000;
    // Number of preceding points whose median is the reference for the spike test.
    std::int64_t median_points = 5;
    double threshold = 3.0;
    std::uint64_t seed = 1;

    void validate() const;
};

// [deploy] keys: total_steps, update_period (0 or "none" disables), window, median_points,
// threshold, seed, and either start_rate/end_rate (a ramp over the horizon) or
// schedule = "t0:r0, t1:r1, ..." in seconds.
DeploymentConfig load_deployment_config(const KeyValueConfig& config, double time_step,
                                        DeploymentConfig base = {});

struct TimelinePoint {
    std::int64_t step = 0;
    double detection_rate = 0.0;
    std::optional<double> wait_all;
    std::optional<double> wait_detected;
    std::optional<double> wait_undetected;
    bool instability_flag = false;

    friend bool operator==(const TimelinePoint&, const TimelinePoint&) = default;
};

struct DeploymentResult {
    std::vector<TimelinePoint> timeline;
    std::size_t flag_count = 0;
    std::int64_t updates = 0;
    bool aborted = false;
    std::string error;
};

// One continuous episode; the environment is reset once with `deploy.seed`. The agent learns
// from the partial reward whatever reward mode `env_config` names.
DeploymentResult run_deployment(agents::Agent& agent, const env::EnvConfig& env_config,
                                const DeploymentConfig& deploy);

// Sets instability_flag on every point and returns the number flagged.
std::size_t flag_timeline(std::vector<TimelinePoint>& timeline, std::size_t median_points, double threshold);

}  // namespace pdsc::adapt
