#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pdsc/agents/agent.hpp"
#include "pdsc/env/environment.hpp"

namespace pdsc::agents {

struct EpisodeOutcome {
    double episode_return = 0.0;  // sum of the configured reward mode
    double full_return = 0.0;
    double partial_return = 0.0;
    double mean_queue = 0.0;      // vehicles below the waiting threshold, averaged over steps
    sim::MetricsSnapshot metrics;  // at episode end
};

struct EpisodeRecord {
    int episode = 0;
    double episode_return = 0.0;
    std::optional<double> wait_all;
    std::optional<double> wait_detected;
    std::optional<double> wait_undetected;
};

struct TrainingResult {
    std::vector<EpisodeRecord> curve;
    std::int64_t steps = 0;
    bool diverged = false;
    std::string error;
};

// Seed of the `episode`-th training or evaluation episode derived from a run seed.
std::uint64_t episode_seed(std::uint64_t run_seed, std::uint64_t episode);

// Greedy rollout of one full episode; the agent is not modified.
EpisodeOutcome run_episode(const Agent& agent, const env::EnvConfig& config, std::uint64_t seed);

// Exploring rollouts with updates whenever the agent reports one is due. A non-finite loss
// stops training and is reported in the result rather than thrown.
TrainingResult train_agent(Agent& agent, const env::EnvConfig& config, std::int64_t steps, std::uint64_t seed);

}  // namespace pdsc::agents
