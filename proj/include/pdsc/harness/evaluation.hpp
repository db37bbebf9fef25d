#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pdsc/agents/training.hpp"

namespace pdsc::harness {

// Vehicles from all episodes pooled, so wait_all is the count-weighted mean of the two classes.
struct EvaluationSummary {
    int episodes = 0;
    std::optional<double> wait_all;
    std::optional<double> wait_detected;
    std::optional<double> wait_undetected;
    std::int64_t vehicles = 0;
    std::int64_t detected = 0;
    std::int64_t undetected = 0;
    double mean_return = 0.0;
    double mean_full_return = 0.0;
    double mean_queue = 0.0;
    std::vector<agents::EpisodeOutcome> outcomes;  // in episode order
};

// Seed of evaluation episode `k`; disjoint from the training episode stream of the same run seed.
std::uint64_t evaluation_seed(std::uint64_t run_seed, int k);

EvaluationSummary summarize(std::vector<agents::EpisodeOutcome> outcomes);

namespace serial {
EvaluationSummary evaluate(const agents::Agent& agent, const env::EnvConfig& config, int episodes,
                           std::uint64_t seed);
}

namespace parallel {
// Episodes spread over OpenMP threads; same result as serial::evaluate bit for bit.
EvaluationSummary evaluate(const agents::Agent& agent, const env::EnvConfig& config, int episodes,
                           std::uint64_t seed);
}

}  // namespace pdsc::harness
