#include "pdsc/harness/evaluation.hpp"

#include <exception>

#include "pdsc/common/seeding.hpp"

namespace pdsc::harness {

std::uint64_t evaluation_seed(std::uint64_t run_seed, int k) {
    return agents::episode_seed(derive_seed(run_seed, {0x4556414Cull}), static_cast<std::uint64_t>(k));
}

EvaluationSummary summarize(std::vector<agents::EpisodeOutcome> outcomes) {
    EvaluationSummary s;
    s.episodes = static_cast<int>(outcomes.size());
    double total_all = 0.0, total_det = 0.0, total_undet = 0.0;
    for (const auto& o : outcomes) {
        const auto& m = o.metrics;
        total_all += m.total_wait_all;
        total_det += m.total_wait_detected;
        total_undet += m.total_wait_undetected;
        s.vehicles += m.count_all;
        s.detected += m.count_detected;
        s.undetected += m.count_undetected;
        s.mean_return += o.episode_return;
        s.mean_full_return += o.full_return;
        s.mean_queue += o.mean_queue;
    }
    if (s.episodes > 0) {
        const double n = static_cast<double>(s.episodes);
        s.mean_return /= n;
        s.mean_full_return /= n;
        s.mean_queue /= n;
    }
    if (s.vehicles > 0) s.wait_all = total_all / static_cast<double>(s.vehicles);
    if (s.detected > 0) s.wait_detected = total_det / static_cast<double>(s.detected);
    if (s.undetected > 0) s.wait_undetected = total_undet / static_cast<double>(s.undetected);
    s.outcomes = std::move(outcomes);
    return s;
}

namespace serial {

EvaluationSummary evaluate(const agents::Agent& agent, const env::EnvConfig& config, int episodes,
                           std::uint64_t seed) {
    std::vector<agents::EpisodeOutcome> outcomes;
    outcomes.reserve(static_cast<std::size_t>(std::max(episodes, 0)));
    for (int k = 0; k < episodes; ++k) {
        outcomes.push_back(agents::run_episode(agent, config, evaluation_seed(seed, k)));
    }
    return summarize(std::move(outcomes));
}

}  // namespace serial

namespace parallel {

EvaluationSummary evaluate(const agents::Agent& agent, const env::EnvConfig& config, int episodes,
                           std::uint64_t seed) {
    std::vector<agents::EpisodeOutcome> outcomes(static_cast<std::size_t>(std::max(episodes, 0)));
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (int k = 0; k < episodes; ++k) {
        try {
            outcomes[static_cast<std::size_t>(k)] = agents::run_episode(agent, config, evaluation_seed(seed, k));
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return summarize(std::move(outcomes));
}

}  // namespace parallel

}  // namespace pdsc::harness
