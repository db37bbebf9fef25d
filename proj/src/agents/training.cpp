#include "pdsc/agents/training.hpp"

#include "pdsc/common/seeding.hpp"
#include "pdsc/nn/kfac.hpp"
#include "pdsc/nn/optimizer.hpp"

namespace pdsc::agents {

std::uint64_t episode_seed(std::uint64_t run_seed, std::uint64_t episode) {
    return derive_seed(run_seed, {0x45504953ull, episode});
}

EpisodeOutcome run_episode(const Agent& agent, const env::EnvConfig& config, std::uint64_t seed) {
    env::Environment environment(config);
    env::Observation obs = environment.reset(seed);
    EpisodeOutcome outcome;
    double queue_total = 0.0;
    while (!environment.done()) {
        const env::StepResult r = environment.step(agent.greedy_action(obs));
        outcome.episode_return += r.reward;
        outcome.full_return += r.info.reward.full;
        outcome.partial_return += r.info.reward.partial;
        for (int q : r.info.metrics.queue_lengths) queue_total += q;
        obs = r.observation;
    }
    outcome.metrics = environment.metrics();
    outcome.mean_queue = queue_total / static_cast<double>(environment.steps_taken());
    return outcome;
}

TrainingResult train_agent(Agent& agent, const env::EnvConfig& config, std::int64_t steps, std::uint64_t seed) {
    TrainingResult result;
    if (agent.algorithm() == Algorithm::FixedTime || steps <= 0) return result;

    env::Environment environment(config);
    int episode = 0;
    env::Observation obs = environment.reset(episode_seed(seed, 0));
    double episode_return = 0.0;
    try {
        for (std::int64_t t = 0; t < steps; ++t) {
            const env::Action action = agent.act(obs, true);
            env::StepResult r = environment.step(action);
            agent.observe({obs, action, r.reward, r.observation, r.done});
            if (agent.update_due()) agent.update();
            episode_return += r.reward;
            obs = std::move(r.observation);
            ++result.steps;
            if (r.done) {
                const auto m = environment.metrics();
                result.curve.push_back({episode, episode_return, m.wait_all, m.wait_detected, m.wait_undetected});
                ++episode;
                episode_return = 0.0;
                obs = environment.reset(episode_seed(seed, static_cast<std::uint64_t>(episode)));
            }
        }
    } catch (const nn::DivergenceError& e) {
        result.diverged = true;
        result.error = e.what();
    } catch (const nn::NumericalError& e) {
        result.diverged = true;
        result.error = e.what();
    }
    return result;
}

}  // namespace pdsc::agents
