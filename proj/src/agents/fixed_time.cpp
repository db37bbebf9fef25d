#include "pdsc/agents/fixed_time.hpp"

namespace pdsc::agents {

FixedTimeAgent::FixedTimeAgent(const AgentConfig& config, std::size_t observation_size)
    : Agent(config, observation_size) {
    if (config_.algorithm != Algorithm::FixedTime) throw ConfigError("FixedTimeAgent requires algorithm FixedTime");
}

env::Action FixedTimeAgent::act(const env::Observation& obs, bool) { return greedy_action(obs); }

env::Action FixedTimeAgent::greedy_action(const env::Observation& obs) const {
    check_observation(obs);
    return obs.phase_time() >= config_.fixed_time_green ? env::Action::Switch : env::Action::Keep;
}

std::unique_ptr<Agent> FixedTimeAgent::clone() const { return std::make_unique<FixedTimeAgent>(*this); }

}  // namespace pdsc::agents
