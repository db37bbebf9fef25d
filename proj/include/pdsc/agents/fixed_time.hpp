#pragma once

#include "pdsc/agents/agent.hpp"

namespace pdsc::agents {

// Non-adaptive baseline: requests a switch once the current green has lasted fixed_time_green.
class FixedTimeAgent : public Agent {
public:
    FixedTimeAgent(const AgentConfig& config, std::size_t observation_size);

    env::Action act(const env::Observation& obs, bool explore) override;
    env::Action greedy_action(const env::Observation& obs) const override;
    void observe(const Transition&) override { ++training_steps_; }
    bool update_due() const override { return false; }
    UpdateStats update() override { return {}; }
    std::unique_ptr<Agent> clone() const override;

    void write_payload(BinaryWriter&) const override {}
    void read_payload(BinaryReader&) override {}
};

}  // namespace pdsc::agents
