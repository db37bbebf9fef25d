#pragma once

#include <random>
#include <span>
#include <vector>

#include "pdsc/agents/agent.hpp"
#include "pdsc/nn/optimizer.hpp"

namespace pdsc::agents {

// Fixed-capacity ring of transitions with uniform sampling (with replacement).
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity = 1);

    void push(const Transition& t);
    std::vector<const Transition*> sample(std::size_t count, std::mt19937_64& rng) const;

    std::size_t size() const { return items_.size(); }
    std::size_t capacity() const { return capacity_; }
    void clear();

private:
    std::size_t capacity_;
    std::size_t next_ = 0;
    std::vector<Transition> items_;
};

// Deep Q-learning with experience replay and a periodically synced target network.
class DqlAgent : public Agent {
public:
    DqlAgent(const AgentConfig& config, std::size_t observation_size);

    env::Action act(const env::Observation& obs, bool explore) override;
    env::Action greedy_action(const env::Observation& obs) const override;

    void observe(const Transition& transition) override;
    bool update_due() const override;
    // One gradient step per `train_frequency` transitions observed since the last call.
    UpdateStats update() override;

    std::unique_ptr<Agent> clone() const override;
    std::vector<double> parameters() const override;

    // Regresses Q(s,a) toward r + gamma max_a' Q_target(s',a') with one step of size q_lr.
    // Returns the mean squared TD error before the step.
    double dql_update(std::span<const Transition* const> batch);

    double epsilon() const;
    nn::Vector q_values(const env::Observation& obs) const;
    void sync_target();

    const nn::Mlp& q_network() const { return q_; }
    nn::Mlp& mutable_q_network() { return q_; }
    const nn::Mlp& target_network() const { return target_; }
    const ReplayBuffer& replay() const { return replay_; }

    void write_payload(BinaryWriter& out) const override;
    void read_payload(BinaryReader& in) override;

private:
    nn::Mlp q_;
    nn::Mlp target_;
    nn::Optimizer optimizer_;
    ReplayBuffer replay_;
    std::mt19937_64 rng_;
    std::uint64_t pending_ = 0;
    std::uint64_t gradient_steps_ = 0;
    std::uint64_t last_sync_ = 0;
};

}  // namespace pdsc::agents
