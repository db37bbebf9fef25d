#pragma once

#include <random>
#include <span>
#include <vector>

#include "pdsc/agents/agent.hpp"
#include "pdsc/agents/policy_math.hpp"
#include "pdsc/nn/kfac.hpp"
#include "pdsc/nn/optimizer.hpp"

namespace pdsc::agents {

// Rollout arranged for an update, with critic estimates taken before any parameter change.
struct PreparedRollout {
    PolicyBatch policy;     // states, actions, advantages, log pi_k(a|s)
    nn::Vector critic_targets;  // r + gamma V(s') (0 bootstrap at done)
    nn::Vector values;          // V(s)
};

// A2C, PPO and ACKTR share the actor/critic pair and differ in the update rule.
class ActorCriticAgent : public Agent {
public:
    ActorCriticAgent(const AgentConfig& config, std::size_t observation_size);

    env::Action act(const env::Observation& obs, bool explore) override;
    env::Action greedy_action(const env::Observation& obs) const override;

    void observe(const Transition& transition) override;
    bool update_due() const override;
    UpdateStats update() override;
    void discard_pending() override { buffer_.clear(); }

    std::unique_ptr<Agent> clone() const override;
    std::vector<double> parameters() const override;

    UpdateStats a2c_update(std::span<const Transition> rollout);
    UpdateStats ppo_update(std::span<const Transition> rollout);
    UpdateStats acktr_update(std::span<const Transition> rollout);

    PreparedRollout prepare_rollout(std::span<const Transition> rollout) const;
    UpdateStats apply_a2c(const PreparedRollout& prepared);
    UpdateStats apply_ppo(const PreparedRollout& prepared);
    UpdateStats apply_acktr(const PreparedRollout& prepared);

    nn::Vector action_probabilities(const env::Observation& obs) const;
    double value(const env::Observation& obs) const;

    const nn::Mlp& actor() const { return actor_; }
    const nn::Mlp& critic() const { return critic_; }
    nn::Mlp& mutable_actor() { return actor_; }
    nn::Mlp& mutable_critic() { return critic_; }
    const nn::KfacStats& actor_curvature() const { return actor_stats_; }
    const nn::KfacStats& critic_curvature() const { return critic_stats_; }

    // Pins the curvature factors; ACKTR updates then skip the statistics refresh.
    void set_fixed_curvature(nn::KfacStats actor, nn::KfacStats critic);

    std::size_t buffered() const { return buffer_.size(); }

    void write_payload(BinaryWriter& out) const override;
    void read_payload(BinaryReader& in) override;

private:
    void refresh_curvature(const PreparedRollout& prepared);
    void apply_natural_step(nn::Mlp& net, const nn::KfacStats& stats, nn::Gradients direction, double lr);

    nn::Mlp actor_;
    nn::Mlp critic_;
    nn::Optimizer actor_opt_;
    nn::Optimizer critic_opt_;
    nn::KfacStats actor_stats_;
    nn::KfacStats critic_stats_;
    bool fixed_curvature_ = false;
    std::vector<Transition> buffer_;
    std::mt19937_64 rng_;
};

}  // namespace pdsc::agents
