#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pdsc/common/key_value_config.hpp"
#include "pdsc/nn/kfac.hpp"
#include "pdsc/nn/optimizer.hpp"

namespace pdsc::agents {

enum class Algorithm : std::uint8_t { DQL, A2C, PPO, ACKTR, FixedTime };

std::string_view to_string(Algorithm a);
// Case-insensitive; accepts "fixed" for FixedTime.
Algorithm parse_algorithm(std::string_view name);
std::vector<Algorithm> parse_algorithm_list(std::string_view comma_separated);

struct AgentConfig {
    Algorithm algorithm = Algorithm::PPO;
    std::uint64_t seed = 1;

    double gamma = 0.95;
    double actor_lr = 3e-4;
    double critic_lr = 1e-3;
    double q_lr = 5e-4;
    std::vector<int> hidden_layers{64, 64};
    nn::OptimizerKind optimizer = nn::OptimizerKind::Adam;
    double reward_scale = 0.1;
    // Phase-time slot is divided by this and clipped to phase_time_clip before entering a network.
    double phase_time_scale = 60.0;
    double phase_time_clip = 5.0;

    // Policy-gradient agents.
    int rollout_length = 256;
    double entropy_coef = 0.01;
    double max_grad_norm = 0.5;  // 0 disables clipping
    double clip_epsilon = 0.2;
    int ppo_epochs = 4;
    int ppo_minibatch = 64;

    // ACKTR.
    double kfac_damping = 1e-2;
    double kfac_decay = 0.95;
    nn::BiasMode kfac_bias = nn::BiasMode::Separate;
    double max_step_norm = 0.05;

    // DQL.
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    double epsilon_fraction = 0.2;
    std::int64_t exploration_steps = 100000;
    int replay_capacity = 50000;
    int batch_size = 64;
    int learning_starts = 1000;
    int train_frequency = 4;
    int target_sync = 1000;
    double q_grad_clip = 10.0;  // 0 disables clipping

    // FixedTime.
    double fixed_time_green = 30.0;

    void validate() const;
};

// Per-algorithm defaults for the knobs that differ between algorithms.
AgentConfig default_agent_config(Algorithm algorithm);

// Reads the [agent] section over `base`.
AgentConfig load_agent_config(const KeyValueConfig& config, AgentConfig base, const std::string& section = "agent");

// "key = value" lines with the same keys load_agent_config understands; doubles round-trip exactly.
std::string serialize_agent_config(const AgentConfig& config);
AgentConfig parse_agent_config(std::string_view text);

}  // namespace pdsc::agents
