#include "pdsc/agents/agent_config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace pdsc::agents {

namespace {

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

std::string join_ints(const std::vector<int>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(xs[i]);
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
                   item.end());
        if (item.empty()) continue;
        out.push_back(std::stoi(item));
    }
    return out;
}

}  // namespace

std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::DQL: return "DQL";
        case Algorithm::A2C: return "A2C";
        case Algorithm::PPO: return "PPO";
        case Algorithm::ACKTR: return "ACKTR";
        case Algorithm::FixedTime: return "FixedTime";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view name) {
    const std::string n = lowercase(name);
    if (n == "dql" || n == "dqn") return Algorithm::DQL;
    if (n == "a2c") return Algorithm::A2C;
    if (n == "ppo") return Algorithm::PPO;
    if (n == "acktr") return Algorithm::ACKTR;
    if (n == "fixedtime" || n == "fixed" || n == "fixed_time") return Algorithm::FixedTime;
    throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

std::vector<Algorithm> parse_algorithm_list(std::string_view comma_separated) {
    std::vector<Algorithm> out;
    std::stringstream ss{std::string(comma_separated)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
                   item.end());
        if (!item.empty()) out.push_back(parse_algorithm(item));
    }
    return out;
}

void AgentConfig::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("agent config: gamma must lie in (0,1)");
    if (!(clip_epsilon > 0.0)) throw ConfigError("agent config: clip_epsilon must be positive");
    if (!(actor_lr > 0.0 && critic_lr > 0.0 && q_lr > 0.0)) {
        throw ConfigError("agent config: learning rates must be positive");
    }
    if (rollout_length < 1 || ppo_epochs < 1 || ppo_minibatch < 1) {
        throw ConfigError("agent config: rollout_length, ppo_epochs and ppo_minibatch must be >= 1");
    }
    if (replay_capacity < 1 || batch_size < 1 || train_frequency < 1 || target_sync < 1 || learning_starts < 0) {
        throw ConfigError("agent config: invalid replay settings");
    }
    if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0 && epsilon_end >= 0.0 && epsilon_end <= 1.0)) {
        throw ConfigError("agent config: exploration probabilities must lie in [0,1]");
    }
    if (!(epsilon_fraction > 0.0) || exploration_steps < 1) {
        throw ConfigError("agent config: exploration schedule must be positive");
    }
    if (!(kfac_damping >= 0.0) || !(kfac_decay >= 0.0 && kfac_decay <= 1.0) || !(max_step_norm >= 0.0)) {
        throw ConfigError("agent config: invalid K-FAC settings");
    }
    if (!(fixed_time_green > 0.0)) throw ConfigError("agent config: fixed_time_green must be positive");
    if (!(phase_time_scale > 0.0) || !(phase_time_clip > 0.0) || !(reward_scale > 0.0)) {
        throw ConfigError("agent config: observation/reward scales must be positive");
    }
    for (int h : hidden_layers) {
        if (h < 1) throw ConfigError("agent config: hidden layer sizes must be positive");
    }
}

AgentConfig default_agent_config(Algorithm algorithm) {
    AgentConfig c;
    c.algorithm = algorithm;
    switch (algorithm) {
        case Algorithm::A2C:
            c.rollout_length = 32;
            c.actor_lr = 7e-4;
            c.critic_lr = 1e-3;
            break;
        case Algorithm::PPO:
            c.rollout_length = 256;
            c.actor_lr = 3e-4;
            c.critic_lr = 1e-3;
            break;
        case Algorithm::ACKTR:
            c.rollout_length = 32;
            c.optimizer = nn::OptimizerKind::Sgd;
            c.actor_lr = 0.25;
            c.critic_lr = 0.25;
            // Smaller caps (0.05, 0.01) left the greedy policy stuck on never switching.
            c.max_step_norm = 0.5;
            break;
        case Algorithm::DQL:
        case Algorithm::FixedTime:
            break;
    }
    return c;
}

AgentConfig load_agent_config(const KeyValueConfig& config, AgentConfig base, const std::string& section) {
    const std::string p = section + ".";
    if (auto a = config.get_string(p + "algorithm")) base.algorithm = parse_algorithm(*a);
    config.read(p + "seed", base.seed);
    config.read(p + "gamma", base.gamma);
    config.read(p + "actor_lr", base.actor_lr);
    config.read(p + "critic_lr", base.critic_lr);
    config.read(p + "q_lr", base.q_lr);
    if (auto h = config.get_string(p + "hidden_layers")) base.hidden_layers = parse_int_list(*h);
    if (auto o = config.get_string(p + "optimizer")) {
        try {
            base.optimizer = nn::parse_optimizer(*o);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    config.read(p + "reward_scale", base.reward_scale);
    config.read(p + "phase_time_scale", base.phase_time_scale);
    config.read(p + "phase_time_clip", base.phase_time_clip);
    config.read(p + "rollout_length", base.rollout_length);
    config.read(p + "entropy_coef", base.entropy_coef);
    config.read(p + "max_grad_norm", base.max_grad_norm);
    config.read(p + "clip_epsilon", base.clip_epsilon);
    config.read(p + "ppo_epochs", base.ppo_epochs);
    config.read(p + "ppo_minibatch", base.ppo_minibatch);
    config.read(p + "kfac_damping", base.kfac_damping);
    config.read(p + "kfac_decay", base.kfac_decay);
    if (auto b = config.get_string(p + "kfac_bias")) {
        try {
            base.kfac_bias = nn::parse_bias_mode(*b);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    config.read(p + "max_step_norm", base.max_step_norm);
    config.read(p + "epsilon_start", base.epsilon_start);
    config.read(p + "epsilon_end", base.epsilon_end);
    config.read(p + "epsilon_fraction", base.epsilon_fraction);
    long long exploration = base.exploration_steps;
    config.read(p + "exploration_steps", exploration);
    base.exploration_steps = exploration;
    config.read(p + "replay_capacity", base.replay_capacity);
    config.read(p + "batch_size", base.batch_size);
    config.read(p + "learning_starts", base.learning_starts);
    config.read(p + "train_frequency", base.train_frequency);
    config.read(p + "target_sync", base.target_sync);
    config.read(p + "q_grad_clip", base.q_grad_clip);
    config.read(p + "fixed_time_green", base.fixed_time_green);
    base.validate();
    return base;
}

std::string serialize_agent_config(const AgentConfig& c) {
    std::ostringstream out;
    auto d = [&](const char* key, double v) { out << key << " = " << format_double(v) << '\n'; };
    auto i = [&](const char* key, long long v) { out << key << " = " << v << '\n'; };
    out << "algorithm = " << to_string(c.algorithm) << '\n';
    out << "seed = " << c.seed << '\n';
    d("gamma", c.gamma);
    d("actor_lr", c.actor_lr);
    d("critic_lr", c.critic_lr);
    d("q_lr", c.q_lr);
    out << "hidden_layers = " << join_ints(c.hidden_layers) << '\n';
    out << "optimizer = " << nn::to_string(c.optimizer) << '\n';
    d("reward_scale", c.reward_scale);
    d("phase_time_scale", c.phase_time_scale);
    d("phase_time_clip", c.phase_time_clip);
    i("rollout_length", c.rollout_length);
    d("entropy_coef", c.entropy_coef);
    d("max_grad_norm", c.max_grad_norm);
    d("clip_epsilon", c.clip_epsilon);
    i("ppo_epochs", c.ppo_epochs);
    i("ppo_minibatch", c.ppo_minibatch);
    d("kfac_damping", c.kfac_damping);
    d("kfac_decay", c.kfac_decay);
    out << "kfac_bias = " << nn::to_string(c.kfac_bias) << '\n';
    d("max_step_norm", c.max_step_norm);
    d("epsilon_start", c.epsilon_start);
    d("epsilon_end", c.epsilon_end);
    d("epsilon_fraction", c.epsilon_fraction);
    i("exploration_steps", c.exploration_steps);
    i("replay_capacity", c.replay_capacity);
    i("batch_size", c.batch_size);
    i("learning_starts", c.learning_starts);
    i("train_frequency", c.train_frequency);
    i("target_sync", c.target_sync);
    d("q_grad_clip", c.q_grad_clip);
    d("fixed_time_green", c.fixed_time_green);
    return out.str();
}

AgentConfig parse_agent_config(std::string_view text) {
    const KeyValueConfig kv = KeyValueConfig::parse("[agent]\n" + std::string(text));
    AgentConfig base;
    if (auto a = kv.get_string("agent.algorithm")) base = default_agent_config(parse_algorithm(*a));
    return load_agent_config(kv, base);
}

}  // namespace pdsc::agents
