#pragma once

#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pdsc/agents/agent_config.hpp"
#include "pdsc/common/binary_io.hpp"
#include "pdsc/env/environment.hpp"
#include "pdsc/nn/mlp.hpp"

namespace pdsc::agents {

struct Transition {
    env::Observation state;
    env::Action action = env::Action::Keep;
    double reward = 0.0;
    env::Observation next_state;
    bool done = false;
};

struct UpdateStats {
    bool updated = false;
    double actor_loss = 0.0;
    double critic_loss = 0.0;
};

class AlgorithmMismatchError : public CheckpointError {
public:
    using CheckpointError::CheckpointError;
};

// Network input for an observation: phase time rescaled and clipped, other slots unchanged.
nn::Vector encode_observation(const env::Observation& obs, const AgentConfig& config);
nn::Matrix encode_batch(const std::vector<const env::Observation*>& observations, const AgentConfig& config);

// Uniform controller interface. `act` may advance the agent's random stream; `greedy_action`
// is const and safe to call from several threads between updates.
class Agent {
public:
    virtual ~Agent() = default;

    virtual Algorithm algorithm() const { return config_.algorithm; }
    const AgentConfig& config() const { return config_; }
    std::size_t observation_size() const { return observation_size_; }
    std::uint64_t training_steps() const { return training_steps_; }

    virtual env::Action act(const env::Observation& obs, bool explore) = 0;
    virtual env::Action greedy_action(const env::Observation& obs) const = 0;

    // Stores a transition; the agent decides when enough data has accumulated.
    virtual void observe(const Transition& transition) = 0;
    virtual bool update_due() const = 0;
    // Consumes buffered data; throws nn::DivergenceError on a non-finite loss.
    virtual UpdateStats update() = 0;
    // Drops buffered on-policy data without learning from it.
    virtual void discard_pending() {}

    virtual std::unique_ptr<Agent> clone() const = 0;
    // All trainable parameters flattened, in a fixed order.
    virtual std::vector<double> parameters() const { return {}; }

    virtual void write_payload(BinaryWriter& out) const = 0;
    virtual void read_payload(BinaryReader& in) = 0;

protected:
    Agent(AgentConfig config, std::size_t observation_size);

    void check_observation(const env::Observation& obs) const;

    AgentConfig config_;
    std::size_t observation_size_;
    std::uint64_t training_steps_ = 0;

    friend std::unique_ptr<Agent> read_agent(std::istream&, std::optional<Algorithm>);
};

std::unique_ptr<Agent> make_agent(const AgentConfig& config, std::size_t observation_size);

// Agent checkpoint layout (little-endian):
//   magic "PDSCAGNT", version u32, algorithm name, config text (key = value lines),
//   observation size u32, training-step counter u64, then the algorithm payload
//   (networks in the network checkpoint format, optimizer and exploration state).
inline constexpr std::uint32_t kAgentFormatVersion = 1;

void write_agent(std::ostream& out, const Agent& agent);
std::unique_ptr<Agent> read_agent(std::istream& in, std::optional<Algorithm> expected = std::nullopt);
void save_agent(const std::string& path, const Agent& agent);
std::unique_ptr<Agent> load_agent(const std::string& path, std::optional<Algorithm> expected = std::nullopt);

}  // namespace pdsc::agents
