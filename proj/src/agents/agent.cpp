#include "pdsc/agents/agent.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>

#include "pdsc/agents/actor_critic.hpp"
#include "pdsc/agents/dql.hpp"
#include "pdsc/agents/fixed_time.hpp"

namespace pdsc::agents {

namespace {

constexpr std::array<char, 8> kMagic{'P', 'D', 'S', 'C', 'A', 'G', 'N', 'T'};

}  // namespace

nn::Vector encode_observation(const env::Observation& obs, const AgentConfig& config) {
    nn::Vector x(static_cast<Eigen::Index>(obs.size()));
    for (std::size_t i = 0; i < obs.size(); ++i) x(static_cast<Eigen::Index>(i)) = obs[i];
    const auto t = static_cast<Eigen::Index>(env::Observation::kPhaseTime);
    x(t) = std::min(x(t) / config.phase_time_scale, config.phase_time_clip);
    return x;
}

nn::Matrix encode_batch(const std::vector<const env::Observation*>& observations, const AgentConfig& config) {
    if (observations.empty()) return {};
    nn::Matrix m(static_cast<Eigen::Index>(observations.front()->size()), static_cast<Eigen::Index>(observations.size()));
    for (std::size_t j = 0; j < observations.size(); ++j) {
        m.col(static_cast<Eigen::Index>(j)) = encode_observation(*observations[j], config);
    }
    return m;
}

Agent::Agent(AgentConfig config, std::size_t observation_size)
    : config_(std::move(config)), observation_size_(observation_size) {
    config_.validate();
    if (observation_size_ <= env::Observation::kPhaseTime) {
        throw ConfigError("observation size " + std::to_string(observation_size_) + " is too small");
    }
}

void Agent::check_observation(const env::Observation& obs) const {
    if (obs.size() != observation_size_) {
        throw nn::DimensionError("observation has " + std::to_string(obs.size()) + " slots, agent expects " +
                                 std::to_string(observation_size_));
    }
}

std::unique_ptr<Agent> make_agent(const AgentConfig& config, std::size_t observation_size) {
    switch (config.algorithm) {
        case Algorithm::DQL: return std::make_unique<DqlAgent>(config, observation_size);
        case Algorithm::A2C:
        case Algorithm::PPO:
        case Algorithm::ACKTR: return std::make_unique<ActorCriticAgent>(config, observation_size);
        case Algorithm::FixedTime: return std::make_unique<FixedTimeAgent>(config, observation_size);
    }
    throw ConfigError("unknown algorithm");
}

void write_agent(std::ostream& out, const Agent& agent) {
    BinaryWriter w(out);
    w.write_bytes(kMagic);
    w.write_u32(kAgentFormatVersion);
    w.write_string(std::string(to_string(agent.algorithm())));
    w.write_string(serialize_agent_config(agent.config()));
    w.write_u32(static_cast<std::uint32_t>(agent.observation_size()));
    w.write_u64(agent.training_steps());
    agent.write_payload(w);
}

std::unique_ptr<Agent> read_agent(std::istream& in, std::optional<Algorithm> expected) {
    BinaryReader r(in);
    std::array<char, 8> magic{};
    r.read_bytes(magic);
    if (magic != kMagic) throw FormatError("not an agent checkpoint (bad magic)");
    const std::uint32_t version = r.read_u32();
    if (version != kAgentFormatVersion) {
        throw FormatError("unsupported agent checkpoint version " + std::to_string(version));
    }
    Algorithm algorithm;
    AgentConfig config;
    try {
        algorithm = parse_algorithm(r.read_string(64));
        config = parse_agent_config(r.read_string());
    } catch (const ConfigError& e) {
        throw FormatError(std::string("corrupt agent header: ") + e.what());
    }
    if (config.algorithm != algorithm) throw FormatError("agent header algorithm fields disagree");
    if (expected && *expected != algorithm) {
        throw AlgorithmMismatchError("checkpoint holds a " + std::string(to_string(algorithm)) + " agent, expected " +
                                     std::string(to_string(*expected)));
    }
    const std::uint32_t observation_size = r.read_u32();
    if (observation_size == 0 || observation_size > 4096) throw FormatError("implausible observation size");
    const std::uint64_t steps = r.read_u64();

    std::unique_ptr<Agent> agent;
    try {
        agent = make_agent(config, observation_size);
    } catch (const ConfigError& e) {
        throw FormatError(std::string("corrupt agent header: ") + e.what());
    }
    agent->read_payload(r);
    agent->training_steps_ = steps;
    return agent;
}

void save_agent(const std::string& path, const Agent& agent) {
    const std::filesystem::path parent = std::filesystem::path(path).parent_path();
    std::error_code ec;
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CheckpointError("cannot open '" + path + "' for writing");
    write_agent(out, agent);
    out.flush();
    if (!out) throw CheckpointError("write to '" + path + "' failed");
}

std::unique_ptr<Agent> load_agent(const std::string& path, std::optional<Algorithm> expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open checkpoint '" + path + "'");
    return read_agent(in, expected);
}

}  // namespace pdsc::agents
