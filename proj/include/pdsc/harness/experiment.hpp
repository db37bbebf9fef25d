#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdsc/adapt/deployment.hpp"
#include "pdsc/agents/agent_config.hpp"
#include "pdsc/common/key_value_config.hpp"
#include "pdsc/env/environment.hpp"
#include "pdsc/sim/sim_config.hpp"

namespace pdsc::harness {

struct ExperimentSpec {
    std::string name = "experiment";
    sim::Scenario scenario = sim::Scenario::Medium;
    std::vector<agents::Algorithm> algorithms{agents::Algorithm::PPO};
    std::vector<double> rates{1.0};
    std::int64_t training_steps = 100000;
    int eval_episodes = 20;
    std::vector<std::uint64_t> seeds{1};
    std::string output_dir = "out";
    // When a sweep or adaptation cell finds no checkpoint, train one on the spot.
    bool inline_training = true;
    // Fan independent cells out over OpenMP threads.
    bool parallel_cells = true;

    void validate() const;
};

// Everything a command needs, read from one sectioned file:
//   [experiment] name, scenario, algorithms, rates, training_steps, eval_episodes, seeds,
//                output_dir, inline_training, parallel_cells
//   [sim] [env] [deploy] as in their modules
//   [agent] shared agent overrides, [agent_<algorithm>] per-algorithm overrides
//   [eval] checkpoint, episodes, seed, detection_rate
struct RunConfig {
    KeyValueConfig file;
    ExperimentSpec spec;
    env::EnvConfig env;  // scenario preset with [sim]/[env] applied; detection rate set per cell
    adapt::DeploymentConfig deploy;
};

RunConfig load_run_config(const KeyValueConfig& file);

std::vector<double> parse_rate_list(std::string_view text);
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

// Defaults for the algorithm, then [agent], then [agent_<name>]. Seed and exploration
// horizon follow the run unless the file pins them.
agents::AgentConfig agent_config_for(const RunConfig& run, agents::Algorithm algorithm, std::uint64_t seed);

env::EnvConfig env_for_rate(const RunConfig& run, double rate);

// <dir>/checkpoints/<ALGO>_<scenario>_r<rate>_s<seed>.agent
std::string checkpoint_path(const std::string& output_dir, agents::Algorithm algorithm, sim::Scenario scenario,
                            double rate, std::uint64_t seed);
std::string cell_name(agents::Algorithm algorithm, sim::Scenario scenario, double rate, std::uint64_t seed);

}  // namespace pdsc::harness
