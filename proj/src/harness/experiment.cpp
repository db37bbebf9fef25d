#include "pdsc/harness/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "pdsc/harness/csv.hpp"

namespace pdsc::harness {

namespace {

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::stringstream ss{std::string(text)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
                   item.end());
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

}  // namespace

void ExperimentSpec::validate() const {
    if (algorithms.empty()) throw ConfigError("experiment needs at least one algorithm");
    if (seeds.empty()) throw ConfigError("experiment needs at least one seed");
    for (double r : rates) {
        if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("detection rates must lie in [0,1]");
    }
    if (training_steps < 0) throw ConfigError("training_steps must be non-negative");
    if (eval_episodes < 1) throw ConfigError("eval_episodes must be positive");
}

std::vector<double> parse_rate_list(std::string_view text) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) {
        double rate = 0.0;
        try {
            rate = parse_double(item);
        } catch (const CsvError&) {
            throw ConfigError("bad detection rate '" + item + "'");
        }
        if (!(rate >= 0.0 && rate <= 1.0)) throw ConfigError("detection rate '" + item + "' outside [0,1]");
        out.push_back(rate);
    }
    return out;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
    std::vector<std::uint64_t> out;
    for (const auto& item : split_list(text)) {
        try {
            const auto v = parse_int(item);
            if (v < 0) throw CsvError("negative");
            out.push_back(static_cast<std::uint64_t>(v));
        } catch (const CsvError&) {
            throw ConfigError("bad seed '" + item + "'");
        }
    }
    return out;
}

RunConfig load_run_config(const KeyValueConfig& file) {
    RunConfig run;
    run.file = file;
    auto& spec = run.spec;
    file.read("experiment.name", spec.name);
    if (auto s = file.get_string("experiment.scenario")) {
        auto parsed = sim::parse_scenario(*s);
        if (!parsed) throw ConfigError("unknown scenario '" + *s + "'");
        spec.scenario = *parsed;
    }
    if (auto s = file.get_string("experiment.algorithms")) spec.algorithms = agents::parse_algorithm_list(*s);
    if (auto s = file.get_string("experiment.rates")) spec.rates = parse_rate_list(*s);
    if (auto s = file.get_string("experiment.seeds")) spec.seeds = parse_seed_list(*s);
    if (auto v = file.get_int("experiment.training_steps")) spec.training_steps = *v;
    file.read("experiment.eval_episodes", spec.eval_episodes);
    file.read("experiment.output_dir", spec.output_dir);
    file.read("experiment.inline_training", spec.inline_training);
    file.read("experiment.parallel_cells", spec.parallel_cells);
    spec.validate();

    env::EnvConfig base;
    base.sim = sim::scenario_preset(spec.scenario);
    run.env = env::load_env_config(file, base);
    run.deploy = adapt::load_deployment_config(file, run.env.sim.time_step);
    return run;
}

agents::AgentConfig agent_config_for(const RunConfig& run, agents::Algorithm algorithm, std::uint64_t seed) {
    agents::AgentConfig config = agents::default_agent_config(algorithm);
    config.seed = seed;
    config.exploration_steps = std::max<std::int64_t>(run.spec.training_steps, 1);
    const std::string specific = "agent_" + lowercase(agents::to_string(algorithm));
    config = agents::load_agent_config(run.file, config, "agent");
    config = agents::load_agent_config(run.file, config, specific);
    config.algorithm = algorithm;
    config.validate();
    return config;
}

env::EnvConfig env_for_rate(const RunConfig& run, double rate) {
    env::EnvConfig config = run.env;
    config.sim.detection_rate = rate;
    config.validate();
    return config;
}

std::string cell_name(agents::Algorithm algorithm, sim::Scenario scenario, double rate, std::uint64_t seed) {
    return std::string(agents::to_string(algorithm)) + "_" + std::string(sim::to_string(scenario)) + "_r" +
           format_double(rate) + "_s" + std::to_string(seed);
}

std::string checkpoint_path(const std::string& output_dir, agents::Algorithm algorithm, sim::Scenario scenario,
                            double rate, std::uint64_t seed) {
    return output_dir + "/checkpoints/" + cell_name(algorithm, scenario, rate, seed) + ".agent";
}

}  // namespace pdsc::harness
