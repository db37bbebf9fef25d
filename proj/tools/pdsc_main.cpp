// Command-line front end: train, sweep, adapt, eval.
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pdsc/harness/commands.hpp"

namespace {

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> algo;
    std::optional<std::string> rates;
    std::optional<std::string> scenario;
    std::optional<std::int64_t> steps;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_algo, const std::string& steps_help) {
    cmd->add_option("--config", f.config, "sectioned key-value config file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", f.seed, "run seed (replaces experiment.seeds)");
    cmd->add_option("--out", f.out, "output directory");
    if (with_algo) cmd->add_option("--algo", f.algo, "comma-separated algorithms: DQL,A2C,PPO,ACKTR,FixedTime");
    cmd->add_option("--rates", f.rates, "comma-separated detection rates");
    cmd->add_option("--scenario", f.scenario, "simple-sparse | simple-medium | simple-dense");
    if (!steps_help.empty()) cmd->add_option("--steps", f.steps, steps_help);
}

pdsc::KeyValueConfig build_config(const CommonFlags& f, const std::string& steps_key) {
    pdsc::KeyValueConfig kv = f.config.empty() ? pdsc::KeyValueConfig() : pdsc::KeyValueConfig::load(f.config);
    if (f.seed) kv.set("experiment.seeds", std::to_string(*f.seed));
    if (f.out) kv.set("experiment.output_dir", *f.out);
    if (f.algo) kv.set("experiment.algorithms", *f.algo);
    if (f.rates) kv.set("experiment.rates", *f.rates);
    if (f.scenario) kv.set("experiment.scenario", *f.scenario);
    if (f.steps && !steps_key.empty()) kv.set(steps_key, std::to_string(*f.steps));
    return kv;
}

int finish(const pdsc::harness::CommandReport& report) {
    if (report.ok()) {
        std::cout << report.cells << " cells completed\n";
        return 0;
    }
    std::cerr << report.failures.size() << " of " << report.cells << " cells failed:\n";
    for (const auto& f : report.failures) std::cerr << "  " << f.cell << ": " << f.error << '\n';
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Traffic signal control under partial vehicle detection"};
    app.require_subcommand(1);

    CommonFlags train_flags, sweep_flags, adapt_flags, eval_flags;
    auto* train = app.add_subcommand("train", "train agents at fixed detection rates and save checkpoints");
    add_common(train, train_flags, true, "training steps per run");
    auto* sweep = app.add_subcommand("sweep", "evaluate agents across detection rates (CSV + SVG)");
    add_common(sweep, sweep_flags, true, "training steps for cells trained inline");
    auto* adapt = app.add_subcommand("adapt", "deploy pre-trained agents along a detection-rate schedule");
    add_common(adapt, adapt_flags, true, "deployment steps");
    auto* eval = app.add_subcommand("eval", "greedy evaluation of a saved agent");
    add_common(eval, eval_flags, false, "");
    std::string checkpoint;
    std::optional<int> episodes;
    eval->add_option("--checkpoint", checkpoint, "agent checkpoint file")->required()->check(CLI::ExistingFile);
    eval->add_option("--episodes", episodes, "evaluation episodes");

    CLI11_PARSE(app, argc, argv);

    try {
        using namespace pdsc::harness;
        if (*train) return finish(cmd_train(load_run_config(build_config(train_flags, "experiment.training_steps")), std::cout));
        if (*sweep) {
            const auto out = cmd_sweep(load_run_config(build_config(sweep_flags, "experiment.training_steps")), std::cout);
            return finish(out.report);
        }
        if (*adapt) {
            const auto out = cmd_adapt(load_run_config(build_config(adapt_flags, "deploy.total_steps")), std::cout);
            return finish(out.report);
        }
        const auto run = load_run_config(build_config(eval_flags, ""));
        EvalRequest request;
        request.checkpoint = checkpoint;
        request.episodes = episodes.value_or(run.spec.eval_episodes);
        request.seed = run.spec.seeds.front();
        if (run.spec.rates.size() != 1) {
            std::cerr << "eval takes exactly one detection rate\n";
            return 2;
        }
        request.detection_rate = run.spec.rates.front();
        cmd_eval(run, request, std::cout);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
