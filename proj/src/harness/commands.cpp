#include "pdsc/harness/commands.hpp"

#include <exception>
#include <filesystem>
#include <map>
#include <sstream>

#include "pdsc/common/seeding.hpp"
#include "pdsc/harness/svg.hpp"

namespace pdsc::harness {

namespace {

struct Cell {
    agents::Algorithm algorithm;
    double rate;
    std::uint64_t seed;
};

std::vector<Cell> sweep_cells(const ExperimentSpec& spec) {
    std::vector<Cell> cells;
    for (auto a : spec.algorithms) {
        for (double r : spec.rates) {
            for (auto s : spec.seeds) cells.push_back({a, r, s});
        }
    }
    return cells;
}

// Runs body(i, log) for every cell, possibly concurrently; logs are replayed in cell order so the
// console output does not depend on scheduling.
template <class Body>
void for_each_cell(std::size_t n, bool parallel, std::ostream& log, Body&& body) {
    std::vector<std::string> logs(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        std::ostringstream cell_log;
        body(static_cast<std::size_t>(i), cell_log);
        logs[static_cast<std::size_t>(i)] = cell_log.str();
    }
    for (const auto& l : logs) log << l;
}

std::string describe(const std::exception_ptr& e) {
    try {
        std::rethrow_exception(e);
    } catch (const std::exception& ex) {
        return ex.what();
    } catch (...) {
        return "unknown error";
    }
}

void collect_failures(CommandReport& report, const std::vector<std::optional<CellFailure>>& failures) {
    for (const auto& f : failures) {
        if (f) report.failures.push_back(*f);
    }
}

}  // namespace

TrainedAgent train_cell(const RunConfig& run, agents::Algorithm algorithm, double rate, std::uint64_t seed) {
    const auto env = env_for_rate(run, rate);
    TrainedAgent out;
    out.agent = agents::make_agent(agent_config_for(run, algorithm, seed), env.observation_size());
    out.training = agents::train_agent(*out.agent, env, run.spec.training_steps, seed);
    return out;
}

std::unique_ptr<agents::Agent> obtain_agent(const RunConfig& run, agents::Algorithm algorithm, double rate,
                                            std::uint64_t seed, std::ostream& log) {
    const std::string path = checkpoint_path(run.spec.output_dir, algorithm, run.spec.scenario, rate, seed);
    const std::string name = cell_name(algorithm, run.spec.scenario, rate, seed);
    // Nothing to learn: the baseline is built from its configuration.
    if (algorithm == agents::Algorithm::FixedTime && !std::filesystem::exists(path)) {
        return agents::make_agent(agent_config_for(run, algorithm, seed), run.env.observation_size());
    }
    if (std::filesystem::exists(path)) {
        log << name << ": loaded " << path << '\n';
        return agents::load_agent(path, algorithm);
    }
    if (!run.spec.inline_training) throw std::runtime_error("missing checkpoint " + path);
    auto trained = train_cell(run, algorithm, rate, seed);
    if (trained.training.diverged) throw std::runtime_error("training diverged: " + trained.training.error);
    agents::save_agent(path, *trained.agent);
    write_text_file(run.spec.output_dir + "/curves/" + name + ".csv", curve_csv(trained.training.curve));
    log << name << ": trained " << trained.training.steps << " steps\n";
    return std::move(trained.agent);
}

CommandReport cmd_train(const RunConfig& run, std::ostream& log) {
    const auto cells = sweep_cells(run.spec);
    std::vector<std::optional<CellFailure>> failures(cells.size());
    for_each_cell(cells.size(), run.spec.parallel_cells, log, [&](std::size_t i, std::ostream& out) {
        const Cell& c = cells[i];
        const std::string name = cell_name(c.algorithm, run.spec.scenario, c.rate, c.seed);
        try {
            auto trained = train_cell(run, c.algorithm, c.rate, c.seed);
            agents::save_agent(checkpoint_path(run.spec.output_dir, c.algorithm, run.spec.scenario, c.rate, c.seed),
                               *trained.agent);
            write_text_file(run.spec.output_dir + "/curves/" + name + ".csv", curve_csv(trained.training.curve));
            out << name << ": " << trained.training.steps << " steps, " << trained.training.curve.size()
                << " episodes";
            if (!trained.training.curve.empty() && trained.training.curve.back().wait_all) {
                out << ", last episode wait " << format_double(*trained.training.curve.back().wait_all) << " s";
            }
            out << '\n';
            if (trained.training.diverged) {
                out << name << ": diverged: " << trained.training.error << '\n';
                failures[i] = CellFailure{name, "diverged: " + trained.training.error};
            }
        } catch (...) {
            failures[i] = CellFailure{name, describe(std::current_exception())};
            out << name << ": FAILED: " << failures[i]->error << '\n';
        }
    });
    CommandReport report;
    report.cells = cells.size();
    collect_failures(report, failures);
    return report;
}

SweepOutput cmd_sweep(const RunConfig& run, std::ostream& log) {
    const auto cells = sweep_cells(run.spec);
    std::vector<std::optional<SweepRecord>> records(cells.size());
    std::vector<std::optional<CellFailure>> failures(cells.size());
    for_each_cell(cells.size(), run.spec.parallel_cells, log, [&](std::size_t i, std::ostream& out) {
        const Cell& c = cells[i];
        const std::string name = cell_name(c.algorithm, run.spec.scenario, c.rate, c.seed);
        try {
            auto agent = obtain_agent(run, c.algorithm, c.rate, c.seed, out);
            const auto summary =
                parallel::evaluate(*agent, env_for_rate(run, c.rate), run.spec.eval_episodes, c.seed);
            SweepRecord r;
            r.algorithm = std::string(agents::to_string(c.algorithm));
            r.scenario = std::string(sim::to_string(run.spec.scenario));
            r.detection_rate = c.rate;
            r.seed = c.seed;
            r.wait_all = summary.wait_all;
            r.wait_detected = summary.wait_detected;
            r.wait_undetected = summary.wait_undetected;
            r.episodes = summary.episodes;
            out << name << ": wait all " << format_optional(r.wait_all) << " detected "
                << format_optional(r.wait_detected) << " undetected " << format_optional(r.wait_undetected) << '\n';
            records[i] = std::move(r);
        } catch (...) {
            failures[i] = CellFailure{name, describe(std::current_exception())};
            out << name << ": FAILED: " << failures[i]->error << '\n';
        }
    });

    SweepOutput output;
    output.report.cells = cells.size();
    collect_failures(output.report, failures);
    for (auto& r : records) {
        if (r) output.records.push_back(std::move(*r));
    }

    const std::string dir = run.spec.output_dir;
    write_text_file(dir + "/sweep.csv", sweep_csv(output.records));
    const auto summary = summarize_sweep(output.records);
    write_text_file(dir + "/sweep_summary.csv", sweep_summary_csv(summary));

    Chart chart;
    chart.title = "Waiting time vs detection rate (" + std::string(sim::to_string(run.spec.scenario)) + ")";
    chart.x_label = "detection rate";
    chart.y_label = "mean waiting time (s)";
    for (auto algorithm : run.spec.algorithms) {
        const std::string a(agents::to_string(algorithm));
        ChartSeries all{a + " all", {}}, det{a + " detected", {}}, undet{a + " undetected", {}};
        for (const auto& s : summary) {
            if (s.algorithm != a) continue;
            if (s.wait_all_mean) all.points.emplace_back(s.detection_rate, *s.wait_all_mean);
            if (s.wait_detected_mean) det.points.emplace_back(s.detection_rate, *s.wait_detected_mean);
            if (s.wait_undetected_mean) undet.points.emplace_back(s.detection_rate, *s.wait_undetected_mean);
        }
        for (auto* series : {&all, &det, &undet}) {
            if (!series->points.empty()) chart.series.push_back(std::move(*series));
        }
    }
    try {
        write_svg(dir + "/sweep.svg", chart);
    } catch (const EmptyChartError& e) {
        log << "sweep.svg not written: " << e.what() << '\n';
    }
    return output;
}

AdaptOutput cmd_adapt(const RunConfig& run, std::ostream& log) {
    std::vector<Cell> cells;
    const double start_rate = run.deploy.schedule.rate_at(0.0);
    for (auto a : run.spec.algorithms) {
        for (auto s : run.spec.seeds) cells.push_back({a, start_rate, s});
    }
    std::vector<AdaptRun> runs(cells.size());
    std::vector<std::optional<CellFailure>> failures(cells.size());
    for_each_cell(cells.size(), run.spec.parallel_cells, log, [&](std::size_t i, std::ostream& out) {
        const Cell& c = cells[i];
        const std::string algo(agents::to_string(c.algorithm));
        const std::string name = algo + "_s" + std::to_string(c.seed);
        runs[i].algorithm = algo;
        runs[i].seed = c.seed;
        try {
            auto agent = obtain_agent(run, c.algorithm, c.rate, c.seed, out);
            adapt::DeploymentConfig deploy = run.deploy;
            deploy.seed = derive_seed(run.deploy.seed, {c.seed});
            runs[i].result = adapt::run_deployment(*agent, run.env, deploy);
            const auto& r = runs[i].result;
            out << name << ": " << r.timeline.size() << " points, " << r.flag_count << " instability flags, "
                << r.updates << " updates\n";
            if (r.aborted) {
                out << name << ": ABORTED: " << r.error << '\n';
                failures[i] = CellFailure{name, "aborted: " + r.error};
            }
            write_text_file(run.spec.output_dir + "/timelines/" + name + ".csv", timeline_csv(r.timeline));
        } catch (...) {
            failures[i] = CellFailure{name, describe(std::current_exception())};
            out << name << ": FAILED: " << failures[i]->error << '\n';
        }
    });

    AdaptOutput output;
    output.report.cells = cells.size();
    collect_failures(output.report, failures);
    for (std::size_t i = 0; i < runs.size(); ++i) {
        InstabilityRecord rec;
        rec.algorithm = runs[i].algorithm;
        rec.seed = runs[i].seed;
        rec.flags = runs[i].result.flag_count;
        rec.points = runs[i].result.timeline.size();
        rec.updates = runs[i].result.updates;
        rec.status = failures[i] ? (runs[i].result.aborted ? "aborted" : "failed") : "ok";
        output.summary.push_back(rec);
    }
    output.runs = std::move(runs);

    const std::string dir = run.spec.output_dir;
    write_text_file(dir + "/instability.csv", instability_csv(output.summary));
    log << "algorithm  seed  flags  points  status\n";
    for (const auto& r : output.summary) {
        log << r.algorithm << "  " << r.seed << "  " << r.flags << "  " << r.points << "  " << r.status << '\n';
    }

    // One series per algorithm: per-point mean over seeds of the all-vehicle waiting time.
    Chart chart;
    chart.title = "Waiting time during deployment";
    chart.x_label = "step";
    chart.y_label = "mean waiting time (s)";
    for (auto algorithm : run.spec.algorithms) {
        const std::string a(agents::to_string(algorithm));
        std::map<std::int64_t, std::pair<double, int>> acc;
        for (const auto& r : output.runs) {
            if (r.algorithm != a) continue;
            for (const auto& p : r.result.timeline) {
                if (!p.wait_all) continue;
                auto& slot = acc[p.step];
                slot.first += *p.wait_all;
                ++slot.second;
            }
        }
        ChartSeries series{a, {}};
        for (const auto& [step, sum] : acc) {
            series.points.emplace_back(static_cast<double>(step), sum.first / sum.second);
        }
        if (!series.points.empty()) chart.series.push_back(std::move(series));
    }
    try {
        write_svg(dir + "/adapt.svg", chart);
    } catch (const EmptyChartError& e) {
        log << "adapt.svg not written: " << e.what() << '\n';
    }
    return output;
}

EvaluationSummary cmd_eval(const RunConfig& run, const EvalRequest& request, std::ostream& log) {
    auto agent = agents::load_agent(request.checkpoint);
    const auto env = env_for_rate(run, request.detection_rate);
    if (agent->observation_size() != env.observation_size()) {
        throw ShapeMismatchError("checkpoint '" + request.checkpoint + "' expects observations of length " +
                                 std::to_string(agent->observation_size()) + " but the environment produces " +
                                 std::to_string(env.observation_size()) +
                                 (env.include_time_of_day ? " (time of day enabled)" : ""));
    }
    auto summary = parallel::evaluate(*agent, env, request.episodes, request.seed);

    std::string row = request.checkpoint + "," + std::string(agents::to_string(agent->algorithm())) + "," +
                      std::string(sim::to_string(run.spec.scenario)) + "," + format_double(request.detection_rate) +
                      "," + std::to_string(summary.episodes) + "," + format_optional(summary.wait_all) + "," +
                      format_optional(summary.wait_detected) + "," + format_optional(summary.wait_undetected) +
                      "," + std::to_string(summary.vehicles) + "," + format_double(summary.mean_return) + "," +
                      format_double(summary.mean_full_return) + "," + format_double(summary.mean_queue) + "\n";
    write_text_file(run.spec.output_dir + "/eval.csv", std::string(kEvalHeader) + "\n" + row);

    log << "algorithm       " << agents::to_string(agent->algorithm()) << '\n'
        << "episodes        " << summary.episodes << '\n'
        << "wait all        " << format_optional(summary.wait_all) << " s\n"
        << "wait detected   " << format_optional(summary.wait_detected) << " s\n"
        << "wait undetected " << format_optional(summary.wait_undetected) << " s\n"
        << "vehicles        " << summary.vehicles << " (" << summary.detected << " detected)\n"
        << "mean return     " << format_double(summary.mean_return) << '\n'
        << "mean queue      " << format_double(summary.mean_queue) << '\n';
    return summary;
}

}  // namespace pdsc::harness
