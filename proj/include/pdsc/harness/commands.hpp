#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "pdsc/adapt/deployment.hpp"
#include "pdsc/agents/agent.hpp"
#include "pdsc/harness/csv.hpp"
#include "pdsc/harness/evaluation.hpp"
#include "pdsc/harness/experiment.hpp"

namespace pdsc::harness {

struct CellFailure {
    std::string cell;
    std::string error;
};

struct CommandReport {
    std::size_t cells = 0;
    std::vector<CellFailure> failures;

    bool ok() const { return failures.empty(); }
};

struct TrainedAgent {
    std::unique_ptr<agents::Agent> agent;
    agents::TrainingResult training;
};

TrainedAgent train_cell(const RunConfig& run, agents::Algorithm algorithm, double rate, std::uint64_t seed);

// Loads the cell's checkpoint, or trains (and saves) one when allowed. Throws when neither works.
std::unique_ptr<agents::Agent> obtain_agent(const RunConfig& run, agents::Algorithm algorithm, double rate,
                                            std::uint64_t seed, std::ostream& log);

// Per (algorithm, rate, seed): checkpoint under checkpoints/, training curve under curves/.
CommandReport cmd_train(const RunConfig& run, std::ostream& log);

struct SweepOutput {
    CommandReport report;
    std::vector<SweepRecord> records;
};

// sweep.csv, sweep_summary.csv and sweep.svg in the output directory.
SweepOutput cmd_sweep(const RunConfig& run, std::ostream& log);

struct AdaptRun {
    std::string algorithm;
    std::uint64_t seed = 0;
    adapt::DeploymentResult result;
};

struct AdaptOutput {
    CommandReport report;
    std::vector<AdaptRun> runs;
    std::vector<InstabilityRecord> summary;
};

// Agents pre-trained at the schedule's starting rate, then deployed along the schedule.
// timelines/<ALGO>_s<seed>.csv per run, instability.csv and adapt.svg.
AdaptOutput cmd_adapt(const RunConfig& run, std::ostream& log);

struct EvalRequest {
    std::string checkpoint;
    int episodes = 20;
    std::uint64_t seed = 1;
    double detection_rate = 1.0;
};

inline constexpr std::string_view kEvalHeader =
    "checkpoint,algorithm,scenario,detection_rate,episodes,wait_all,wait_detected,wait_undetected,vehicles,"
    "mean_return,mean_full_return,mean_queue";

// Greedy evaluation of a saved agent, written to eval.csv. Throws ShapeMismatchError
// when the checkpoint's observation length differs from the environment's.
EvaluationSummary cmd_eval(const RunConfig& run, const EvalRequest& request, std::ostream& log);

}  // namespace pdsc::harness
