#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pdsc/adapt/deployment.hpp"
#include "pdsc/agents/training.hpp"

namespace pdsc::harness {

class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Doubles are written in shortest round-trip form; absent values are empty fields.
std::string format_double(double v);
std::string format_optional(const std::optional<double>& v);
std::vector<std::string> split_row(std::string_view line);
double parse_double(std::string_view field);
std::optional<double> parse_optional(std::string_view field);
std::int64_t parse_int(std::string_view field);

struct SweepRecord {
    std::string algorithm;
    std::string scenario;
    double detection_rate = 0.0;
    std::uint64_t seed = 0;
    std::optional<double> wait_all;
    std::optional<double> wait_detected;
    std::optional<double> wait_undetected;
    int episodes = 0;

    friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

// Per (algorithm, scenario, rate): mean and sample standard deviation across seeds.
struct SweepSummary {
    std::string algorithm;
    std::string scenario;
    double detection_rate = 0.0;
    int seeds = 0;
    std::optional<double> wait_all_mean, wait_all_std;
    std::optional<double> wait_detected_mean, wait_detected_std;
    std::optional<double> wait_undetected_mean, wait_undetected_std;

    friend bool operator==(const SweepSummary&, const SweepSummary&) = default;
};

struct InstabilityRecord {
    std::string algorithm;
    std::uint64_t seed = 0;
    std::size_t flags = 0;
    std::size_t points = 0;
    std::int64_t updates = 0;
    std::string status;  // "ok" or "aborted"

    friend bool operator==(const InstabilityRecord&, const InstabilityRecord&) = default;
};

inline constexpr std::string_view kSweepHeader =
    "algorithm,scenario,detection_rate,seed,wait_all,wait_detected,wait_undetected,episodes";
inline constexpr std::string_view kSweepSummaryHeader =
    "algorithm,scenario,detection_rate,seeds,wait_all_mean,wait_all_std,wait_detected_mean,wait_detected_std,"
    "wait_undetected_mean,wait_undetected_std";
inline constexpr std::string_view kTimelineHeader =
    "step,detection_rate,wait_all,wait_detected,wait_undetected,instability_flag";
inline constexpr std::string_view kCurveHeader = "episode,return,wait_all,wait_detected,wait_undetected";
inline constexpr std::string_view kInstabilityHeader = "algorithm,seed,flags,points,updates,status";

std::string sweep_csv(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> parse_sweep_csv(std::string_view text);

std::vector<SweepSummary> summarize_sweep(const std::vector<SweepRecord>& records);
std::string sweep_summary_csv(const std::vector<SweepSummary>& rows);
std::vector<SweepSummary> parse_sweep_summary_csv(std::string_view text);

std::string timeline_csv(const std::vector<adapt::TimelinePoint>& points);
std::vector<adapt::TimelinePoint> parse_timeline_csv(std::string_view text);

std::string curve_csv(const std::vector<agents::EpisodeRecord>& curve);
std::vector<agents::EpisodeRecord> parse_curve_csv(std::string_view text);

std::string instability_csv(const std::vector<InstabilityRecord>& rows);
std::vector<InstabilityRecord> parse_instability_csv(std::string_view text);

std::string read_text_file(const std::string& path);
// Creates parent directories; throws std::runtime_error when the file cannot be written.
void write_text_file(const std::string& path, std::string_view text);

}  // namespace pdsc::harness
