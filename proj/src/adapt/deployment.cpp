#include "pdsc/adapt/deployment.hpp"

#include <cmath>
#include <sstream>

#include "pdsc/adapt/instability.hpp"
#include "pdsc/nn/kfac.hpp"
#include "pdsc/nn/optimizer.hpp"

namespace pdsc::adapt {

namespace {

std::optional<double> mean_of(double total, std::int64_t count) {
    if (count <= 0) return std::nullopt;
    return total / static_cast<double>(count);
}

struct WindowTracker {
    sim::MetricsSnapshot last;

    TimelinePoint close(const sim::MetricsSnapshot& now, std::int64_t step, double rate) {
        TimelinePoint p;
        p.step = step;
        p.detection_rate = rate;
        p.wait_all = mean_of(now.total_wait_all - last.total_wait_all, now.count_all - last.count_all);
        p.wait_detected = mean_of(now.total_wait_detected - last.total_wait_detected,
                                  now.count_detected - last.count_detected);
        p.wait_undetected = mean_of(now.total_wait_undetected - last.total_wait_undetected,
                                    now.count_undetected - last.count_undetected);
        last = now;
        return p;
    }
};

DetectionSchedule parse_schedule(const std::string& text) {
    std::vector<Breakpoint> points;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw ConfigError("schedule entry '" + item + "' is not time:rate");
        try {
            points.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
        } catch (const std::logic_error&) {
            throw ConfigError("schedule entry '" + item + "' is not numeric");
        }
    }
    return DetectionSchedule(std::move(points));
}

}  // namespace

void DeploymentConfig::validate() const {
    if (total_steps < 0) throw ConfigError("deployment total_steps must be non-negative");
    if (update_period && *update_period <= 0) throw ConfigError("deployment update_period must be positive");
    if (window <= 0) throw ConfigError("deployment window must be positive");
    if (median_points <= 0) throw ConfigError("deployment median_points must be positive");
    if (!(threshold > 1.0)) throw ConfigError("instability threshold must exceed 1");
}

DeploymentConfig load_deployment_config(const KeyValueConfig& config, double time_step, DeploymentConfig base) {
    DeploymentConfig d = std::move(base);
    if (auto v = config.get_int("deploy.total_steps")) d.total_steps = *v;
    if (auto v = config.get_int("deploy.window")) d.window = *v;
    if (auto v = config.get_int("deploy.median_points")) d.median_points = *v;
    config.read("deploy.threshold", d.threshold);
    config.read("deploy.seed", d.seed);
    if (auto text = config.get_string("deploy.update_period")) {
        if (*text == "none" || *text == "inf") {
            d.update_period.reset();
        } else {
            const auto period = *config.get_int("deploy.update_period");
            d.update_period = period > 0 ? std::optional<std::int64_t>(period) : std::nullopt;
        }
    }
    if (auto text = config.get_string("deploy.schedule")) {
        d.schedule = parse_schedule(*text);
    } else {
        double start = d.schedule.breakpoints().front().rate;
        double end = d.schedule.breakpoints().back().rate;
        config.read("deploy.start_rate", start);
        config.read("deploy.end_rate", end);
        const double horizon = std::max(static_cast<double>(d.total_steps) * time_step, time_step);
        d.schedule = DetectionSchedule::linear_ramp(0.0, start, horizon, end);
    }
    d.validate();
    return d;
}

std::size_t flag_timeline(std::vector<TimelinePoint>& timeline, std::size_t median_points, double threshold) {
    std::vector<std::optional<double>> series;
    series.reserve(timeline.size());
    for (const auto& p : timeline) series.push_back(p.wait_all);
    const auto flags = detect_instability(series, median_points, threshold);
    for (std::size_t i = 0; i < timeline.size(); ++i) timeline[i].instability_flag = flags[i];
    return count_flags(flags);
}

DeploymentResult run_deployment(agents::Agent& agent, const env::EnvConfig& env_config,
                                const DeploymentConfig& deploy) {
    deploy.validate();
    DeploymentResult result;
    if (deploy.total_steps == 0) return result;

    env::EnvConfig config = env_config;
    const double dt = config.sim.time_step;
    config.episode_length = static_cast<double>(deploy.total_steps) * dt;
    config.sim.detection_rate = deploy.schedule.rate_at(0.0);
    env::Environment env(config);
    env::Observation obs = env.reset(deploy.seed);

    const bool learning = deploy.update_period.has_value();
    WindowTracker tracker;
    std::int64_t step = 0;
    try {
        while (step < deploy.total_steps) {
            env.set_detection_rate(deploy.schedule.rate_at(static_cast<double>(step) * dt));
            const env::Action action = learning ? agent.act(obs, true) : agent.greedy_action(obs);
            auto r = env.step(action);
            ++step;
            if (learning) {
                agent.observe({obs, action, r.info.reward.partial, r.observation, false});
                if (step % *deploy.update_period == 0) {
                    if (agent.update().updated) ++result.updates;
                }
            }
            obs = std::move(r.observation);
            if (step % deploy.window == 0 || step == deploy.total_steps) {
                result.timeline.push_back(
                    tracker.close(env.metrics(), step, deploy.schedule.rate_at(static_cast<double>(step) * dt)));
            }
        }
    } catch (const nn::DivergenceError& e) {
        result.aborted = true;
        result.error = e.what();
    } catch (const nn::NumericalError& e) {
        result.aborted = true;
        result.error = e.what();
    }
    if (result.aborted && (result.timeline.empty() || result.timeline.back().step != step)) {
        result.timeline.push_back(
            tracker.close(env.metrics(), step, deploy.schedule.rate_at(static_cast<double>(step) * dt)));
    }
    result.flag_count =
        flag_timeline(result.timeline, static_cast<std::size_t>(deploy.median_points), deploy.threshold);
    return result;
}

}  // namespace pdsc::adapt
