#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "pdsc/adapt/deployment.hpp"
#include "pdsc/adapt/instability.hpp"
#include "pdsc/adapt/schedule.hpp"
#include "pdsc/agents/agent.hpp"

using namespace pdsc;
using namespace pdsc::adapt;
using agents::Algorithm;

namespace {

std::vector<std::optional<double>> series_of(std::initializer_list<double> values) {
    return {values.begin(), values.end()};
}

env::EnvConfig medium_env() {
    env::EnvConfig c;
    c.sim = sim::scenario_preset(sim::Scenario::Medium);
    return c;
}

agents::AgentConfig small_agent(Algorithm a) {
    agents::AgentConfig c = agents::default_agent_config(a);
    c.hidden_layers = {8};
    c.seed = 3;
    c.learning_starts = 0;
    return c;
}

}  // namespace

TEST_CASE("schedule examples") {
    const auto ramp = DetectionSchedule::linear_ramp(0.0, 0.1, 1000.0, 1.0);
    CHECK(ramp.rate_at(0.0) == doctest::Approx(0.1));
    CHECK(ramp.rate_at(1000.0) == doctest::Approx(1.0));
    CHECK(ramp.rate_at(500.0) == doctest::Approx(0.55));
    CHECK(ramp.rate_at(-5.0) == doctest::Approx(0.1));
    CHECK(ramp.rate_at(5000.0) == doctest::Approx(1.0));
    CHECK(detection_rate_at(DetectionSchedule::constant(0.4), 123.0) == 0.4);

    const DetectionSchedule steps({{0.0, 0.2}, {10.0, 0.2}, {20.0, 0.8}, {30.0, 0.5}});
    CHECK(steps.rate_at(5.0) == doctest::Approx(0.2));
    CHECK(steps.rate_at(15.0) == doctest::Approx(0.5));
    CHECK(steps.rate_at(25.0) == doctest::Approx(0.65));
}

TEST_CASE("schedule properties") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double r0 = u(rng), r1 = u(rng);
        const auto s = DetectionSchedule::linear_ramp(0.0, r0, 100.0, r1);
        double prev = s.rate_at(-1.0);
        for (int k = 0; k <= 200; ++k) {
            const double r = s.rate_at(0.5 * k);
            CHECK(r >= 0.0);
            CHECK(r <= 1.0);
            CHECK(r >= std::min(r0, r1) - 1e-15);
            CHECK(r <= std::max(r0, r1) + 1e-15);
            // Monotone in the direction of the ramp.
            if (r1 >= r0) CHECK(r >= prev - 1e-15);
            else CHECK(r <= prev + 1e-15);
            prev = r;
        }
    }
}

TEST_CASE("invalid schedules are rejected") {
    CHECK_THROWS_AS(DetectionSchedule({}), ConfigError);
    CHECK_THROWS_AS(DetectionSchedule({{0.0, 0.5}, {0.0, 0.6}}), ConfigError);
    CHECK_THROWS_AS(DetectionSchedule({{10.0, 0.5}, {5.0, 0.6}}), ConfigError);
    CHECK_THROWS_AS(DetectionSchedule({{0.0, 1.5}}), ConfigError);
    CHECK_THROWS_AS(DetectionSchedule({{0.0, -0.1}}), ConfigError);
    CHECK_THROWS_AS(DetectionSchedule::constant(std::numeric_limits<double>::quiet_NaN()), ConfigError);
}

TEST_CASE("instability examples") {
    const auto flat = series_of({5, 5, 5, 5, 5, 5, 5, 5, 5, 5});
    CHECK(count_flags(detect_instability(flat, 5, 3.0)) == 0);

    auto spike = flat;
    spike[7] = 50.0;
    const auto flags = detect_instability(spike, 5, 3.0);
    CHECK(count_flags(flags) == 1);
    CHECK(flags[7]);

    CHECK(count_flags(detect_instability(spike, 5, std::numeric_limits<double>::infinity())) == 0);
    CHECK(count_flags(detect_instability(spike, 0, 3.0)) == 0);

    // Exactly at threshold * median is not a spike.
    const auto edge = series_of({2, 2, 2, 6});
    CHECK(count_flags(detect_instability(edge, 3, 3.0)) == 0);

    // Absent points are skipped both as candidates and inside the reference window.
    std::vector<std::optional<double>> gaps{1.0, std::nullopt, 1.0, std::nullopt, 4.0};
    const auto g = detect_instability(gaps, 2, 3.0);
    CHECK_FALSE(g[1]);
    CHECK_FALSE(g[3]);
    CHECK(g[4]);  // reference window {1.0}: the absent point contributes nothing
    CHECK_FALSE(g[0]);
}

TEST_CASE("instability flags agree with a brute-force median") {
    std::mt19937_64 rng(23);
    std::lognormal_distribution<double> value(0.0, 1.0);
    std::bernoulli_distribution missing(0.1);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::optional<double>> s;
        for (int i = 0; i < 60; ++i) s.push_back(missing(rng) ? std::nullopt : std::optional<double>(value(rng)));
        const std::size_t window = 1 + static_cast<std::size_t>(trial % 7);
        const auto flags = detect_instability(s, window, 2.5);
        for (std::size_t i = 0; i < s.size(); ++i) {
            std::vector<double> ref;
            for (std::size_t k = i >= window ? i - window : 0; k < i; ++k) {
                if (s[k]) ref.push_back(*s[k]);
            }
            bool expected = false;
            if (s[i] && !ref.empty()) {
                std::sort(ref.begin(), ref.end());
                const std::size_t n = ref.size();
                const double median = n % 2 ? ref[n / 2] : 0.5 * (ref[n / 2 - 1] + ref[n / 2]);
                expected = *s[i] > 2.5 * median;
            }
            CHECK(flags[i] == expected);
        }
    }
}

TEST_CASE("zero-length deployment is empty") {
    DeploymentConfig d;
    d.total_steps = 0;
    auto agent = agents::make_agent(small_agent(Algorithm::PPO), medium_env().observation_size());
    const DeploymentResult r = run_deployment(*agent, medium_env(), d);
    CHECK(r.timeline.empty());
    CHECK(r.flag_count == 0);
    CHECK(r.updates == 0);
    CHECK_FALSE(r.aborted);
}

TEST_CASE("deployment timeline layout and determinism") {
    DeploymentConfig d;
    d.total_steps = 4500;
    d.window = 2000;
    d.update_period = 256;
    d.schedule = DetectionSchedule::linear_ramp(0.0, 0.2, 4500.0, 0.8);
    const auto env_config = medium_env();

    auto a = agents::make_agent(small_agent(Algorithm::PPO), env_config.observation_size());
    auto b = a->clone();
    const DeploymentResult r1 = run_deployment(*a, env_config, d);
    const DeploymentResult r2 = run_deployment(*b, env_config, d);

    REQUIRE(r1.timeline.size() == 3);
    CHECK(r1.timeline[0].step == 2000);
    CHECK(r1.timeline[1].step == 4000);
    CHECK(r1.timeline[2].step == 4500);
    CHECK(r1.timeline[0].detection_rate == doctest::Approx(d.schedule.rate_at(2000.0)));
    CHECK(r1.timeline[2].detection_rate == doctest::Approx(0.8));
    CHECK(r1.updates == 4500 / 256);
    CHECK(r1.timeline == r2.timeline);
    CHECK(a->parameters() == b->parameters());

    for (const auto& p : r1.timeline) {
        if (p.wait_all) {
            CHECK(*p.wait_all >= 0.0);
            // The pooled mean lies between the class means when both are present.
            if (p.wait_detected && p.wait_undetected) {
                CHECK(*p.wait_all >= std::min(*p.wait_detected, *p.wait_undetected) - 1e-9);
                CHECK(*p.wait_all <= std::max(*p.wait_detected, *p.wait_undetected) + 1e-9);
            }
        }
    }
}

TEST_CASE("frozen deployment leaves the agent untouched") {
    DeploymentConfig d;
    d.total_steps = 3000;
    d.window = 500;
    d.update_period.reset();
    const auto env_config = medium_env();
    for (Algorithm a : {Algorithm::DQL, Algorithm::A2C, Algorithm::PPO, Algorithm::ACKTR}) {
        CAPTURE(agents::to_string(a));
        auto agent = agents::make_agent(small_agent(a), env_config.observation_size());
        const auto before = agent->parameters();
        const auto steps_before = agent->training_steps();
        const DeploymentResult r = run_deployment(*agent, env_config, d);
        CHECK(r.updates == 0);
        CHECK(r.timeline.size() == 6);
        CHECK(agent->parameters() == before);
        CHECK(agent->training_steps() == steps_before);
    }
}

TEST_CASE("fixed-time controller under constant detection shows a stationary timeline") {
    DeploymentConfig d;
    d.total_steps = 40000;
    d.window = 2000;
    d.schedule = DetectionSchedule::constant(1.0);
    const auto env_config = medium_env();
    auto agent = agents::make_agent(small_agent(Algorithm::FixedTime), env_config.observation_size());
    const DeploymentResult r = run_deployment(*agent, env_config, d);
    REQUIRE(r.timeline.size() == 20);
    CHECK(r.flag_count == 0);
    for (const auto& p : r.timeline) {
        REQUIRE(p.wait_all.has_value());
        CHECK(p.wait_detected == p.wait_all);
        CHECK_FALSE(p.wait_undetected.has_value());
    }
}

TEST_CASE("rate changes reach new arrivals as Bernoulli draws") {
    auto config = medium_env();
    config.sim.detection_rate = 0.9;
    config.episode_length = 7200.0;
    env::Environment environment(config);
    environment.reset(31);
    environment.set_detection_rate(0.3);
    // Fixed 30 s greens keep the intersection flowing.
    for (int t = 0; t < 7200; ++t) {
        const bool switch_now = environment.state().signal.phase_elapsed >= 30.0;
        environment.step(switch_now ? env::Action::Switch : env::Action::Keep);
    }
    const auto m = environment.metrics();
    REQUIRE(m.count_all > 500);
    const double n = static_cast<double>(m.count_all);
    const double sigma = std::sqrt(n * 0.3 * 0.7);
    CHECK(std::abs(static_cast<double>(m.count_detected) - 0.3 * n) <= 3.0 * sigma);
}

TEST_CASE("deployment config loading") {
    const auto kv = KeyValueConfig::parse(
        "[deploy]\ntotal_steps = 1000\nwindow = 100\nupdate_period = none\nstart_rate = 0.2\nend_rate = 0.6\n"
        "threshold = 4\nseed = 9\n");
    const auto d = load_deployment_config(kv, 1.0);
    CHECK(d.total_steps == 1000);
    CHECK(d.window == 100);
    CHECK_FALSE(d.update_period.has_value());
    CHECK(d.threshold == 4.0);
    CHECK(d.seed == 9);
    CHECK(d.schedule.rate_at(0.0) == doctest::Approx(0.2));
    CHECK(d.schedule.rate_at(1000.0) == doctest::Approx(0.6));

    const auto listed = load_deployment_config(
        KeyValueConfig::parse("[deploy]\nschedule = 0:0.1, 50:0.9\nupdate_period = 64\n"), 1.0);
    CHECK(listed.update_period == 64);
    CHECK(listed.schedule.rate_at(25.0) == doctest::Approx(0.5));

    CHECK_THROWS_AS(load_deployment_config(KeyValueConfig::parse("[deploy]\nschedule = 0:0.1, 5\n"), 1.0),
                    ConfigError);
    CHECK_THROWS_AS(load_deployment_config(KeyValueConfig::parse("[deploy]\nthreshold = 0.5\n"), 1.0), ConfigError);
    CHECK_THROWS_AS(load_deployment_config(KeyValueConfig::parse("[deploy]\nwindow = 0\n"), 1.0), ConfigError);
}
