#include <doctest.h>

#include <random>

#include "pdsc/env/environment.hpp"

using namespace pdsc;
using namespace pdsc::env;
using sim::Approach;

namespace {

sim::Vehicle vehicle(Approach a, double position, double speed, bool detected, double vmax = 13.89) {
    sim::Vehicle v;
    v.approach = a;
    v.position = position;
    v.speed = speed;
    v.vmax = vmax;
    v.detected = detected;
    return v;
}

EnvConfig quiet() {
    EnvConfig c;
    c.sim.arrival_rate = 0.0;
    return c;
}

void put(sim::SimState& st, const sim::Vehicle& v) { st.lanes[sim::index_of(v.approach)].push_back(v); }

}  // namespace

TEST_CASE("reset yields the empty-intersection observation") {
    Environment env(EnvConfig{});
    const auto obs = env.reset();
    REQUIRE(obs.size() == Observation::kBaseSize);
    for (Approach a : sim::kApproaches) {
        CHECK(obs.detected_count(a) == 0.0);
        CHECK(obs.nearest_detected_distance(a) == 1.0);
    }
    CHECK(obs.amber_flag() == 0.0);
    CHECK(obs.phase_time() == 0.0);
    CHECK(obs.current_phase() == 0.0);
    CHECK_FALSE(obs.has_time_of_day());

    EnvConfig tod;
    tod.include_time_of_day = true;
    Environment env2(tod);
    const auto obs2 = env2.reset();
    CHECK(obs2.size() == Observation::kBaseSize + 1);
    CHECK(obs2.time_of_day() == 0.0);
}

TEST_CASE("same seed, same actions, same trajectory") {
    EnvConfig c;
    c.sim.detection_rate = 0.5;
    Environment env(c);
    std::vector<Observation> first;
    std::vector<double> rewards;
    env.reset(42);
    for (int k = 0; k < 500; ++k) {
        auto r = env.step(k % 17 == 0 ? Action::Switch : Action::Keep);
        first.push_back(r.observation);
        rewards.push_back(r.reward);
    }
    env.reset(42);
    for (int k = 0; k < 500; ++k) {
        auto r = env.step(k % 17 == 0 ? Action::Switch : Action::Keep);
        CHECK(r.observation == first[static_cast<std::size_t>(k)]);
        CHECK(r.reward == rewards[static_cast<std::size_t>(k)]);
    }
}

TEST_CASE("reward examples") {
    sim::SimState st = sim::initial_state(sim::SimConfig{});
    auto r = compute_reward(st);
    CHECK(r.full == 0.0);
    CHECK(r.partial == 0.0);

    put(st, vehicle(Approach::North, 10.0, 0.0, true));
    r = compute_reward(st);
    CHECK(r.partial == -1.0);
    CHECK(r.full == -1.0);

    st = sim::initial_state(sim::SimConfig{});
    put(st, vehicle(Approach::North, 40.0, 13.89 / 2.0, true));
    put(st, vehicle(Approach::East, 5.0, 0.0, false));
    r = compute_reward(st);
    CHECK(r.partial == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(r.full == doctest::Approx(-1.5).epsilon(1e-15));
    CHECK(r.select(RewardMode::Partial) == r.partial);
    CHECK(r.select(RewardMode::Full) == r.full);
    CHECK(r.full == -(r.detected_deficit + r.undetected_deficit));

    st = sim::initial_state(sim::SimConfig{});
    put(st, vehicle(Approach::South, 80.0, 13.89, true));
    put(st, vehicle(Approach::West, 80.0, 11.0, false, 11.0));
    r = compute_reward(st);
    CHECK(r.full == 0.0);
    CHECK(r.partial == 0.0);
}

TEST_CASE("empty intersection step gives zero reward in both modes") {
    for (auto mode : {RewardMode::Full, RewardMode::Partial}) {
        EnvConfig c = quiet();
        c.reward_mode = mode;
        Environment env(c);
        env.reset();
        for (auto a : {Action::Keep, Action::Switch}) {
            const auto r = env.step(a);
            CHECK(r.reward == 0.0);
            CHECK(r.info.reward.full == 0.0);
        }
    }
}

TEST_CASE("observation arithmetic") {
    EnvConfig c;
    REQUIRE(c.lane_capacity() == 20);
    sim::SimState st = sim::initial_state(c.sim);
    put(st, vehicle(Approach::North, 30.0, 0.0, true));
    auto obs = build_observation(st, c);
    CHECK(obs.detected_count(Approach::North) == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(obs.nearest_detected_distance(Approach::North) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(obs.detected_count(Approach::South) == 0.0);

    sim::SimState blind = sim::initial_state(c.sim);
    put(blind, vehicle(Approach::West, 12.0, 3.0, false));
    CHECK(build_observation(blind, c) == build_observation(sim::initial_state(c.sim), c));

    sim::SimState crowded = sim::initial_state(c.sim);
    for (int k = 0; k < 25; ++k) put(crowded, vehicle(Approach::East, 5.0 * k, 0.0, true));
    CHECK(build_observation(crowded, c).detected_count(Approach::East) == 1.0);
    CHECK(build_observation(crowded, c).nearest_detected_distance(Approach::East) == 0.0);

    sim::SimState amber = sim::initial_state(c.sim);
    amber.signal.in_amber = true;
    amber.signal.current_phase = sim::Phase::EWGreen;
    amber.signal.phase_elapsed = 31.0;
    obs = build_observation(amber, c);
    CHECK(obs.amber_flag() == 1.0);
    CHECK(obs.current_phase() == 1.0);
    CHECK(obs.phase_time() == 31.0);
}

TEST_CASE("reward matches a per-vehicle summation oracle on random states") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> count(0, 5), lane(0, 3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        sim::SimState st = sim::initial_state(sim::SimConfig{});
        double full = 0.0, partial = 0.0;
        const int n = count(rng);
        for (int k = 0; k < n; ++k) {
            const double vmax = 8.0 + 8.0 * u(rng);
            const double speed = vmax * u(rng);
            const bool det = u(rng) < 0.5;
            put(st, vehicle(sim::kApproaches[static_cast<std::size_t>(lane(rng))], 150.0 * u(rng), speed, det, vmax));
            const double term = (vmax - speed) / vmax;
            full -= term;
            if (det) partial -= term;
        }
        const auto r = compute_reward(st);
        CHECK(r.full == doctest::Approx(full).epsilon(1e-14));
        CHECK(r.partial == doctest::Approx(partial).epsilon(1e-14));
    }
}

TEST_CASE("properties over rollouts: dominance, boundedness, blindness") {
    std::mt19937_64 rng(11);
    std::bernoulli_distribution flip(0.1);
    for (double rate : {0.0, 0.3, 1.0}) {
        EnvConfig c;
        c.sim = sim::scenario_preset(sim::Scenario::Dense);
        c.sim.detection_rate = rate;
        c.episode_length = 1200.0;
        Environment env(c);
        env.reset(3);
        while (!env.done()) {
            const auto r = env.step(flip(rng) ? Action::Switch : Action::Keep);
            const auto& b = r.info.reward;
            CHECK(b.partial >= b.full);
            CHECK(b.full <= 0.0);
            CHECK(b.partial <= 0.0);
            if (rate == 1.0) CHECK(b.partial == b.full);
            for (std::size_t i = 0; i < 8; ++i) {
                CHECK(r.observation[i] >= 0.0);
                CHECK(r.observation[i] <= 1.0);
            }
            const double amber = r.observation.amber_flag();
            CHECK((amber == 0.0 || amber == 1.0));

            // Moving or slowing undetected vehicles must not be visible to the agent.
            sim::SimState copy = env.state();
            for (auto& lane : copy.lanes) {
                for (auto& v : lane) {
                    if (!v.detected) {
                        v.speed = 0.0;
                        v.position *= 0.5;
                    }
                }
            }
            CHECK(build_observation(copy, c) == r.observation);
            CHECK(compute_reward(copy).partial == b.partial);
        }
    }
}

TEST_CASE("episode length and done contract") {
    EnvConfig c;
    c.episode_length = 120.0;
    Environment env(c);
    env.reset();
    int steps = 0;
    bool done = false;
    while (!done) {
        done = env.step(Action::Keep).done;
        ++steps;
    }
    CHECK(steps == 120);
    CHECK_THROWS_AS(env.step(Action::Keep), EpisodeDoneError);
    env.reset();
    CHECK(env.steps_taken() == 0);
    CHECK_NOTHROW(env.step(Action::Keep));

    EnvConfig bad;
    bad.episode_length = 10.5;
    CHECK_THROWS_AS(Environment{bad}, ConfigError);
}

TEST_CASE("detection rate changes affect later spawns only") {
    EnvConfig c;
    c.sim.arrival_rate = 0.5;
    c.sim.detection_rate = 0.0;
    Environment env(c);
    env.reset(1);
    for (int k = 0; k < 50; ++k) env.step(Action::Keep);
    env.set_detection_rate(1.0);
    int early_undetected = 0;
    for (const auto& lane : env.state().lanes) {
        for (const auto& v : lane) early_undetected += v.detected ? 0 : 1;
    }
    for (int k = 0; k < 50; ++k) env.step(Action::Keep);
    int undetected_now = 0;
    for (const auto& lane : env.state().lanes) {
        for (const auto& v : lane) undetected_now += v.detected ? 0 : 1;
    }
    CHECK(undetected_now <= early_undetected);
    CHECK_THROWS_AS(env.set_detection_rate(1.2), ConfigError);
}

TEST_CASE("env config loading") {
    const auto kv = KeyValueConfig::parse(
        "[sim]\narrival_rate = 0.25\n[env]\nreward_mode = full\nepisode_length = 600\ninclude_time_of_day = true\n");
    const auto c = load_env_config(kv);
    CHECK(c.sim.arrival_rate == 0.25);
    CHECK(c.reward_mode == RewardMode::Full);
    CHECK(c.episode_length == 600.0);
    CHECK(c.observation_size() == Observation::kBaseSize + 1);
    CHECK_THROWS_AS(load_env_config(KeyValueConfig::parse("[env]\nreward_mode = sometimes\n")), ConfigError);
}
