#include <doctest.h>

#include <cmath>

#include "pdsc/common/key_value_config.hpp"
#include "pdsc/sim/simulator.hpp"
#include "support/sim_invariants.hpp"

using namespace pdsc;
using namespace pdsc::sim;

namespace {

Vehicle make_vehicle(std::uint64_t id, Approach a, double position, double speed, bool detected,
                     const SimConfig& c) {
    Vehicle v;
    v.id = id;
    v.approach = a;
    v.position = position;
    v.speed = speed;
    v.vmax = c.vmax_default;
    v.detected = detected;
    return v;
}

SimConfig quiet_config() {
    SimConfig c;
    c.arrival_rate = 0.0;
    return c;
}

}  // namespace

TEST_CASE("approach axes") {
    CHECK(axis_of(Approach::North) == Axis::NS);
    CHECK(axis_of(Approach::South) == Axis::NS);
    CHECK(axis_of(Approach::East) == Axis::EW);
    CHECK(axis_of(Approach::West) == Axis::EW);
}

TEST_CASE("scenario presets differ only in arrival rate") {
    const auto sparse = scenario_preset(Scenario::Sparse);
    const auto medium = scenario_preset(Scenario::Medium);
    const auto dense = scenario_preset(Scenario::Dense);
    CHECK(sparse.arrival_rate == 0.02);
    CHECK(medium.arrival_rate == 0.10);
    CHECK(dense.arrival_rate == 0.25);
    for (const auto* c : {&sparse, &dense}) {
        CHECK(c->lane_length == medium.lane_length);
        CHECK(c->vmax_default == medium.vmax_default);
        CHECK(c->min_green == medium.min_green);
        CHECK(c->amber_duration == medium.amber_duration);
    }
    CHECK(parse_scenario("simple-dense") == Scenario::Dense);
    CHECK(parse_scenario("sparse") == Scenario::Sparse);
    CHECK_FALSE(parse_scenario("rush-hour").has_value());
    CHECK(to_string(Scenario::Medium) == "simple-medium");
}

TEST_CASE("preset saturation") {
    // One lane discharges at most one vehicle per headway (vehicle_length + min_gap) / vmax, and each
    // axis is green at most about half the time: the dense preset must exceed that, sparse sit far below.
    const SimConfig c;
    const double headway = (c.vehicle_length + c.min_gap) / c.vmax_default;
    const double per_lane_capacity = 0.5 / headway;
    CHECK(scenario_preset(Scenario::Sparse).arrival_rate < 0.1 * per_lane_capacity);
    CHECK(scenario_preset(Scenario::Medium).arrival_rate < per_lane_capacity);
    CHECK(c.lane_capacity() == 20);
}

TEST_CASE("config validation and loading") {
    SimConfig c;
    c.detection_rate = 1.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SimConfig{};
    c.lane_length = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SimConfig{};
    c.min_green = 1.0;  // shorter than amber is allowed
    CHECK_NOTHROW(c.validate());

    const auto kv = KeyValueConfig::parse("[sim]\nlane_length = 200\narrival_rate = 0.3\nrng_seed = 9\n");
    const auto loaded = load_sim_config(kv);
    CHECK(loaded.lane_length == 200.0);
    CHECK(loaded.arrival_rate == 0.3);
    CHECK(loaded.rng_seed == 9u);
    CHECK(loaded.vmax_default == SimConfig{}.vmax_default);
}

TEST_CASE("zero arrival rate spawns nothing") {
    Simulator s(quiet_config());
    for (int k = 0; k < 2000; ++k) s.step(k % 40 == 0 ? SignalCommand::Switch : SignalCommand::Keep);
    CHECK(s.state().spawned_count == 0);
    CHECK(s.state().vehicle_count() == 0);
}

TEST_CASE("arrival counts follow the Poisson mean") {
    SimConfig c;
    c.arrival_rate = 0.25;
    SimState st = initial_state(c);
    const int steps = 10000;
    for (int k = 0; k < steps; ++k) {
        spawn_step(st, c);
        for (auto& lane : st.lanes) lane.clear();
    }
    const double n = 4.0 * steps;
    const double mean = static_cast<double>(st.spawned_count) / n;
    CHECK(std::abs(mean - 0.25) < 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("detection is Bernoulli per spawn") {
    for (double p : {1.0, 0.3, 0.0}) {
        SimConfig c;
        c.arrival_rate = 1.0;
        c.detection_rate = p;
        SimState st = initial_state(c);
        std::uint64_t detected = 0;
        while (st.spawned_count < 10000) {
            spawn_step(st, c);
            for (auto& lane : st.lanes) {
                for (const auto& v : lane) detected += v.detected ? 1 : 0;
                lane.clear();
            }
        }
        const double n = static_cast<double>(st.spawned_count);
        const double sigma = std::sqrt(n * p * (1.0 - p));
        CAPTURE(p);
        CHECK(std::abs(static_cast<double>(detected) - n * p) <= 3.0 * sigma);
    }
}

TEST_CASE("blocked arrivals are queued, not dropped") {
    SimConfig c = quiet_config();
    SimState st = initial_state(c);
    st.lanes[index_of(Approach::North)].push_back(make_vehicle(99, Approach::North, c.lane_length - 1.0, 0.0, true, c));
    st.spawned_count = 1;
    st.next_id = 100;
    st.pending[index_of(Approach::North)].push_back({0.0, true});
    spawn_step(st, c);
    CHECK(st.pending[index_of(Approach::North)].size() == 1);
    CHECK(st.spawned_count == 1);

    // Once the rear vehicle has moved clear of the entrance the arrival enters.
    st.lanes[index_of(Approach::North)].back().position = c.lane_length - (c.vehicle_length + c.min_gap) - 1.0;
    st.clock = 3.0;
    spawn_step(st, c);
    CHECK(st.pending[index_of(Approach::North)].empty());
    CHECK(st.spawned_count == 2);
    const Vehicle& entered = st.lanes[index_of(Approach::North)].back();
    CHECK(entered.position == c.lane_length);
    CHECK(entered.cumulative_wait == doctest::Approx(3.0));
    CHECK(entered.speed <= safe_speed(1.0, c.decel, c.time_step) + 1e-12);
}

TEST_CASE("safe speed stops within the gap") {
    const double b = 4.5, dt = 1.0;
    for (double gap : {0.5, 3.0, 10.0, 40.0}) {
        const double v = safe_speed(gap, b, dt);
        CHECK(v * dt + v * v / (2.0 * b) == doctest::Approx(gap).epsilon(1e-12));
    }
    CHECK(safe_speed(0.0, b, dt) == 0.0);
    CHECK(safe_speed(-1.0, b, dt) == 0.0);
}

TEST_CASE("free vehicle from rest exits in closed-form time") {
    // Speeds a, 2a, ... until vmax: n = floor(vmax/a) steps cover a n (n+1) / 2 metres; the rest of
    // the lane is covered at vmax. 150 m, a = 2, vmax = 13.89: 6 steps for 42 m, then ceil(108/13.89) = 8.
    const SimConfig c = quiet_config();
    const int n = static_cast<int>(std::floor(c.vmax_default / c.accel));
    const double ramp = c.accel * n * (n + 1) / 2.0;
    const int expected = n + static_cast<int>(std::ceil((c.lane_length - ramp) / c.vmax_default));
    REQUIRE(expected == 14);

    Simulator s(c);
    s.mutable_state().lanes[index_of(Approach::North)].push_back(
        make_vehicle(0, Approach::North, c.lane_length, 0.0, true, c));
    s.mutable_state().spawned_count = 1;
    int steps = 0;
    while (s.state().exited_count == 0 && steps < 100) {
        s.step(SignalCommand::Keep);
        ++steps;
    }
    CHECK(steps == expected);
    CHECK(s.metrics().wait_all == doctest::Approx(0.0));
}

TEST_CASE("arrival on an empty green lane exits at vmax") {
    SimConfig c = quiet_config();
    Simulator s(c);
    s.mutable_state().pending[index_of(Approach::South)].push_back({0.0, false});
    int steps = 0;
    while (s.state().exited_count == 0 && steps < 100) {
        s.step(SignalCommand::Keep);
        ++steps;
    }
    CHECK(steps == static_cast<int>(std::ceil(c.lane_length / c.vmax_default)));
    CHECK(s.metrics().count_undetected == 1);
}

TEST_CASE("red signal brings a vehicle to rest at the stop line") {
    SimConfig c = quiet_config();
    Simulator s(c);
    s.mutable_state().lanes[index_of(Approach::East)].push_back(
        make_vehicle(0, Approach::East, c.lane_length, c.vmax_default, true, c));
    s.mutable_state().spawned_count = 1;
    for (int k = 0; k < 60; ++k) s.step(SignalCommand::Keep);  // NS stays green
    const auto& lane = s.state().lanes[index_of(Approach::East)];
    REQUIRE(lane.size() == 1);
    CHECK(lane.front().speed == 0.0);
    CHECK(lane.front().position >= 0.0);
    CHECK(lane.front().position <= c.min_gap);
    CHECK(lane.front().cumulative_wait > 40.0);
    CHECK(s.state().exited_count == 0);
}

TEST_CASE("follower keeps its distance behind a stopped leader") {
    SimConfig c = quiet_config();
    Simulator s(c);
    auto& lane = s.mutable_state().lanes[index_of(Approach::West)];
    lane.push_back(make_vehicle(0, Approach::West, 60.0, c.vmax_default, true, c));
    lane.push_back(make_vehicle(1, Approach::West, 75.0, c.vmax_default, false, c));
    s.mutable_state().spawned_count = 2;
    for (int k = 0; k < 40; ++k) {
        s.step(SignalCommand::Keep);
        const auto& l = s.state().lanes[index_of(Approach::West)];
        REQUIRE(l.size() == 2);
        CHECK(l[1].position - l[0].position >= c.vehicle_length + c.min_gap - 1e-9);
    }
    CHECK(s.state().lanes[index_of(Approach::West)][1].speed == 0.0);
}

TEST_CASE("signal state machine") {
    const SimConfig c;
    SimState st = initial_state(c);

    SUBCASE("switch after min green enters amber") {
        st.signal.phase_elapsed = c.min_green;
        signal_step(st, SignalCommand::Switch, c);
        CHECK(st.signal.in_amber);
        CHECK(st.signal.amber_elapsed == 0.0);
        CHECK(st.signal.current_phase == Phase::NSGreen);
    }
    SUBCASE("amber completes into the opposite green whatever the command") {
        st.signal.in_amber = true;
        st.signal.amber_elapsed = c.amber_duration - c.time_step;
        st.signal.phase_elapsed = 17.0;
        signal_step(st, SignalCommand::Switch, c);
        CHECK_FALSE(st.signal.in_amber);
        CHECK(st.signal.current_phase == Phase::EWGreen);
        CHECK(st.signal.phase_elapsed == 0.0);
        CHECK(st.signal.amber_elapsed == 0.0);
    }
    SUBCASE("min green guard") {
        st.signal.phase_elapsed = c.min_green - c.time_step;
        signal_step(st, SignalCommand::Switch, c);
        CHECK_FALSE(st.signal.in_amber);
        CHECK(st.signal.phase_elapsed == c.min_green);
    }
    SUBCASE("amber lasts exactly amber_duration steps") {
        st.signal.phase_elapsed = c.min_green;
        signal_step(st, SignalCommand::Switch, c);
        int amber_steps = 0;
        while (st.signal.in_amber) {
            signal_step(st, SignalCommand::Keep, c);
            ++amber_steps;
        }
        CHECK(amber_steps == static_cast<int>(c.amber_duration / c.time_step));
        CHECK(st.signal.current_phase == Phase::EWGreen);
    }
}

TEST_CASE("metrics snapshot") {
    SimConfig c = quiet_config();
    Simulator s(c);
    auto m = s.metrics();
    CHECK_FALSE(m.wait_all.has_value());
    CHECK_FALSE(m.wait_detected.has_value());
    CHECK(m.count_all == 0);

    // Two detected vehicles at the stop line on the green axis leave in the next step.
    auto v1 = make_vehicle(0, Approach::North, 0.5, 0.0, true, c);
    v1.cumulative_wait = 4.0;
    auto v2 = make_vehicle(1, Approach::South, 0.5, 0.0, true, c);
    v2.cumulative_wait = 6.0;
    s.mutable_state().lanes[index_of(Approach::North)].push_back(v1);
    s.mutable_state().lanes[index_of(Approach::South)].push_back(v2);
    s.mutable_state().spawned_count = 2;
    s.step(SignalCommand::Keep);
    m = s.metrics();
    CHECK(m.count_detected == 2);
    CHECK(*m.wait_detected == doctest::Approx(5.0));
    CHECK(*m.wait_all == doctest::Approx(5.0));
    CHECK_FALSE(m.wait_undetected.has_value());
}

TEST_CASE("full detection makes the all-class equal the detected class") {
    SimConfig c;
    c.detection_rate = 1.0;
    Simulator s(c);
    for (int k = 0; k < 1800; ++k) s.step(k % 30 == 29 ? SignalCommand::Switch : SignalCommand::Keep);
    const auto m = s.metrics();
    REQUIRE(m.count_all > 0);
    CHECK(m.count_undetected == 0);
    CHECK(*m.wait_all == *m.wait_detected);
}

TEST_CASE("determinism") {
    SimConfig c = scenario_preset(Scenario::Dense);
    c.detection_rate = 0.4;
    c.rng_seed = 1234;
    Simulator a(c), b(c);
    for (int k = 0; k < 3000; ++k) {
        const auto cmd = (k * 7919) % 23 == 0 ? SignalCommand::Switch : SignalCommand::Keep;
        a.step(cmd);
        b.step(cmd);
    }
    const auto ma = a.metrics(), mb = b.metrics();
    CHECK(ma.total_wait_all == mb.total_wait_all);
    CHECK(ma.count_detected == mb.count_detected);
    CHECK(ma.queue_lengths == mb.queue_lengths);
    for (std::size_t i = 0; i < kApproachCount; ++i) {
        REQUIRE(a.state().lanes[i].size() == b.state().lanes[i].size());
        for (std::size_t j = 0; j < a.state().lanes[i].size(); ++j) {
            CHECK(a.state().lanes[i][j].position == b.state().lanes[i][j].position);
        }
    }
}

TEST_CASE("invariants hold on randomized episodes") {
    const Scenario presets[] = {Scenario::Sparse, Scenario::Medium, Scenario::Dense};
    for (int run = 0; run < 6; ++run) {
        SimConfig c = scenario_preset(presets[run % 3]);
        c.rng_seed = 500 + static_cast<std::uint64_t>(run);
        c.detection_rate = 0.2 * run;
        const auto report = testing::check_random_episode(c, 77 + static_cast<std::uint64_t>(run), 3600,
                                                          run % 2 == 0 ? 0.05 : 0.3);
        CAPTURE(run);
        for (const auto& v : report.violations) MESSAGE(v);
        CHECK(report.ok());
        CHECK(report.spawned > 0);
    }
}
