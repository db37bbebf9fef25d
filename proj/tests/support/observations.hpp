#pragma once

#include <random>
#include <vector>

#include "pdsc/env/environment.hpp"

namespace pdsc::testing {

// Observation with every slot in its documented range.
inline env::Observation random_observation(std::mt19937_64& rng, std::size_t size = env::Observation::kBaseSize) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(size, 0.0);
    for (std::size_t i = 0; i < 8; ++i) v[i] = u(rng);
    v[env::Observation::kPhaseTime] = 120.0 * u(rng);
    v[env::Observation::kAmber] = u(rng) < 0.2 ? 1.0 : 0.0;
    v[env::Observation::kPhase] = u(rng) < 0.5 ? 1.0 : 0.0;
    if (size > env::Observation::kTimeOfDay) v[env::Observation::kTimeOfDay] = u(rng);
    return env::Observation(std::move(v));
}

// A 3-state, 2-action deterministic MDP: next[s][a], reward[s][a].
struct TinyMdp {
    int next[3][2] = {{1, 2}, {2, 0}, {2, 0}};
    double reward[3][2] = {{0.0, 1.0}, {2.0, 0.0}, {0.0, 0.5}};
    double gamma = 0.9;
};

// Q* by value iteration run to a fixed point.
inline std::vector<double> value_iteration(const TinyMdp& m) {
    std::vector<double> q(6, 0.0);
    for (int it = 0; it < 2000; ++it) {
        std::vector<double> next(6);
        for (int s = 0; s < 3; ++s) {
            for (int a = 0; a < 2; ++a) {
                const int s2 = m.next[s][a];
                next[static_cast<std::size_t>(s * 2 + a)] =
                    m.reward[s][a] + m.gamma * std::max(q[static_cast<std::size_t>(s2 * 2)], q[static_cast<std::size_t>(s2 * 2 + 1)]);
            }
        }
        q = next;
    }
    return q;
}

}  // namespace pdsc::testing
