#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace pdsc::sim {

enum class Approach : std::uint8_t { North = 0, South = 1, East = 2, West = 3 };
enum class Axis : std::uint8_t { NS = 0, EW = 1 };
enum class Phase : std::uint8_t { NSGreen = 0, EWGreen = 1 };
enum class SignalCommand : std::uint8_t { Keep = 0, Switch = 1 };

inline constexpr std::array<Approach, 4> kApproaches{Approach::North, Approach::South, Approach::East,
                                                     Approach::West};
inline constexpr std::size_t kApproachCount = kApproaches.size();

constexpr std::size_t index_of(Approach a) { return static_cast<std::size_t>(a); }

constexpr Axis axis_of(Approach a) {
    return (a == Approach::North || a == Approach::South) ? Axis::NS : Axis::EW;
}

constexpr Axis green_axis(Phase p) { return p == Phase::NSGreen ? Axis::NS : Axis::EW; }

constexpr Phase opposite(Phase p) { return p == Phase::NSGreen ? Phase::EWGreen : Phase::NSGreen; }

constexpr std::string_view to_string(Approach a) {
    switch (a) {
        case Approach::North: return "north";
        case Approach::South: return "south";
        case Approach::East: return "east";
        case Approach::West: return "west";
    }
    return "?";
}

struct Vehicle {
    std::uint64_t id = 0;
    Approach approach = Approach::North;
    double position = 0.0;  // meters to the stop line
    double speed = 0.0;
    double vmax = 0.0;
    bool detected = false;
    double spawn_time = 0.0;
    double cumulative_wait = 0.0;
};

struct SignalState {
    Phase current_phase = Phase::NSGreen;
    bool in_amber = false;
    double phase_elapsed = 0.0;
    double amber_elapsed = 0.0;
};

}  // namespace pdsc::sim
