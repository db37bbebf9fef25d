#pragma once

#include <vector>

namespace pdsc::adapt {

struct Breakpoint {
    double time = 0.0;  // s
    double rate = 0.0;  // [0,1]
};

// Piecewise-linear detection probability over simulated time, clamped outside its span.
class DetectionSchedule {
public:
    // Times strictly increasing, rates in [0,1], at least one breakpoint; throws ConfigError otherwise.
    explicit DetectionSchedule(std::vector<Breakpoint> breakpoints);

    static DetectionSchedule constant(double rate);
    static DetectionSchedule linear_ramp(double start_time, double start_rate, double end_time, double end_rate);

    double rate_at(double t) const;
    const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }

private:
    std::vector<Breakpoint> breakpoints_;
};

inline double detection_rate_at(const DetectionSchedule& schedule, double t) { return schedule.rate_at(t); }

}  // namespace pdsc::adapt
