#include "pdsc/adapt/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "pdsc/common/key_value_config.hpp"

namespace pdsc::adapt {

DetectionSchedule::DetectionSchedule(std::vector<Breakpoint> breakpoints) : breakpoints_(std::move(breakpoints)) {
    if (breakpoints_.empty()) throw ConfigError("detection schedule needs at least one breakpoint");
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        const auto& b = breakpoints_[i];
        if (!std::isfinite(b.time) || !(b.rate >= 0.0 && b.rate <= 1.0)) {
            throw ConfigError("detection schedule: rates must lie in [0,1] at finite times");
        }
        if (i > 0 && !(b.time > breakpoints_[i - 1].time)) {
            throw ConfigError("detection schedule: breakpoint times must be strictly increasing");
        }
    }
}

DetectionSchedule DetectionSchedule::constant(double rate) { return DetectionSchedule({{0.0, rate}}); }

DetectionSchedule DetectionSchedule::linear_ramp(double start_time, double start_rate, double end_time,
                                                 double end_rate) {
    return DetectionSchedule({{start_time, start_rate}, {end_time, end_rate}});
}

double DetectionSchedule::rate_at(double t) const {
    if (t <= breakpoints_.front().time) return breakpoints_.front().rate;
    if (t >= breakpoints_.back().time) return breakpoints_.back().rate;
    const auto upper = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t,
                                        [](double value, const Breakpoint& b) { return value < b.time; });
    const auto lower = upper - 1;
    const double w = (t - lower->time) / (upper->time - lower->time);
    return lower->rate + w * (upper->rate - lower->rate);
}

}  // namespace pdsc::adapt
