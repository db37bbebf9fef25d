#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace pdsc::adapt {

// flags[i] is set when series[i] > threshold * median of the (present) values among the
// `window` points preceding i. Absent points are never flagged and do not enter a median.
std::vector<bool> detect_instability(std::span<const std::optional<double>> series, std::size_t window,
                                     double threshold);

std::size_t count_flags(const std::vector<bool>& flags);

}  // namespace pdsc::adapt
