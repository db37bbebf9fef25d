#include "pdsc/adapt/instability.hpp"

#include <algorithm>
#include <cmath>

namespace pdsc::adapt {

namespace {

double median(std::vector<double> values) {
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

}  // namespace

std::vector<bool> detect_instability(std::span<const std::optional<double>> series, std::size_t window,
                                     double threshold) {
    std::vector<bool> flags(series.size(), false);
    if (window == 0 || std::isinf(threshold)) return flags;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!series[i]) continue;
        std::vector<double> preceding;
        for (std::size_t k = i >= window ? i - window : 0; k < i; ++k) {
            if (series[k]) preceding.push_back(*series[k]);
        }
        if (preceding.empty()) continue;
        flags[i] = *series[i] > threshold * median(std::move(preceding));
    }
    return flags;
}

std::size_t count_flags(const std::vector<bool>& flags) {
    return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));
}

}  // namespace pdsc::adapt
