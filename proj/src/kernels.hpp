#pragma once

// Internal helpers shared by the direct distance evaluations.

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>

namespace asplund::detail {

/// {(k+1)-th smallest, (k+1)-th largest} of the samples; reorders them.
inline std::pair<double, double> extreme_ranks(std::span<double> samples, std::size_t k)
{
    if (k == 0) {
        const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
        return {*lo, *hi};
    }
    const auto n = static_cast<std::ptrdiff_t>(samples.size());
    const auto kk = static_cast<std::ptrdiff_t>(k);
    std::nth_element(samples.begin(), samples.begin() + kk, samples.end());
    const double low = samples[k];
    std::nth_element(samples.begin() + kk, samples.begin() + (n - 1 - kk), samples.end());
    return {low, samples[static_cast<std::size_t>(n - 1 - kk)]};
}

}  // namespace asplund::detail
