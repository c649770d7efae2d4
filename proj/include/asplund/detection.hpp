#pragma once

// Turning a distance map into located matches: percentile thresholding,
// h-minima extraction and area filtering.

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "asplund/distance_map.hpp"
#include "asplund/grid.hpp"

namespace asplund {

struct PixelPos {
    int x = 0;
    int y = 0;
    bool operator==(const PixelPos&) const = default;
};

struct Detection {
    PixelPos position;          // pixel of lowest distance inside the region
    double distance = 0.0;      // map value at position
    std::vector<PixelPos> region;
    std::size_t area = 0;
};

enum class DetectMethod { PercentileThreshold, HMinima, Both };

struct DetectConfig {
    DetectMethod method = DetectMethod::Both;
    double percentile = 37.0;
    /// Minimum depth of a retained minimum; unset means default_h(map.kind).
    std::optional<double> h;
    std::size_t min_area = 1;
    std::size_t max_area = 400;
};

/// Depth used when DetectConfig::h is unset: 0.5 for multiplicative maps
/// (log-ratio units), 32 grey levels for additive maps.
double default_h(MapKind kind);

/// Pixels with value <= the nearest-rank q-th percentile of all values.
Mask percentile_threshold(const RealArray& map, double q);
/// Nearest-rank q-th percentile: the ceil(q/100 * n)-th smallest value.
double percentile_value(const RealArray& map, double q);

/// Detections sorted by ascending distance (ties by raster position).
std::vector<Detection> detect(const DistanceMap& map, const DetectConfig& cfg = {});

}  // namespace asplund
