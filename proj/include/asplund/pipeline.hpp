#pragma once

// End-to-end map computation from a run configuration, and the
// direct-versus-morphological benchmark.

#include <cstdint>
#include <string>

#include "asplund/distance_map.hpp"
#include "asplund/lip.hpp"
#include "asplund/morphology.hpp"

namespace asplund {

enum class MapImpl { Direct, Morpho, Flat };

struct RunConfig {
    MapKind metric = MapKind::Multiplicative;
    MapImpl impl = MapImpl::Morpho;
    double p = 1.0;
    /// Process f^c against b^c (dark objects on a light background).
    bool complement = false;
    double clamp_eps = 0.5;
};

/// Image and probe as the metric sees them: clamped and complemented when requested.
struct PreparedInput {
    GreyImage image;
    ProbeFunction probe;
};
PreparedInput prepare_input(const GreyImage& f, const ProbeFunction& probe, const RunConfig& cfg);

DistanceMap compute_map(const GreyImage& f, const ProbeFunction& probe, const RunConfig& cfg);

struct BenchReport {
    MapKind metric = MapKind::Multiplicative;
    double p = 1.0;
    int repetitions = 0;
    std::uint64_t seed = 0;
    int width = 0;
    int height = 0;
    std::size_t probe_size = 0;
    double direct_seconds = 0.0;  // median wall clock
    double morpho_seconds = 0.0;
    double gain = 0.0;            // direct / morpho
    double max_difference = 0.0;  // checked before timing
};

/// Runs both paths once to check agreement within 1e-6 (throws otherwise),
/// then times `repetitions` runs of each. seed is only recorded.
BenchReport bench(const GreyImage& f, const ProbeFunction& probe, MapKind metric, double p, int repetitions,
                  std::uint64_t seed = 0, double clamp_eps = 0.5);

std::string format_report(const BenchReport& report);

}  // namespace asplund
