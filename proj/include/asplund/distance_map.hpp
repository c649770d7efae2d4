#pragma once

#include <cstddef>
#include <string>

#include "asplund/grid.hpp"

namespace asplund {

enum class MapKind : unsigned {
    Multiplicative = 0,
    Additive = 1,
};

/// Per-pixel Asplund distances between an image and a probe.
struct DistanceMap {
    RealArray values;
    MapKind kind = MapKind::Multiplicative;
    std::string probe_id;
    double p = 1.0;
    /// Pixels whose restricted window held a single sample (value forced to 0).
    std::size_t degenerate_pixels = 0;

    int width() const { return values.width(); }
    int height() const { return values.height(); }
    double operator()(int x, int y) const { return values(x, y); }
};

/// Largest absolute pointwise difference; throws on shape mismatch.
double max_abs_difference(const RealArray& a, const RealArray& b);

}  // namespace asplund
