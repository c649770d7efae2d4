#include "asplund/detection.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "asplund/morphology.hpp"

namespace asplund {

namespace {

void require_percentile(double q)
{
    if (!(q > 0.0 && q < 100.0)) {
        throw Error("percentile must lie in ]0, 100[");
    }
}

std::vector<Detection> collect_regions(const LabelArray& labels, int count, const RealArray& map)
{
    std::vector<Detection> regions(static_cast<std::size_t>(count));
    for (int y = 0; y < labels.height(); ++y) {
        for (int x = 0; x < labels.width(); ++x) {
            const int label = labels(x, y);
            if (label == 0) {
                continue;
            }
            Detection& d = regions[static_cast<std::size_t>(label - 1)];
            const double v = map(x, y);
            if (d.region.empty() || v < d.distance) {
                d.distance = v;
                d.position = {x, y};
            }
            d.region.push_back({x, y});
        }
    }
    for (Detection& d : regions) {
        d.area = d.region.size();
    }
    return regions;
}

}  // namespace

double default_h(MapKind kind)
{
    return kind == MapKind::Multiplicative ? 0.5 : 32.0;
}

double percentile_value(const RealArray& map, double q)
{
    require_percentile(q);
    if (map.empty()) {
        throw Error("percentile of an empty map");
    }
    std::vector<double> sorted(map.values().begin(), map.values().end());
    const std::size_t n = sorted.size();
    auto rank = static_cast<std::size_t>(std::ceil(q / 100.0 * static_cast<double>(n)));
    rank = std::clamp<std::size_t>(rank, 1, n);
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1), sorted.end());
    return sorted[rank - 1];
}

Mask percentile_threshold(const RealArray& map, double q)
{
    const double threshold = percentile_value(map, q);
    Mask out(map.width(), map.height(), 0);
    for (std::size_t i = 0; i < map.size(); ++i) {
        out[i] = map[i] <= threshold ? 1 : 0;
    }
    return out;
}

std::vector<Detection> detect(const DistanceMap& map, const DetectConfig& cfg)
{
    const RealArray& values = map.values;
    if (values.empty()) {
        throw Error("detect: empty map");
    }
    for (double v : values.values()) {
        if (!std::isfinite(v)) {
            throw Error("detect: map values must be finite");
        }
    }
    if (cfg.min_area == 0 || cfg.min_area > cfg.max_area) {
        throw Error("detect: area bounds must satisfy 0 < min_area <= max_area");
    }
    const bool use_percentile = cfg.method != DetectMethod::HMinima;
    const bool use_hminima = cfg.method != DetectMethod::PercentileThreshold;
    if (use_percentile) {
        require_percentile(cfg.percentile);
    }
    const double h = cfg.h.value_or(default_h(map.kind));
    if (use_hminima && !(h > 0.0 && std::isfinite(h))) {
        throw Error("detect: h must be a positive finite real");
    }

    std::vector<Detection> candidates;
    if (use_hminima) {
        const LabelArray labels = regional_minima(hminima(values, h));
        int count = 0;
        for (int label : labels.values()) {
            count = std::max(count, label);
        }
        candidates = collect_regions(labels, count, values);
        if (use_percentile) {
            const double threshold = percentile_value(values, cfg.percentile);
            std::erase_if(candidates, [threshold](const Detection& d) { return d.distance > threshold; });
        }
    } else {
        int count = 0;
        const LabelArray labels = label_components(percentile_threshold(values, cfg.percentile), &count);
        candidates = collect_regions(labels, count, values);
    }

    std::erase_if(candidates,
                  [&cfg](const Detection& d) { return d.area < cfg.min_area || d.area > cfg.max_area; });
    std::sort(candidates.begin(), candidates.end(), [](const Detection& a, const Detection& b) {
        return std::tie(a.distance, a.position.y, a.position.x) < std::tie(b.distance, b.position.y, b.position.x);
    });
    return candidates;
}

}  // namespace asplund
