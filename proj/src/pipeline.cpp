#include "asplund/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <vector>

#include "asplund/asplund_add.hpp"
#include "asplund/asplund_mult.hpp"

namespace asplund {

namespace {

constexpr double kAgreement = 1e-6;

template <typename Fn>
double median_seconds(int repetitions, Fn run)
{
    std::vector<double> times;
    for (int r = 0; r < repetitions; ++r) {
        const auto start = std::chrono::steady_clock::now();
        run();
        const auto stop = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double>(stop - start).count());
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

}  // namespace

PreparedInput prepare_input(const GreyImage& f, const ProbeFunction& probe, const RunConfig& cfg)
{
    if (!cfg.complement) {
        return {f, probe};
    }
    const GreyImage image = complement(clamp_positive(clip_to_image(f, 0.0), cfg.clamp_eps));
    const double m = probe.scale().upper();
    for (double v : probe.values()) {
        if (!(v > 0.0 && v < m)) {
            throw Error("complemented probe values must lie in ]0, M[");
        }
    }
    ProbeFunction flipped = probe.transformed([m](double v) { return m - v; });
    flipped.set_name(probe.name() + "^c");
    return {image, flipped};
}

DistanceMap compute_map(const GreyImage& f, const ProbeFunction& probe, const RunConfig& cfg)
{
    const PreparedInput in = prepare_input(f, probe, cfg);
    if (cfg.metric == MapKind::Multiplicative) {
        const MultProbeContext ctx(in.probe, cfg.p);
        const MapOptions opts{cfg.clamp_eps};
        switch (cfg.impl) {
        case MapImpl::Direct: return map_mult_direct(in.image, ctx, opts);
        case MapImpl::Morpho: return map_mult_morpho(in.image, ctx, opts);
        case MapImpl::Flat: return map_mult_flat(in.image, ctx, opts);
        }
    }
    const AddProbeContext ctx(in.probe, cfg.p);
    switch (cfg.impl) {
    case MapImpl::Direct: return map_add_direct(in.image, ctx);
    case MapImpl::Morpho: return map_add_morpho(in.image, ctx);
    case MapImpl::Flat: return map_add_flat(in.image, ctx);
    }
    throw Error("unknown map implementation");
}

BenchReport bench(const GreyImage& f, const ProbeFunction& probe, MapKind metric, double p, int repetitions,
                  std::uint64_t seed, double clamp_eps)
{
    if (repetitions < 3) {
        throw Error("bench: at least 3 repetitions are required");
    }
    RunConfig direct{metric, MapImpl::Direct, p, false, clamp_eps};
    RunConfig morpho = direct;
    morpho.impl = MapImpl::Morpho;

    BenchReport report;
    report.metric = metric;
    report.p = p;
    report.repetitions = repetitions;
    report.seed = seed;
    report.width = f.width();
    report.height = f.height();
    report.probe_size = probe.size();
    report.max_difference =
        max_abs_difference(compute_map(f, probe, direct).values, compute_map(f, probe, morpho).values);
    if (!(report.max_difference < kAgreement)) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "bench: direct and morphological maps differ by %.3g", report.max_difference);
        throw Error(buf);
    }
    report.direct_seconds = median_seconds(repetitions, [&] { compute_map(f, probe, direct); });
    report.morpho_seconds = median_seconds(repetitions, [&] { compute_map(f, probe, morpho); });
    report.gain = report.direct_seconds / report.morpho_seconds;
    return report;
}

std::string format_report(const BenchReport& r)
{
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "metric=%s p=%.4g size=%dx%d probe=%zu reps=%d seed=%llu direct=%.4fs morpho=%.4fs gain=%.2f "
                  "max_diff=%.3g",
                  r.metric == MapKind::Multiplicative ? "mult" : "add", r.p, r.width, r.height, r.probe_size,
                  r.repetitions, static_cast<unsigned long long>(r.seed), r.direct_seconds, r.morpho_seconds, r.gain,
                  r.max_difference);
    return buf;
}

}  // namespace asplund
