#include "asplund/asplund_mult.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "kernels.hpp"
#include "window.hpp"

namespace asplund {

namespace {

void require_tolerance(double p)
{
    if (!(p > 0.0 && p <= 1.0)) {
        throw Error("tolerance p must lie in ]0, 1]");
    }
}

void require_open_range(std::span<const double> values, LipScale s, const char* what)
{
    for (double v : values) {
        if (!(v > 0.0 && v < s.upper())) {
            throw Error(std::string(what) + ": values must lie in ]0, M[");
        }
    }
}

// ln(lambda' / mu') over contrast values; reorders them.
double log_ratio(std::span<double> gamma, std::size_t drop)
{
    const auto [mu, lambda] = detail::extreme_ranks(gamma, drop);
    return std::log(lambda / mu);
}

double dist_mult_impl(std::span<const double> f, std::span<const double> g, double p, LipScale s)
{
    if (f.size() != g.size() || f.empty()) {
        throw Error("dist_mult: patch and probe must be non-empty and of equal size");
    }
    require_tolerance(p);
    require_open_range(f, s, "dist_mult image");
    require_open_range(g, s, "dist_mult probe");
    std::vector<double> gamma(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        gamma[i] = contrast_mult(f[i], g[i], s);
    }
    return log_ratio(gamma, drop_count(p, gamma.size()));
}

GreyImage ingest(const GreyImage& f, const MultProbeContext& ctx, MapOptions opts)
{
    if (!(f.scale() == ctx.scale())) {
        throw Error("image and probe use different LIP scales");
    }
    return clamp_positive(f, opts.clamp_eps);
}

DistanceMap make_map(RealArray values, const MultProbeContext& ctx)
{
    DistanceMap map;
    map.values = std::move(values);
    map.kind = MapKind::Multiplicative;
    map.probe_id = ctx.probe().name();
    map.p = ctx.p();
    return map;
}

// Windows with at most one sample carry no contrast spread: force 0 and count them.
void settle_degenerate(DistanceMap& map, std::span<const Offset> offsets)
{
    const Grid<int> sizes = detail::window_sizes(map.width(), map.height(), offsets);
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] <= 1) {
            map.values[i] = 0.0;
            ++map.degenerate_pixels;
        }
    }
}

}  // namespace

MultProbeContext::MultProbeContext(ProbeFunction probe, double p) : probe_(std::move(probe)), p_(p)
{
    require_tolerance(p);
    require_open_range(probe_.values(), probe_.scale(), "multiplicative probe");
    const LipScale s = probe_.scale();
    tilde_.reserve(probe_.size());
    for (double v : probe_.values()) {
        tilde_.push_back(tilde(v, s));
    }
    hat_ = probe_.transformed([s](double v) { return hat(v, s); });
    upper_ = reflect(hat_).transformed([](double v) { return -v; });
}

std::size_t MultProbeContext::drop_count() const
{
    return asplund::drop_count(p_, probe_.size());
}

double dist_mult(std::span<const double> f, std::span<const double> g, LipScale s)
{
    return dist_mult_impl(f, g, 1.0, s);
}

double dist_mult_tol(std::span<const double> f, std::span<const double> g, double p, LipScale s)
{
    return dist_mult_impl(f, g, p, s);
}

RealArray upper_bound_map_mult(const GreyImage& f, const MultProbeContext& ctx, MapOptions opts)
{
    RealArray out = dilate_add(hat(ingest(f, ctx, opts)), ctx.upper_structuring());
    for (double& v : out.values()) {
        v = std::exp(v);
    }
    return out;
}

RealArray lower_bound_map_mult(const GreyImage& f, const MultProbeContext& ctx, MapOptions opts)
{
    RealArray out = erode_add(hat(ingest(f, ctx, opts)), ctx.hat_probe());
    for (double& v : out.values()) {
        v = std::exp(v);
    }
    return out;
}

DistanceMap map_mult_direct(const GreyImage& f, const MultProbeContext& ctx, MapOptions opts)
{
    const GreyImage image = ingest(f, ctx, opts);
    const double m = image.upper();
    const std::span<const double> src = image.values().values();
    const std::span<const double> probe_tilde = ctx.tilde_values();
    const detail::WindowIndexer windows(image.width(), image.height(), ctx.probe().offsets());
    const RankDrop drop = RankDrop::tolerance(ctx.p());

    RealArray out(image.width(), image.height(), 0.0);
    std::vector<double> gamma;
    gamma.reserve(ctx.probe().size());
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            gamma.clear();
            windows.visit(x, y, [&](std::size_t i, std::size_t idx) {
                gamma.push_back(std::log1p(-src[idx] / m) / probe_tilde[i]);
            });
            if (gamma.size() > 1) {
                out(x, y) = log_ratio(gamma, drop.count(gamma.size()));
            }
        }
    }
    DistanceMap map = make_map(std::move(out), ctx);
    settle_degenerate(map, ctx.probe().offsets());
    return map;
}

DistanceMap map_mult_morpho(const GreyImage& f, const MultProbeContext& ctx, MapOptions opts)
{
    const RealArray transformed = hat(ingest(f, ctx, opts));
    RealArray out(transformed.width(), transformed.height());
    if (ctx.p() == 1.0) {
        const RealArray upper = dilate_add(transformed, ctx.upper_structuring());
        const RealArray lower = erode_add(transformed, ctx.hat_probe());
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = upper[i] - lower[i];
        }
    } else {
        const RankPair ranks = rank_window_pair(transformed, ctx.hat_probe(), RankDrop::tolerance(ctx.p()));
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = ranks.top[i] - ranks.bottom[i];
        }
    }
    DistanceMap map = make_map(std::move(out), ctx);
    settle_degenerate(map, ctx.probe().offsets());
    return map;
}

DistanceMap map_mult_flat(const GreyImage& f, const MultProbeContext& ctx, MapOptions opts)
{
    if (!ctx.probe().is_flat()) {
        throw Error("map_mult_flat requires a flat probe");
    }
    const GreyImage image = ingest(f, ctx, opts);
    const double m = image.upper();
    const std::span<const Offset> support = ctx.probe().offsets();
    RealArray highest, lowest;
    if (ctx.p() == 1.0) {
        highest = max_filter(image.values(), support);
        lowest = min_filter(image.values(), support);
    } else {
        const ProbeFunction zero = ctx.probe().transformed([](double) { return 0.0; });
        RankPair ranks = rank_window_pair(image.values(), zero, RankDrop::tolerance(ctx.p()));
        highest = std::move(ranks.top);
        lowest = std::move(ranks.bottom);
    }
    RealArray out(image.width(), image.height());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::log(std::log1p(-highest[i] / m) / std::log1p(-lowest[i] / m));
    }
    DistanceMap map = make_map(std::move(out), ctx);
    settle_degenerate(map, support);
    return map;
}

}  // namespace asplund
