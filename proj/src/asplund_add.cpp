#include "asplund/asplund_add.hpp"

#include <algorithm>
#include <cmath>
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

void require_extended_range(std::span<const double> values, LipScale s, const char* what)
{
    for (double v : values) {
        if (!std::isfinite(v) || !(v < s.upper())) {
            throw Error(std::string(what) + ": values must be finite and < M");
        }
    }
}

// c1' (-) c2' over contrast values; reorders them.
double lip_spread(std::span<double> gamma, std::size_t drop, double m)
{
    const auto [low, high] = detail::extreme_ranks(gamma, drop);
    return (high - low) / (1.0 - low / m);
}

double dist_add_impl(std::span<const double> f, std::span<const double> g, double p, LipScale s)
{
    if (f.size() != g.size() || f.empty()) {
        throw Error("dist_add: patch and probe must be non-empty and of equal size");
    }
    require_tolerance(p);
    require_extended_range(f, s, "dist_add image");
    require_extended_range(g, s, "dist_add probe");
    std::vector<double> gamma(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        gamma[i] = contrast_add(f[i], g[i], s);
    }
    return lip_spread(gamma, drop_count(p, gamma.size()), s.upper());
}

void require_compatible(const GreyImage& f, const AddProbeContext& ctx)
{
    if (!(f.scale() == ctx.scale())) {
        throw Error("image and probe use different LIP scales");
    }
}

RealArray xi_transform(const GreyImage& f)
{
    const LipScale s = f.scale();
    RealArray out(f.width(), f.height());
    const auto src = f.values().values();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = xi_capped(src[i], s);
    }
    return out;
}

DistanceMap make_map(RealArray values, const AddProbeContext& ctx)
{
    DistanceMap map;
    map.values = std::move(values);
    map.kind = MapKind::Additive;
    map.probe_id = ctx.probe().name();
    map.p = ctx.p();
    return map;
}

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

double xi_capped(double f, LipScale s)
{
    return xi(std::min(f, s.upper() - kXiCapMargin), s);
}

AddProbeContext::AddProbeContext(ProbeFunction probe, double p) : probe_(std::move(probe)), p_(p)
{
    require_tolerance(p);
    require_extended_range(probe_.values(), probe_.scale(), "additive probe");
    const LipScale s = probe_.scale();
    xi_ = probe_.transformed([s](double v) { return xi_capped(v, s); });
    upper_ = reflect(xi_).transformed([](double v) { return -v; });
}

std::size_t AddProbeContext::drop_count() const
{
    return asplund::drop_count(p_, probe_.size());
}

double dist_add(std::span<const double> f, std::span<const double> g, LipScale s)
{
    return dist_add_impl(f, g, 1.0, s);
}

double dist_add_tol(std::span<const double> f, std::span<const double> g, double p, LipScale s)
{
    return dist_add_impl(f, g, p, s);
}

RealArray upper_bound_map_add(const GreyImage& f, const AddProbeContext& ctx)
{
    require_compatible(f, ctx);
    return xi_inv(dilate_add(xi_transform(f), ctx.upper_structuring()), f.scale());
}

RealArray lower_bound_map_add(const GreyImage& f, const AddProbeContext& ctx)
{
    require_compatible(f, ctx);
    return xi_inv(erode_add(xi_transform(f), ctx.xi_probe()), f.scale());
}

DistanceMap map_add_direct(const GreyImage& f, const AddProbeContext& ctx)
{
    require_compatible(f, ctx);
    const double m = f.upper();
    const std::span<const double> src = f.values().values();
    const std::span<const double> probe = ctx.probe().values();
    const detail::WindowIndexer windows(f.width(), f.height(), ctx.probe().offsets());
    const RankDrop drop = RankDrop::tolerance(ctx.p());

    RealArray out(f.width(), f.height(), 0.0);
    std::vector<double> gamma;
    gamma.reserve(ctx.probe().size());
    for (int y = 0; y < f.height(); ++y) {
        for (int x = 0; x < f.width(); ++x) {
            gamma.clear();
            windows.visit(x, y, [&](std::size_t i, std::size_t idx) {
                gamma.push_back((src[idx] - probe[i]) / (1.0 - probe[i] / m));
            });
            if (gamma.size() > 1) {
                out(x, y) = lip_spread(gamma, drop.count(gamma.size()), m);
            }
        }
    }
    DistanceMap map = make_map(std::move(out), ctx);
    settle_degenerate(map, ctx.probe().offsets());
    return map;
}

DistanceMap map_add_morpho(const GreyImage& f, const AddProbeContext& ctx)
{
    require_compatible(f, ctx);
    const RealArray transformed = xi_transform(f);
    RealArray spread(f.width(), f.height());
    if (ctx.p() == 1.0) {
        const RealArray upper = dilate_add(transformed, ctx.upper_structuring());
        const RealArray lower = erode_add(transformed, ctx.xi_probe());
        for (std::size_t i = 0; i < spread.size(); ++i) {
            spread[i] = upper[i] - lower[i];
        }
    } else {
        const RankPair ranks = rank_window_pair(transformed, ctx.xi_probe(), RankDrop::tolerance(ctx.p()));
        for (std::size_t i = 0; i < spread.size(); ++i) {
            spread[i] = ranks.top[i] - ranks.bottom[i];
        }
    }
    const double m = f.upper();
    for (double& v : spread.values()) {
        v = std::isfinite(v) ? -m * std::expm1(-v / m) : 0.0;
    }
    DistanceMap map = make_map(std::move(spread), ctx);
    settle_degenerate(map, ctx.probe().offsets());
    return map;
}

DistanceMap map_add_flat(const GreyImage& f, const AddProbeContext& ctx)
{
    require_compatible(f, ctx);
    if (!ctx.probe().is_flat()) {
        throw Error("map_add_flat requires a flat probe");
    }
    const std::span<const Offset> support = ctx.probe().offsets();
    RealArray highest, lowest;
    if (ctx.p() == 1.0) {
        highest = max_filter(f.values(), support);
        lowest = min_filter(f.values(), support);
    } else {
        const ProbeFunction zero = ctx.probe().transformed([](double) { return 0.0; });
        RankPair ranks = rank_window_pair(f.values(), zero, RankDrop::tolerance(ctx.p()));
        highest = std::move(ranks.top);
        lowest = std::move(ranks.bottom);
    }
    const double m = f.upper();
    RealArray out(f.width(), f.height(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (std::isfinite(highest[i]) && std::isfinite(lowest[i])) {
            out[i] = (highest[i] - lowest[i]) / (1.0 - lowest[i] / m);
        }
    }
    DistanceMap map = make_map(std::move(out), ctx);
    settle_degenerate(map, support);
    return map;
}

}  // namespace asplund
