#pragma once

// LIP-multiplicative Asplund distance and its distance maps.
//
// For a probe b and a patch f on the same support, the distance is
// ln(lambda / mu) where lambda and mu are the largest and smallest
// multiplicative contrasts ln(1 - f/M) / ln(1 - b/M). It is unchanged when
// either argument is LIP-multiplied by a positive scalar.

#include <span>
#include <vector>

#include "asplund/distance_map.hpp"
#include "asplund/lip.hpp"
#include "asplund/morphology.hpp"

namespace asplund {

/// A probe prepared for multiplicative matching. Immutable once built.
class MultProbeContext {
public:
    /// Probe values must lie in ]0, M[; p in ]0, 1].
    explicit MultProbeContext(ProbeFunction probe, double p = 1.0);

    const ProbeFunction& probe() const { return probe_; }
    double p() const { return p_; }
    LipScale scale() const { return probe_.scale(); }

    /// ln(1 - b/M) per offset, all strictly negative.
    std::span<const double> tilde_values() const { return tilde_; }
    /// ln(-ln(1 - b/M)) on D_b.
    const ProbeFunction& hat_probe() const { return hat_; }
    /// -hat(b_bar): the additive structuring function of the upper-bound dilation.
    const ProbeFunction& upper_structuring() const { return upper_; }
    /// Samples dropped per side for a full window.
    std::size_t drop_count() const;

private:
    ProbeFunction probe_;
    double p_;
    std::vector<double> tilde_;
    ProbeFunction hat_;
    ProbeFunction upper_;
};

/// ln(lambda / mu) between a patch f and a probe g, both in ]0, M[.
double dist_mult(std::span<const double> f, std::span<const double> g, LipScale s = {});
/// Tolerant version: (1 - p)/2 of the contrasts are discarded on each side.
double dist_mult_tol(std::span<const double> f, std::span<const double> g, double p, LipScale s = {});

struct MapOptions {
    /// Clamp applied at ingestion, mapping values into [eps, M - eps].
    double clamp_eps = 0.5;
};

/// Least-upper-bound map lambda_b f (sup of contrasts over each window).
RealArray upper_bound_map_mult(const GreyImage& f, const MultProbeContext& ctx, MapOptions opts = {});
/// Greatest-lower-bound map mu_b f (inf of contrasts over each window).
RealArray lower_bound_map_mult(const GreyImage& f, const MultProbeContext& ctx, MapOptions opts = {});

/// Per-window evaluation of the distance against the probe.
DistanceMap map_mult_direct(const GreyImage& f, const MultProbeContext& ctx, MapOptions opts = {});
/// Dilation minus erosion of hat(f); rank filters when p < 1.
DistanceMap map_mult_morpho(const GreyImage& f, const MultProbeContext& ctx, MapOptions opts = {});
/// Closed form for a flat probe: ln of the ratio of tilde(max filter) to tilde(min filter).
DistanceMap map_mult_flat(const GreyImage& f, const MultProbeContext& ctx, MapOptions opts = {});

}  // namespace asplund
