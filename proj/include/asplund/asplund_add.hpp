#pragma once

// LIP-additive Asplund distance and its distance maps.
//
// The distance between a patch f and a probe g is c1 (-) c2, where c1 and c2
// are the largest and smallest additive contrasts f (-) g. It lies in [0, M[
// and is unchanged when either argument is LIP-translated by a constant,
// which models a change of exposure time.

#include <span>
#include <vector>

#include "asplund/asplund_mult.hpp"
#include "asplund/distance_map.hpp"
#include "asplund/lip.hpp"
#include "asplund/morphology.hpp"

namespace asplund {

/// Grey level below M at which xi saturates, keeping dilation arithmetic finite.
inline constexpr double kXiCapMargin = 1.0 / 1048576.0;  // 2^-20

/// xi(f) with f capped at M - 2^-20.
double xi_capped(double f, LipScale s = {});

class AddProbeContext {
public:
    /// Probe values must be finite and < M; p in ]0, 1].
    explicit AddProbeContext(ProbeFunction probe, double p = 1.0);

    const ProbeFunction& probe() const { return probe_; }
    double p() const { return p_; }
    LipScale scale() const { return probe_.scale(); }

    /// xi(b) on D_b: structuring function of the lower-bound erosion.
    const ProbeFunction& xi_probe() const { return xi_; }
    /// -xi(b_bar): structuring function of the upper-bound dilation.
    const ProbeFunction& upper_structuring() const { return upper_; }
    std::size_t drop_count() const;

private:
    ProbeFunction probe_;
    double p_;
    ProbeFunction xi_;
    ProbeFunction upper_;
};

/// c1 (-) c2 between a patch f and a probe g; values < M, finite.
double dist_add(std::span<const double> f, std::span<const double> g, LipScale s = {});
double dist_add_tol(std::span<const double> f, std::span<const double> g, double p, LipScale s = {});

/// Least-upper-bound map c1_b f = sup_h f(x + h) (-) b(h), via xi conjugation.
RealArray upper_bound_map_add(const GreyImage& f, const AddProbeContext& ctx);
/// Greatest-lower-bound map c2_b f = inf_h f(x + h) (-) b(h), via xi conjugation.
RealArray lower_bound_map_add(const GreyImage& f, const AddProbeContext& ctx);

DistanceMap map_add_direct(const GreyImage& f, const AddProbeContext& ctx);
/// xi_inv of (dilation minus erosion) of xi(f); rank filters when p < 1.
DistanceMap map_add_morpho(const GreyImage& f, const AddProbeContext& ctx);
/// Closed form for a flat probe: max filter (-) min filter.
DistanceMap map_add_flat(const GreyImage& f, const AddProbeContext& ctx);

}  // namespace asplund
