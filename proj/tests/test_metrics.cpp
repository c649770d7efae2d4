#include "doctest.h"

#include <cmath>
#include <vector>

#include "asplund/asplund_add.hpp"
#include "asplund/asplund_mult.hpp"
#include "support.hpp"

using namespace asplund;
using doctest::Approx;

namespace {

GreyImage row_image(std::vector<double> v, RangeMode mode = RangeMode::Image)
{
    const int n = static_cast<int>(v.size());
    return GreyImage(RealArray(n, 1, std::move(v)), LipScale{}, mode);
}

ProbeFunction row_flat(double value)
{
    return ProbeFunction::flat({{-1, 0}, {0, 0}, {1, 0}}, value);
}

ProbeFunction probe_at(const GreyImage& f, int x0, int y0, const std::vector<Offset>& offsets)
{
    std::vector<double> values;
    for (const Offset& o : offsets) {
        values.push_back(f(x0 + o.dx, y0 + o.dy));
    }
    return ProbeFunction(offsets, values);
}

}  // namespace

TEST_CASE("multiplicative distance reference values")
{
    const std::vector<double> f{50.0, 100.0}, g{100.0, 150.0};
    CHECK(dist_mult(f, g) == Approx(0.24723372495517287).epsilon(1e-12));
    CHECK(dist_mult(f, f) == 0.0);
    std::vector<double> scaled;
    for (double v : g) {
        scaled.push_back(lip_mul(3.7, v));
    }
    CHECK(dist_mult(scaled, g) == Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(dist_mult_tol(f, g, 1.0) == dist_mult(f, g));
    CHECK_THROWS_AS(dist_mult(std::vector<double>{0.0}, std::vector<double>{10.0}), Error);
    CHECK_THROWS_AS(dist_mult(std::vector<double>{10.0}, std::vector<double>{256.0}), Error);
    CHECK_THROWS_AS(dist_mult(f, std::vector<double>{1.0}), Error);
}

TEST_CASE("tolerant multiplicative distance drops ranked extremes")
{
    // Contrast values 1, 2, 3, 4, 100 against a constant probe of grey level 1.
    const double probe = 1.0;
    std::vector<double> f, g;
    for (double gamma : {1.0, 2.0, 3.0, 4.0, 100.0}) {
        f.push_back(256.0 * -std::expm1(gamma * tilde(probe)));
        g.push_back(probe);
    }
    CHECK(dist_mult_tol(f, g, 0.6) == Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(dist_mult(f, g) == Approx(std::log(100.0)).epsilon(1e-9));
}

TEST_CASE("additive distance reference values")
{
    const std::vector<double> f{50.0, 100.0}, g{100.0, 150.0};
    CHECK(dist_add(f, g) == Approx(26.29848783694937).epsilon(1e-12));
    CHECK(dist_add(f, f) == 0.0);
    std::vector<double> shifted;
    for (double v : g) {
        shifted.push_back(lip_add(lip_neg(100.0), v));
    }
    CHECK(dist_add(shifted, g) == Approx(0.0).scale(256.0).epsilon(1e-12));
    CHECK(dist_add_tol(f, g, 1.0) == dist_add(f, g));
    CHECK_THROWS_AS(dist_add(std::vector<double>{INFINITY}, std::vector<double>{1.0}), Error);
}

TEST_CASE("one-dimensional maps against hand-evaluated windows")
{
    const GreyImage f = row_image({50.0, 100.0, 150.0});
    const MultProbeContext mctx(row_flat(100.0));
    const AddProbeContext actx(row_flat(100.0));
    const std::vector<double> mult{0.82392216207716, 1.4006105991991469, 0.576688437121987};
    const std::vector<double> add{62.135922330097095, 124.27184466019419, 82.05128205128206};
    for (const DistanceMap& m : {map_mult_direct(f, mctx), map_mult_morpho(f, mctx), map_mult_flat(f, mctx)}) {
        for (int x = 0; x < 3; ++x) {
            CHECK(m(x, 0) == Approx(mult[x]).epsilon(1e-12));
        }
        CHECK(m.kind == MapKind::Multiplicative);
    }
    for (const DistanceMap& m : {map_add_direct(f, actx), map_add_morpho(f, actx), map_add_flat(f, actx)}) {
        for (int x = 0; x < 3; ++x) {
            CHECK(m(x, 0) == Approx(add[x]).epsilon(1e-10));
        }
        CHECK(m.kind == MapKind::Additive);
    }
}

TEST_CASE("single-sample windows are degenerate and zero")
{
    const GreyImage f = row_image({10.0, 200.0, 30.0});
    const ProbeFunction b({{0, 0}, {5, 0}}, {40.0, 80.0});
    const DistanceMap m = map_mult_direct(f, MultProbeContext(b));
    CHECK(m.degenerate_pixels == 3);
    CHECK(m.values.data() == std::vector<double>(3, 0.0));
    CHECK(map_add_morpho(f, AddProbeContext(b)).degenerate_pixels == 3);
}

TEST_CASE("probe extracted from the image gives zero at its origin")
{
    testing::Gen gen(31);
    const GreyImage f = gen.image(20, 20);
    const ProbeFunction b = probe_at(f, 9, 11, rect_offsets(5, 5));
    CHECK(map_mult_morpho(f, MultProbeContext(b))(9, 11) == Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(map_add_morpho(f, AddProbeContext(b))(9, 11) == Approx(0.0).scale(1.0).epsilon(1e-10));
    CHECK(map_mult_direct(f, MultProbeContext(b))(9, 11) == 0.0);
    CHECK(map_add_direct(f, AddProbeContext(b))(9, 11) == 0.0);
}

TEST_CASE("direct, morphological and flat paths agree")
{
    testing::Gen gen(32);
    for (int t = 0; t < 25; ++t) {
        const bool flat = t % 2 == 0;
        const GreyImage f = gen.image(gen.integer(8, 32), gen.integer(8, 32), 0.0, 255.9);
        const ProbeFunction b = gen.probe(1, 7, flat);
        const double p = t % 3 == 0 ? 1.0 : gen.real(0.6, 1.0);
        const MultProbeContext m(b, p);
        const AddProbeContext a(b, p);
        const DistanceMap md = map_mult_direct(f, m);
        const DistanceMap ad = map_add_direct(f, a);
        CHECK(testing::max_diff(md.values, map_mult_morpho(f, m).values) < 1e-6);
        CHECK(testing::max_diff(ad.values, map_add_morpho(f, a).values) < 1e-6);
        CHECK(testing::max_diff(md.values, testing::oracle_map(f.values(), b, true, p)) < 1e-9);
        CHECK(testing::max_diff(ad.values, testing::oracle_map(f.values(), b, false, p)) < 1e-9);
        if (flat) {
            CHECK(testing::max_diff(md.values, map_mult_flat(f, m).values) < 1e-6);
            CHECK(testing::max_diff(ad.values, map_add_flat(f, a).values) < 1e-6);
        }
    }
}

TEST_CASE("flat maps ignore the probe grey level")
{
    testing::Gen gen(33);
    const GreyImage f = gen.image(17, 13);
    const auto support = disk_offsets(2);
    const ProbeFunction b1 = ProbeFunction::flat(support, 20.0);
    const ProbeFunction b2 = ProbeFunction::flat(support, 230.0);
    CHECK(map_mult_flat(f, MultProbeContext(b1)).values == map_mult_flat(f, MultProbeContext(b2)).values);
    CHECK(map_add_flat(f, AddProbeContext(b1)).values == map_add_flat(f, AddProbeContext(b2)).values);
    CHECK_THROWS_AS(map_mult_flat(f, MultProbeContext(gen.probe(3, 3, false))), Error);

    const GreyImage constant(RealArray(6, 6, 90.0));
    CHECK(map_mult_flat(constant, MultProbeContext(b1)).values.data() == std::vector<double>(36, 0.0));
    CHECK(map_add_flat(constant, AddProbeContext(b1)).values.data() == std::vector<double>(36, 0.0));
}

TEST_CASE("bound maps are the suprema and infima of the contrasts")
{
    testing::Gen gen(34);
    const GreyImage f = gen.image(12, 10);
    const ProbeFunction b = gen.probe(3, 5, false);
    const MultProbeContext m(b);
    const AddProbeContext a(b);
    const RealArray lam = upper_bound_map_mult(f, m), mu = lower_bound_map_mult(f, m);
    const RealArray c1 = upper_bound_map_add(f, a), c2 = lower_bound_map_add(f, a);
    for (int y = 0; y < f.height(); ++y) {
        for (int x = 0; x < f.width(); ++x) {
            double hi = -INFINITY, lo = INFINITY, ahi = -INFINITY, alo = INFINITY;
            for (std::size_t i = 0; i < b.size(); ++i) {
                const int sx = x + b.offset(i).dx, sy = y + b.offset(i).dy;
                if (!f.values().contains(sx, sy)) {
                    continue;
                }
                const double gm = contrast_mult(f(sx, sy), b.value(i));
                const double ga = contrast_add(f(sx, sy), b.value(i));
                hi = std::max(hi, gm);
                lo = std::min(lo, gm);
                ahi = std::max(ahi, ga);
                alo = std::min(alo, ga);
            }
            CHECK(lam(x, y) == Approx(hi).epsilon(1e-9));
            CHECK(mu(x, y) == Approx(lo).epsilon(1e-9));
            CHECK(c1(x, y) == Approx(ahi).scale(256.0).epsilon(1e-9));
            CHECK(c2(x, y) == Approx(alo).scale(256.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("lighting invariance of the maps")
{
    testing::Gen gen(35);
    for (int t = 0; t < 10; ++t) {
        // alpha (x) f stays inside the default clamp band for alpha in [0.2, 5].
        const GreyImage f = gen.image(24, 24, 3.0, 180.0);
        const ProbeFunction b = gen.probe(3, 7, gen.coin());
        const double p = t % 2 ? 1.0 : 0.9;
        const MultProbeContext m(b, p);
        const AddProbeContext a(b, p);
        const RealArray base_m = map_mult_morpho(f, m).values;
        const RealArray base_a = map_add_morpho(f, a).values;
        for (double alpha : {0.2, 5.0}) {
            CHECK(testing::max_diff(base_m, map_mult_morpho(lip_mul(alpha, f), m).values) < 1e-6);
        }
        const ProbeFunction scaled_b = b.transformed([](double v) { return lip_mul(2.5, v); });
        CHECK(testing::max_diff(base_m, map_mult_morpho(f, MultProbeContext(scaled_b, p)).values) < 1e-6);
        const ProbeFunction shifted_b = b.transformed([](double v) { return lip_add(-80.0, v); });
        CHECK(testing::max_diff(base_a, map_add_morpho(f, AddProbeContext(shifted_b, p)).values) < 1e-6);
        for (double k : {lip_neg(100.0), -50.0, 50.0}) {
            CHECK(testing::max_diff(base_a, map_add_morpho(lip_add(f, k), a).values) < 1e-6);
            CHECK(testing::max_diff(base_a, map_add_direct(lip_add(f, k), a).values) < 1e-6);
        }
    }
}

TEST_CASE("tolerance is monotone in p")
{
    testing::Gen gen(36);
    for (int t = 0; t < 300; ++t) {
        const int n = gen.integer(2, 30);
        std::vector<double> f(n), g(n);
        for (int i = 0; i < n; ++i) {
            f[i] = gen.real(1.0, 255.0);
            g[i] = gen.real(1.0, 255.0);
        }
        const double p1 = gen.real(0.05, 1.0), p2 = gen.real(p1, 1.0);
        CHECK(dist_mult_tol(f, g, p1) <= dist_mult_tol(f, g, p2) + 1e-12);
        CHECK(dist_add_tol(f, g, p1) <= dist_add_tol(f, g, p2) + 1e-9);
    }
}

TEST_CASE("additive bounds on constant extremes")
{
    // c1 of the bottom element is the bottom element; c2 of M is M.
    const ProbeFunction b = ProbeFunction::flat(rect_offsets(3, 3), 40.0);
    const AddProbeContext a(b);
    const GreyImage low(RealArray(5, 5, -1e300), LipScale{}, RangeMode::ExtendedFunction);
    const RealArray c1 = upper_bound_map_add(low, a);
    for (double v : c1.values()) {
        CHECK(v < -1e290);
    }
    CHECK(xi_capped(256.0) == Approx(xi(256.0 - kXiCapMargin)));
    CHECK(xi_capped(100.0) == xi(100.0));
}

TEST_CASE("context validation")
{
    CHECK_THROWS_AS(MultProbeContext(ProbeFunction::flat({{0, 0}}, 0.0)), Error);
    CHECK_THROWS_AS(MultProbeContext(ProbeFunction::flat({{0, 0}}, 10.0), 0.0), Error);
    CHECK_THROWS_AS(AddProbeContext(ProbeFunction::flat({{0, 0}}, 256.0)), Error);
    CHECK_THROWS_AS(AddProbeContext(ProbeFunction::flat({{0, 0}}, 10.0), 1.5), Error);
    CHECK_NOTHROW(AddProbeContext(ProbeFunction::flat({{0, 0}}, -500.0)));
    CHECK(MultProbeContext(ProbeFunction::flat(rect_offsets(17, 17), 10.0), 0.95).drop_count() == 7);
}
