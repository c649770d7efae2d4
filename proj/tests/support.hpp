#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "asplund/distance_map.hpp"
#include "asplund/lip.hpp"
#include "asplund/morphology.hpp"

namespace testing {

using asplund::GreyImage;
using asplund::Offset;
using asplund::ProbeFunction;
using asplund::RealArray;

inline constexpr double kM = 256.0;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return integer(0, 1) == 1; }
    std::mt19937_64& engine() { return rng_; }

    RealArray array(int w, int h, double lo, double hi)
    {
        RealArray out(w, h);
        for (double& v : out.values()) {
            v = real(lo, hi);
        }
        return out;
    }

    GreyImage image(int w, int h, double lo = 1.0, double hi = 255.0)
    {
        return GreyImage(array(w, h, lo, hi));
    }

    /// Random rectangular probe w x h in [min_size, max_size], flat or not.
    ProbeFunction probe(int min_size, int max_size, bool flat, double lo = 5.0, double hi = 250.0)
    {
        const int w = integer(min_size, max_size);
        const int h = integer(min_size, max_size);
        const auto offsets = asplund::rect_offsets(w, h);
        if (flat) {
            return ProbeFunction::flat(offsets, real(lo, hi));
        }
        std::vector<double> values(offsets.size());
        for (double& v : values) {
            v = real(lo, hi);
        }
        return ProbeFunction(offsets, values);
    }

private:
    std::mt19937_64 rng_;
};

// Brute-force reference written straight from the definitions.

inline std::size_t oracle_drop(double p, std::size_t n)
{
    std::size_t k = static_cast<std::size_t>(std::floor((1.0 - p) * static_cast<double>(n) / 2.0 + 1e-9));
    while (k > 0 && 2 * k >= n) {
        --k;
    }
    return k;
}

inline double oracle_dist_mult(const std::vector<double>& f, const std::vector<double>& g, double p = 1.0)
{
    std::vector<double> gamma;
    for (std::size_t i = 0; i < f.size(); ++i) {
        gamma.push_back(std::log(1.0 - f[i] / kM) / std::log(1.0 - g[i] / kM));
    }
    std::sort(gamma.begin(), gamma.end());
    const std::size_t k = oracle_drop(p, gamma.size());
    return std::log(gamma[gamma.size() - 1 - k] / gamma[k]);
}

inline double oracle_dist_add(const std::vector<double>& f, const std::vector<double>& g, double p = 1.0)
{
    std::vector<double> c;
    for (std::size_t i = 0; i < f.size(); ++i) {
        c.push_back((f[i] - g[i]) / (1.0 - g[i] / kM));
    }
    std::sort(c.begin(), c.end());
    const std::size_t k = oracle_drop(p, c.size());
    const double c1 = c[c.size() - 1 - k];
    const double c2 = c[k];
    return (c1 - c2) / (1.0 - c2 / kM);
}

/// Map by gathering each restricted window; windows of size <= 1 give 0.
inline RealArray oracle_map(const RealArray& f, const ProbeFunction& b, bool multiplicative, double p,
                            double clamp = 0.5)
{
    RealArray out(f.width(), f.height(), 0.0);
    for (int y = 0; y < f.height(); ++y) {
        for (int x = 0; x < f.width(); ++x) {
            std::vector<double> fs, gs;
            for (std::size_t i = 0; i < b.size(); ++i) {
                const int sx = x + b.offset(i).dx, sy = y + b.offset(i).dy;
                if (sx < 0 || sy < 0 || sx >= f.width() || sy >= f.height()) {
                    continue;
                }
                double v = f(sx, sy);
                if (multiplicative) {
                    v = std::min(std::max(v, clamp), kM - clamp);
                }
                fs.push_back(v);
                gs.push_back(b.value(i));
            }
            if (fs.size() > 1) {
                out(x, y) = multiplicative ? oracle_dist_mult(fs, gs, p) : oracle_dist_add(fs, gs, p);
            }
        }
    }
    return out;
}

inline double max_diff(const RealArray& a, const RealArray& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == b[i]) {
            continue;
        }
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

}  // namespace testing
