#pragma once

// Grayscale morphology on real-valued arrays.
//
// All sliding-window operators use the Restrict border policy: at pixel x
// only offsets h with x + h (or x - h for dilations) inside the domain take
// part. This is the same as padding with the neutral element of the
// operator (-inf for sup, +inf for inf).

#include <array>
#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "asplund/grid.hpp"
#include "asplund/lip.hpp"

namespace asplund {

struct Offset {
    int dx = 0;
    int dy = 0;

    Offset operator-() const { return {-dx, -dy}; }
    auto operator<=>(const Offset&) const = default;
};

/// A structuring function: one real value per offset of a finite support.
/// Offsets are relative to the probed pixel, so value(h) pairs with f(x + h).
class ProbeFunction {
public:
    ProbeFunction() = default;
    ProbeFunction(std::vector<Offset> offsets, std::vector<double> values, LipScale scale = {});

    static ProbeFunction flat(std::vector<Offset> offsets, double value, LipScale scale = {});

    std::size_t size() const { return offsets_.size(); }
    std::span<const Offset> offsets() const { return offsets_; }
    std::span<const double> values() const { return values_; }
    const Offset& offset(std::size_t i) const { return offsets_[i]; }
    double value(std::size_t i) const { return values_[i]; }
    LipScale scale() const { return scale_; }

    bool is_flat() const;

    /// Same support, values replaced by fn(value).
    ProbeFunction transformed(const std::function<double(double)>& fn) const;
    ProbeFunction with_values(std::vector<double> values) const;

    /// Bounding box of the support, as {min_dx, min_dy, max_dx, max_dy}.
    std::array<int, 4> extent() const;

    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    bool operator==(const ProbeFunction& other) const
    {
        return offsets_ == other.offsets_ && values_ == other.values_ && scale_ == other.scale_;
    }

private:
    std::vector<Offset> offsets_;
    std::vector<double> values_;
    LipScale scale_;
    std::string name_;
};

/// Offsets of a centred w x h rectangle (anchor at the geometric centre).
std::vector<Offset> rect_offsets(int width, int height);
/// Offsets with dx^2 + dy^2 <= r^2.
std::vector<Offset> disk_offsets(int radius);

/// Reflected structuring function: b_bar(h) = b(-h).
ProbeFunction reflect(const ProbeFunction& b);

/// (delta_b f)(x) = sup { f(x - h) + b(h) : h in D_b, x - h in D }; empty windows give -inf.
RealArray dilate_add(const RealArray& f, const ProbeFunction& b);
/// (eps_b f)(x) = inf { f(x + h) - b(h) : h in D_b, x + h in D }; empty windows give +inf.
RealArray erode_add(const RealArray& f, const ProbeFunction& b);

/// sup of f(x - h) * b(h), with 0 * anything = 0. Requires f, b >= 0.
RealArray dilate_mult(const RealArray& f, const ProbeFunction& b);
/// inf of f(x + h) / b(h), with +inf / anything = +inf and v / 0 = +inf. Requires f, b >= 0.
RealArray erode_mult(const RealArray& f, const ProbeFunction& b);

/// Flat filters over a support: max / min of f(x + h), h in offsets.
RealArray max_filter(const RealArray& f, std::span<const Offset> offsets);
RealArray min_filter(const RealArray& f, std::span<const Offset> offsets);

enum class RankSide { Top, Bottom };

/// How many extreme samples a rank filter discards on its side of the window.
class RankDrop {
public:
    /// A fixed count, identical for every window.
    static RankDrop fixed(std::size_t k);
    /// floor(((1 - p) / 2) * n) for a window of n samples; p in ]0, 1].
    static RankDrop tolerance(double p);

    std::size_t count(std::size_t window_size) const;
    bool is_fixed() const { return fixed_; }

private:
    bool fixed_ = true;
    std::size_t k_ = 0;
    double p_ = 1.0;
};

/// Samples dropped per side for tolerance p over n samples.
std::size_t drop_count(double p, std::size_t n);

/// Order-statistic filter over {f(x + h) - weights(h)}. Top returns the
/// (k+1)-th largest sample, Bottom the (k+1)-th smallest.
RealArray rank_window(const RealArray& f, const ProbeFunction& weights, RankDrop drop, RankSide side);

/// Both sides of rank_window from a single pass over each window.
struct RankPair {
    RealArray top;
    RealArray bottom;
};
RankPair rank_window_pair(const RealArray& f, const ProbeFunction& weights, RankDrop drop);

// Reconstruction-based operators (8-connectivity).

/// Reconstruction by erosion of marker over mask; requires marker >= mask.
RealArray reconstruct_by_erosion(const RealArray& marker, const RealArray& mask);
/// Fill every regional minimum shallower than h: reconstruction by erosion of f + h over f.
RealArray hminima(const RealArray& f, double h);
/// Labels (1..n) of connected plateaus with no strictly lower neighbour; 0 elsewhere.
LabelArray regional_minima(const RealArray& f);
/// Labels (1..n) of the 8-connected components of the set pixels; 0 elsewhere.
LabelArray label_components(const Mask& mask, int* count = nullptr);
/// Keep components whose area lies in [min_area, max_area].
Mask area_opening(const Mask& mask, std::size_t min_area, std::size_t max_area);

}  // namespace asplund
