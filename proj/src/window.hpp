#pragma once

// Internal helper: enumerate the in-domain samples of a sliding window.

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "asplund/morphology.hpp"

namespace asplund::detail {

class WindowIndexer {
public:
    WindowIndexer(int width, int height, std::span<const Offset> offsets)
        : width_(width), height_(height), offsets_(offsets.begin(), offsets.end())
    {
        int min_dx = 0, min_dy = 0, max_dx = 0, max_dy = 0;
        for (const Offset& o : offsets_) {
            min_dx = std::min(min_dx, o.dx);
            min_dy = std::min(min_dy, o.dy);
            max_dx = std::max(max_dx, o.dx);
            max_dy = std::max(max_dy, o.dy);
            deltas_.push_back(static_cast<std::ptrdiff_t>(o.dy) * width + o.dx);
        }
        x_begin_ = -min_dx;
        x_end_ = width - max_dx;
        y_begin_ = -min_dy;
        y_end_ = height - max_dy;
    }

    std::size_t offset_count() const { return offsets_.size(); }

    bool interior(int x, int y) const
    {
        return x >= x_begin_ && x < x_end_ && y >= y_begin_ && y < y_end_;
    }

    /// Calls fn(offset_index, linear_pixel_index) for each offset h with x + h in the domain.
    template <typename Fn>
    void visit(int x, int y, Fn&& fn) const
    {
        const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(y) * width_ + x;
        if (interior(x, y)) {
            for (std::size_t i = 0; i < deltas_.size(); ++i) {
                fn(i, static_cast<std::size_t>(base + deltas_[i]));
            }
            return;
        }
        for (std::size_t i = 0; i < offsets_.size(); ++i) {
            const int sx = x + offsets_[i].dx;
            const int sy = y + offsets_[i].dy;
            if (sx >= 0 && sy >= 0 && sx < width_ && sy < height_) {
                fn(i, static_cast<std::size_t>(base + deltas_[i]));
            }
        }
    }

private:
    int width_;
    int height_;
    std::vector<Offset> offsets_;
    std::vector<std::ptrdiff_t> deltas_;
    int x_begin_ = 0, x_end_ = 0, y_begin_ = 0, y_end_ = 0;
};

}  // namespace asplund::detail

namespace asplund::detail {

/// Number of in-domain samples of every window, via a 2-D difference array.
inline Grid<int> window_sizes(int width, int height, std::span<const Offset> offsets)
{
    Grid<int> diff(width + 1, height + 1, 0);
    for (const Offset& o : offsets) {
        const int x0 = std::max(0, -o.dx), x1 = std::min(width, width - o.dx);
        const int y0 = std::max(0, -o.dy), y1 = std::min(height, height - o.dy);
        if (x0 >= x1 || y0 >= y1) {
            continue;
        }
        diff(x0, y0) += 1;
        diff(x1, y0) -= 1;
        diff(x0, y1) -= 1;
        diff(x1, y1) += 1;
    }
    Grid<int> sizes(width, height, 0);
    for (int y = 0; y < height; ++y) {
        int run = 0;
        for (int x = 0; x < width; ++x) {
            run += diff(x, y);
            sizes(x, y) = run + (y > 0 ? sizes(x, y - 1) : 0);
        }
    }
    return sizes;
}

}  // namespace asplund::detail
