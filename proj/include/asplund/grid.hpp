#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "asplund/error.hpp"

namespace asplund {

/// Dense row-major 2-D array. Pixel (x, y) lives at index y * width + x.
template <typename T>
class Grid {
public:
    Grid() = default;

    Grid(int width, int height, T fill = T{})
        : width_(width), height_(height)
    {
        if (width <= 0 || height <= 0) {
            throw Error("grid dimensions must be positive");
        }
        data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    Grid(int width, int height, std::vector<T> values)
        : width_(width), height_(height), data_(std::move(values))
    {
        if (width <= 0 || height <= 0) {
            throw Error("grid dimensions must be positive");
        }
        if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
            throw Error("grid value count does not match width * height");
        }
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    template <typename U>
    bool same_shape(const Grid<U>& other) const
    {
        return width_ == other.width() && height_ == other.height();
    }

    T& operator()(int x, int y) { return data_[index(x, y)]; }
    const T& operator()(int x, int y) const { return data_[index(x, y)]; }

    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    std::span<T> row(int y) { return {data_.data() + index(0, y), static_cast<std::size_t>(width_)}; }
    std::span<const T> row(int y) const
    {
        return {data_.data() + index(0, y), static_cast<std::size_t>(width_)};
    }

    std::span<T> values() { return data_; }
    std::span<const T> values() const { return data_; }
    const std::vector<T>& data() const { return data_; }

    bool operator==(const Grid&) const = default;

private:
    std::size_t index(int x, int y) const
    {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

using RealArray = Grid<double>;
using Mask = Grid<std::uint8_t>;
using LabelArray = Grid<int>;

}  // namespace asplund
