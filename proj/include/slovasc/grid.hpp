#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace slovasc {

/// Dense row-major raster. Coordinates are (x = column, y = row), origin top-left.
template <typename T>
class Grid {
public:
    using value_type = T;

    Grid() = default;
    Grid(int width, int height, T fill = T{})
        : width_(width), height_(height),
          data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {
        assert(width >= 0 && height >= 0);
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }
    std::pair<int, int> dims() const noexcept { return {width_, height_}; }

    bool in_bounds(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
    const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }

    /// Out-of-bounds reads return `outside`.
    T at_or(int x, int y, T outside) const noexcept {
        return in_bounds(x, y) ? data_[index(x, y)] : outside;
    }

    std::span<T> pixels() noexcept { return data_; }
    std::span<const T> pixels() const noexcept { return data_; }
    std::span<T> row(int y) noexcept {
        return std::span<T>(data_).subspan(index(0, y), static_cast<std::size_t>(width_));
    }
    std::span<const T> row(int y) const noexcept {
        return std::span<const T>(data_).subspan(index(0, y), static_cast<std::size_t>(width_));
    }

    void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

using GrayImage = Grid<std::uint8_t>;
using RealGrid = Grid<double>;
using LabelGrid = Grid<int>;

/// Single-class mask. Storage is one byte per pixel holding 0 or 1.
class BinaryMask : public Grid<std::uint8_t> {
public:
    BinaryMask() = default;
    BinaryMask(int width, int height, bool fill = false)
        : Grid<std::uint8_t>(width, height, fill ? 1 : 0) {}

    bool test(int x, int y) const noexcept { return (*this)(x, y) != 0; }
    bool test_or(int x, int y, bool outside = false) const noexcept {
        return in_bounds(x, y) ? test(x, y) : outside;
    }
    void set(int x, int y, bool v = true) noexcept { (*this)(x, y) = v ? 1 : 0; }

    std::size_t count() const noexcept {
        return static_cast<std::size_t>(
            std::count_if(pixels().begin(), pixels().end(), [](std::uint8_t v) { return v != 0; }));
    }
    bool any() const noexcept {
        return std::any_of(pixels().begin(), pixels().end(), [](std::uint8_t v) { return v != 0; });
    }

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;
};

struct Point {
    int x = 0;
    int y = 0;
    friend bool operator==(const Point&, const Point&) = default;
    friend auto operator<=>(const Point&, const Point&) = default;
};

struct PointF {
    double x = 0.0;
    double y = 0.0;
};

/// 8-neighbourhood offsets in clockwise order starting at north.
inline constexpr std::pair<int, int> kNeighbours8[8] = {
    {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}};

/// Pixelwise helpers shared by the raster and metrics modules.
BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_and_not(const BinaryMask& a, const BinaryMask& b);
bool is_subset(const BinaryMask& inner, const BinaryMask& outer);

}  // namespace slovasc
