#ifndef SCRIPTID_RASTER_HPP
#define SCRIPTID_RASTER_HPP

#include <cstdint>
#include <vector>

#include "scriptid/error.hpp"

namespace scriptid {

/// Inclusive pixel-coordinate rectangle.
struct Rect {
    int left = 0;
    int top = 0;
    int right = 0;
    int bottom = 0;

    int width() const { return right - left + 1; }
    int height() const { return bottom - top + 1; }

    bool contains(int x, int y) const {
        return x >= left && x <= right && y >= top && y <= bottom;
    }

    /// Smallest rectangle covering both operands.
    Rect united(const Rect& o) const {
        return Rect{left < o.left ? left : o.left,
                    top < o.top ? top : o.top,
                    right > o.right ? right : o.right,
                    bottom > o.bottom ? bottom : o.bottom};
    }

    bool operator==(const Rect&) const = default;
};

/// Number of rows shared by the vertical extents of two rectangles.
inline int vertical_overlap(const Rect& a, const Rect& b) {
    int lo = a.top > b.top ? a.top : b.top;
    int hi = a.bottom < b.bottom ? a.bottom : b.bottom;
    return hi >= lo ? hi - lo + 1 : 0;
}

/// 8-bit grayscale raster, row-major.
class GrayImage {
public:
    GrayImage(int width, int height, std::uint8_t fill = 255)
        : width_(width), height_(height) {
        if (width < 1 || height < 1)
            throw ContractError("GrayImage: dimensions must be positive");
        pixels_.assign(static_cast<std::size_t>(width) * height, fill);
    }

    int width() const { return width_; }
    int height() const { return height_; }

    std::uint8_t at(int x, int y) const { return pixels_[idx(x, y)]; }
    void set(int x, int y, std::uint8_t v) { pixels_[idx(x, y)] = v; }

    const std::vector<std::uint8_t>& pixels() const { return pixels_; }
    std::vector<std::uint8_t>& pixels() { return pixels_; }

private:
    std::size_t idx(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_;
    int height_;
    std::vector<std::uint8_t> pixels_;
};

/// Binary ink mask, row-major; true = foreground (ink).
class BinaryImage {
public:
    BinaryImage(int width, int height, bool fill = false)
        : width_(width), height_(height) {
        if (width < 1 || height < 1)
            throw ContractError("BinaryImage: dimensions must be positive");
        mask_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
    }

    int width() const { return width_; }
    int height() const { return height_; }

    bool at(int x, int y) const { return mask_[idx(x, y)] != 0; }
    void set(int x, int y, bool v) { mask_[idx(x, y)] = v ? 1 : 0; }

    /// Out-of-image pixels read as background.
    bool at_or_background(int x, int y) const {
        if (x < 0 || y < 0 || x >= width_ || y >= height_) return false;
        return at(x, y);
    }

    std::size_t foreground_count() const {
        std::size_t n = 0;
        for (auto v : mask_) n += v;
        return n;
    }

    const std::vector<std::uint8_t>& mask() const { return mask_; }

    bool operator==(const BinaryImage&) const = default;

private:
    std::size_t idx(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_;
    int height_;
    std::vector<std::uint8_t> mask_;
};

/**
 * Threshold at the mean of the extreme gray values: T = (min + max) / 2,
 * kept exact by comparing 2*intensity < min + max. A pixel is foreground
 * iff its intensity is strictly below T (ink is dark); ties go to
 * background, so a uniform image binarizes to all background.
 */
BinaryImage binarize(const GrayImage& img);

/// 3x3 all-ones erosion; pixels outside the image count as background.
BinaryImage erode(const BinaryImage& img);

/// 3x3 all-ones dilation.
BinaryImage dilate(const BinaryImage& img);

/// One closing pass (dilate, then erode) to heal pixel-level discontinuities.
BinaryImage close_gaps(const BinaryImage& img);

/**
 * Removes 8-connected components with area < min_area anywhere in the
 * image, and components lying entirely inside the border band of width
 * border_margin whose bounding-box aspect ratio (long/short side) exceeds
 * border_aspect. The second rule targets scanner streaks hugging the
 * page edges.
 */
BinaryImage despeckle(const BinaryImage& img, int min_area, int border_margin,
                      double border_aspect = 10.0);

/// Copy of the pixels inside r. r must lie within the image.
BinaryImage crop(const BinaryImage& img, const Rect& r);

} // namespace scriptid

#endif // SCRIPTID_RASTER_HPP
