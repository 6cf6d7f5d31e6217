#include "scriptid/raster.hpp"

#include <algorithm>
#include <utility>

namespace scriptid {

BinaryImage binarize(const GrayImage& img) {
    const auto& px = img.pixels();
    int lo = 255, hi = 0;
    for (auto v : px) {
        lo = std::min<int>(lo, v);
        hi = std::max<int>(hi, v);
    }
    // foreground iff intensity < (lo + hi) / 2, compared without rounding
    BinaryImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            out.set(x, y, 2 * static_cast<int>(img.at(x, y)) < lo + hi);
    return out;
}

BinaryImage erode(const BinaryImage& img) {
    BinaryImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            bool all = true;
            for (int dy = -1; dy <= 1 && all; ++dy)
                for (int dx = -1; dx <= 1 && all; ++dx)
                    all = img.at_or_background(x + dx, y + dy);
            out.set(x, y, all);
        }
    }
    return out;
}

BinaryImage dilate(const BinaryImage& img) {
    BinaryImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            bool any = false;
            for (int dy = -1; dy <= 1 && !any; ++dy)
                for (int dx = -1; dx <= 1 && !any; ++dx)
                    any = img.at_or_background(x + dx, y + dy);
            out.set(x, y, any);
        }
    }
    return out;
}

BinaryImage close_gaps(const BinaryImage& img) {
    return erode(dilate(img));
}

namespace {

// Flood-fills the 8-connected component containing (sx, sy), marking
// visited pixels and returning the member list with the bounding box.
struct FloodResult {
    std::vector<std::pair<int, int>> pixels;
    Rect bbox;
};

FloodResult flood_fill(const BinaryImage& img, std::vector<std::uint8_t>& seen,
                       int sx, int sy) {
    const int w = img.width();
    FloodResult res;
    res.bbox = Rect{sx, sy, sx, sy};
    std::vector<std::pair<int, int>> stack{{sx, sy}};
    seen[static_cast<std::size_t>(sy) * w + sx] = 1;
    while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        res.pixels.emplace_back(x, y);
        res.bbox.left = std::min(res.bbox.left, x);
        res.bbox.right = std::max(res.bbox.right, x);
        res.bbox.top = std::min(res.bbox.top, y);
        res.bbox.bottom = std::max(res.bbox.bottom, y);
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                int nx = x + dx, ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= w || ny >= img.height()) continue;
                std::size_t i = static_cast<std::size_t>(ny) * w + nx;
                if (!seen[i] && img.at(nx, ny)) {
                    seen[i] = 1;
                    stack.emplace_back(nx, ny);
                }
            }
        }
    }
    return res;
}

bool inside_border_band(int x, int y, int w, int h, int margin) {
    return x < margin || y < margin || x >= w - margin || y >= h - margin;
}

} // namespace

BinaryImage despeckle(const BinaryImage& img, int min_area, int border_margin,
                      double border_aspect) {
    if (min_area < 1) throw ContractError("despeckle: min_area must be >= 1");
    const int w = img.width(), h = img.height();
    BinaryImage out = img;
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(w) * h, 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!img.at(x, y) || seen[static_cast<std::size_t>(y) * w + x]) continue;
            FloodResult c = flood_fill(img, seen, x, y);
            bool drop = static_cast<int>(c.pixels.size()) < min_area;
            if (!drop && border_margin > 0) {
                bool in_band = true;
                for (auto& [px, py] : c.pixels) {
                    if (!inside_border_band(px, py, w, h, border_margin)) {
                        in_band = false;
                        break;
                    }
                }
                if (in_band) {
                    int bw = c.bbox.width(), bh = c.bbox.height();
                    double aspect = static_cast<double>(std::max(bw, bh)) /
                                    static_cast<double>(std::min(bw, bh));
                    drop = aspect > border_aspect;
                }
            }
            if (drop)
                for (auto& [px, py] : c.pixels) out.set(px, py, false);
        }
    }
    return out;
}

BinaryImage crop(const BinaryImage& img, const Rect& r) {
    if (r.left < 0 || r.top < 0 || r.right >= img.width() ||
        r.bottom >= img.height() || r.left > r.right || r.top > r.bottom)
        throw ContractError("crop: rectangle outside image");
    BinaryImage out(r.width(), r.height());
    for (int y = r.top; y <= r.bottom; ++y)
        for (int x = r.left; x <= r.right; ++x)
            out.set(x - r.left, y - r.top, img.at(x, y));
    return out;
}

} // namespace scriptid
