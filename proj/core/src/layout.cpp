#include "scriptid/layout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace scriptid {

std::vector<ConnectedComponent> connected_components(const BinaryImage& img) {
    const int w = img.width(), h = img.height();
    std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
    int next_id = 0;

    // Raster-order discovery gives each component the id rank of its
    // topmost-leftmost pixel.
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (!img.at(x, y) || label[i] >= 0) continue;
            int id = next_id++;
            label[i] = id;
            stack.assign(1, {x, y});
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        int nx = cx + dx, ny = cy + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        std::size_t j = static_cast<std::size_t>(ny) * w + nx;
                        if (label[j] < 0 && img.at(nx, ny)) {
                            label[j] = id;
                            stack.emplace_back(nx, ny);
                        }
                    }
                }
            }
        }
    }

    std::vector<ConnectedComponent> comps(next_id);
    for (int id = 0; id < next_id; ++id) comps[id].id = id;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int id = label[static_cast<std::size_t>(y) * w + x];
            if (id < 0) continue;
            ConnectedComponent& c = comps[id];
            if (c.pixels.empty()) {
                c.bbox = Rect{x, y, x, y};
            } else {
                c.bbox.left = std::min(c.bbox.left, x);
                c.bbox.right = std::max(c.bbox.right, x);
                c.bbox.top = std::min(c.bbox.top, y);
                c.bbox.bottom = std::max(c.bbox.bottom, y);
            }
            c.pixels.emplace_back(x, y);
        }
    }
    for (auto& c : comps) c.area = static_cast<int>(c.pixels.size());
    return comps;
}

double median_component_height(const std::vector<ConnectedComponent>& comps) {
    if (comps.empty()) throw ContractError("no components");
    std::vector<int> heights;
    heights.reserve(comps.size());
    for (const auto& c : comps) heights.push_back(c.height());
    std::sort(heights.begin(), heights.end());
    std::size_t n = heights.size();
    if (n % 2 == 1) return heights[n / 2];
    return (heights[n / 2 - 1] + heights[n / 2]) / 2.0;
}

void classify_heights(std::vector<ConnectedComponent>& comps,
                      const LayoutConfig& cfg) {
    double med = median_component_height(comps);
    for (auto& c : comps) {
        double hgt = c.height();
        if (hgt < cfg.small_factor * med)
            c.height_class = HeightClass::Small;
        else if (hgt > cfg.large_factor * med)
            c.height_class = HeightClass::Large;
        else
            c.height_class = HeightClass::Medium;
    }
}

namespace {

double band_center(const Rect& band) {
    return (band.top + band.bottom) / 2.0;
}

// Pixel centroid; pixel lists are never empty.
std::pair<double, double> centroid(const ConnectedComponent& c) {
    double sx = 0, sy = 0;
    for (auto& [x, y] : c.pixels) {
        sx += x;
        sy += y;
    }
    return {sx / c.pixels.size(), sy / c.pixels.size()};
}

// Index of the line whose band center is vertically nearest cy. The band
// point shares the component's x centroid, so the distance reduces to the
// vertical gap. Ties go to the smaller line index.
int nearest_line(const std::vector<TextLine>& lines, double cy) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        double d = std::abs(cy - band_center(lines[i].band));
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

} // namespace

std::vector<TextLine> cluster_lines(const std::vector<ConnectedComponent>& comps,
                                    const LayoutConfig& cfg) {
    std::vector<const ConnectedComponent*> meds;
    for (const auto& c : comps)
        if (c.height_class == HeightClass::Medium) meds.push_back(&c);
    std::sort(meds.begin(), meds.end(),
              [](const ConnectedComponent* a, const ConnectedComponent* b) {
                  if (a->bbox.left != b->bbox.left) return a->bbox.left < b->bbox.left;
                  if (a->bbox.top != b->bbox.top) return a->bbox.top < b->bbox.top;
                  return a->id < b->id;
              });

    std::vector<TextLine> lines;
    for (const ConnectedComponent* c : meds) {
        int best = -1;
        double best_frac = -1.0;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            int ov = vertical_overlap(c->bbox, lines[i].band);
            if (ov == 0) continue;
            int smaller = std::min(c->bbox.height(), lines[i].band.height());
            double frac = static_cast<double>(ov) / smaller;
            if (frac >= cfg.overlap_frac && frac > best_frac) {
                best_frac = frac;
                best = static_cast<int>(i);
            }
        }
        if (best >= 0) {
            lines[best].component_ids.push_back(c->id);
            lines[best].band = lines[best].band.united(c->bbox);
        } else {
            lines.push_back(TextLine{-1, {c->id}, c->bbox});
        }
    }

    std::stable_sort(lines.begin(), lines.end(),
                     [](const TextLine& a, const TextLine& b) {
                         return band_center(a.band) < band_center(b.band);
                     });
    for (std::size_t i = 0; i < lines.size(); ++i)
        lines[i].id = static_cast<int>(i);
    return lines;
}

void assign_small_components(std::vector<TextLine>& lines,
                             const std::vector<ConnectedComponent>& comps) {
    if (lines.empty()) throw ContractError("assign_small_components: no lines");
    // Place every small against the bands as they stand, then grow bands.
    std::vector<std::vector<int>> added(lines.size());
    std::vector<Rect> growth(lines.size());
    std::vector<bool> grew(lines.size(), false);
    for (const auto& c : comps) {
        if (c.height_class != HeightClass::Small) continue;
        auto [cx, cy] = centroid(c);
        (void)cx;
        int li = nearest_line(lines, cy);
        added[li].push_back(c.id);
        growth[li] = grew[li] ? growth[li].united(c.bbox) : c.bbox;
        grew[li] = true;
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
        for (int id : added[i]) lines[i].component_ids.push_back(id);
        if (grew[i]) lines[i].band = lines[i].band.united(growth[i]);
    }
}

void split_large_components(std::vector<TextLine>& lines,
                            std::vector<ConnectedComponent>& comps,
                            const LayoutConfig& cfg) {
    if (lines.empty()) throw ContractError("split_large_components: no lines");
    double med = median_component_height(comps);

    std::vector<int> large_ids;
    for (const auto& c : comps)
        if (c.height_class == HeightClass::Large) large_ids.push_back(c.id);

    std::vector<std::vector<int>> added(lines.size());
    std::vector<Rect> growth(lines.size());
    std::vector<bool> grew(lines.size(), false);
    auto attach = [&](std::size_t li, int comp_id, const Rect& bbox) {
        added[li].push_back(comp_id);
        growth[li] = grew[li] ? growth[li].united(bbox) : bbox;
        grew[li] = true;
    };

    for (int id : large_ids) {
        // Bands overlapped by this component, top to bottom.
        std::vector<std::size_t> hit;
        for (std::size_t i = 0; i < lines.size(); ++i)
            if (vertical_overlap(comps[id].bbox, lines[i].band) > 0) hit.push_back(i);
        std::sort(hit.begin(), hit.end(), [&](std::size_t a, std::size_t b) {
            return lines[a].band.top < lines[b].band.top;
        });

        if (hit.size() < 2) {
            std::size_t li;
            if (hit.size() == 1) {
                li = hit[0];
            } else {
                auto [cx, cy] = centroid(comps[id]);
                (void)cx;
                li = static_cast<std::size_t>(nearest_line(lines, cy));
            }
            attach(li, id, comps[id].bbox);
            continue;
        }

        // Midpoint cuts between consecutive overlapped bands: fragment j
        // holds the rows in (cut[j-1], cut[j]].
        std::vector<int> cuts;
        for (std::size_t j = 0; j + 1 < hit.size(); ++j)
            cuts.push_back((lines[hit[j]].band.bottom + lines[hit[j + 1]].band.top) / 2);

        const std::vector<std::pair<int, int>> src_pixels = comps[id].pixels;
        for (std::size_t j = 0; j < hit.size(); ++j) {
            int row_lo = j == 0 ? std::numeric_limits<int>::min() : cuts[j - 1] + 1;
            int row_hi = j + 1 < hit.size() ? cuts[j] : std::numeric_limits<int>::max();
            ConnectedComponent frag;
            for (auto& [x, y] : src_pixels) {
                if (y < row_lo || y > row_hi) continue;
                if (frag.pixels.empty()) {
                    frag.bbox = Rect{x, y, x, y};
                } else {
                    frag.bbox.left = std::min(frag.bbox.left, x);
                    frag.bbox.right = std::max(frag.bbox.right, x);
                    frag.bbox.top = std::min(frag.bbox.top, y);
                    frag.bbox.bottom = std::max(frag.bbox.bottom, y);
                }
                frag.pixels.emplace_back(x, y);
            }
            if (frag.pixels.empty()) continue;
            frag.id = static_cast<int>(comps.size());
            frag.area = static_cast<int>(frag.pixels.size());
            double hgt = frag.height();
            frag.height_class = hgt < cfg.small_factor * med ? HeightClass::Small
                                : hgt > cfg.large_factor * med
                                    ? HeightClass::Large
                                    : HeightClass::Medium;
            attach(hit[j], frag.id, frag.bbox);
            comps.push_back(std::move(frag));
        }
    }

    for (std::size_t i = 0; i < lines.size(); ++i) {
        for (int id : added[i]) lines[i].component_ids.push_back(id);
        if (grew[i]) lines[i].band = lines[i].band.united(growth[i]);
    }
}

std::vector<WordBox> segment_words(const TextLine& line,
                                   const std::vector<ConnectedComponent>& comps,
                                   const LayoutConfig& cfg) {
    if (line.component_ids.empty())
        throw ContractError("segment_words: line has no components");

    std::vector<const ConnectedComponent*> members;
    for (int id : line.component_ids) members.push_back(&comps[id]);

    int gap = cfg.gap_threshold;
    if (gap <= 0) {
        std::vector<int> heights;
        for (auto* c : members) heights.push_back(c->bbox.height());
        std::sort(heights.begin(), heights.end());
        std::size_t n = heights.size();
        double med = n % 2 == 1 ? heights[n / 2]
                                : (heights[n / 2 - 1] + heights[n / 2]) / 2.0;
        gap = std::max<long>(3, std::lround(0.5 * med));
    }

    int left = members[0]->bbox.left, right = members[0]->bbox.right;
    for (auto* c : members) {
        left = std::min(left, c->bbox.left);
        right = std::max(right, c->bbox.right);
    }
    std::vector<int> col_count(static_cast<std::size_t>(right - left + 1), 0);
    for (auto* c : members)
        for (auto& [x, y] : c->pixels) {
            (void)y;
            ++col_count[x - left];
        }

    // Column intervals separated by zero runs of at least `gap` columns.
    struct Interval {
        int first, last;
    };
    std::vector<Interval> groups;
    int prev_nz = -1;
    for (int c = left; c <= right; ++c) {
        if (col_count[c - left] == 0) continue;
        if (prev_nz < 0 || c - prev_nz - 1 >= gap)
            groups.push_back({c, c});
        else
            groups.back().last = c;
        prev_nz = c;
    }

    std::vector<WordBox> words(groups.size());
    for (std::size_t i = 0; i < words.size(); ++i) words[i].line_id = line.id;
    for (auto* c : members) {
        for (std::size_t i = 0; i < groups.size(); ++i) {
            if (c->bbox.left >= groups[i].first && c->bbox.left <= groups[i].last) {
                WordBox& w = words[i];
                w.bbox = w.component_ids.empty() ? c->bbox : w.bbox.united(c->bbox);
                w.component_ids.push_back(c->id);
                break;
            }
        }
    }
    // A split fragment can project onto two column intervals while its
    // left edge sits in only one; the other interval then anchors no
    // component and produces no word of its own.
    std::erase_if(words, [](const WordBox& w) { return w.component_ids.empty(); });
    return words;
}

PageLayout segment_page(const BinaryImage& page, const LayoutConfig& cfg) {
    PageLayout out;
    out.components = connected_components(page);
    if (out.components.empty()) return out;

    classify_heights(out.components, cfg);
    out.lines = cluster_lines(out.components, cfg);
    if (out.lines.empty()) {
        // Nothing medium to anchor lines; smalls and larges stay unplaced.
        out.unassigned_small = static_cast<int>(out.components.size());
        return out;
    }
    assign_small_components(out.lines, out.components);
    split_large_components(out.lines, out.components, cfg);

    for (auto& line : out.lines) {
        std::sort(line.component_ids.begin(), line.component_ids.end());
        auto words = segment_words(line, out.components, cfg);
        out.words.insert(out.words.end(), words.begin(), words.end());
    }
    return out;
}

BinaryImage render_word(const WordBox& word,
                        const std::vector<ConnectedComponent>& comps) {
    if (word.component_ids.empty())
        throw ContractError("render_word: word has no components");
    BinaryImage img(word.bbox.width(), word.bbox.height());
    for (int id : word.component_ids)
        for (auto& [x, y] : comps[id].pixels)
            img.set(x - word.bbox.left, y - word.bbox.top, true);
    return img;
}

} // namespace scriptid
