#ifndef SCRIPTID_LAYOUT_HPP
#define SCRIPTID_LAYOUT_HPP

#include <utility>
#include <vector>

#include "scriptid/raster.hpp"

namespace scriptid {

enum class HeightClass { Small, Medium, Large };

struct ConnectedComponent {
    int id = -1;
    Rect bbox;
    int area = 0;
    std::vector<std::pair<int, int>> pixels; // (x, y), raster order
    HeightClass height_class = HeightClass::Medium;

    int height() const { return bbox.height(); }
};

struct TextLine {
    int id = -1;
    std::vector<int> component_ids;
    Rect band; // union of member bounding boxes
};

struct WordBox {
    int line_id = -1;
    Rect bbox;
    std::vector<int> component_ids;
};

struct LayoutConfig {
    double small_factor = 0.5;  // height < small_factor * median -> small
    double large_factor = 2.0;  // height > large_factor * median -> large
    double overlap_frac = 0.4;  // min vertical overlap fraction to join a line
    int gap_threshold = 0;      // inter-word gap in columns; 0 = derive from
                                // the line's median component height
};

/**
 * Maximal 8-connected foreground components, ids assigned in raster order
 * of each component's topmost-leftmost pixel. Pixel lists are in raster
 * order. An empty image yields an empty sequence.
 */
std::vector<ConnectedComponent> connected_components(const BinaryImage& img);

/// Median of the components' bounding-box heights (mean of the middle two
/// for an even count). Errors on an empty sequence.
double median_component_height(const std::vector<ConnectedComponent>& comps);

/// Tags every component small/medium/large against the height median.
void classify_heights(std::vector<ConnectedComponent>& comps,
                      const LayoutConfig& cfg = {});

/**
 * Greedy left-to-right chaining of medium components into lines. A
 * component joins the existing line with the greatest vertical-overlap
 * fraction, provided that fraction reaches overlap_frac of the smaller of
 * the two heights; otherwise it seeds a new line. Lines come back sorted
 * top-to-bottom by band center and re-numbered from zero.
 */
std::vector<TextLine> cluster_lines(const std::vector<ConnectedComponent>& comps,
                                    const LayoutConfig& cfg = {});

/**
 * Attaches each small component to the line whose band center (sampled at
 * the component's x centroid) is nearest its pixel centroid; ties go to
 * the smaller line id. Distances are measured against the bands as given;
 * bands grow only after every small has been placed.
 */
void assign_small_components(std::vector<TextLine>& lines,
                             const std::vector<ConnectedComponent>& comps);

/**
 * Resolves large components. One overlapping two or more line bands is cut
 * horizontally at the midpoints between consecutive bands and each
 * fragment becomes a fresh component appended to comps, joining its
 * band's line. A large component overlapping at most one band joins that
 * band's line (or the nearest line) intact.
 */
void split_large_components(std::vector<TextLine>& lines,
                            std::vector<ConnectedComponent>& comps,
                            const LayoutConfig& cfg = {});

/**
 * Projection-profile word segmentation of one line. Per-column foreground
 * counts are restricted to the line's components; zero-count runs of at
 * least the gap threshold separate words. The default threshold is
 * max(3, round(0.5 * line median component height)).
 */
std::vector<WordBox> segment_words(const TextLine& line,
                                   const std::vector<ConnectedComponent>& comps,
                                   const LayoutConfig& cfg = {});

struct PageLayout {
    std::vector<ConnectedComponent> components;
    std::vector<TextLine> lines;
    std::vector<WordBox> words;        // all lines, top-to-bottom, left-to-right
    int unassigned_small = 0;          // smalls with no line to join
};

/// Runs the full staged pipeline on a cleaned page mask:
/// components -> heights -> lines -> smalls -> larges -> words.
PageLayout segment_page(const BinaryImage& page, const LayoutConfig& cfg = {});

/// Renders the pixels of a word's member components onto a canvas the size
/// of its bounding box.
BinaryImage render_word(const WordBox& word,
                        const std::vector<ConnectedComponent>& comps);

} // namespace scriptid

#endif // SCRIPTID_LAYOUT_HPP
