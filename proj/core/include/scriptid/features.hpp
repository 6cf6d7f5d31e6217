#ifndef SCRIPTID_FEATURES_HPP
#define SCRIPTID_FEATURES_HPP

#include <array>
#include <vector>

#include "scriptid/raster.hpp"

namespace scriptid {

/**
 * Fixed row positions inside a word image. R1/R5 are the first and last
 * ink rows, R2 the row of maximal horizontalness. The interior rows are
 * successive midpoints, clamped to [R1, R5]:
 *
 *   R4  = floor((R2 + R5) / 2)      R3  = floor((R2 + R4) / 2)
 *   R12 = floor((R1 + R2) / 2)      R13 = floor((R12 + R2) / 2)
 *
 * which keeps R1 <= R12 <= R13 <= R2 <= R3 <= R4 <= R5. A literal mode
 * (divisors 4 and 3 for R4/R3) is available for fidelity experiments; it
 * guarantees only the [R1, R5] clamp.
 */
struct RowLandmarks {
    int r1 = 0;
    int r2 = 0;
    int r3 = 0;
    int r4 = 0;
    int r5 = 0;
    int r12 = 0;
    int r13 = 0;
};

/// Headline band around R2 plus the two segmentation counts taken from it.
struct HeadlineAnalysis {
    int band_top = 0;
    int band_bottom = 0;
    int matra_pixel_count = 0;         // ink inside the band
    int segmentation_point_count = 0;  // band ink at columns empty below the band

    int band_height() const { return band_bottom - band_top + 1; }
};

/// The 8-element holistic descriptor, every entry in [0, 1].
using FeatureVector = std::array<double, 8>;

struct FeatureConfig {
    double coherence = 0.75;       // band rows need >= coherence * profile(R2)
    bool literal_landmarks = false; // use the divisor-4/3 row formulas
};

/**
 * Per-row horizontalness: the length of the longest maximal run of
 * foreground pixels in that row. Peaks at the Matra row of headline
 * scripts. Errors on an all-background image.
 */
std::vector<int> horizontalness_profile(const BinaryImage& word);

/// Row of maximal horizontalness; ties go to the topmost row.
int profile_argmax(const std::vector<int>& profile);

RowLandmarks row_landmarks(const BinaryImage& word,
                           const std::vector<int>& profile,
                           const FeatureConfig& cfg = {});

/**
 * Finds the maximal contiguous run of rows around R2 whose profile stays
 * within the coherence factor of the peak, counts its ink (Matra pixels),
 * and counts the band ink in columns carrying no foreground below the
 * band (segmentation-point pixels).
 */
HeadlineAnalysis headline_analysis(const BinaryImage& word,
                                   const RowLandmarks& marks,
                                   const std::vector<int>& profile,
                                   const FeatureConfig& cfg = {});

/// Foreground/background changeovers between adjacent pixels of one row.
int transitions(const BinaryImage& word, int row_index);

/**
 * The full 8-feature descriptor of a word, computed on the tight bounding
 * box of its ink:
 *
 *   f1 = profile(R2) / width
 *   f2 = matra pixels / (width * band height)
 *   f3 = segmentation-point pixels / width
 *   f4..f8 = transitions at R2, R3, R4, R12, R13, each / width
 *
 * Every value is clamped into [0, 1]. Errors on an empty word.
 */
FeatureVector extract_features(const BinaryImage& word,
                               const FeatureConfig& cfg = {});

/// Tight bounding box of the foreground; errors when there is none.
Rect ink_bbox(const BinaryImage& img);

} // namespace scriptid

#endif // SCRIPTID_FEATURES_HPP
