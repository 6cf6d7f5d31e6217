#include "scriptid/features.hpp"

#include <algorithm>

namespace scriptid {

Rect ink_bbox(const BinaryImage& img) {
    int left = img.width(), right = -1, top = img.height(), bottom = -1;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            if (!img.at(x, y)) continue;
            left = std::min(left, x);
            right = std::max(right, x);
            top = std::min(top, y);
            bottom = std::max(bottom, y);
        }
    }
    if (right < 0) throw ContractError("empty word image");
    return Rect{left, top, right, bottom};
}

std::vector<int> horizontalness_profile(const BinaryImage& word) {
    bool any = false;
    std::vector<int> profile(word.height(), 0);
    for (int y = 0; y < word.height(); ++y) {
        int best = 0, run = 0;
        for (int x = 0; x < word.width(); ++x) {
            if (word.at(x, y)) {
                ++run;
                best = std::max(best, run);
            } else {
                run = 0;
            }
        }
        profile[y] = best;
        any = any || best > 0;
    }
    if (!any) throw ContractError("empty word image");
    return profile;
}

int profile_argmax(const std::vector<int>& profile) {
    int best = 0;
    for (std::size_t y = 1; y < profile.size(); ++y)
        if (profile[y] > profile[best]) best = static_cast<int>(y);
    return best;
}

RowLandmarks row_landmarks(const BinaryImage& word,
                           const std::vector<int>& profile,
                           const FeatureConfig& cfg) {
    RowLandmarks m;
    m.r1 = -1;
    for (int y = 0; y < word.height(); ++y) {
        if (profile[y] > 0) {
            if (m.r1 < 0) m.r1 = y;
            m.r5 = y;
        }
    }
    if (m.r1 < 0) throw ContractError("empty word image");
    m.r2 = profile_argmax(profile);

    if (cfg.literal_landmarks) {
        m.r4 = (m.r2 + m.r5) / 4;
        m.r3 = (m.r2 + m.r4) / 3;
    } else {
        m.r4 = (m.r2 + m.r5) / 2;
        m.r3 = (m.r2 + m.r4) / 2;
    }
    m.r12 = (m.r1 + m.r2) / 2;
    m.r13 = (m.r12 + m.r2) / 2;

    auto clamp = [&](int r) { return std::clamp(r, m.r1, m.r5); };
    m.r3 = clamp(m.r3);
    m.r4 = clamp(m.r4);
    m.r12 = clamp(m.r12);
    m.r13 = clamp(m.r13);
    return m;
}

HeadlineAnalysis headline_analysis(const BinaryImage& word,
                                   const RowLandmarks& marks,
                                   const std::vector<int>& profile,
                                   const FeatureConfig& cfg) {
    HeadlineAnalysis out;
    const double need = cfg.coherence * profile[marks.r2];
    out.band_top = marks.r2;
    out.band_bottom = marks.r2;
    while (out.band_top > 0 && profile[out.band_top - 1] >= need) --out.band_top;
    while (out.band_bottom + 1 < word.height() && profile[out.band_bottom + 1] >= need)
        ++out.band_bottom;

    for (int y = out.band_top; y <= out.band_bottom; ++y)
        for (int x = 0; x < word.width(); ++x)
            if (word.at(x, y)) ++out.matra_pixel_count;

    // A cut column carries no ink anywhere below the band.
    for (int x = 0; x < word.width(); ++x) {
        bool below = false;
        for (int y = out.band_bottom + 1; y < word.height() && !below; ++y)
            below = word.at(x, y);
        if (below) continue;
        for (int y = out.band_top; y <= out.band_bottom; ++y)
            if (word.at(x, y)) ++out.segmentation_point_count;
    }
    return out;
}

int transitions(const BinaryImage& word, int row_index) {
    if (row_index < 0 || row_index >= word.height())
        throw ContractError("transitions: row out of range");
    int n = 0;
    for (int x = 0; x + 1 < word.width(); ++x)
        if (word.at(x, row_index) != word.at(x + 1, row_index)) ++n;
    return n;
}

FeatureVector extract_features(const BinaryImage& word, const FeatureConfig& cfg) {
    const BinaryImage tight = crop(word, ink_bbox(word));
    const double w = tight.width();

    std::vector<int> profile = horizontalness_profile(tight);
    RowLandmarks marks = row_landmarks(tight, profile, cfg);
    HeadlineAnalysis head = headline_analysis(tight, marks, profile, cfg);

    FeatureVector f;
    f[0] = profile[marks.r2] / w;
    f[1] = head.matra_pixel_count / (w * head.band_height());
    f[2] = head.segmentation_point_count / w;
    f[3] = transitions(tight, marks.r2) / w;
    f[4] = transitions(tight, marks.r3) / w;
    f[5] = transitions(tight, marks.r4) / w;
    f[6] = transitions(tight, marks.r12) / w;
    f[7] = transitions(tight, marks.r13) / w;
    for (double& v : f) v = std::clamp(v, 0.0, 1.0);
    return f;
}

} // namespace scriptid
