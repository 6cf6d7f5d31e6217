#include "scriptid/synth.hpp"

#include <algorithm>
#include <cmath>

#include "scriptid/features.hpp"

namespace scriptid {

namespace {

void put(BinaryImage& img, int x, int y) {
    if (x >= 0 && y >= 0 && x < img.width() && y < img.height())
        img.set(x, y, true);
}

void vline(BinaryImage& img, int x, int y0, int y1, int thickness) {
    for (int t = 0; t < thickness; ++t)
        for (int y = y0; y <= y1; ++y) put(img, x + t, y);
}

void hline(BinaryImage& img, int y, int x0, int x1, int thickness) {
    for (int t = 0; t < thickness; ++t)
        for (int x = x0; x <= x1; ++x) put(img, x, y + t);
}

void diagonal(BinaryImage& img, int x0, int y0, int steps, int dy_sign) {
    for (int s = 0; s <= steps; ++s) {
        put(img, x0 + s, y0 + dy_sign * s);
        put(img, x0 + s + 1, y0 + dy_sign * s);
    }
}

int fraction_of(double f, int h) { return static_cast<int>(std::lround(f * h)); }

} // namespace

BinaryImage render_matra_word(DetRng& rng, const SynthParams& p) {
    const int h = rng.next_int(p.min_word_height, p.max_word_height);
    const int n = rng.next_int(p.min_chars, p.max_chars);

    std::vector<int> slot_w(n), gap_w(n, 0);
    int w = 0;
    for (int i = 0; i < n; ++i) {
        slot_w[i] = rng.next_int(p.min_char_width, p.max_char_width);
        if (i + 1 < n) gap_w[i] = rng.next_int(1, 3);
        w += slot_w[i] + gap_w[i];
    }
    BinaryImage img(w, h);

    // Jittered headline: a 3-row stroke whose vertical offset drifts by
    // one pixel every several columns.
    const int matra_top = rng.next_int(fraction_of(0.08, h), fraction_of(0.14, h));
    int offset = 0, seg_left = 0;
    for (int x = 0; x < w; ++x) {
        if (seg_left == 0) {
            seg_left = rng.next_int(8, 14);
            offset = std::clamp(offset + rng.next_int(-1, 1), -1, 1);
        }
        --seg_left;
        for (int t = 0; t < 3; ++t) put(img, x, matra_top + offset + t);
    }

    int x0 = 0;
    for (int i = 0; i < n; ++i) {
        const int sw = slot_w[i];
        // main downstroke, hanging from the headline
        int sx = x0 + rng.next_int(0, 2);
        int bottom = fraction_of(rng.next_real(0.78, 0.94), h);
        vline(img, sx, matra_top, bottom, 2);
        if (rng.next_bool(0.4) && sw >= 7) {
            int sx2 = x0 + sw - 2 - rng.next_int(0, 2);
            int bottom2 = fraction_of(rng.next_real(0.78, 0.94), h);
            vline(img, sx2, matra_top, bottom2, 2);
        }
        if (rng.next_bool(0.5)) {
            int ty = rng.next_int(fraction_of(0.45, h), fraction_of(0.7, h));
            int len = rng.next_int(3, std::max(3, sw - 2));
            hline(img, ty, sx, std::min(x0 + sw - 1, sx + len), 1);
        }
        if (rng.next_bool(0.35)) {
            int dy = rng.next_int(fraction_of(0.4, h), fraction_of(0.6, h));
            diagonal(img, sx, dy, rng.next_int(4, 7), 1);
        }
        if (rng.next_bool(p.ascender_prob) && matra_top >= 2) {
            int ax = x0 + rng.next_int(1, std::max(1, sw - 2));
            vline(img, ax, rng.next_int(0, matra_top - 1), matra_top, 1);
        }
        x0 += sw + gap_w[i];
    }

    // Occasional break in the headline at a letter boundary, confined to
    // the headline zone so the strokes below survive.
    if (n >= 2 && rng.next_bool(p.matra_break_prob)) {
        int j = rng.next_int(0, n - 2); // break after slot j
        int bx = 0;
        for (int i = 0; i <= j; ++i) bx += slot_w[i] + (i < j ? gap_w[i] : 0);
        int bw = rng.next_int(2, 4);
        for (int x = bx; x < std::min(w, bx + bw); ++x)
            for (int y = 0; y <= matra_top + 4 && y < h; ++y) img.set(x, y, false);
    }
    return img;
}

BinaryImage render_roman_word(DetRng& rng, const SynthParams& p) {
    const int h = rng.next_int(p.min_word_height, p.max_word_height);
    const int n = rng.next_int(p.min_chars, p.max_chars);
    const int baseline = fraction_of(0.88, h);

    struct Glyph {
        int kind;
        int width;
    };
    std::vector<Glyph> glyphs(n);
    std::vector<int> gaps(n, 0);
    int w = 0;
    for (int i = 0; i < n; ++i) {
        glyphs[i].kind = static_cast<int>(rng.next_below(5));
        // plain bars are narrow so no glyph leaves a wide dead zone before
        // the next letter
        glyphs[i].width = glyphs[i].kind == 0
                              ? rng.next_int(3, 5)
                              : rng.next_int(p.min_char_width, p.max_char_width);
        if (i + 1 < n) gaps[i] = rng.next_int(2, 4);
        w += glyphs[i].width + gaps[i];
    }
    BinaryImage img(w, h);

    int x0 = 0;
    for (int i = 0; i < n; ++i) {
        const int gw = glyphs[i].width;
        const int right = x0 + gw - 1;
        int top, bottom;
        if (glyphs[i].kind == 0 && rng.next_bool(0.5)) {
            // ascender bar
            top = fraction_of(0.03, h);
            bottom = baseline;
        } else if (glyphs[i].kind == 4) {
            // descender
            bottom = fraction_of(0.97, h);
            top = bottom - fraction_of(rng.next_real(0.65, 0.78), h) + 1;
        } else {
            bottom = baseline;
            top = bottom - fraction_of(rng.next_real(0.65, 0.78), h) + 1;
        }
        int sx = x0;
        vline(img, sx, top, bottom, 2);
        switch (glyphs[i].kind) {
            case 0: // bare stroke, occasionally with a serif tick
                if (rng.next_bool(0.4)) hline(img, top, sx, std::min(right, sx + 3), 1);
                break;
            case 1: // ring
                vline(img, right - 1, top, bottom, 2);
                hline(img, top, sx, right, 2);
                hline(img, bottom - 1, sx, right, 2);
                break;
            case 2: // arch
                hline(img, top, sx, right, 2);
                vline(img, right - 1, top, top + (bottom - top) / 2, 2);
                break;
            case 3: // hook
                hline(img, bottom - 1, sx, right, 2);
                vline(img, right - 1, top + (bottom - top) / 2, bottom, 2);
                break;
            case 4: // descender with a mid tick
                hline(img, top + (bottom - top) / 3, sx, right, 1);
                break;
        }
        x0 += gw + gaps[i];
    }
    return img;
}

std::vector<LabeledWord> generate_corpus(int per_class, std::uint64_t seed,
                                         const SynthParams& params) {
    if (per_class < 1) throw ContractError("generate_corpus: per_class must be >= 1");
    DetRng rng(seed);
    std::vector<LabeledWord> corpus;
    corpus.reserve(2 * static_cast<std::size_t>(per_class));
    for (int i = 0; i < per_class; ++i)
        corpus.push_back({render_matra_word(rng, params), 0});
    for (int i = 0; i < per_class; ++i)
        corpus.push_back({render_roman_word(rng, params), 1});
    return corpus;
}

SyntheticPage compose_page(DetRng& rng, int n_lines, const SynthParams& p) {
    if (n_lines < 1) throw ContractError("compose_page: need at least one line");
    const int slot = p.max_word_height + 4;
    const int line_gap = fraction_of(0.7, p.max_word_height);
    const int pitch = slot + line_gap;
    const int height = 2 * p.page_margin + n_lines * pitch - line_gap;
    const int width = p.page_width;

    SyntheticPage page{BinaryImage(width, height), {}, n_lines};
    for (int li = 0; li < n_lines; ++li) {
        const int line_top = p.page_margin + li * pitch;
        const int n_words = rng.next_int(p.min_words_per_line, p.max_words_per_line);
        int x = p.page_margin;
        int word_idx = 0;
        for (int wi = 0; wi < n_words; ++wi) {
            const int label = rng.next_bool(p.roman_frac) ? 1 : 0;
            BinaryImage word = label == 1 ? render_roman_word(rng, p)
                                          : render_matra_word(rng, p);
            if (x + word.width() > width - p.page_margin) break;
            const int y = line_top + rng.next_int(0, 3);
            for (int wy = 0; wy < word.height(); ++wy)
                for (int wx = 0; wx < word.width(); ++wx)
                    if (word.at(wx, wy)) page.image.set(x + wx, y + wy, true);
            Rect ink = ink_bbox(word);
            page.words.push_back(TruthWord{
                li, word_idx++,
                Rect{x + ink.left, y + ink.top, x + ink.right, y + ink.bottom},
                label});
            x += word.width() +
                 rng.next_int(fraction_of(0.6, p.max_word_height),
                              fraction_of(1.0, p.max_word_height));
        }
    }

    // Pepper noise below the despeckle area threshold.
    for (int s = 0; s < p.specks_per_page; ++s) {
        int sx = rng.next_int(0, width - 1);
        int sy = rng.next_int(0, height - 1);
        page.image.set(sx, sy, true);
        if (rng.next_bool(0.5)) put(page.image, sx + 1, sy);
    }
    return page;
}

} // namespace scriptid
