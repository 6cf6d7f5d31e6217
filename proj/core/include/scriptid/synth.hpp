#ifndef SCRIPTID_SYNTH_HPP
#define SCRIPTID_SYNTH_HPP

#include <cstdint>
#include <vector>

#include "scriptid/raster.hpp"
#include "scriptid/rng.hpp"

namespace scriptid {

/**
 * Tunables of the synthetic handwriting generator. The defaults keep the
 * two classes clearly separable and the page geometry friendly to the
 * layout stage: every stroke group stays within a factor-two height band
 * (so nothing is misclassified small/large), letter gaps stay well below
 * the word-gap threshold and word gaps well above it. Raise
 * matra_break_prob or shrink word gaps to make the problem harder.
 */
struct SynthParams {
    int min_chars = 3;
    int max_chars = 7;
    int min_char_width = 8;
    int max_char_width = 14;
    int min_word_height = 34;
    int max_word_height = 40;
    double matra_break_prob = 0.15; // chance of a gap in the headline stroke
    double ascender_prob = 0.3;     // chance of a tick above the headline
    // page composition
    int page_width = 1300;
    int page_margin = 40;
    int min_words_per_line = 3;
    int max_words_per_line = 6;
    double roman_frac = 0.5; // fraction of Roman words on mixed pages
    int specks_per_page = 20;
};

/// A labeled word bitmap; label 0 = Matra script, 1 = Roman.
struct LabeledWord {
    BinaryImage image;
    int label;
};

/// Headline-class word: letter strokes hanging from a full-width jittered
/// top stroke, with occasional headline breaks.
BinaryImage render_matra_word(DetRng& rng, const SynthParams& params);

/// Roman-class word: disconnected letter glyphs with mixed ascenders and
/// descenders and no dominant horizontal stroke.
BinaryImage render_roman_word(DetRng& rng, const SynthParams& params);

/// per_class words of each label, deterministic under seed. Matra words
/// come first (labels 0..), then Roman.
std::vector<LabeledWord> generate_corpus(int per_class, std::uint64_t seed,
                                         const SynthParams& params = {});

struct TruthWord {
    int line;
    int word; // index within the line, left to right
    Rect bbox; // tight ink box on the page
    int label;
};

struct SyntheticPage {
    BinaryImage image;
    std::vector<TruthWord> words;
    int line_count;
};

/// Multi-line mixed page with per-word ground truth. Lines are well
/// separated vertically; pepper specks (below the despeckle area
/// threshold) are sprinkled across the page.
SyntheticPage compose_page(DetRng& rng, int n_lines, const SynthParams& params = {});

} // namespace scriptid

#endif // SCRIPTID_SYNTH_HPP
