#ifndef SCRIPTID_PIPELINE_HPP
#define SCRIPTID_PIPELINE_HPP

#include <map>
#include <string>
#include <vector>

#include "scriptid/dat_io.hpp"
#include "scriptid/features.hpp"
#include "scriptid/layout.hpp"
#include "scriptid/mlp.hpp"
#include "scriptid/synth.hpp"

namespace scriptid {

/// Knobs of the page-processing stages, overridable from the config file.
struct PipelineConfig {
    LayoutConfig layout;
    FeatureConfig features;
    int min_area = 4;        // despeckle area threshold
    int border_margin = 20;  // despeckle border band width
    double border_aspect = 10.0;
    SynthParams synth;
};

/// Everything the CLI can tune: flags override config-file keys, which
/// override these defaults.
struct ToolConfig {
    PipelineConfig pipeline;
    TrainConfig train;
    int ratio_train = 9;
    int ratio_test = 7;
    int per_class = 450;
    int pages = 3;
};

using ConfigMap = std::map<std::string, std::string>;

/// Plain-text config: one `key = value` per line, '#' comments.
ConfigMap parse_config(const std::string& text);
ConfigMap load_config_file(const std::string& path);

/// Applies known keys onto cfg; unknown keys and malformed values are
/// input errors.
void apply_config_map(const ConfigMap& map, ToolConfig& cfg);

/// Parses "9:7" into the two ratio parts.
std::pair<int, int> parse_split(const std::string& text);

/// Despeckle, then one closing pass. This is the page cleanup applied
/// before layout analysis.
BinaryImage preprocess_mask(const BinaryImage& mask, const PipelineConfig& cfg);

// ---- segmentation interface -------------------------------------------

/// `page<TAB>line<TAB>word<TAB>l,t,r,b` per word.
std::string segmentation_manifest(int page_id, const PageLayout& layout);

/// Crop file stem, e.g. "p0_l1_w2".
std::string crop_name(int page_id, int line_id, int word_idx);

/// Writes one DAT crop per word into dir (created if missing).
void write_crops(const std::string& dir, int page_id, const PageLayout& layout);

// ---- labeled word manifests -------------------------------------------

struct ManifestEntry {
    std::string path;
    std::string label; // empty when unlabeled
};

struct Manifest {
    std::vector<ManifestEntry> entries;
    std::vector<std::pair<std::string, std::string>> metadata; // '# key = value'
};

Manifest parse_manifest(const std::string& text);
Manifest load_manifest_file(const std::string& path);
std::string manifest_to_text(const Manifest& m);

/// Resolves a manifest-relative path against the manifest's directory.
std::string resolve_sibling(const std::string& base_file, const std::string& path);

// ---- train / eval ------------------------------------------------------

struct TrainOutput {
    MlpModel model;
    Dataset data;
    EvalReport report;
    std::vector<double> trace;
};

/**
 * Full training pass over a labeled manifest: load every word image,
 * extract features, stratified split, train, evaluate on the held-out
 * part. Requires at least 16 labeled words in each of exactly two
 * classes; class 0 is the lexicographically smaller label name.
 */
TrainOutput run_train(const std::string& manifest_path, const ToolConfig& cfg);

/// Feature extraction + labels for every manifest entry, without a split.
/// Returns the sample list and the two sorted label names.
std::pair<std::vector<std::pair<std::array<double, 8>, int>>,
          std::vector<std::string>>
load_labeled_features(const std::string& manifest_path, const PipelineConfig& cfg);

/// Deterministic text report: accuracy, confusion rows, per-class
/// precision and recall.
std::string format_report(const EvalReport& report,
                          const std::vector<std::string>& label_names);

// ---- classify ----------------------------------------------------------

struct PageResultRecord {
    int line = 0;
    int word = 0;
    Rect bbox;
    int predicted = 0;
    std::array<double, 2> outputs{};
};

struct PageResult {
    std::vector<PageResultRecord> records;
};

/// Segments a raw page mask and classifies every word.
PageResult classify_page(const MlpModel& model, const BinaryImage& raw_mask,
                         const PipelineConfig& cfg);

/// `line<TAB>word<TAB>l,t,r,b<TAB>label<TAB>out0<TAB>out1` per word.
std::string page_result_text(const PageResult& result, const MlpModel& model);

/// Copy of the page with each word box outlined: gray 96 for class 0
/// (headline script), 192 for class 1 (Roman).
GrayImage render_overlay(const GrayImage& page, const PageResult& result);

// ---- synth -------------------------------------------------------------

/// Writes the labeled word corpus, its manifest and a handful of mixed
/// pages with ground truth under out_dir. Byte-deterministic in the seed.
void run_synth(const std::string& out_dir, int per_class, std::uint64_t seed,
               int n_pages, const PipelineConfig& cfg);

} // namespace scriptid

#endif // SCRIPTID_PIPELINE_HPP
