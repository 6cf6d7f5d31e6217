#include "scriptid/pipeline.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>

#include "scriptid/num_format.hpp"

namespace scriptid {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            if (pos < text.size()) lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

std::uint64_t parse_u64(std::string_view s, const std::string& what) {
    std::uint64_t v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw InputError("bad integer in " + what + ": '" + std::string(s) + "'");
    return v;
}

int parse_int(std::string_view s, const std::string& what) {
    long v = parse_long(s, what);
    if (v < INT_MIN || v > INT_MAX)
        throw InputError("integer out of range in " + what + ": '" + std::string(s) + "'");
    return static_cast<int>(v);
}

bool parse_bool(std::string_view s, const std::string& what) {
    if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "off" || s == "no") return false;
    throw InputError("bad boolean in " + what + ": '" + std::string(s) + "'");
}

std::string format_rect(const Rect& r) {
    return std::to_string(r.left) + "," + std::to_string(r.top) + "," +
           std::to_string(r.right) + "," + std::to_string(r.bottom);
}

std::string percent(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", v * 100.0);
    return buf;
}

} // namespace

ConfigMap parse_config(const std::string& text) {
    ConfigMap map;
    int line_no = 0;
    for (auto raw : split_lines(text)) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw InputError("config line " + std::to_string(line_no) +
                             ": expected 'key = value'");
        std::string_view key = trim(line.substr(0, eq));
        std::string_view value = trim(line.substr(eq + 1));
        if (key.empty())
            throw InputError("config line " + std::to_string(line_no) +
                             ": empty key");
        map[std::string(key)] = std::string(value); // last assignment wins
    }
    return map;
}

ConfigMap load_config_file(const std::string& path) {
    return parse_config(read_file(path));
}

std::pair<int, int> parse_split(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw InputError("bad split '" + text + "': expected TRAIN:TEST");
    int a = parse_int(std::string_view(text).substr(0, colon), "split");
    int b = parse_int(std::string_view(text).substr(colon + 1), "split");
    if (a < 1 || b < 1)
        throw InputError("bad split '" + text + "': parts must be positive");
    return {a, b};
}

void apply_config_map(const ConfigMap& map, ToolConfig& cfg) {
    for (const auto& [key, value] : map) {
        const std::string what = "config key '" + key + "'";
        if (key == "seed") cfg.train.seed = parse_u64(value, what);
        else if (key == "eta") cfg.train.eta = parse_double(value, what);
        else if (key == "alpha") cfg.train.alpha = parse_double(value, what);
        else if (key == "epochs") cfg.train.epochs = parse_int(value, what);
        else if (key == "hidden") cfg.train.hidden = parse_int(value, what);
        else if (key == "split") {
            auto [a, b] = parse_split(value);
            cfg.ratio_train = a;
            cfg.ratio_test = b;
        }
        else if (key == "min_area") cfg.pipeline.min_area = parse_int(value, what);
        else if (key == "border_margin") cfg.pipeline.border_margin = parse_int(value, what);
        else if (key == "border_aspect") cfg.pipeline.border_aspect = parse_double(value, what);
        else if (key == "small_factor") cfg.pipeline.layout.small_factor = parse_double(value, what);
        else if (key == "large_factor") cfg.pipeline.layout.large_factor = parse_double(value, what);
        else if (key == "overlap_frac") cfg.pipeline.layout.overlap_frac = parse_double(value, what);
        else if (key == "gap_threshold") cfg.pipeline.layout.gap_threshold = parse_int(value, what);
        else if (key == "coherence") cfg.pipeline.features.coherence = parse_double(value, what);
        else if (key == "literal_landmarks") cfg.pipeline.features.literal_landmarks = parse_bool(value, what);
        else if (key == "per_class") cfg.per_class = parse_int(value, what);
        else if (key == "pages") cfg.pages = parse_int(value, what);
        else if (key == "min_chars") cfg.pipeline.synth.min_chars = parse_int(value, what);
        else if (key == "max_chars") cfg.pipeline.synth.max_chars = parse_int(value, what);
        else if (key == "min_char_width") cfg.pipeline.synth.min_char_width = parse_int(value, what);
        else if (key == "max_char_width") cfg.pipeline.synth.max_char_width = parse_int(value, what);
        else if (key == "min_word_height") cfg.pipeline.synth.min_word_height = parse_int(value, what);
        else if (key == "max_word_height") cfg.pipeline.synth.max_word_height = parse_int(value, what);
        else if (key == "matra_break_prob") cfg.pipeline.synth.matra_break_prob = parse_double(value, what);
        else if (key == "ascender_prob") cfg.pipeline.synth.ascender_prob = parse_double(value, what);
        else if (key == "page_width") cfg.pipeline.synth.page_width = parse_int(value, what);
        else if (key == "page_margin") cfg.pipeline.synth.page_margin = parse_int(value, what);
        else if (key == "min_words_per_line") cfg.pipeline.synth.min_words_per_line = parse_int(value, what);
        else if (key == "max_words_per_line") cfg.pipeline.synth.max_words_per_line = parse_int(value, what);
        else if (key == "roman_frac") cfg.pipeline.synth.roman_frac = parse_double(value, what);
        else if (key == "specks_per_page") cfg.pipeline.synth.specks_per_page = parse_int(value, what);
        else throw InputError("unknown config key '" + key + "'");
    }
}

BinaryImage preprocess_mask(const BinaryImage& mask, const PipelineConfig& cfg) {
    // Despeckle first: the closing pass would fatten pepper noise past the
    // area threshold.
    BinaryImage clean = despeckle(mask, cfg.min_area, cfg.border_margin,
                                  cfg.border_aspect);
    return close_gaps(clean);
}

std::string segmentation_manifest(int page_id, const PageLayout& layout) {
    std::string out;
    std::map<int, int> next_word;
    for (const auto& w : layout.words) {
        int idx = next_word[w.line_id]++;
        out += std::to_string(page_id);
        out += '\t';
        out += std::to_string(w.line_id);
        out += '\t';
        out += std::to_string(idx);
        out += '\t';
        out += format_rect(w.bbox);
        out += '\n';
    }
    return out;
}

std::string crop_name(int page_id, int line_id, int word_idx) {
    return "p" + std::to_string(page_id) + "_l" + std::to_string(line_id) +
           "_w" + std::to_string(word_idx);
}

void write_crops(const std::string& dir, int page_id, const PageLayout& layout) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::map<int, int> next_word;
    for (const auto& w : layout.words) {
        int idx = next_word[w.line_id]++;
        auto path = fs::path(dir) / (crop_name(page_id, w.line_id, idx) + ".dat");
        save_dat_file(path.string(), render_word(w, layout.components));
    }
}

Manifest parse_manifest(const std::string& text) {
    Manifest m;
    int line_no = 0;
    for (auto raw : split_lines(text)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::string_view rest = trim(line.substr(1));
            if (auto eq = rest.find('='); eq != std::string_view::npos) {
                m.metadata.emplace_back(std::string(trim(rest.substr(0, eq))),
                                        std::string(trim(rest.substr(eq + 1))));
            }
            continue;
        }
        auto tab = line.find('\t');
        std::string_view path = tab == std::string_view::npos ? line : line.substr(0, tab);
        std::string_view label;
        if (tab != std::string_view::npos) {
            label = trim(line.substr(tab + 1));
            if (label.find('\t') != std::string_view::npos)
                throw InputError("manifest line " + std::to_string(line_no) +
                                 ": expected 'path<TAB>label'");
        }
        path = trim(path);
        if (path.empty())
            throw InputError("manifest line " + std::to_string(line_no) +
                             ": empty path");
        m.entries.push_back({std::string(path), std::string(label)});
    }
    return m;
}

Manifest load_manifest_file(const std::string& path) {
    try {
        return parse_manifest(read_file(path));
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

std::string manifest_to_text(const Manifest& m) {
    std::string out;
    for (const auto& [key, value] : m.metadata)
        out += "# " + key + " = " + value + "\n";
    for (const auto& e : m.entries) {
        out += e.path;
        if (!e.label.empty()) {
            out += '\t';
            out += e.label;
        }
        out += '\n';
    }
    return out;
}

std::string resolve_sibling(const std::string& base_file, const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    return (std::filesystem::path(base_file).parent_path() / p).string();
}

std::pair<std::vector<std::pair<std::array<double, 8>, int>>,
          std::vector<std::string>>
load_labeled_features(const std::string& manifest_path, const PipelineConfig& cfg) {
    Manifest m = load_manifest_file(manifest_path);
    if (m.entries.empty())
        throw InputError(manifest_path + ": no word entries");
    std::set<std::string> label_set;
    for (const auto& e : m.entries) {
        if (e.label.empty())
            throw InputError(manifest_path + ": unlabeled entry '" + e.path + "'");
        label_set.insert(e.label);
    }
    std::vector<std::string> names(label_set.begin(), label_set.end());
    std::vector<std::pair<std::array<double, 8>, int>> samples;
    samples.reserve(m.entries.size());
    for (const auto& e : m.entries) {
        std::string full = resolve_sibling(manifest_path, e.path);
        int label = static_cast<int>(
            std::lower_bound(names.begin(), names.end(), e.label) - names.begin());
        try {
            samples.emplace_back(extract_features(load_page_mask(full), cfg.features),
                                 label);
        } catch (const InputError& err) {
            throw InputError(full + ": " + err.what());
        } catch (const ContractError& err) {
            throw ContractError(full + ": " + err.what());
        }
    }
    return {std::move(samples), std::move(names)};
}

TrainOutput run_train(const std::string& manifest_path, const ToolConfig& cfg) {
    auto [samples, names] = load_labeled_features(manifest_path, cfg.pipeline);
    if (names.size() != 2)
        throw ContractError("training needs exactly two classes, manifest has " +
                            std::to_string(names.size()));
    std::array<int, 2> counts{};
    for (const auto& s : samples) ++counts[s.second];
    for (int c = 0; c < 2; ++c)
        if (counts[c] < 16)
            throw ContractError("class '" + names[c] + "' has only " +
                                std::to_string(counts[c]) +
                                " words; at least 16 are needed");
    TrainOutput out;
    out.data = split_dataset(std::move(samples), cfg.ratio_train, cfg.ratio_test,
                             cfg.train.seed);
    out.model = init_model(8, cfg.train.hidden, 2, cfg.train.seed);
    out.model.label_names = names;
    out.trace = train(out.model, out.data, cfg.train);
    out.report = evaluate(out.model, out.data, out.data.test_idx);
    return out;
}

std::string format_report(const EvalReport& report,
                          const std::vector<std::string>& label_names) {
    int correct = report.confusion[0][0] + report.confusion[1][1];
    std::string out;
    out += "words\t" + std::to_string(report.total) + "\n";
    out += "accuracy\t" + percent(report.accuracy) + "\t(" +
           std::to_string(correct) + "/" + std::to_string(report.total) + ")\n";
    for (int t = 0; t < 2; ++t)
        out += "confusion\t" + label_names[t] + "\t" +
               std::to_string(report.confusion[t][0]) + "\t" +
               std::to_string(report.confusion[t][1]) + "\n";
    for (int c = 0; c < 2; ++c)
        out += "precision\t" + label_names[c] + "\t" + percent(report.precision[c]) + "\n";
    for (int c = 0; c < 2; ++c)
        out += "recall\t" + label_names[c] + "\t" + percent(report.recall[c]) + "\n";
    return out;
}

PageResult classify_page(const MlpModel& model, const BinaryImage& raw_mask,
                         const PipelineConfig& cfg) {
    if (model.inputs() != 8 || model.outputs() != 2)
        throw ContractError("model shape " + std::to_string(model.inputs()) + "-" +
                            std::to_string(model.hidden()) + "-" +
                            std::to_string(model.outputs()) +
                            " does not fit the 8-feature two-class pipeline");
    BinaryImage clean = preprocess_mask(raw_mask, cfg);
    PageLayout layout = segment_page(clean, cfg.layout);
    PageResult result;
    result.records.reserve(layout.words.size());
    std::map<int, int> next_word;
    for (const auto& w : layout.words) {
        PageResultRecord rec;
        rec.line = w.line_id;
        rec.word = next_word[w.line_id]++;
        rec.bbox = w.bbox;
        FeatureVector f =
            extract_features(render_word(w, layout.components), cfg.features);
        auto outputs = forward(model, std::vector<double>(f.begin(), f.end()));
        rec.outputs = {outputs[0], outputs[1]};
        rec.predicted = argmax_output(outputs);
        result.records.push_back(rec);
    }
    return result;
}

std::string page_result_text(const PageResult& result, const MlpModel& model) {
    std::string out;
    for (const auto& r : result.records) {
        out += std::to_string(r.line);
        out += '\t';
        out += std::to_string(r.word);
        out += '\t';
        out += format_rect(r.bbox);
        out += '\t';
        out += model.label_names[r.predicted];
        out += '\t';
        out += format_double(r.outputs[0]);
        out += '\t';
        out += format_double(r.outputs[1]);
        out += '\n';
    }
    return out;
}

GrayImage render_overlay(const GrayImage& page, const PageResult& result) {
    GrayImage out = page;
    for (const auto& r : result.records) {
        std::uint8_t gray = r.predicted == 0 ? 96 : 192;
        int l = std::max(0, r.bbox.left);
        int t = std::max(0, r.bbox.top);
        int rr = std::min(page.width() - 1, r.bbox.right);
        int b = std::min(page.height() - 1, r.bbox.bottom);
        if (l > rr || t > b) continue;
        for (int x = l; x <= rr; ++x) {
            out.set(x, t, gray);
            out.set(x, b, gray);
        }
        for (int y = t; y <= b; ++y) {
            out.set(l, y, gray);
            out.set(rr, y, gray);
        }
    }
    return out;
}

void run_synth(const std::string& out_dir, int per_class, std::uint64_t seed,
               int n_pages, const PipelineConfig& cfg) {
    if (per_class < 1) throw ContractError("per_class must be positive");
    if (n_pages < 0) throw ContractError("page count must be non-negative");
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(out_dir) / "words");

    auto corpus = generate_corpus(per_class, seed, cfg.synth);
    Manifest m;
    m.metadata = {{"seed", std::to_string(seed)},
                  {"per_class", std::to_string(per_class)}};
    const char* names[2] = {"matra", "roman"};
    std::array<int, 2> serial{};
    for (const auto& w : corpus) {
        char name[32];
        std::snprintf(name, sizeof name, "%c_%04d.dat",
                      w.label == 0 ? 'm' : 'r', serial[w.label]++);
        std::string rel = std::string("words/") + name;
        save_dat_file((fs::path(out_dir) / rel).string(), w.image);
        m.entries.push_back({rel, names[w.label]});
    }
    write_file((fs::path(out_dir) / "manifest.tsv").string(), manifest_to_text(m));

    if (n_pages == 0) return;
    fs::create_directories(fs::path(out_dir) / "pages");
    // Separate stream: the word corpus bytes do not depend on the page count.
    DetRng page_rng(~seed);
    std::string truth;
    for (int p = 0; p < n_pages; ++p) {
        SyntheticPage page = compose_page(page_rng, page_rng.next_int(3, 8),
                                          cfg.synth);
        char name[32];
        std::snprintf(name, sizeof name, "page_%03d.pgm", p);
        save_pgm_file((fs::path(out_dir) / "pages" / name).string(),
                      to_gray(page.image));
        for (const auto& w : page.words) {
            truth += std::to_string(p);
            truth += '\t';
            truth += std::to_string(w.line);
            truth += '\t';
            truth += std::to_string(w.word);
            truth += '\t';
            truth += format_rect(w.bbox);
            truth += '\t';
            truth += names[w.label];
            truth += '\n';
        }
    }
    write_file((fs::path(out_dir) / "pages" / "truth.tsv").string(), truth);
}

} // namespace scriptid
