// Command-line front end for the script identification toolkit.
//
// Subcommands: binarize, segment, features, train, eval, classify, synth.
// Results go to stdout, diagnostics to stderr. Exit codes: 0 success,
// 2 unreadable or malformed input, 3 violated processing contract.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scriptid/num_format.hpp"
#include "scriptid/pipeline.hpp"

namespace {

using namespace scriptid;

// Flags beat config-file keys, which beat compiled defaults. CLI11 counts
// tell us which flags were actually given.
struct FlagSet {
    std::string config_path;
    std::uint64_t seed = 0;
    double eta = 0.8;
    double alpha = 0.8;
    int epochs = 2000;
    int hidden = 12;
    std::string split = "9:7";
    int per_class = 450;
    int pages = 3;
};

void add_config_flag(CLI::App* cmd, FlagSet& flags) {
    cmd->add_option("--config", flags.config_path,
                    "Config file with 'key = value' lines");
}

ToolConfig merge_config(const CLI::App* cmd, const FlagSet& flags) {
    ToolConfig cfg;
    if (!flags.config_path.empty())
        apply_config_map(load_config_file(flags.config_path), cfg);
    auto given = [&](const std::string& name) {
        auto* opt = cmd->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };
    if (given("--seed")) cfg.train.seed = flags.seed;
    if (given("--eta")) cfg.train.eta = flags.eta;
    if (given("--alpha")) cfg.train.alpha = flags.alpha;
    if (given("--epochs")) cfg.train.epochs = flags.epochs;
    if (given("--hidden")) cfg.train.hidden = flags.hidden;
    if (given("--split")) {
        auto [a, b] = parse_split(flags.split);
        cfg.ratio_train = a;
        cfg.ratio_test = b;
    }
    if (given("--per-class")) cfg.per_class = flags.per_class;
    if (given("--pages")) cfg.pages = flags.pages;
    return cfg;
}

std::string file_stem(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

int run(int argc, char** argv) {
    CLI::App app{"Word-level handwritten script identification"};
    app.require_subcommand(1);
    FlagSet flags;

    // binarize
    auto* cmd_binarize = app.add_subcommand(
        "binarize", "Threshold a grayscale page into an ink mask");
    std::string bin_input, bin_out;
    cmd_binarize->add_option("input", bin_input, "PGM (or DAT) page")->required();
    cmd_binarize->add_option("--out", bin_out, "Output DAT path (default stdout)");

    // segment
    auto* cmd_segment = app.add_subcommand(
        "segment", "Split pages into lines and words");
    std::vector<std::string> seg_pages;
    std::string seg_out;
    cmd_segment->add_option("pages", seg_pages, "Page images (PGM or DAT)")
        ->required();
    cmd_segment->add_option("--out", seg_out,
                            "Directory for word crops and segments.tsv");
    add_config_flag(cmd_segment, flags);

    // features
    auto* cmd_features = app.add_subcommand(
        "features", "Print the 8-feature descriptor of word bitmaps");
    std::vector<std::string> feat_words;
    cmd_features->add_option("words", feat_words, "Word bitmaps (DAT or PGM)")
        ->required();
    add_config_flag(cmd_features, flags);

    // train
    auto* cmd_train = app.add_subcommand(
        "train", "Train the classifier from a labeled word manifest");
    std::string train_manifest, train_model;
    cmd_train->add_option("--manifest", train_manifest, "path<TAB>label lines")
        ->required();
    cmd_train->add_option("--model", train_model, "Output model path")->required();
    cmd_train->add_option("--seed", flags.seed, "RNG seed (split, init, shuffles)");
    cmd_train->add_option("--eta", flags.eta, "Learning rate");
    cmd_train->add_option("--alpha", flags.alpha, "Momentum factor");
    cmd_train->add_option("--epochs", flags.epochs, "Training epochs");
    cmd_train->add_option("--hidden", flags.hidden, "Hidden units");
    cmd_train->add_option("--split", flags.split, "Train:test ratio, e.g. 9:7");
    add_config_flag(cmd_train, flags);

    // eval
    auto* cmd_eval = app.add_subcommand(
        "eval", "Evaluate a model over a labeled word manifest");
    std::string eval_manifest, eval_model;
    cmd_eval->add_option("--manifest", eval_manifest, "path<TAB>label lines")
        ->required();
    cmd_eval->add_option("--model", eval_model, "Model file")->required();
    add_config_flag(cmd_eval, flags);

    // classify
    auto* cmd_classify = app.add_subcommand(
        "classify", "Segment a page and label every word");
    std::string cls_model, cls_page, cls_overlay;
    cmd_classify->add_option("--model", cls_model, "Model file")->required();
    cmd_classify->add_option("page", cls_page, "Page image (PGM or DAT)")
        ->required();
    cmd_classify->add_option("--overlay", cls_overlay,
                             "Write a PGM with word boxes outlined by class");
    add_config_flag(cmd_classify, flags);

    // synth
    auto* cmd_synth = app.add_subcommand(
        "synth", "Generate a labeled synthetic corpus and sample pages");
    std::string synth_out;
    cmd_synth->add_option("--out", synth_out, "Output directory")->required();
    cmd_synth->add_option("--per-class", flags.per_class, "Words per class");
    cmd_synth->add_option("--pages", flags.pages, "Mixed pages to compose");
    cmd_synth->add_option("--seed", flags.seed, "RNG seed");
    add_config_flag(cmd_synth, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e); // prints the message to stderr
        return 2;
    }

    try {
        if (*cmd_binarize) {
            BinaryImage mask = binarize(load_page_gray(bin_input));
            if (bin_out.empty())
                std::cout << save_dat(mask);
            else
                save_dat_file(bin_out, mask);
        } else if (*cmd_segment) {
            ToolConfig cfg = merge_config(cmd_segment, flags);
            std::string combined;
            for (std::size_t p = 0; p < seg_pages.size(); ++p) {
                BinaryImage mask =
                    preprocess_mask(load_page_mask(seg_pages[p]), cfg.pipeline);
                PageLayout layout = segment_page(mask, cfg.pipeline.layout);
                std::string manifest =
                    segmentation_manifest(static_cast<int>(p), layout);
                std::cout << manifest;
                if (!seg_out.empty()) {
                    write_crops(seg_out, static_cast<int>(p), layout);
                    combined += manifest;
                }
            }
            if (!seg_out.empty())
                write_file(seg_out + "/segments.tsv", combined);
        } else if (*cmd_features) {
            ToolConfig cfg = merge_config(cmd_features, flags);
            for (const auto& path : feat_words) {
                FeatureVector f = extract_features(load_page_mask(path),
                                                   cfg.pipeline.features);
                std::cout << file_stem(path);
                for (double v : f) std::cout << '\t' << format_double(v);
                std::cout << '\n';
            }
        } else if (*cmd_train) {
            ToolConfig cfg = merge_config(cmd_train, flags);
            TrainOutput out = run_train(train_manifest, cfg);
            save_model_file(train_model, out.model);
            std::cout << "model\t" << train_model << "\n"
                      << "train_words\t" << out.data.train_idx.size() << "\n"
                      << "final_mse\t" << format_double(out.trace.back()) << "\n"
                      << format_report(out.report, out.model.label_names);
        } else if (*cmd_eval) {
            ToolConfig cfg = merge_config(cmd_eval, flags);
            MlpModel model = load_model_file(eval_model);
            auto [samples, names] =
                load_labeled_features(eval_manifest, cfg.pipeline);
            if (names != model.label_names)
                throw ContractError("manifest labels do not match the model's");
            Dataset data;
            data.samples = std::move(samples);
            std::vector<std::size_t> all(data.samples.size());
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
            std::cout << format_report(evaluate(model, data, all),
                                       model.label_names);
        } else if (*cmd_classify) {
            ToolConfig cfg = merge_config(cmd_classify, flags);
            MlpModel model = load_model_file(cls_model);
            BinaryImage mask = load_page_mask(cls_page);
            PageResult result = classify_page(model, mask, cfg.pipeline);
            std::cout << page_result_text(result, model);
            if (!cls_overlay.empty())
                save_pgm_file(cls_overlay,
                              render_overlay(load_page_gray(cls_page), result));
        } else if (*cmd_synth) {
            ToolConfig cfg = merge_config(cmd_synth, flags);
            run_synth(synth_out, cfg.per_class, cfg.train.seed, cfg.pages,
                      cfg.pipeline);
            std::cerr << "wrote " << 2 * cfg.per_class << " words and "
                      << cfg.pages << " pages to " << synth_out << "\n";
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) { return run(argc, argv); }
