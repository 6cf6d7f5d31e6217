#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <string>

#include "scriptid/num_format.hpp"
#include "scriptid/pipeline.hpp"
#include "test_util.hpp"

using namespace scriptid;
using testutil::CmdResult;
using testutil::TempDir;
using testutil::read_all;
using testutil::run_cmd;

namespace {

const std::string kBin = SCRIPTID_BIN;

std::string sh_quote(const std::string& s) { return "'" + s + "'"; }

} // namespace

TEST_CASE("config parsing handles comments, blanks and whitespace") {
    ConfigMap map = parse_config(
        "# tuning\n"
        "eta = 0.5\n"
        "\n"
        "  epochs=100   # inline note\n"
        "hidden =\t16\n");
    CHECK(map.size() == 3);
    CHECK(map.at("eta") == "0.5");
    CHECK(map.at("epochs") == "100");
    CHECK(map.at("hidden") == "16");
}

TEST_CASE("config parsing reports the offending line") {
    CHECK_THROWS_WITH_AS(parse_config("eta = 0.5\nbogus line\n"),
                         "config line 2: expected 'key = value'", InputError);
    CHECK_THROWS_AS(parse_config("= 5\n"), InputError);
}

TEST_CASE("config keys land in the right knobs") {
    ToolConfig cfg;
    apply_config_map({{"eta", "0.25"},
                      {"seed", "12345678901234567890"},
                      {"split", "3:2"},
                      {"gap_threshold", "9"},
                      {"literal_landmarks", "true"},
                      {"matra_break_prob", "0.5"}},
                     cfg);
    CHECK(cfg.train.eta == 0.25);
    CHECK(cfg.train.seed == 12345678901234567890ULL);
    CHECK(cfg.ratio_train == 3);
    CHECK(cfg.ratio_test == 2);
    CHECK(cfg.pipeline.layout.gap_threshold == 9);
    CHECK(cfg.pipeline.features.literal_landmarks);
    CHECK(cfg.pipeline.synth.matra_break_prob == 0.5);
}

TEST_CASE("unknown or malformed config values are input errors") {
    ToolConfig cfg;
    CHECK_THROWS_WITH_AS(apply_config_map({{"etaa", "1"}}, cfg),
                         "unknown config key 'etaa'", InputError);
    CHECK_THROWS_AS(apply_config_map({{"epochs", "ten"}}, cfg), InputError);
    CHECK_THROWS_AS(apply_config_map({{"literal_landmarks", "maybe"}}, cfg),
                    InputError);
    CHECK_THROWS_AS(apply_config_map({{"split", "9"}}, cfg), InputError);
    CHECK_THROWS_AS(apply_config_map({{"split", "0:7"}}, cfg), InputError);
}

TEST_CASE("manifest text round-trips entries and metadata") {
    Manifest m;
    m.metadata = {{"seed", "42"}};
    m.entries = {{"words/a.dat", "matra"}, {"words/b.dat", "roman"},
                 {"unlabeled.dat", ""}};
    std::string text = manifest_to_text(m);
    Manifest back = parse_manifest(text);
    REQUIRE(back.entries.size() == 3);
    CHECK(back.metadata == m.metadata);
    CHECK(back.entries[0].path == "words/a.dat");
    CHECK(back.entries[0].label == "matra");
    CHECK(back.entries[2].label.empty());
    CHECK(manifest_to_text(back) == text);
}

TEST_CASE("manifest parsing skips plain comments and flags bad lines") {
    Manifest m = parse_manifest("# just a note without equals\na.dat\tx\n");
    CHECK(m.metadata.empty());
    CHECK(m.entries.size() == 1);
    CHECK_THROWS_AS(parse_manifest("a.dat\tx\ty\n"), InputError);
}

TEST_CASE("manifest paths resolve against the manifest directory") {
    CHECK(resolve_sibling("/data/run/manifest.tsv", "words/a.dat") ==
          "/data/run/words/a.dat");
    CHECK(resolve_sibling("/data/run/manifest.tsv", "/abs/a.dat") == "/abs/a.dat");
    CHECK(resolve_sibling("manifest.tsv", "a.dat") == "a.dat");
}

TEST_CASE("preprocessing removes specks and heals hairline cuts") {
    BinaryImage img(100, 80);
    for (int x = 10; x < 40; ++x) img.set(x, 40, true); // stroke...
    img.set(40, 40, false);
    for (int x = 41; x < 60; ++x) img.set(x, 40, true); // ...with a 1px cut
    img.set(70, 10, true);                              // lone speck
    PipelineConfig cfg;
    BinaryImage clean = preprocess_mask(img, cfg);
    CHECK_FALSE(clean.at(70, 10));
    CHECK(clean.at(40, 40));
    CHECK(connected_components(clean).size() == 1);
}

TEST_CASE("segmentation manifests number words per line") {
    PageLayout layout;
    layout.words = {
        WordBox{0, {5, 5, 20, 15}, {0}},
        WordBox{0, {30, 5, 42, 15}, {1}},
        WordBox{1, {5, 30, 18, 40}, {2}},
    };
    CHECK(segmentation_manifest(2, layout) ==
          "2\t0\t0\t5,5,20,15\n"
          "2\t0\t1\t30,5,42,15\n"
          "2\t1\t0\t5,30,18,40\n");
    CHECK(crop_name(2, 0, 1) == "p2_l0_w1");
}

TEST_CASE("run_synth writes a self-describing, reloadable corpus") {
    TempDir dir;
    PipelineConfig cfg;
    run_synth(dir.str(), 20, 9, 2, cfg);

    Manifest m = load_manifest_file(dir.file("manifest.tsv"));
    REQUIRE(m.entries.size() == 40);
    CHECK(m.metadata ==
          std::vector<std::pair<std::string, std::string>>{{"seed", "9"},
                                                           {"per_class", "20"}});
    int matra = 0;
    for (const auto& e : m.entries) matra += e.label == "matra" ? 1 : 0;
    CHECK(matra == 20);
    BinaryImage first =
        load_dat_file(resolve_sibling(dir.file("manifest.tsv"), m.entries[0].path));
    CHECK(first.foreground_count() > 0);
    CHECK(std::filesystem::exists(dir.file("pages/page_001.pgm")));
    CHECK(!read_all(dir.file("pages/truth.tsv")).empty());
}

TEST_CASE("synthetic corpora are byte-deterministic in the seed") {
    TempDir a, b, c;
    PipelineConfig cfg;
    run_synth(a.str(), 8, 33, 1, cfg);
    run_synth(b.str(), 8, 33, 1, cfg);
    run_synth(c.str(), 8, 34, 1, cfg);
    bool all_same = true, any_diff = false;
    for (const auto& entry :
         std::filesystem::recursive_directory_iterator(a.path)) {
        if (!entry.is_regular_file()) continue;
        auto rel = std::filesystem::relative(entry.path(), a.path);
        all_same = all_same &&
                   read_all(entry.path().string()) == read_all((b.path / rel).string());
        any_diff = any_diff ||
                   read_all(entry.path().string()) != read_all((c.path / rel).string());
    }
    CHECK(all_same);
    CHECK(any_diff);
}

TEST_CASE("run_train learns the synthetic corpus end to end") {
    TempDir dir;
    ToolConfig cfg;
    cfg.per_class = 24;
    cfg.train.epochs = 200;
    cfg.train.seed = 3;
    run_synth(dir.str(), cfg.per_class, 3, 0, cfg.pipeline);
    TrainOutput out = run_train(dir.file("manifest.tsv"), cfg);
    CHECK(out.model.label_names ==
          std::vector<std::string>{"matra", "roman"});
    CHECK(out.data.train_idx.size() == 26); // floor(24*9/16) = 13 per class
    CHECK(out.report.total == 22);
    CHECK(out.report.accuracy >= 0.9);
    CHECK(out.trace.size() == 200);
}

TEST_CASE("run_train rejects thin or single-class corpora") {
    TempDir dir;
    std::filesystem::create_directories(dir.path / "words");
    DetRng rng(4);
    Manifest m;
    for (int i = 0; i < 20; ++i) {
        std::string rel = "words/w" + std::to_string(i) + ".dat";
        save_dat_file(dir.file(rel), render_matra_word(rng, {}));
        m.entries.push_back({rel, "matra"});
    }
    write_file(dir.file("manifest.tsv"), manifest_to_text(m));
    ToolConfig cfg;
    CHECK_THROWS_AS(run_train(dir.file("manifest.tsv"), cfg), ContractError);

    m.entries[19].label = "roman"; // 19 vs 1: still under 16 for one class
    write_file(dir.file("manifest.tsv"), manifest_to_text(m));
    CHECK_THROWS_AS(run_train(dir.file("manifest.tsv"), cfg), ContractError);
}

TEST_CASE("unlabeled manifest entries stop feature loading") {
    TempDir dir;
    BinaryImage dot(3, 3);
    dot.set(1, 1, true);
    save_dat_file(dir.file("w.dat"), dot);
    write_file(dir.file("manifest.tsv"), "w.dat\n");
    PipelineConfig cfg;
    CHECK_THROWS_AS(load_labeled_features(dir.file("manifest.tsv"), cfg),
                    InputError);
}

TEST_CASE("classification covers every segmented word exactly once") {
    DetRng rng(71);
    SyntheticPage page = compose_page(rng, 4, {});
    TempDir dir;
    ToolConfig cfg;
    cfg.per_class = 20;
    cfg.train.epochs = 150;
    run_synth(dir.str(), cfg.per_class, 5, 0, cfg.pipeline);
    TrainOutput trained = run_train(dir.file("manifest.tsv"), cfg);

    PageResult result = classify_page(trained.model, page.image, cfg.pipeline);
    PageLayout layout =
        segment_page(preprocess_mask(page.image, cfg.pipeline), cfg.pipeline.layout);
    REQUIRE(result.records.size() == layout.words.size());
    for (std::size_t i = 0; i < result.records.size(); ++i) {
        CHECK(result.records[i].bbox == layout.words[i].bbox);
        CHECK((result.records[i].predicted == 0 || result.records[i].predicted == 1));
        CHECK(result.records[i].outputs[0] > 0.0);
        CHECK(result.records[i].outputs[0] < 1.0);
    }
    // most labels should match the ground truth
    REQUIRE(result.records.size() == page.words.size());
    int agree = 0;
    for (std::size_t i = 0; i < result.records.size(); ++i)
        agree += result.records[i].predicted == page.words[i].label ? 1 : 0;
    CHECK(agree * 10 >= static_cast<int>(result.records.size()) * 8);
}

TEST_CASE("classify_page rejects models of the wrong shape") {
    MlpModel odd = init_model(4, 3, 2, 1);
    BinaryImage img(30, 30);
    img.set(10, 10, true);
    CHECK_THROWS_AS(classify_page(odd, img, {}), ContractError);
}

TEST_CASE("overlays outline words in class-coded grays") {
    PageResult result;
    result.records = {{0, 0, Rect{2, 2, 6, 5}, 0, {0.9, 0.1}},
                      {0, 1, Rect{10, 2, 14, 5}, 1, {0.2, 0.8}}};
    GrayImage page(20, 10, 255);
    GrayImage overlay = render_overlay(page, result);
    CHECK(overlay.width() == 20);
    CHECK(overlay.height() == 10);
    CHECK(overlay.at(2, 2) == 96);
    CHECK(overlay.at(4, 2) == 96);   // top edge
    CHECK(overlay.at(2, 4) == 96);   // left edge
    CHECK(overlay.at(4, 4) == 255);  // interior untouched
    CHECK(overlay.at(10, 2) == 192);
    CHECK(overlay.at(14, 5) == 192);
}

TEST_CASE("page result text carries labels and both activations") {
    MlpModel m = init_model(8, 2, 2, 1);
    PageResult result;
    result.records = {{1, 2, Rect{3, 4, 5, 6}, 1, {0.25, 0.75}}};
    CHECK(page_result_text(result, m) == "1\t2\t3,4,5,6\troman\t0.25\t0.75\n");
}

// ---- command-line behavior --------------------------------------------

TEST_CASE("cli: synth, train, segment and classify form a working loop") {
    TempDir dir;
    std::string out = dir.file("corpus");
    CmdResult synth = run_cmd(sh_quote(kBin) + " synth --out " + sh_quote(out) +
                              " --per-class 24 --pages 1 --seed 11");
    REQUIRE(synth.code == 0);

    CmdResult train = run_cmd(sh_quote(kBin) + " train --manifest " +
                              sh_quote(out + "/manifest.tsv") + " --model " +
                              sh_quote(dir.file("m.model")) +
                              " --epochs 200 --seed 2");
    REQUIRE(train.code == 0);
    CHECK(train.output.find("accuracy") != std::string::npos);

    CmdResult seg = run_cmd(sh_quote(kBin) + " segment " +
                            sh_quote(out + "/pages/page_000.pgm") + " --out " +
                            sh_quote(dir.file("seg")));
    REQUIRE(seg.code == 0);
    CHECK(seg.output.find("0\t0\t0\t") == 0);
    CHECK(std::filesystem::exists(dir.file("seg/p0_l0_w0.dat")));
    CHECK(read_all(dir.file("seg/segments.tsv")) == seg.output);

    CmdResult cls = run_cmd(sh_quote(kBin) + " classify --model " +
                            sh_quote(dir.file("m.model")) + " " +
                            sh_quote(out + "/pages/page_000.pgm") + " --overlay " +
                            sh_quote(dir.file("ov.pgm")));
    REQUIRE(cls.code == 0);
    CHECK(cls.output.find("matra") != std::string::npos);
    CHECK(std::filesystem::exists(dir.file("ov.pgm")));

    // overlay keeps the page dimensions
    GrayImage page = load_pgm_file(out + "/pages/page_000.pgm");
    GrayImage ov = load_pgm_file(dir.file("ov.pgm"));
    CHECK(ov.width() == page.width());
    CHECK(ov.height() == page.height());
}

TEST_CASE("cli: features prints one 8-value line per word") {
    TempDir dir;
    BinaryImage word(4, 4);
    word.set(1, 1, true);
    word.set(2, 1, true);
    save_dat_file(dir.file("w1.dat"), word);
    CmdResult res = run_cmd(sh_quote(kBin) + " features " + sh_quote(dir.file("w1.dat")));
    REQUIRE(res.code == 0);
    CHECK(res.output.substr(0, 3) == "w1\t");
    int tabs = 0;
    for (char c : res.output) tabs += c == '\t' ? 1 : 0;
    CHECK(tabs == 8);
}

TEST_CASE("cli: binarize emits canonical DAT") {
    TempDir dir;
    GrayImage g(3, 1, 200);
    g.set(0, 0, 10);
    save_pgm_file(dir.file("p.pgm"), g);
    CmdResult res = run_cmd(sh_quote(kBin) + " binarize " + sh_quote(dir.file("p.pgm")));
    REQUIRE(res.code == 0);
    CHECK(res.output == "3 1\n011\n");
}

TEST_CASE("cli: config file steers behavior and flags beat it") {
    TempDir dir;
    std::string out1 = dir.file("c1"), out2 = dir.file("c2"), out3 = dir.file("c3");
    write_file(dir.file("gen.conf"), "per_class = 5\nseed = 77\n");

    REQUIRE(run_cmd(sh_quote(kBin) + " synth --out " + sh_quote(out1) + " --pages 0" +
                    " --config " + sh_quote(dir.file("gen.conf")))
                .code == 0);
    CHECK(parse_manifest(read_all(out1 + "/manifest.tsv")).entries.size() == 10);

    // flag overrides the config's per_class but keeps its seed
    REQUIRE(run_cmd(sh_quote(kBin) + " synth --out " + sh_quote(out2) + " --pages 0" +
                    " --config " + sh_quote(dir.file("gen.conf")) + " --per-class 3")
                .code == 0);
    Manifest m2 = parse_manifest(read_all(out2 + "/manifest.tsv"));
    CHECK(m2.entries.size() == 6);
    CHECK(m2.metadata[0] == std::pair<std::string, std::string>{"seed", "77"});

    REQUIRE(run_cmd(sh_quote(kBin) + " synth --out " + sh_quote(out3) +
                    " --pages 0 --per-class 3 --seed 77")
                .code == 0);
    CHECK(read_all(out2 + "/words/m_0000.dat") ==
          read_all(out3 + "/words/m_0000.dat"));
}

TEST_CASE("cli: failures map to the documented exit codes") {
    TempDir dir;
    CHECK(run_cmd(sh_quote(kBin) + " features " + sh_quote(dir.file("missing.dat")) +
                  " 2>/dev/null")
              .code == 2);
    CHECK(run_cmd(sh_quote(kBin) + " --no-such-flag 2>/dev/null").code == 2);
    CHECK(run_cmd(sh_quote(kBin) + " 2>/dev/null").code == 2);

    write_file(dir.file("bad.dat"), "2 2\n00\n0x\n");
    CHECK(run_cmd(sh_quote(kBin) + " features " + sh_quote(dir.file("bad.dat")) +
                  " 2>/dev/null")
              .code == 2);

    std::string out = dir.file("corpus");
    REQUIRE(run_cmd(sh_quote(kBin) + " synth --out " + sh_quote(out) +
                    " --per-class 16 --pages 0 --seed 1")
                .code == 0);
    CHECK(run_cmd(sh_quote(kBin) + " train --manifest " +
                  sh_quote(out + "/manifest.tsv") + " --model " +
                  sh_quote(dir.file("m.model")) + " --epochs 0 2>/dev/null")
              .code == 3);

    CHECK(run_cmd(sh_quote(kBin) + " --help").code == 0);
    CHECK(run_cmd(sh_quote(kBin) + " train --help").code == 0);
}

TEST_CASE("cli: a large page segments and classifies inside the budget") {
    DetRng rng(72);
    SynthParams params;
    params.page_width = 2500;
    SyntheticPage page = compose_page(rng, 44, params); // about 2500x3400
    CHECK(page.image.height() > 3000);

    TempDir dir;
    ToolConfig cfg;
    cfg.per_class = 20;
    cfg.train.epochs = 100;
    run_synth(dir.str(), cfg.per_class, 6, 0, cfg.pipeline);
    TrainOutput trained = run_train(dir.file("manifest.tsv"), cfg);

    auto start = std::chrono::steady_clock::now();
    PageResult result = classify_page(trained.model, page.image, cfg.pipeline);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                start)
                      .count();
    CHECK(result.records.size() == page.words.size());
    CHECK(secs < 10.0);
}
