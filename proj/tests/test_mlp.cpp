#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scriptid/mlp.hpp"
#include "scriptid/rng.hpp"

using namespace scriptid;

namespace {

std::array<double, 8> vec8(double a, double rest = 0.0) {
    std::array<double, 8> v;
    v.fill(rest);
    v[0] = a;
    return v;
}

// Separable toy set: class by the sign of feature 0 around 0.5.
Dataset toy_dataset(int per_class, std::uint64_t seed) {
    DetRng rng(seed);
    std::vector<std::pair<std::array<double, 8>, int>> samples;
    for (int i = 0; i < per_class; ++i)
        samples.emplace_back(vec8(rng.next_real(0.0, 0.3), rng.next_double()), 0);
    for (int i = 0; i < per_class; ++i)
        samples.emplace_back(vec8(rng.next_real(0.7, 1.0), rng.next_double()), 1);
    return split_dataset(std::move(samples), 9, 7, seed);
}

} // namespace

TEST_CASE("init_model is deterministic, bounded and zero-biased") {
    MlpModel a = init_model(8, 12, 2, 31);
    MlpModel b = init_model(8, 12, 2, 31);
    MlpModel c = init_model(8, 12, 2, 32);
    CHECK(a.w1 == b.w1);
    CHECK(a.w2 == b.w2);
    CHECK(a.w1 != c.w1);
    CHECK(a.w1.size() == 96);
    CHECK(a.w2.size() == 24);
    for (double w : a.w1) {
        CHECK(w >= -0.5);
        CHECK(w < 0.5);
    }
    CHECK(std::all_of(a.b1.begin(), a.b1.end(), [](double v) { return v == 0.0; }));
    CHECK(std::all_of(a.b2.begin(), a.b2.end(), [](double v) { return v == 0.0; }));
    CHECK_THROWS_AS(init_model(0, 3, 2, 1), ContractError);
}

TEST_CASE("forward matches the sigmoid chain computed by hand") {
    MlpModel m = init_model(1, 1, 1, 0);
    m.w1 = {0.5};
    m.b1 = {0.1};
    m.w2 = {-0.3};
    m.b2 = {0.2};
    const double x = 2.0;
    double h = 1.0 / (1.0 + std::exp(-(m.b1[0] + x * m.w1[0])));
    double o = 1.0 / (1.0 + std::exp(-(m.b2[0] + h * m.w2[0])));
    auto out = forward(m, {x});
    REQUIRE(out.size() == 1);
    CHECK(out[0] == o);
    CHECK(out[0] > 0.0);
    CHECK(out[0] < 1.0);
}

TEST_CASE("forward validates input shape and finiteness") {
    MlpModel m = init_model(3, 2, 2, 5);
    CHECK_THROWS_AS(forward(m, {1.0, 2.0}), ContractError);
    CHECK_THROWS_AS(forward(m, {1.0, 2.0, std::nan("")}), ContractError);
}

TEST_CASE("normalization rescales by stored min/max and pins flat features") {
    MlpModel m = init_model(2, 2, 2, 5);
    m.feature_norm = {{1.0, 3.0}, {4.0, 4.0}};
    auto xn = normalize_input(m, {2.0, 9.0});
    CHECK(xn[0] == 0.5);
    CHECK(xn[1] == 0.0); // degenerate feature
}

TEST_CASE("argmax prefers the lowest index and survives monotone rescaling") {
    CHECK(argmax_output({0.9, 0.2}) == 0);
    CHECK(argmax_output({0.5, 0.5}) == 0);
    CHECK(argmax_output({0.1, 0.3, 0.3}) == 1);
    DetRng rng(61);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> o{rng.next_double(), rng.next_double()};
        std::vector<double> scaled{std::exp(3.0 * o[0]), std::exp(3.0 * o[1])};
        CHECK(argmax_output(o) == argmax_output(scaled));
    }
    CHECK_THROWS_AS(argmax_output({}), ContractError);
}

TEST_CASE("predict is the argmax of forward") {
    DetRng rng(62);
    for (int t = 0; t < 20; ++t) {
        MlpModel m = init_model(4, 3, 3, rng.next_u64());
        std::vector<double> x{rng.next_double(), rng.next_double(),
                              rng.next_double(), rng.next_double()};
        CHECK(predict(m, x) == argmax_output(forward(m, x)));
    }
}

TEST_CASE("analytic gradients match central finite differences") {
    DetRng rng(63);
    for (int t = 0; t < 10; ++t) {
        MlpModel m = init_model(rng.next_int(2, 5), rng.next_int(2, 4),
                                rng.next_int(1, 3), rng.next_u64());
        std::vector<double> x, target;
        for (int i = 0; i < m.inputs(); ++i) x.push_back(rng.next_real(-1, 1));
        for (int k = 0; k < m.outputs(); ++k) target.push_back(rng.next_double());

        Gradients g = sample_gradients(m, x, target);
        const double h = 1e-5;
        auto check_block = [&](std::vector<double>& w, const std::vector<double>& gw) {
            for (std::size_t i = 0; i < w.size(); ++i) {
                double keep = w[i];
                w[i] = keep + h;
                double up = sample_loss(m, x, target);
                w[i] = keep - h;
                double dn = sample_loss(m, x, target);
                w[i] = keep;
                double fd = (up - dn) / (2 * h);
                double denom = std::max({std::abs(fd), std::abs(gw[i]), 1e-8});
                CHECK(std::abs(fd - gw[i]) / denom <= 1e-4);
            }
        };
        check_block(m.w1, g.w1);
        check_block(m.b1, g.b1);
        check_block(m.w2, g.w2);
        check_block(m.b2, g.b2);
    }
}

TEST_CASE("zero-momentum training is exactly plain gradient descent") {
    // Reference: an independent SGD loop sharing only the published update
    // rule and shuffle scheme.
    std::vector<TrainSample> samples;
    DetRng data_rng(64);
    for (int i = 0; i < 12; ++i) {
        TrainSample s;
        s.input = {data_rng.next_double(), data_rng.next_double()};
        s.target = {s.input[0] > 0.5 ? 0.9 : 0.1};
        samples.push_back(s);
    }
    TrainConfig cfg;
    cfg.eta = 0.6;
    cfg.alpha = 0.0;
    cfg.epochs = 40;
    cfg.seed = 9;

    MlpModel trained = init_model(2, 3, 1, 123);
    train_engine(trained, samples, cfg);

    MlpModel ref = init_model(2, 3, 1, 123);
    DetRng shuffle_rng(cfg.seed);
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[shuffle_rng.next_below(i)]);
        for (std::size_t idx : order) {
            Gradients g = sample_gradients(ref, samples[idx].input,
                                           samples[idx].target);
            for (std::size_t i = 0; i < ref.w1.size(); ++i)
                ref.w1[i] -= cfg.eta * g.w1[i];
            for (std::size_t i = 0; i < ref.b1.size(); ++i)
                ref.b1[i] -= cfg.eta * g.b1[i];
            for (std::size_t i = 0; i < ref.w2.size(); ++i)
                ref.w2[i] -= cfg.eta * g.w2[i];
            for (std::size_t i = 0; i < ref.b2.size(); ++i)
                ref.b2[i] -= cfg.eta * g.b2[i];
        }
    }
    CHECK(trained.w1 == ref.w1);
    CHECK(trained.b1 == ref.b1);
    CHECK(trained.w2 == ref.w2);
    CHECK(trained.b2 == ref.b2);
}

TEST_CASE("training is bitwise deterministic in the seed") {
    Dataset data = toy_dataset(20, 5);
    TrainConfig cfg;
    cfg.epochs = 50;
    cfg.seed = 77;
    MlpModel a = init_model(8, 4, 2, 77);
    MlpModel b = init_model(8, 4, 2, 77);
    auto trace_a = train(a, data, cfg);
    auto trace_b = train(b, data, cfg);
    CHECK(a.w1 == b.w1);
    CHECK(a.w2 == b.w2);
    CHECK(trace_a == trace_b);

    MlpModel c = init_model(8, 4, 2, 78);
    TrainConfig cfg2 = cfg;
    cfg2.seed = 78;
    train(c, data, cfg2);
    CHECK(a.w1 != c.w1);
}

TEST_CASE("training drives the error down on separable data") {
    Dataset data = toy_dataset(24, 6);
    TrainConfig cfg;
    cfg.epochs = 120;
    MlpModel m = init_model(8, 4, 2, 1);
    auto trace = train(m, data, cfg);
    REQUIRE(trace.size() == 120);
    CHECK(trace.back() < 0.05);
    CHECK(trace.back() < trace.front());
    for (double w : m.w1) CHECK(std::isfinite(w));
    for (double w : m.w2) CHECK(std::isfinite(w));
    EvalReport rep = evaluate(m, data, data.test_idx);
    CHECK(rep.accuracy == 1.0);
}

TEST_CASE("training configuration is validated") {
    Dataset data = toy_dataset(4, 7);
    MlpModel m = init_model(8, 4, 2, 1);
    TrainConfig bad;
    bad.eta = 0.0;
    CHECK_THROWS_AS(train(m, data, bad), ContractError);
    bad = {};
    bad.alpha = 1.0;
    CHECK_THROWS_AS(train(m, data, bad), ContractError);
    bad = {};
    bad.epochs = 0;
    CHECK_THROWS_AS(train(m, data, bad), ContractError);
}

TEST_CASE("dataset training rejects a single-class training partition") {
    std::vector<std::pair<std::array<double, 8>, int>> samples;
    for (int i = 0; i < 10; ++i) samples.emplace_back(vec8(0.1 * i), 0);
    for (int i = 0; i < 10; ++i) samples.emplace_back(vec8(0.1 * i), 1);
    Dataset data;
    data.samples = samples;
    for (std::size_t i = 0; i < 10; ++i) data.train_idx.push_back(i); // class 0 only
    for (std::size_t i = 10; i < 20; ++i) data.test_idx.push_back(i);
    MlpModel m = init_model(8, 4, 2, 1);
    TrainConfig cfg;
    cfg.epochs = 1;
    CHECK_THROWS_WITH_AS(train(m, data, cfg), "degenerate labels", ContractError);
}

TEST_CASE("the stored normalization comes from the training partition only") {
    std::vector<std::pair<std::array<double, 8>, int>> samples;
    samples.emplace_back(vec8(0.2), 0);
    samples.emplace_back(vec8(0.4), 0);
    samples.emplace_back(vec8(0.6), 1);
    samples.emplace_back(vec8(0.8), 1);
    samples.emplace_back(vec8(0.0), 0);  // test outlier
    samples.emplace_back(vec8(1.0), 1);  // test outlier
    Dataset data;
    data.samples = samples;
    data.train_idx = {0, 1, 2, 3};
    data.test_idx = {4, 5};
    MlpModel m = init_model(8, 3, 2, 2);
    TrainConfig cfg;
    cfg.epochs = 1;
    train(m, data, cfg);
    CHECK(m.feature_norm[0] == std::pair<double, double>{0.2, 0.8});
    CHECK(m.feature_norm[1] == std::pair<double, double>{0.0, 0.0});
}

TEST_CASE("consistent feature permutation leaves predictions unchanged") {
    DetRng rng(65);
    MlpModel m = init_model(8, 5, 2, 99);
    for (int i = 0; i < 8; ++i)
        m.feature_norm[i] = {-0.1 * i, 1.0 + 0.2 * i};

    std::array<int, 8> perm{3, 1, 7, 0, 2, 6, 4, 5};
    MlpModel p = m;
    for (int k = 0; k < 8; ++k) {
        p.feature_norm[k] = m.feature_norm[perm[k]];
        for (int j = 0; j < m.hidden(); ++j)
            p.w1[k * m.hidden() + j] = m.w1[perm[k] * m.hidden() + j];
    }
    for (int t = 0; t < 30; ++t) {
        std::vector<double> x, px(8);
        for (int i = 0; i < 8; ++i) x.push_back(rng.next_real(-1, 2));
        for (int k = 0; k < 8; ++k) px[k] = x[perm[k]];
        // the permuted sums run in a different order, so allow ulp noise
        std::vector<double> a = forward(m, x), b = forward(p, px);
        REQUIRE(a.size() == b.size());
        for (std::size_t k = 0; k < a.size(); ++k)
            CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-12));
    }
}

TEST_CASE("a hand-built net separates, an all-zero net degenerates") {
    std::vector<std::pair<std::array<double, 8>, int>> samples;
    for (int i = 0; i < 6; ++i) samples.emplace_back(vec8(0.1), 0);
    for (int i = 0; i < 4; ++i) samples.emplace_back(vec8(0.9), 1);
    Dataset data;
    data.samples = samples;
    std::vector<std::size_t> all(samples.size());
    std::iota(all.begin(), all.end(), 0);

    MlpModel sep = init_model(8, 1, 2, 0);
    std::fill(sep.w1.begin(), sep.w1.end(), 0.0);
    sep.w1[0] = 40.0;  // hidden unit reads feature 0
    sep.b1 = {-20.0};
    sep.w2 = {-10.0, 10.0};
    sep.b2 = {5.0, -5.0};
    EvalReport good = evaluate(sep, data, all);
    CHECK(good.accuracy == 1.0);
    CHECK(good.confusion[0][0] == 6);
    CHECK(good.confusion[1][1] == 4);
    CHECK(good.confusion[0][1] == 0);
    CHECK(good.precision[0] == 1.0);
    CHECK(good.recall[1] == 1.0);

    MlpModel zero = init_model(8, 1, 2, 0);
    std::fill(zero.w1.begin(), zero.w1.end(), 0.0);
    std::fill(zero.w2.begin(), zero.w2.end(), 0.0);
    EvalReport bad = evaluate(zero, data, all); // ties go to class 0
    CHECK(bad.accuracy == 0.6);
    CHECK(bad.confusion[1][0] == 4);
    CHECK(bad.recall[1] == 0.0);
    CHECK(bad.precision[1] == 0.0);

    CHECK_THROWS_AS(evaluate(zero, data, {}), ContractError);
}

TEST_CASE("stratified split reproduces the published counts") {
    std::vector<std::pair<std::array<double, 8>, int>> samples;
    for (int i = 0; i < 800; ++i) samples.emplace_back(vec8(0.1), 0);
    for (int i = 0; i < 800; ++i) samples.emplace_back(vec8(0.9), 1);
    Dataset data = split_dataset(samples, 9, 7, 4);
    std::array<int, 2> train_counts{}, test_counts{};
    for (std::size_t i : data.train_idx) ++train_counts[data.samples[i].second];
    for (std::size_t i : data.test_idx) ++test_counts[data.samples[i].second];
    CHECK(train_counts == std::array<int, 2>{450, 450});
    CHECK(test_counts == std::array<int, 2>{350, 350});
}

TEST_CASE("a 16-sample class splits 9:7") {
    std::vector<std::pair<std::array<double, 8>, int>> samples;
    for (int i = 0; i < 16; ++i) samples.emplace_back(vec8(0.1), 0);
    for (int i = 0; i < 16; ++i) samples.emplace_back(vec8(0.9), 1);
    Dataset data = split_dataset(samples, 9, 7, 4);
    CHECK(data.train_idx.size() == 18);
    CHECK(data.test_idx.size() == 14);
}

TEST_CASE("the split partitions the indices and is seed-deterministic") {
    std::vector<std::pair<std::array<double, 8>, int>> samples;
    DetRng rng(66);
    for (int i = 0; i < 61; ++i)
        samples.emplace_back(vec8(rng.next_double()), i % 2);
    Dataset a = split_dataset(samples, 9, 7, 10);
    Dataset b = split_dataset(samples, 9, 7, 10);
    Dataset c = split_dataset(samples, 9, 7, 11);
    CHECK(a.train_idx == b.train_idx);
    CHECK(a.test_idx == b.test_idx);
    CHECK(a.train_idx != c.train_idx);

    CHECK(std::is_sorted(a.train_idx.begin(), a.train_idx.end()));
    CHECK(std::is_sorted(a.test_idx.begin(), a.test_idx.end()));
    std::vector<std::size_t> merged = a.train_idx;
    merged.insert(merged.end(), a.test_idx.begin(), a.test_idx.end());
    std::sort(merged.begin(), merged.end());
    std::vector<std::size_t> want(samples.size());
    std::iota(want.begin(), want.end(), 0);
    CHECK(merged == want);
}

TEST_CASE("split rejects unusable class sizes and ratios") {
    std::vector<std::pair<std::array<double, 8>, int>> samples;
    samples.emplace_back(vec8(0.1), 0);
    samples.emplace_back(vec8(0.2), 1);
    samples.emplace_back(vec8(0.3), 1);
    CHECK_THROWS_AS(split_dataset(samples, 9, 7, 1), ContractError);
    samples.emplace_back(vec8(0.4), 0);
    CHECK_NOTHROW(split_dataset(samples, 9, 7, 1));
    CHECK_THROWS_AS(split_dataset(samples, 0, 7, 1), ContractError);
}

TEST_CASE("model files round-trip bytes and predictions") {
    Dataset data = toy_dataset(12, 8);
    TrainConfig cfg;
    cfg.epochs = 30;
    MlpModel m = init_model(8, 4, 2, 3);
    train(m, data, cfg);

    std::string text = save_model(m);
    MlpModel back = load_model(text);
    CHECK(save_model(back) == text);
    CHECK(back.layer_sizes == m.layer_sizes);
    CHECK(back.w1 == m.w1);
    CHECK(back.b2 == m.b2);
    CHECK(back.feature_norm == m.feature_norm);
    CHECK(back.label_names == m.label_names);
    DetRng rng(67);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> x;
        for (int i = 0; i < 8; ++i) x.push_back(rng.next_double());
        CHECK(forward(back, x) == forward(m, x));
    }
}

TEST_CASE("model loader rejects malformed files") {
    MlpModel m = init_model(2, 2, 1, 1);
    std::string good = save_model(m);

    CHECK_THROWS_AS(load_model("MLPSCRIPT 2\n1 1 1\na b\n0 1\n0 0\n0 0\n"),
                    InputError);
    CHECK_THROWS_AS(load_model(""), InputError);
    CHECK_THROWS_AS(load_model("MLPSCRIPT 1\n2 2\n"), InputError);
    CHECK_THROWS_AS(load_model(good + "extra\n"), InputError);
    CHECK_THROWS_AS(load_model(good.substr(0, good.size() / 2)), InputError);

    std::string nan_text = good;
    auto pos = nan_text.rfind('\n', nan_text.size() - 2);
    nan_text = nan_text.substr(0, pos + 1) + "nan 0 0\n";
    CHECK_THROWS_AS(load_model(nan_text), InputError);
}

TEST_CASE("the engine learns XOR") {
    std::vector<TrainSample> xs = {
        {{0, 0}, {0}},
        {{0, 1}, {1}},
        {{1, 0}, {1}},
        {{1, 1}, {0}},
    };
    MlpModel m = init_model(2, 2, 1, 1);
    TrainConfig cfg;
    cfg.epochs = 1500;
    cfg.seed = 1;
    auto trace = train_engine(m, xs, cfg);
    CHECK(*std::min_element(trace.begin(), trace.end()) < 0.05);
    CHECK(forward(m, {0, 0})[0] < 0.3);
    CHECK(forward(m, {1, 1})[0] < 0.3);
    CHECK(forward(m, {0, 1})[0] > 0.7);
    CHECK(forward(m, {1, 0})[0] > 0.7);
}
