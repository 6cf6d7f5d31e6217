#include "scriptid/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "scriptid/dat_io.hpp"
#include "scriptid/num_format.hpp"
#include "scriptid/rng.hpp"

namespace scriptid {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_train_config(const TrainConfig& cfg) {
    if (cfg.eta <= 0) throw ContractError("TrainConfig: eta must be positive");
    if (cfg.alpha < 0 || cfg.alpha >= 1)
        throw ContractError("TrainConfig: alpha must lie in [0, 1)");
    if (cfg.epochs < 1) throw ContractError("TrainConfig: epochs must be >= 1");
}

void check_input(const MlpModel& model, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != model.inputs())
        throw ContractError("input length " + std::to_string(x.size()) +
                            " does not match model input size " +
                            std::to_string(model.inputs()));
    for (double v : x)
        if (!std::isfinite(v)) throw ContractError("non-finite input value");
}

struct Activations {
    std::vector<double> hidden;
    std::vector<double> output;
};

Activations forward_norm(const MlpModel& model, const std::vector<double>& xn) {
    const int in = model.inputs(), hid = model.hidden(), out = model.outputs();
    Activations a;
    a.hidden.resize(hid);
    for (int j = 0; j < hid; ++j) {
        double z = model.b1[j];
        for (int i = 0; i < in; ++i) z += xn[i] * model.w1[i * hid + j];
        a.hidden[j] = sigmoid(z);
    }
    a.output.resize(out);
    for (int k = 0; k < out; ++k) {
        double z = model.b2[k];
        for (int j = 0; j < hid; ++j) z += a.hidden[j] * model.w2[j * out + k];
        a.output[k] = sigmoid(z);
    }
    return a;
}

// Backprop deltas for E = 1/2 sum (o - t)^2 at one normalized sample.
Gradients gradients_norm(const MlpModel& model, const std::vector<double>& xn,
                         const std::vector<double>& target, const Activations& a) {
    const int in = model.inputs(), hid = model.hidden(), out = model.outputs();
    Gradients g;
    g.w1.assign(model.w1.size(), 0.0);
    g.b1.assign(model.b1.size(), 0.0);
    g.w2.assign(model.w2.size(), 0.0);
    g.b2.assign(model.b2.size(), 0.0);

    std::vector<double> delta_out(out);
    for (int k = 0; k < out; ++k) {
        double o = a.output[k];
        delta_out[k] = (o - target[k]) * o * (1.0 - o);
    }
    for (int j = 0; j < hid; ++j)
        for (int k = 0; k < out; ++k)
            g.w2[j * out + k] = a.hidden[j] * delta_out[k];
    g.b2 = delta_out;

    std::vector<double> delta_hid(hid);
    for (int j = 0; j < hid; ++j) {
        double s = 0;
        for (int k = 0; k < out; ++k) s += delta_out[k] * model.w2[j * out + k];
        delta_hid[j] = s * a.hidden[j] * (1.0 - a.hidden[j]);
    }
    for (int i = 0; i < in; ++i)
        for (int j = 0; j < hid; ++j)
            g.w1[i * hid + j] = xn[i] * delta_hid[j];
    g.b1 = delta_hid;
    return g;
}

} // namespace

MlpModel init_model(int input, int hidden, int output, std::uint64_t seed) {
    if (input < 1 || hidden < 1 || output < 1)
        throw ContractError("init_model: all layer sizes must be >= 1");
    MlpModel m;
    m.layer_sizes = {input, hidden, output};
    DetRng rng(seed);
    m.w1.resize(static_cast<std::size_t>(input) * hidden);
    for (double& w : m.w1) w = rng.next_double() - 0.5;
    m.w2.resize(static_cast<std::size_t>(hidden) * output);
    for (double& w : m.w2) w = rng.next_double() - 0.5;
    m.b1.assign(hidden, 0.0);
    m.b2.assign(output, 0.0);
    m.feature_norm.assign(input, {0.0, 1.0});
    return m;
}

std::vector<double> normalize_input(const MlpModel& model,
                                    const std::vector<double>& x) {
    check_input(model, x);
    std::vector<double> xn(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto [lo, hi] = model.feature_norm[i];
        xn[i] = hi > lo ? (x[i] - lo) / (hi - lo) : 0.0;
    }
    return xn;
}

std::vector<double> forward(const MlpModel& model, const std::vector<double>& x) {
    return forward_norm(model, normalize_input(model, x)).output;
}

int argmax_output(const std::vector<double>& outputs) {
    if (outputs.empty()) throw ContractError("argmax of empty outputs");
    return static_cast<int>(std::max_element(outputs.begin(), outputs.end()) -
                            outputs.begin());
}

int predict(const MlpModel& model, const std::vector<double>& x) {
    return argmax_output(forward(model, x));
}

double sample_loss(const MlpModel& model, const std::vector<double>& x,
                   const std::vector<double>& target) {
    std::vector<double> o = forward(model, x);
    if (o.size() != target.size())
        throw ContractError("target length does not match model output size");
    double e = 0;
    for (std::size_t k = 0; k < o.size(); ++k)
        e += 0.5 * (o[k] - target[k]) * (o[k] - target[k]);
    return e;
}

Gradients sample_gradients(const MlpModel& model, const std::vector<double>& x,
                           const std::vector<double>& target) {
    if (static_cast<int>(target.size()) != model.outputs())
        throw ContractError("target length does not match model output size");
    std::vector<double> xn = normalize_input(model, x);
    Activations a = forward_norm(model, xn);
    return gradients_norm(model, xn, target, a);
}

std::vector<double> train_engine(MlpModel& model,
                                 const std::vector<TrainSample>& samples,
                                 const TrainConfig& cfg) {
    check_train_config(cfg);
    if (samples.empty()) throw ContractError("train: no samples");
    for (const auto& s : samples) {
        check_input(model, s.input);
        if (static_cast<int>(s.target.size()) != model.outputs())
            throw ContractError("train: target length mismatch");
    }

    // Inputs never change, so normalize once up front.
    std::vector<std::vector<double>> xn(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        xn[i] = normalize_input(model, samples[i].input);

    Gradients vel;
    vel.w1.assign(model.w1.size(), 0.0);
    vel.b1.assign(model.b1.size(), 0.0);
    vel.w2.assign(model.w2.size(), 0.0);
    vel.b2.assign(model.b2.size(), 0.0);

    DetRng rng(cfg.seed);
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);

    const std::size_t n_out = static_cast<std::size_t>(model.outputs());
    std::vector<double> trace;
    trace.reserve(cfg.epochs);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.next_below(i)]);

        double sq_err = 0;
        for (std::size_t idx : order) {
            Activations a = forward_norm(model, xn[idx]);
            const auto& t = samples[idx].target;
            for (std::size_t k = 0; k < n_out; ++k)
                sq_err += (a.output[k] - t[k]) * (a.output[k] - t[k]);

            Gradients g = gradients_norm(model, xn[idx], t, a);
            auto step = [&](std::vector<double>& w, std::vector<double>& v,
                            const std::vector<double>& grad) {
                for (std::size_t i = 0; i < w.size(); ++i) {
                    v[i] = -cfg.eta * grad[i] + cfg.alpha * v[i];
                    w[i] += v[i];
                }
            };
            step(model.w1, vel.w1, g.w1);
            step(model.b1, vel.b1, g.b1);
            step(model.w2, vel.w2, g.w2);
            step(model.b2, vel.b2, g.b2);
        }
        trace.push_back(sq_err / (samples.size() * n_out));
    }
    return trace;
}

std::vector<double> train(MlpModel& model, const Dataset& data,
                          const TrainConfig& cfg) {
    if (data.train_idx.empty()) throw ContractError("train: empty training set");
    if (model.inputs() != 8 || model.outputs() != 2)
        throw ContractError("train: dataset training expects an 8-input 2-output model");

    bool seen[2] = {false, false};
    for (std::size_t i : data.train_idx) {
        int label = data.samples[i].second;
        if (label < 0 || label > 1) throw ContractError("train: label out of range");
        seen[label] = true;
    }
    if (!seen[0] || !seen[1]) throw ContractError("degenerate labels");

    // Second normalization stage: training min/max per feature.
    model.feature_norm.assign(8, {0.0, 1.0});
    for (int f = 0; f < 8; ++f) {
        double lo = data.samples[data.train_idx[0]].first[f];
        double hi = lo;
        for (std::size_t i : data.train_idx) {
            lo = std::min(lo, data.samples[i].first[f]);
            hi = std::max(hi, data.samples[i].first[f]);
        }
        model.feature_norm[f] = {lo, hi};
    }

    std::vector<TrainSample> samples;
    samples.reserve(data.train_idx.size());
    for (std::size_t i : data.train_idx) {
        TrainSample s;
        s.input.assign(data.samples[i].first.begin(), data.samples[i].first.end());
        s.target = data.samples[i].second == 0 ? std::vector<double>{0.9, 0.1}
                                               : std::vector<double>{0.1, 0.9};
        samples.push_back(std::move(s));
    }
    return train_engine(model, samples, cfg);
}

EvalReport evaluate(const MlpModel& model, const Dataset& data,
                    const std::vector<std::size_t>& idx) {
    if (idx.empty()) throw ContractError("evaluate: empty test set");
    if (model.outputs() != 2)
        throw ContractError("evaluate: model must have 2 outputs");
    EvalReport rep;
    for (std::size_t i : idx) {
        const auto& [features, label] = data.samples[i];
        if (label < 0 || label > 1)
            throw ContractError("evaluate: label out of range");
        int pred = predict(model, {features.begin(), features.end()});
        ++rep.confusion[label][pred];
        ++rep.total;
    }
    int correct = rep.confusion[0][0] + rep.confusion[1][1];
    rep.accuracy = static_cast<double>(correct) / rep.total;
    for (int c = 0; c < 2; ++c) {
        int col = rep.confusion[0][c] + rep.confusion[1][c];
        int row = rep.confusion[c][0] + rep.confusion[c][1];
        rep.precision[c] = col > 0 ? static_cast<double>(rep.confusion[c][c]) / col : 0.0;
        rep.recall[c] = row > 0 ? static_cast<double>(rep.confusion[c][c]) / row : 0.0;
    }
    return rep;
}

Dataset split_dataset(std::vector<std::pair<std::array<double, 8>, int>> samples,
                      int ratio_train, int ratio_test, std::uint64_t seed) {
    if (ratio_train < 1 || ratio_test < 1)
        throw ContractError("split: ratio parts must be positive");
    Dataset data;
    data.samples = std::move(samples);

    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < data.samples.size(); ++i) {
        int label = data.samples[i].second;
        if (label < 0 || label > 1) throw ContractError("split: label out of range");
        by_class[label].push_back(i);
    }
    DetRng rng(seed);
    for (int c = 0; c < 2; ++c) {
        auto& idx = by_class[c];
        if (idx.size() < 2)
            throw ContractError("split: class " + std::to_string(c) +
                                " has fewer than 2 samples");
        for (std::size_t i = idx.size(); i > 1; --i)
            std::swap(idx[i - 1], idx[rng.next_below(i)]);
        std::size_t n_train = idx.size() * ratio_train / (ratio_train + ratio_test);
        n_train = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
        for (std::size_t i = 0; i < idx.size(); ++i)
            (i < n_train ? data.train_idx : data.test_idx).push_back(idx[i]);
    }
    std::sort(data.train_idx.begin(), data.train_idx.end());
    std::sort(data.test_idx.begin(), data.test_idx.end());
    return data;
}

std::string save_model(const MlpModel& model) {
    std::string out = "MLPSCRIPT 1\n";
    out += std::to_string(model.layer_sizes[0]) + " " +
           std::to_string(model.layer_sizes[1]) + " " +
           std::to_string(model.layer_sizes[2]) + "\n";
    out += model.label_names.at(0) + " " + model.label_names.at(1) + "\n";
    for (std::size_t i = 0; i < model.feature_norm.size(); ++i) {
        if (i) out += ' ';
        out += format_double(model.feature_norm[i].first) + " " +
               format_double(model.feature_norm[i].second);
    }
    out += '\n';
    auto layer_line = [&](const std::vector<double>& w, const std::vector<double>& b) {
        std::string line;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i) line += ' ';
            line += format_double(w[i]);
        }
        for (const double v : b) {
            line += ' ';
            line += format_double(v);
        }
        return line + "\n";
    };
    out += layer_line(model.w1, model.b1);
    out += layer_line(model.w2, model.b2);
    return out;
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

} // namespace

MlpModel load_model(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto next_line = [&](const char* what) {
        if (!std::getline(in, line))
            throw InputError(std::string("model file: missing ") + what);
        return line;
    };

    if (next_line("version line") != "MLPSCRIPT 1")
        throw InputError("model file: unknown format/version: '" + line + "'");

    auto sizes = split_ws(next_line("layer sizes"));
    if (sizes.size() != 3)
        throw InputError("model file: expected 3 layer sizes, got " +
                         std::to_string(sizes.size()));
    MlpModel m;
    for (int i = 0; i < 3; ++i) {
        long v = parse_long(sizes[i], "layer sizes");
        if (v < 1 || v > 100000) throw InputError("model file: bad layer size");
        m.layer_sizes[i] = static_cast<int>(v);
    }

    auto names = split_ws(next_line("label names"));
    if (names.size() != 2) throw InputError("model file: expected 2 label names");
    m.label_names = names;

    auto norm = split_ws(next_line("normalization line"));
    if (norm.size() != static_cast<std::size_t>(2 * m.inputs()))
        throw InputError("model file: expected " + std::to_string(2 * m.inputs()) +
                         " normalization values");
    m.feature_norm.resize(m.inputs());
    for (int i = 0; i < m.inputs(); ++i) {
        double lo = parse_double(norm[2 * i], "normalization");
        double hi = parse_double(norm[2 * i + 1], "normalization");
        if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
            throw InputError("model file: bad normalization pair");
        m.feature_norm[i] = {lo, hi};
    }

    auto read_layer = [&](std::size_t n_w, std::size_t n_b, std::vector<double>& w,
                          std::vector<double>& b, const char* what) {
        auto vals = split_ws(next_line(what));
        if (vals.size() != n_w + n_b)
            throw InputError("model file: layer line has " +
                             std::to_string(vals.size()) + " values, expected " +
                             std::to_string(n_w + n_b));
        w.resize(n_w);
        b.resize(n_b);
        for (std::size_t i = 0; i < n_w; ++i) w[i] = parse_double(vals[i], what);
        for (std::size_t i = 0; i < n_b; ++i) b[i] = parse_double(vals[n_w + i], what);
        for (double v : w)
            if (!std::isfinite(v)) throw InputError("model file: non-finite weight");
        for (double v : b)
            if (!std::isfinite(v)) throw InputError("model file: non-finite bias");
    };
    read_layer(static_cast<std::size_t>(m.inputs()) * m.hidden(),
               static_cast<std::size_t>(m.hidden()), m.w1, m.b1, "hidden layer");
    read_layer(static_cast<std::size_t>(m.hidden()) * m.outputs(),
               static_cast<std::size_t>(m.outputs()), m.w2, m.b2, "output layer");

    if (std::getline(in, line) && !line.empty())
        throw InputError("model file: trailing data");
    return m;
}

void save_model_file(const std::string& path, const MlpModel& model) {
    write_file(path, save_model(model));
}

MlpModel load_model_file(const std::string& path) {
    return load_model(read_file(path));
}

} // namespace scriptid
