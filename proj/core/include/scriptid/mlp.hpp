#ifndef SCRIPTID_MLP_HPP
#define SCRIPTID_MLP_HPP

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "scriptid/error.hpp"

namespace scriptid {

/**
 * Single-hidden-layer perceptron with logistic-sigmoid activations at both
 * layers. Weight matrices are stored fan-in x fan-out, row-major. The
 * model carries its own per-feature (min, max) normalization from
 * training, so a saved model classifies single words without corpus
 * statistics.
 */
struct MlpModel {
    std::array<int, 3> layer_sizes{8, 12, 2};
    std::vector<double> w1; // layer_sizes[0] x layer_sizes[1]
    std::vector<double> b1;
    std::vector<double> w2; // layer_sizes[1] x layer_sizes[2]
    std::vector<double> b2;
    std::vector<std::pair<double, double>> feature_norm; // per input feature
    std::vector<std::string> label_names{"matra", "roman"};

    int inputs() const { return layer_sizes[0]; }
    int hidden() const { return layer_sizes[1]; }
    int outputs() const { return layer_sizes[2]; }
};

struct TrainConfig {
    double eta = 0.8;    // learning rate, > 0
    double alpha = 0.8;  // momentum, in [0, 1)
    int epochs = 2000;
    std::uint64_t seed = 0;
    int hidden = 12;
};

/// One engine-level training sample: raw input and target activations.
struct TrainSample {
    std::vector<double> input;
    std::vector<double> target;
};

/// Labeled feature vectors with a frozen train/test partition.
struct Dataset {
    std::vector<std::pair<std::array<double, 8>, int>> samples; // label 0 or 1
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;
};

struct EvalReport {
    double accuracy = 0.0;
    std::array<std::array<int, 2>, 2> confusion{}; // [true][predicted]
    std::array<double, 2> precision{};
    std::array<double, 2> recall{};
    int total = 0;
};

/**
 * Fresh model with weights drawn i.i.d. uniform from [-0.5, 0.5) by a
 * DetRng seeded with `seed` (w1 row-major first, then w2), zero biases and
 * identity feature normalization. Identical seeds give bit-identical
 * models.
 */
MlpModel init_model(int input, int hidden, int output, std::uint64_t seed);

/// Applies the stored feature normalization: (x - min) / (max - min),
/// with degenerate features pinned to zero.
std::vector<double> normalize_input(const MlpModel& model,
                                    const std::vector<double>& x);

/// Affine-then-sigmoid at both layers; outputs lie strictly inside (0, 1).
std::vector<double> forward(const MlpModel& model, const std::vector<double>& x);

/// Index of the largest activation; ties go to the lowest index.
int argmax_output(const std::vector<double>& outputs);

/// Class index for one input.
int predict(const MlpModel& model, const std::vector<double>& x);

/// Half sum of squared output errors for one sample.
double sample_loss(const MlpModel& model, const std::vector<double>& x,
                   const std::vector<double>& target);

struct Gradients {
    std::vector<double> w1, b1, w2, b2;
};

/// Backpropagated gradients of sample_loss with respect to every weight
/// and bias. This is exactly the quantity the trainer steps along.
Gradients sample_gradients(const MlpModel& model, const std::vector<double>& x,
                           const std::vector<double>& target);

/**
 * Online backpropagation with momentum: per-sample updates
 * dw(t) = -eta * grad + alpha * dw(t-1), visiting samples in a fresh
 * seeded shuffle each epoch. Returns the per-epoch mean squared error
 * (averaged over samples and output units, measured at each sample's
 * pre-update forward pass).
 */
std::vector<double> train_engine(MlpModel& model,
                                 const std::vector<TrainSample>& samples,
                                 const TrainConfig& cfg);

/**
 * Dataset-level training: derives per-feature min/max from the training
 * partition, stores it in the model, encodes labels as one-hot targets
 * {0.1, 0.9} and runs the engine. Errors on a single-class training set.
 */
std::vector<double> train(MlpModel& model, const Dataset& data,
                          const TrainConfig& cfg);

/// Accuracy, 2x2 confusion and per-class precision/recall over the given
/// sample indices. Errors on an empty index set.
EvalReport evaluate(const MlpModel& model, const Dataset& data,
                    const std::vector<std::size_t>& idx);

/**
 * Stratified split: each class contributes floor(train_share * n) samples
 * (at least 1, at most n - 1) to the train partition, the rest to test.
 * The 9:7 default sends exactly 450 of 800 per class to train. Within a
 * class the assignment is a seeded shuffle.
 */
Dataset split_dataset(std::vector<std::pair<std::array<double, 8>, int>> samples,
                      int ratio_train, int ratio_test, std::uint64_t seed);

/**
 * Line-oriented text model file:
 *   line 1: "MLPSCRIPT 1"
 *   line 2: layer sizes, space-separated
 *   line 3: the two label names
 *   line 4: per-feature min max pairs (16 decimals for 8 inputs)
 *   line 5: w1 row-major then b1
 *   line 6: w2 row-major then b2
 * All decimals are shortest round-trip representations, so save/load/save
 * is byte-identical. Unknown versions are rejected.
 */
std::string save_model(const MlpModel& model);
MlpModel load_model(const std::string& text);

void save_model_file(const std::string& path, const MlpModel& model);
MlpModel load_model_file(const std::string& path);

} // namespace scriptid

#endif // SCRIPTID_MLP_HPP
