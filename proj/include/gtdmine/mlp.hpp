#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gtdmine/classifier.hpp"
#include "gtdmine/token_io.hpp"

namespace gtdmine {

double sigmoid(double v);
/// phi'(v) written in terms of the output y = phi(v).
inline double sigmoid_derivative_from_output(double y) { return y * (1.0 - y); }

/// Fully connected sigmoid layer: v = W y_prev + b, y = sigmoid(v).
struct MlpLayer {
    std::size_t inputs = 0;
    std::size_t outputs = 0;
    std::vector<double> weights;  // outputs x inputs, row-major: weights[j * inputs + i] = w_ji
    std::vector<double> bias;     // outputs

    double& w(std::size_t j, std::size_t i) { return weights[j * inputs + i]; }
    double w(std::size_t j, std::size_t i) const { return weights[j * inputs + i]; }
};

class MlpModel final : public Classifier {
public:
    std::vector<std::size_t> cardinalities;  // one-hot layout of the input
    std::vector<std::size_t> layer_sizes;    // input, hidden..., output
    std::vector<MlpLayer> layers;
    double eta = 0.3;

    /// Zero weights; throws ShapeMismatch for fewer than three layers of nodes.
    static MlpModel zeros(std::vector<std::size_t> layer_sizes, double eta);

    Family family() const override { return Family::Mlp; }
    ClassProbabilities predict(const EncodedRecord& record) const override;
    void write_payload(std::ostream& out) const override;
    static MlpModel read_payload(TokenReader& in);
};

/// Concatenated one-hot blocks, one per feature.
std::vector<double> one_hot(const EncodedRecord& record, std::span<const std::size_t> cardinalities);
std::size_t one_hot_width(std::span<const std::size_t> cardinalities);

/// Activations of every layer of nodes, input first.
std::vector<std::vector<double>> mlp_activations(const MlpModel& model, std::span<const double> input);
/// Output-layer activations y. Throws ShapeMismatch.
std::vector<double> mlp_forward(const MlpModel& model, std::span<const double> input);
/// Output activations divided by their sum.
ClassProbabilities mlp_probabilities(const MlpModel& model, std::span<const double> input);

/// e_j = d_j - y_j
std::vector<double> output_error(std::span<const double> target, std::span<const double> output);
/// E = 1/2 sum_j e_j^2
double squared_error(std::span<const double> error);
double mlp_error(const MlpModel& model, std::span<const double> input, std::span<const double> target);

/// Local gradients delta_j = -dE/dv_j for every non-input layer.
/// Output: e_j phi'(v_j). Hidden: phi'(v_j) sum_k delta_k w_kj.
std::vector<std::vector<double>> mlp_deltas(const MlpModel& model, std::span<const double> input,
                                            std::span<const double> target);

/// dE/dw and dE/db per layer, laid out like MlpLayer::weights and ::bias.
struct MlpGradient {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> bias;
};
MlpGradient mlp_gradient(const MlpModel& model, std::span<const double> input, std::span<const double> target);

/// One stochastic gradient step, delta_w_ji = eta * delta_j * y_i, applied in place.
/// Returns E(n) before the update.
double mlp_backprop_update(MlpModel& model, std::span<const double> input, std::span<const double> target);
MlpModel mlp_backprop_step(const MlpModel& model, std::span<const double> input, std::span<const double> target);

struct MlpOptions {
    std::vector<std::size_t> hidden;  // empty: one layer of max(4, width / 2)
    double eta = 0.3;
    std::size_t epochs = 500;
};

struct MlpTraining {
    MlpModel model;
    std::vector<double> epoch_error;  // mean E(n) over the training set after each epoch
};

/// Weights uniform in [-0.5, 0.5], per-epoch shuffle, one update per record.
/// Throws InvalidHyperparameter for epochs == 0 or eta <= 0.
MlpTraining train_mlp(const Dataset& data, const MlpOptions& options, std::uint64_t seed);

std::vector<double> one_hot_target(ClassLabel label);

}  // namespace gtdmine
