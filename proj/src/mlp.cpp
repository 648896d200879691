#include "gtdmine/mlp.hpp"

#include <cmath>
#include <numeric>

#include "gtdmine/error.hpp"
#include "gtdmine/rng.hpp"
#include "gtdmine/text.hpp"

namespace gtdmine {

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

std::size_t one_hot_width(std::span<const std::size_t> cardinalities) {
    return std::accumulate(cardinalities.begin(), cardinalities.end(), std::size_t{0});
}

std::vector<double> one_hot(const EncodedRecord& record, std::span<const std::size_t> cardinalities) {
    std::vector<double> x(one_hot_width(cardinalities), 0.0);
    std::size_t offset = 0;
    for (std::size_t f = 0; f < cardinalities.size(); ++f) {
        x[offset + record.codes[f]] = 1.0;
        offset += cardinalities[f];
    }
    return x;
}

std::vector<double> one_hot_target(ClassLabel label) {
    std::vector<double> d(kClassCount, 0.0);
    d[index_of(label)] = 1.0;
    return d;
}

MlpModel MlpModel::zeros(std::vector<std::size_t> layer_sizes, double eta) {
    if (layer_sizes.size() < 3) {
        throw Error(Errc::ShapeMismatch, "a multilayer perceptron needs at least three layers of nodes");
    }
    for (auto s : layer_sizes) {
        if (s == 0) throw Error(Errc::ShapeMismatch, "layer with zero nodes");
    }
    MlpModel m;
    m.eta = eta;
    m.layer_sizes = std::move(layer_sizes);
    for (std::size_t l = 1; l < m.layer_sizes.size(); ++l) {
        MlpLayer layer;
        layer.inputs = m.layer_sizes[l - 1];
        layer.outputs = m.layer_sizes[l];
        layer.weights.assign(layer.inputs * layer.outputs, 0.0);
        layer.bias.assign(layer.outputs, 0.0);
        m.layers.push_back(std::move(layer));
    }
    return m;
}

std::vector<std::vector<double>> mlp_activations(const MlpModel& model, std::span<const double> input) {
    if (model.layers.empty() || input.size() != model.layers.front().inputs) {
        throw Error(Errc::ShapeMismatch, "input width " + std::to_string(input.size()) + " does not match layer 0");
    }
    std::vector<std::vector<double>> acts;
    acts.reserve(model.layers.size() + 1);
    acts.emplace_back(input.begin(), input.end());
    for (const auto& layer : model.layers) {
        const auto& prev = acts.back();
        std::vector<double> y(layer.outputs);
        for (std::size_t j = 0; j < layer.outputs; ++j) {
            double v = layer.bias[j];
            const double* w = &layer.weights[j * layer.inputs];
            for (std::size_t i = 0; i < layer.inputs; ++i) v += w[i] * prev[i];
            y[j] = sigmoid(v);
        }
        acts.push_back(std::move(y));
    }
    return acts;
}

std::vector<double> mlp_forward(const MlpModel& model, std::span<const double> input) {
    return mlp_activations(model, input).back();
}

ClassProbabilities mlp_probabilities(const MlpModel& model, std::span<const double> input) {
    const auto y = mlp_forward(model, input);
    if (y.size() != kClassCount) throw Error(Errc::ShapeMismatch, "output layer must have one node per class");
    return ClassProbabilities::from_scores({y[0], y[1], y[2]});
}

std::vector<double> output_error(std::span<const double> target, std::span<const double> output) {
    if (target.size() != output.size()) throw Error(Errc::ShapeMismatch, "target and output widths differ");
    std::vector<double> e(target.size());
    for (std::size_t j = 0; j < e.size(); ++j) e[j] = target[j] - output[j];
    return e;
}

double squared_error(std::span<const double> error) {
    double s = 0;
    for (double e : error) s += e * e;
    return 0.5 * s;
}

double mlp_error(const MlpModel& model, std::span<const double> input, std::span<const double> target) {
    return squared_error(output_error(target, mlp_forward(model, input)));
}

namespace {

std::vector<std::vector<double>> deltas_from(const MlpModel& model, const std::vector<std::vector<double>>& acts,
                                             std::span<const double> target) {
    const auto layers = model.layers.size();
    std::vector<std::vector<double>> delta(layers);
    const auto& y = acts.back();
    const auto e = output_error(target, y);
    delta[layers - 1].resize(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) delta[layers - 1][j] = e[j] * sigmoid_derivative_from_output(y[j]);
    for (std::size_t l = layers - 1; l-- > 0;) {
        const auto& next = model.layers[l + 1];
        const auto& out = acts[l + 1];
        delta[l].assign(out.size(), 0.0);
        for (std::size_t k = 0; k < next.outputs; ++k) {
            const double dk = delta[l + 1][k];
            const double* w = &next.weights[k * next.inputs];
            for (std::size_t j = 0; j < next.inputs; ++j) delta[l][j] += dk * w[j];
        }
        for (std::size_t j = 0; j < out.size(); ++j) delta[l][j] *= sigmoid_derivative_from_output(out[j]);
    }
    return delta;
}

}  // namespace

std::vector<std::vector<double>> mlp_deltas(const MlpModel& model, std::span<const double> input,
                                            std::span<const double> target) {
    return deltas_from(model, mlp_activations(model, input), target);
}

MlpGradient mlp_gradient(const MlpModel& model, std::span<const double> input, std::span<const double> target) {
    const auto acts = mlp_activations(model, input);
    const auto delta = deltas_from(model, acts, target);
    MlpGradient g;
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        const auto& layer = model.layers[l];
        std::vector<double> gw(layer.weights.size());
        std::vector<double> gb(layer.outputs);
        for (std::size_t j = 0; j < layer.outputs; ++j) {
            gb[j] = -delta[l][j];
            for (std::size_t i = 0; i < layer.inputs; ++i) gw[j * layer.inputs + i] = -delta[l][j] * acts[l][i];
        }
        g.weights.push_back(std::move(gw));
        g.bias.push_back(std::move(gb));
    }
    return g;
}

double mlp_backprop_update(MlpModel& model, std::span<const double> input, std::span<const double> target) {
    const auto acts = mlp_activations(model, input);
    if (target.size() != acts.back().size()) throw Error(Errc::ShapeMismatch, "target width mismatch");
    const double before = squared_error(output_error(target, acts.back()));
    const auto delta = deltas_from(model, acts, target);
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        auto& layer = model.layers[l];
        const auto& y = acts[l];
        for (std::size_t j = 0; j < layer.outputs; ++j) {
            const double step = model.eta * delta[l][j];
            if (step == 0) continue;
            double* w = &layer.weights[j * layer.inputs];
            for (std::size_t i = 0; i < layer.inputs; ++i) w[i] += step * y[i];
            layer.bias[j] += step;
        }
    }
    return before;
}

MlpModel mlp_backprop_step(const MlpModel& model, std::span<const double> input, std::span<const double> target) {
    MlpModel next = model;
    mlp_backprop_update(next, input, target);
    return next;
}

MlpTraining train_mlp(const Dataset& data, const MlpOptions& options, std::uint64_t seed) {
    if (options.epochs == 0) throw Error(Errc::InvalidHyperparameter, "epochs must be at least 1");
    if (!(options.eta > 0) || std::isinf(options.eta)) {
        throw Error(Errc::InvalidHyperparameter, "eta must be a positive finite value");
    }
    if (data.empty()) throw Error(Errc::EmptyDataset, "cannot train a perceptron on zero records");
    const auto cards = data.schema().cardinalities();
    const auto width = one_hot_width(cards);
    if (width == 0) throw Error(Errc::ShapeMismatch, "dataset has no input features");

    std::vector<std::size_t> sizes{width};
    if (options.hidden.empty()) sizes.push_back(std::max<std::size_t>(4, width / 2));
    for (auto h : options.hidden) {
        if (h == 0) throw Error(Errc::InvalidHyperparameter, "hidden layer sizes must be positive");
        sizes.push_back(h);
    }
    sizes.push_back(kClassCount);

    MlpTraining out;
    out.model = MlpModel::zeros(sizes, options.eta);
    out.model.cardinalities = cards;
    Rng rng(seed);
    for (auto& layer : out.model.layers) {
        for (auto& w : layer.weights) w = rng.uniform(-0.5, 0.5);
        for (auto& b : layer.bias) b = rng.uniform(-0.5, 0.5);
    }

    std::vector<std::vector<double>> inputs;
    std::vector<std::vector<double>> targets;
    inputs.reserve(data.size());
    for (const auto& r : data.records()) {
        inputs.push_back(one_hot(r, cards));
        targets.push_back(one_hot_target(r.label));
    }
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
        rng.shuffle(std::span(order));
        for (auto i : order) mlp_backprop_update(out.model, inputs[i], targets[i]);
        double total = 0;
        for (std::size_t i = 0; i < inputs.size(); ++i) total += mlp_error(out.model, inputs[i], targets[i]);
        out.epoch_error.push_back(total / static_cast<double>(inputs.size()));
    }
    return out;
}

ClassProbabilities MlpModel::predict(const EncodedRecord& record) const {
    return mlp_probabilities(*this, one_hot(record, cardinalities));
}

void MlpModel::write_payload(std::ostream& out) const {
    out << "eta " << format_double(eta) << '\n';
    out << "features " << cardinalities.size();
    for (auto m : cardinalities) out << ' ' << m;
    out << "\nlayers " << layer_sizes.size();
    for (auto s : layer_sizes) out << ' ' << s;
    out << '\n';
    for (const auto& layer : layers) {
        out << 'w';
        for (double w : layer.weights) out << ' ' << format_double(w);
        out << "\nb";
        for (double b : layer.bias) out << ' ' << format_double(b);
        out << '\n';
    }
}

MlpModel MlpModel::read_payload(TokenReader& in) {
    in.expect("eta");
    const double eta = in.real();
    in.expect("features");
    auto cards = in.counts(in.count());
    in.expect("layers");
    auto sizes = in.counts(in.count());
    if (sizes.empty() || sizes.front() != one_hot_width(cards) || sizes.back() != kClassCount) {
        throw Error(Errc::CorruptPayload, "perceptron layer sizes do not fit the feature layout");
    }
    MlpModel m = MlpModel::zeros(std::move(sizes), eta);
    m.cardinalities = std::move(cards);
    for (auto& layer : m.layers) {
        in.expect("w");
        layer.weights = in.reals(layer.weights.size());
        in.expect("b");
        layer.bias = in.reals(layer.bias.size());
    }
    return m;
}

}  // namespace gtdmine
