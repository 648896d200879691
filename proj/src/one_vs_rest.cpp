#include "gtdmine/one_vs_rest.hpp"

#include <cmath>
#include <numeric>

#include "gtdmine/error.hpp"
#include "gtdmine/mlp.hpp"
#include "gtdmine/rng.hpp"
#include "gtdmine/text.hpp"

namespace gtdmine {

double LogisticScorer::score(const EncodedRecord& record, std::span<const std::size_t> cardinalities) const {
    double v = bias;
    std::size_t offset = 0;
    for (std::size_t f = 0; f < cardinalities.size(); ++f) {
        v += weights[offset + record.codes[f]];
        offset += cardinalities[f];
    }
    return sigmoid(v);
}

ClassScores ovr_scores(const OneVsRestModel& model, const EncodedRecord& record) {
    ClassScores s{};
    for (std::size_t c = 0; c < kClassCount; ++c) s[c] = model.scorers[c].score(record, model.cardinalities);
    return s;
}

ClassProbabilities OneVsRestModel::predict(const EncodedRecord& record) const {
    if (degenerate) return ClassProbabilities::certain(constant);
    return ClassProbabilities::from_scores(ovr_scores(*this, record));
}

std::vector<std::string> OneVsRestModel::warnings() const {
    if (!degenerate) return {};
    return {"training data holds a single class (" + std::string(label_name(constant)) +
            "); every prediction is that class"};
}

OneVsRestModel train_one_vs_rest(const Dataset& data, const OvrOptions& options, std::uint64_t seed) {
    if (options.epochs == 0) throw Error(Errc::InvalidHyperparameter, "ovr epochs must be at least 1");
    if (!(options.eta > 0) || std::isinf(options.eta)) {
        throw Error(Errc::InvalidHyperparameter, "ovr eta must be a positive finite value");
    }
    if (!(options.l2 >= 0) || std::isinf(options.l2)) {
        throw Error(Errc::InvalidHyperparameter, "ovr l2 must be a non-negative finite value");
    }
    if (data.empty()) throw Error(Errc::EmptyDataset, "cannot train one-vs-rest on zero records");

    OneVsRestModel m;
    m.cardinalities = data.schema().cardinalities();
    const auto width = one_hot_width(m.cardinalities);
    for (auto& s : m.scorers) s.weights.assign(width, 0.0);

    const auto& counts = data.class_counts();
    std::size_t present = 0;
    for (std::size_t c = 0; c < kClassCount; ++c) {
        if (counts[c] > 0) {
            ++present;
            m.constant = label_at(c);
        }
    }
    if (present < 2) {
        m.degenerate = true;
        return m;
    }

    std::vector<std::vector<std::size_t>> active;
    active.reserve(data.size());
    for (const auto& r : data.records()) {
        std::vector<std::size_t> idx;
        std::size_t offset = 0;
        for (std::size_t f = 0; f < m.cardinalities.size(); ++f) {
            idx.push_back(offset + r.codes[f]);
            offset += m.cardinalities[f];
        }
        active.push_back(std::move(idx));
    }

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    const double decay = 1.0 - options.eta * options.l2;
    for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
        rng.shuffle(std::span(order));
        for (auto i : order) {
            const auto& r = data[i];
            for (std::size_t c = 0; c < kClassCount; ++c) {
                auto& s = m.scorers[c];
                double v = s.bias;
                for (auto a : active[i]) v += s.weights[a];
                const double target = index_of(r.label) == c ? 1.0 : 0.0;
                const double step = options.eta * (target - sigmoid(v));
                if (decay != 1.0) {
                    for (auto& w : s.weights) w *= decay;
                }
                for (auto a : active[i]) s.weights[a] += step;
                s.bias += step;
            }
        }
    }
    return m;
}

void OneVsRestModel::write_payload(std::ostream& out) const {
    out << "features " << cardinalities.size();
    for (auto c : cardinalities) out << ' ' << c;
    out << "\ndegenerate " << (degenerate ? 1 : 0) << ' ' << label_name(constant) << '\n';
    for (const auto& s : scorers) {
        out << "scorer " << format_double(s.bias);
        for (double w : s.weights) out << ' ' << format_double(w);
        out << '\n';
    }
}

OneVsRestModel OneVsRestModel::read_payload(TokenReader& in) {
    OneVsRestModel m;
    in.expect("features");
    m.cardinalities = in.counts(in.count());
    in.expect("degenerate");
    const auto flag = in.count();
    if (flag > 1) throw Error(Errc::CorruptPayload, "degenerate flag must be 0 or 1");
    m.degenerate = flag == 1;
    const auto label = parse_label(in.word());
    if (!label) throw Error(Errc::CorruptPayload, "unknown class label in one-vs-rest payload");
    m.constant = *label;
    const auto width = one_hot_width(m.cardinalities);
    for (auto& s : m.scorers) {
        in.expect("scorer");
        s.bias = in.real();
        s.weights = in.reals(width);
    }
    return m;
}

}  // namespace gtdmine
