#include "gtdmine/naive_bayes.hpp"

#include <cmath>
#include <limits>

#include "gtdmine/error.hpp"
#include "gtdmine/text.hpp"

namespace gtdmine {

NaiveBayesModel train_naive_bayes(const Dataset& data, double alpha) {
    if (data.empty()) throw Error(Errc::EmptyDataset, "naive Bayes needs at least one record");
    if (!(alpha >= 0) || std::isinf(alpha)) {
        throw Error(Errc::InvalidHyperparameter, "alpha must be a finite value >= 0");
    }
    NaiveBayesModel m;
    m.alpha = alpha;
    m.cardinalities = data.schema().cardinalities();
    m.class_counts = data.class_counts();
    const auto n = static_cast<double>(data.size());
    for (std::size_t c = 0; c < kClassCount; ++c) m.priors[c] = static_cast<double>(m.class_counts[c]) / n;

    const auto features = m.cardinalities.size();
    std::vector<std::array<std::vector<std::size_t>, kClassCount>> counts(features);
    for (std::size_t f = 0; f < features; ++f) {
        for (auto& row : counts[f]) row.assign(m.cardinalities[f], 0);
    }
    for (const auto& r : data.records()) {
        for (std::size_t f = 0; f < features; ++f) ++counts[f][index_of(r.label)][r.codes[f]];
    }

    m.cond.resize(features);
    for (std::size_t f = 0; f < features; ++f) {
        const auto codes = static_cast<double>(m.cardinalities[f]);
        for (std::size_t c = 0; c < kClassCount; ++c) {
            auto& row = m.cond[f][c];
            row.resize(m.cardinalities[f]);
            const double denom = static_cast<double>(m.class_counts[c]) + alpha * codes;
            for (std::size_t v = 0; v < row.size(); ++v) {
                row[v] = denom > 0 ? (static_cast<double>(counts[f][c][v]) + alpha) / denom : 1.0 / codes;
            }
        }
    }
    return m;
}

ClassScores nb_log_scores(const NaiveBayesModel& model, const EncodedRecord& record) {
    ClassScores s{};
    for (std::size_t c = 0; c < kClassCount; ++c) {
        double acc = std::log(model.priors[c]);
        for (std::size_t f = 0; f < model.cond.size() && !std::isinf(acc); ++f) {
            acc += std::log(model.cond[f][c][record.codes[f]]);
        }
        s[c] = acc;
    }
    return s;
}

ClassProbabilities nb_posterior(const NaiveBayesModel& model, const EncodedRecord& record) {
    return ClassProbabilities::from_log_scores(nb_log_scores(model, record),
                                               ClassProbabilities::from_scores(model.priors));
}

ClassProbabilities NaiveBayesModel::predict(const EncodedRecord& record) const {
    return nb_posterior(*this, record);
}

void NaiveBayesModel::write_payload(std::ostream& out) const {
    out << "alpha " << format_double(alpha) << '\n';
    out << "features " << cardinalities.size();
    for (auto m : cardinalities) out << ' ' << m;
    out << '\n';
    out << "class_counts";
    for (auto c : class_counts) out << ' ' << c;
    out << "\npriors";
    for (auto p : priors) out << ' ' << format_double(p);
    out << '\n';
    for (std::size_t f = 0; f < cond.size(); ++f) {
        for (std::size_t c = 0; c < kClassCount; ++c) {
            out << "cond";
            for (double p : cond[f][c]) out << ' ' << format_double(p);
            out << '\n';
        }
    }
}

NaiveBayesModel NaiveBayesModel::read_payload(TokenReader& in) {
    NaiveBayesModel m;
    in.expect("alpha");
    m.alpha = in.real();
    in.expect("features");
    m.cardinalities = in.counts(in.count());
    in.expect("class_counts");
    for (auto& c : m.class_counts) c = in.count();
    in.expect("priors");
    for (auto& p : m.priors) p = in.real();
    m.cond.resize(m.cardinalities.size());
    for (std::size_t f = 0; f < m.cardinalities.size(); ++f) {
        for (std::size_t c = 0; c < kClassCount; ++c) {
            in.expect("cond");
            m.cond[f][c] = in.reals(m.cardinalities[f]);
        }
    }
    return m;
}

}  // namespace gtdmine
