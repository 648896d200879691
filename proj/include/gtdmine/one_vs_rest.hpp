#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gtdmine/classifier.hpp"
#include "gtdmine/token_io.hpp"

namespace gtdmine {

/// Binary logistic scorer over the one-hot encoding of a record.
struct LogisticScorer {
    std::vector<double> weights;
    double bias = 0;

    double score(const EncodedRecord& record, std::span<const std::size_t> cardinalities) const;
};

struct OvrOptions {
    double eta = 0.1;
    std::size_t epochs = 100;
    double l2 = 1e-4;
};

/// One logistic scorer per class, each trained on "record is in class c".
class OneVsRestModel final : public Classifier {
public:
    std::vector<std::size_t> cardinalities;
    std::array<LogisticScorer, kClassCount> scorers;
    /// Fewer than two classes in training: predict `constant` with certainty.
    bool degenerate = false;
    ClassLabel constant = ClassLabel::Claimed;

    Family family() const override { return Family::OneVsRest; }
    ClassProbabilities predict(const EncodedRecord& record) const override;
    void write_payload(std::ostream& out) const override;
    std::vector<std::string> warnings() const override;
    static OneVsRestModel read_payload(TokenReader& in);
};

/// Per-class sigmoid scores before renormalization.
ClassScores ovr_scores(const OneVsRestModel& model, const EncodedRecord& record);

/// Zero-initialized weights, stochastic gradient descent with L2 decay; all
/// scorers see records in the same per-epoch shuffled order. Throws
/// EmptyDataset and InvalidHyperparameter.
OneVsRestModel train_one_vs_rest(const Dataset& data, const OvrOptions& options, std::uint64_t seed);

}  // namespace gtdmine
