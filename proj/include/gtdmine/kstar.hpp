#pragma once

#include <vector>

#include "gtdmine/classifier.hpp"
#include "gtdmine/token_io.hpp"

namespace gtdmine {

struct KStarConfig {
    double blend = 0.2;  // (0, 1]
};

/// K*: class mass is the summed transformation probability from the query
/// to each stored instance of that class.
class KStarModel final : public Classifier {
public:
    std::vector<std::size_t> cardinalities;
    KStarConfig config;
    std::vector<EncodedRecord> instances;

    Family family() const override { return Family::KStar; }
    ClassProbabilities predict(const EncodedRecord& record) const override;
    void write_payload(std::ostream& out) const override;
    static KStarModel read_payload(TokenReader& in);
};

/// Per-attribute stop parameter s = blend * (m - 1) / m for m codes, so
/// blend 1 makes every code equally likely and blend -> 0 approaches
/// nearest-neighbour behaviour. Throws InvalidHyperparameter.
double kstar_stop_parameter(double blend, std::size_t codes);

/// log P(b | a) for one attribute: log(1 - s) if a == b, else log(s / (m - 1)).
double kstar_log_transform(double blend, std::size_t codes, bool same);

KStarModel train_kstar(const Dataset& data, const KStarConfig& config);

/// Throws EmptyDataset.
ClassProbabilities kstar_predict(const Dataset& data, const EncodedRecord& record, const KStarConfig& config);

}  // namespace gtdmine
