#pragma once

#include <cstdint>
#include <vector>

#include "gtdmine/decision_tree.hpp"

namespace gtdmine {

struct ForestOptions {
    std::size_t n_trees = 25;
    std::size_t mtry = 0;  // 0: ceil(sqrt(feature count))
    std::size_t min_leaf = 1;
    bool bootstrap = true;
    std::size_t threads = 1;
};

class RandomForest final : public Classifier {
public:
    std::vector<DecisionTree> trees;
    std::size_t mtry = 1;
    std::uint64_t seed = 0;
    bool bootstrap = true;

    Family family() const override { return Family::RandomForest; }
    /// Mean of the trees' distributions.
    ClassProbabilities predict(const EncodedRecord& record) const override;
    void write_payload(std::ostream& out) const override;
    static RandomForest read_payload(TokenReader& in);
};

/// Tree t draws its bootstrap sample and split subsets from
/// mix_seed(seed, t), so serial and threaded training give the same forest.
RandomForest train_random_forest(const Dataset& data, const ForestOptions& options, std::uint64_t seed);

}  // namespace gtdmine
