#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gtdmine/classifier.hpp"
#include "gtdmine/rng.hpp"
#include "gtdmine/token_io.hpp"

namespace gtdmine {

/// Shannon entropy in bits, 0 log 0 = 0. Throws EmptyCounts on a zero total.
double entropy(std::span<const std::size_t> counts);
double entropy(const ClassCounts& counts);

/// Parent entropy minus the size-weighted entropy of the children obtained
/// by splitting `rows` on `feature`. Clamped to [0, parent entropy].
double information_gain(const Dataset& data, std::span<const std::size_t> rows, std::size_t feature);
double information_gain(const Dataset& data, std::size_t feature);

struct TreeNode {
    ClassCounts counts{};         // training records reaching this node
    int feature = -1;             // split feature, -1 for a leaf
    std::vector<int> children;    // node index per code, -1 where no record had the code

    bool leaf() const { return feature < 0; }
};

/// Multiway split tree over categorical codes; nodes[0] is the root.
class DecisionTree final : public Classifier {
public:
    std::vector<std::size_t> cardinalities;
    std::size_t min_leaf = 1;
    std::vector<TreeNode> nodes;

    Family family() const override { return Family::DecisionTree; }
    ClassProbabilities predict(const EncodedRecord& record) const override;
    void write_payload(std::ostream& out) const override;
    static DecisionTree read_payload(TokenReader& in);

    /// Index of the node where prediction for `record` stops.
    std::size_t terminal_node(const EncodedRecord& record) const;
    std::size_t depth() const;
};

struct TreeGrowth {
    std::size_t min_leaf = 1;
    /// Features sampled per split; 0 or >= remaining means all remaining.
    std::size_t mtry = 0;
};

/// Greedy top-down induction on max information gain; ties go to the lowest
/// feature index. A node becomes a leaf when it is pure, has fewer than
/// min_leaf rows, or no remaining feature partitions its rows. When the best
/// gain is zero but some feature still partitions the rows, the lowest such
/// feature is used. `rows` may repeat indices (bootstrap samples).
DecisionTree grow_tree(const Dataset& data, std::span<const std::size_t> rows, const TreeGrowth& growth,
                       Rng* rng);

/// Fully grown tree on every record. Throws EmptyDataset.
DecisionTree train_decision_tree(const Dataset& data, std::size_t min_leaf = 1);

/// Leaf distribution normalized; an unseen code at an internal node stops
/// there and returns that node's distribution.
ClassProbabilities predict_tree(const DecisionTree& tree, const EncodedRecord& record);

}  // namespace gtdmine
