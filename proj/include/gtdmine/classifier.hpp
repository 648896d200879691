#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "gtdmine/dataset.hpp"
#include "gtdmine/probabilities.hpp"

namespace gtdmine {

enum class Family {
    NaiveBayes,
    DecisionTree,
    RandomForest,
    IbkLinear,
    IbkBallTree,
    KStar,
    Mlp,
    OneVsRest,
};

inline constexpr std::array<Family, 8> kAllFamilies = {
    Family::NaiveBayes, Family::DecisionTree, Family::RandomForest, Family::IbkLinear,
    Family::IbkBallTree, Family::KStar,       Family::Mlp,          Family::OneVsRest};

/// Command-line tag: nb, tree, forest, ibk-linear, ibk-ball, kstar, mlp, ovr.
std::string_view family_tag(Family family);
std::optional<Family> parse_family(std::string_view tag);

/// A trained model. Immutable; predict is safe to call concurrently.
class Classifier {
public:
    virtual ~Classifier() = default;

    virtual Family family() const = 0;
    virtual ClassProbabilities predict(const EncodedRecord& record) const = 0;
    /// Family-specific body of the persisted model file.
    virtual void write_payload(std::ostream& out) const = 0;
    /// Non-fatal training conditions (e.g. a single class present).
    virtual std::vector<std::string> warnings() const { return {}; }
};

/// Hyperparameters for every family; each family reads its own fields.
struct ClassifierConfig {
    Family family = Family::NaiveBayes;

    double alpha = 1.0;  // naive Bayes pseudo-count

    std::size_t min_leaf = 1;  // trees and forests

    std::size_t trees = 25;
    std::size_t mtry = 0;  // 0: ceil(sqrt(feature count))
    bool bootstrap = true;
    std::size_t threads = 1;

    std::size_t k = 1;  // IBk neighbours

    double blend = 0.2;  // K*

    std::vector<std::size_t> hidden;  // MLP; empty: one layer of max(4, width / 2)
    double eta = 0.3;
    std::size_t epochs = 500;

    double ovr_eta = 0.1;
    std::size_t ovr_epochs = 100;
    double ovr_l2 = 1e-4;
};

/// Throws InvalidHyperparameter for out-of-range settings.
void validate(const ClassifierConfig& config);

std::unique_ptr<Classifier> train_classifier(const ClassifierConfig& config, const Dataset& data,
                                             std::uint64_t seed);

}  // namespace gtdmine
