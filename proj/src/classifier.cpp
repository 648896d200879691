#include "gtdmine/classifier.hpp"

#include <cmath>

#include "gtdmine/decision_tree.hpp"
#include "gtdmine/error.hpp"
#include "gtdmine/kstar.hpp"
#include "gtdmine/mlp.hpp"
#include "gtdmine/naive_bayes.hpp"
#include "gtdmine/neighbors.hpp"
#include "gtdmine/one_vs_rest.hpp"
#include "gtdmine/random_forest.hpp"

namespace gtdmine {

std::string_view family_tag(Family family) {
    switch (family) {
        case Family::NaiveBayes: return "nb";
        case Family::DecisionTree: return "tree";
        case Family::RandomForest: return "forest";
        case Family::IbkLinear: return "ibk-linear";
        case Family::IbkBallTree: return "ibk-ball";
        case Family::KStar: return "kstar";
        case Family::Mlp: return "mlp";
        case Family::OneVsRest: return "ovr";
    }
    return "?";
}

std::optional<Family> parse_family(std::string_view tag) {
    for (auto f : kAllFamilies) {
        if (family_tag(f) == tag) return f;
    }
    return std::nullopt;
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(Errc::InvalidHyperparameter, what);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void validate(const ClassifierConfig& c) {
    require(finite(c.alpha) && c.alpha >= 0, "alpha must be a non-negative finite value");
    require(c.min_leaf >= 1, "min_leaf must be at least 1");
    require(c.trees >= 1, "trees must be at least 1");
    require(c.threads >= 1, "threads must be at least 1");
    require(c.k >= 1, "k must be at least 1");
    require(finite(c.blend) && c.blend > 0 && c.blend <= 1, "blend must lie in (0, 1]");
    for (auto h : c.hidden) require(h >= 1, "hidden layer sizes must be positive");
    require(finite(c.eta) && c.eta > 0, "eta must be a positive finite value");
    require(c.epochs >= 1, "epochs must be at least 1");
    require(finite(c.ovr_eta) && c.ovr_eta > 0, "ovr_eta must be a positive finite value");
    require(c.ovr_epochs >= 1, "ovr_epochs must be at least 1");
    require(finite(c.ovr_l2) && c.ovr_l2 >= 0, "ovr_l2 must be a non-negative finite value");
}

std::unique_ptr<Classifier> train_classifier(const ClassifierConfig& c, const Dataset& data, std::uint64_t seed) {
    validate(c);
    switch (c.family) {
        case Family::NaiveBayes:
            return std::make_unique<NaiveBayesModel>(train_naive_bayes(data, c.alpha));
        case Family::DecisionTree:
            return std::make_unique<DecisionTree>(train_decision_tree(data, c.min_leaf));
        case Family::RandomForest: {
            ForestOptions o;
            o.n_trees = c.trees;
            o.mtry = c.mtry;
            o.min_leaf = c.min_leaf;
            o.bootstrap = c.bootstrap;
            o.threads = c.threads;
            return std::make_unique<RandomForest>(train_random_forest(data, o, seed));
        }
        case Family::IbkLinear:
            return std::make_unique<KnnModel>(train_knn(data, c.k, NeighborVariant::LinearScan));
        case Family::IbkBallTree:
            return std::make_unique<KnnModel>(train_knn(data, c.k, NeighborVariant::BallTree));
        case Family::KStar:
            return std::make_unique<KStarModel>(train_kstar(data, KStarConfig{c.blend}));
        case Family::Mlp: {
            MlpOptions o{c.hidden, c.eta, c.epochs};
            return std::make_unique<MlpModel>(train_mlp(data, o, seed).model);
        }
        case Family::OneVsRest: {
            OvrOptions o{c.ovr_eta, c.ovr_epochs, c.ovr_l2};
            return std::make_unique<OneVsRestModel>(train_one_vs_rest(data, o, seed));
        }
    }
    throw Error(Errc::InvalidHyperparameter, "unknown classifier family");
}

}  // namespace gtdmine
