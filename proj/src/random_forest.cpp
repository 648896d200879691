#include "gtdmine/random_forest.hpp"

#include <cmath>
#include <thread>

#include "gtdmine/error.hpp"

namespace gtdmine {

namespace {

DecisionTree train_member(const Dataset& data, const ForestOptions& options, std::size_t mtry,
                          std::uint64_t seed, std::size_t t) {
    Rng rng(mix_seed(seed, t));
    std::vector<std::size_t> rows(data.size());
    if (options.bootstrap) {
        for (auto& r : rows) r = static_cast<std::size_t>(rng.uniform_index(data.size()));
    } else {
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    }
    return grow_tree(data, rows, TreeGrowth{options.min_leaf, mtry}, &rng);
}

}  // namespace

RandomForest train_random_forest(const Dataset& data, const ForestOptions& options, std::uint64_t seed) {
    if (data.empty()) throw Error(Errc::EmptyDataset, "cannot train a forest on zero records");
    if (options.n_trees < 1) throw Error(Errc::InvalidHyperparameter, "a forest needs at least one tree");
    const auto features = data.schema().feature_count();
    std::size_t mtry = options.mtry;
    if (mtry == 0) mtry = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(features))));
    if (features > 0 && (mtry < 1 || mtry > features)) {
        throw Error(Errc::InvalidHyperparameter,
                    "mtry must be in [1, " + std::to_string(features) + "], got " + std::to_string(mtry));
    }

    RandomForest forest;
    forest.mtry = mtry;
    forest.seed = seed;
    forest.bootstrap = options.bootstrap;
    forest.trees.resize(options.n_trees);
    const auto workers = std::max<std::size_t>(1, std::min(options.threads, options.n_trees));
    if (workers == 1) {
        for (std::size_t t = 0; t < options.n_trees; ++t) forest.trees[t] = train_member(data, options, mtry, seed, t);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> failures(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t t = w; t < options.n_trees; t += workers) {
                        forest.trees[t] = train_member(data, options, mtry, seed, t);
                    }
                } catch (...) {
                    failures[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& f : failures) {
            if (f) std::rethrow_exception(f);
        }
    }
    return forest;
}

ClassProbabilities RandomForest::predict(const EncodedRecord& record) const {
    ClassScores sum{};
    for (const auto& tree : trees) {
        const auto p = predict_tree(tree, record);
        for (std::size_t c = 0; c < kClassCount; ++c) sum[c] += p.at(c);
    }
    for (auto& s : sum) s /= static_cast<double>(trees.size());
    return ClassProbabilities::from_scores(sum);
}

void RandomForest::write_payload(std::ostream& out) const {
    out << "trees " << trees.size() << " mtry " << mtry << " seed " << seed << " bootstrap "
        << (bootstrap ? 1 : 0) << '\n';
    for (const auto& t : trees) {
        out << "tree\n";
        t.write_payload(out);
    }
}

RandomForest RandomForest::read_payload(TokenReader& in) {
    RandomForest f;
    in.expect("trees");
    const auto n = in.count();
    in.expect("mtry");
    f.mtry = in.count();
    in.expect("seed");
    f.seed = in.u64();
    in.expect("bootstrap");
    f.bootstrap = in.count() != 0;
    if (n == 0) throw Error(Errc::CorruptPayload, "forest without trees");
    f.trees.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
        in.expect("tree");
        f.trees.push_back(DecisionTree::read_payload(in));
    }
    return f;
}

}  // namespace gtdmine
