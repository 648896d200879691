#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "gtdmine/decision_tree.hpp"
#include "gtdmine/error.hpp"
#include "gtdmine/kstar.hpp"
#include "gtdmine/mlp.hpp"
#include "gtdmine/model_io.hpp"
#include "gtdmine/naive_bayes.hpp"
#include "gtdmine/neighbors.hpp"
#include "gtdmine/one_vs_rest.hpp"
#include "gtdmine/random_forest.hpp"
#include "gtdmine/synthetic.hpp"
#include "support.hpp"

using namespace gtdmine;
using testsupport::toy_dataset;

namespace {

constexpr ClassLabel Yes = ClassLabel::Claimed;
constexpr ClassLabel No = ClassLabel::NotClaimed;

Errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no gtdmine::Error thrown");
    return Errc::IoError;
}

const std::vector<std::vector<std::string>> kTennisRows = {
    {"Sunny", "Hot", "High", "Weak"},        {"Sunny", "Hot", "High", "Strong"},
    {"Overcast", "Hot", "High", "Weak"},     {"Rain", "Mild", "High", "Weak"},
    {"Rain", "Cool", "Normal", "Weak"},      {"Rain", "Cool", "Normal", "Strong"},
    {"Overcast", "Cool", "Normal", "Strong"}, {"Sunny", "Mild", "High", "Weak"},
    {"Sunny", "Cool", "Normal", "Weak"},     {"Rain", "Mild", "Normal", "Weak"},
    {"Sunny", "Mild", "Normal", "Strong"},   {"Overcast", "Mild", "High", "Strong"},
    {"Overcast", "Hot", "Normal", "Weak"},   {"Rain", "Mild", "High", "Strong"}};
const std::vector<ClassLabel> kTennisLabels = {No, No, Yes, Yes, Yes, No, Yes, No, Yes, Yes, Yes, Yes, Yes, No};

Dataset tennis() {
    return toy_dataset({{"outlook", {"Sunny", "Overcast", "Rain"}},
                        {"temperature", {"Hot", "Mild", "Cool"}},
                        {"humidity", {"High", "Normal"}},
                        {"wind", {"Weak", "Strong"}}},
                       kTennisRows, kTennisLabels);
}

EncodedRecord tennis_record(const Dataset& d, const std::vector<std::string>& codes) {
    EncodedRecord r;
    for (std::size_t f = 0; f < codes.size(); ++f) r.codes.push_back(*d.schema().code_index(f, codes[f]));
    return r;
}

double sum(const ClassProbabilities& p) { return p.at(0) + p.at(1) + p.at(2); }

Dataset rand_dataset(std::uint64_t seed, std::size_t n, std::size_t attrs = 5, std::size_t max_codes = 4) {
    Rng rng(seed);
    const auto spec = testsupport::random_spec(rng, attrs, max_codes);
    return generate_synthetic(spec, n, rng.next()).dataset;
}

Dataset noisy(std::size_t n, std::uint64_t seed) {
    return generate_synthetic(testsupport::noisy_spec(5, 2, 0.6), n, seed).dataset;
}

}  // namespace

TEST_CASE("entropy") {
    CHECK(std::abs(entropy(ClassCounts{9, 5, 0}) - 0.9403) <= 5e-5);
    CHECK(entropy(ClassCounts{4, 0, 0}) == 0.0);
    CHECK(entropy(ClassCounts{1, 1, 1}) == doctest::Approx(std::log2(3.0)));
    CHECK(code_of([] { entropy(ClassCounts{0, 0, 0}); }) == Errc::EmptyCounts);
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        ClassCounts c{rng.uniform_index(20), rng.uniform_index(20), 1 + rng.uniform_index(20)};
        const double h = entropy(c);
        CHECK(h >= 0);
        CHECK(h <= std::log2(3.0) + 1e-12);
    }
}

TEST_CASE("information gain on the 14-row toy table matches a brute-force oracle") {
    const auto d = tennis();
    auto h = [](const std::vector<ClassLabel>& ls) {
        std::map<ClassLabel, double> c;
        for (auto l : ls) c[l] += 1;
        double e = 0;
        for (const auto& [l, n] : c) e -= n / ls.size() * std::log2(n / ls.size());
        return e;
    };
    const double parent = h(kTennisLabels);
    for (std::size_t f = 0; f < 4; ++f) {
        std::map<std::string, std::vector<ClassLabel>> parts;
        for (std::size_t i = 0; i < kTennisRows.size(); ++i) parts[kTennisRows[i][f]].push_back(kTennisLabels[i]);
        double children = 0;
        for (const auto& [v, ls] : parts) children += static_cast<double>(ls.size()) / 14.0 * h(ls);
        CHECK(information_gain(d, f) == doctest::Approx(parent - children).epsilon(1e-12));
    }
    CHECK(information_gain(d, 0) == doctest::Approx(0.24674981977443933));
    CHECK(information_gain(d, 2) == doctest::Approx(0.15183550136234159));
}

TEST_CASE("information gain edge cases") {
    const auto constant = toy_dataset({{"a", {"x", "y"}}, {"b", {"p", "q"}}}, {{"x", "p"}, {"x", "q"}, {"x", "p"}, {"x", "q"}},
                                      {Yes, No, Yes, No});
    CHECK(information_gain(constant, 0) == 0.0);
    CHECK(information_gain(constant, 1) == doctest::Approx(entropy(constant.class_counts())));
    const auto d = rand_dataset(11, 300);
    for (std::size_t f = 0; f < d.schema().feature_count(); ++f) {
        const double g = information_gain(d, f);
        CHECK(g >= 0);
        CHECK(g <= entropy(d.class_counts()) + 1e-12);
    }
}

TEST_CASE("decision tree on the toy table") {
    const auto d = tennis();
    const auto tree = train_decision_tree(d);
    CHECK(tree.nodes[0].feature == 0);
    for (const auto& r : d.records()) CHECK(tree.predict(r)[r.label] == 1.0);
    const auto p = tree.predict(tennis_record(d, {"Sunny", "Cool", "High", "Strong"}));
    CHECK(p[No] == 1.0);
    const auto q = tree.predict(tennis_record(d, {"Rain", "Hot", "High", "Weak"}));
    CHECK(q[Yes] == 1.0);

    // Unknown outlook stops at the root and returns its distribution.
    const auto u = tree.predict(tennis_record(d, {"U", "Hot", "High", "Weak"}));
    CHECK(u[Yes] == doctest::Approx(9.0 / 14));
    CHECK(u[No] == doctest::Approx(5.0 / 14));
    CHECK(tree.terminal_node(tennis_record(d, {"U", "Hot", "High", "Weak"})) == 0);
    CHECK(tree.depth() == 2);
}

TEST_CASE("decision tree basics") {
    const auto single = generate_synthetic(separable_spec(3, 2, {1, 0, 0}), 40, 2).dataset;
    const auto t = train_decision_tree(single);
    CHECK(t.nodes.size() == 1);
    CHECK(t.predict(single[0])[ClassLabel::Claimed] == 1.0);
    CHECK(code_of([&] { train_decision_tree(single.subset(std::vector<std::size_t>{})); }) == Errc::EmptyDataset);

    // min_leaf stops growth early.
    const auto d = noisy(400, 3);
    CHECK(train_decision_tree(d, 50).nodes.size() < train_decision_tree(d, 1).nodes.size());
}

TEST_CASE("random forest") {
    const auto d = noisy(500, 4);
    SUBCASE("one tree, all attributes, no bootstrap equals a single tree") {
        ForestOptions o;
        o.n_trees = 1;
        o.mtry = d.schema().feature_count();
        o.bootstrap = false;
        const auto forest = train_random_forest(d, o, 9);
        const auto tree = train_decision_tree(d);
        for (const auto& r : d.records()) CHECK(forest.predict(r) == tree.predict(r));
    }
    SUBCASE("deterministic and thread-count independent") {
        ForestOptions o;
        const auto a = train_random_forest(d, o, 21);
        o.threads = 4;
        const auto b = train_random_forest(d, o, 21);
        std::ostringstream pa, pb;
        a.write_payload(pa);
        b.write_payload(pb);
        CHECK(pa.str() == pb.str());
        const auto probe = noisy(1000, 99);
        for (const auto& r : probe.records()) CHECK(a.predict(r) == b.predict(r));
        const auto c = train_random_forest(d, ForestOptions{}, 22);
        std::ostringstream pc;
        c.write_payload(pc);
        CHECK(pc.str() != pa.str());
    }
    SUBCASE("default mtry") {
        const auto f = train_random_forest(d, ForestOptions{}, 1);
        CHECK(f.mtry == 3);  // ceil(sqrt(5))
        CHECK(f.trees.size() == 25);
    }
    SUBCASE("separable data, holdout accuracy >= 0.99") {
        const auto spec = separable_spec(6, 2);
        const auto train = generate_synthetic(spec, 1000, 1).dataset;
        const auto test = generate_synthetic(spec, 1000, 2).dataset;
        const auto f = train_random_forest(train, ForestOptions{}, 3);
        std::size_t ok = 0;
        for (const auto& r : test.records()) ok += f.predict(r).argmax() == r.label;
        CHECK(static_cast<double>(ok) / 1000 >= 0.99);
    }
    SUBCASE("invalid options") {
        ForestOptions o;
        o.n_trees = 0;
        CHECK(code_of([&] { train_random_forest(d, o, 1); }) == Errc::InvalidHyperparameter);
    }
}

TEST_CASE("naive Bayes on an 8-row toy table") {
    std::vector<std::vector<std::string>> rows;
    std::vector<ClassLabel> labels;
    for (std::size_t i = 0; i < 8; ++i) {
        rows.push_back({kTennisRows[i][0], kTennisRows[i][3]});
        labels.push_back(kTennisLabels[i]);
    }
    const auto d = toy_dataset({{"outlook", {"Sunny", "Overcast", "Rain"}}, {"wind", {"Weak", "Strong"}}}, rows, labels);
    const auto m = train_naive_bayes(d, 1.0);
    CHECK(m.priors[0] == 0.5);
    CHECK(m.priors[1] == 0.5);
    CHECK(m.priors[2] == 0.0);
    const std::vector<double> yes_outlook = {1.0 / 8, 3.0 / 8, 3.0 / 8, 1.0 / 8};
    const std::vector<double> no_outlook = {4.0 / 8, 1.0 / 8, 2.0 / 8, 1.0 / 8};
    const std::vector<double> yes_wind = {4.0 / 7, 2.0 / 7, 1.0 / 7};
    const std::vector<double> no_wind = {3.0 / 7, 3.0 / 7, 1.0 / 7};
    for (std::size_t c = 0; c < 4; ++c) {
        CHECK(m.cond[0][0][c] == doctest::Approx(yes_outlook[c]).epsilon(1e-12));
        CHECK(m.cond[0][1][c] == doctest::Approx(no_outlook[c]).epsilon(1e-12));
    }
    for (std::size_t c = 0; c < 3; ++c) {
        CHECK(m.cond[1][0][c] == doctest::Approx(yes_wind[c]).epsilon(1e-12));
        CHECK(m.cond[1][1][c] == doctest::Approx(no_wind[c]).epsilon(1e-12));
        CHECK(m.cond[1][2][c] == doctest::Approx(1.0 / 3));
    }
    // (Sunny, Strong): 1/2 * 1/8 * 2/7 against 1/2 * 4/8 * 3/7.
    const auto p = nb_posterior(m, tennis_record(d, {"Sunny", "Strong"}));
    CHECK(std::abs(p[Yes] - 1.0 / 7) <= 1e-9);
    CHECK(std::abs(p[No] - 6.0 / 7) <= 1e-9);
    CHECK(p[ClassLabel::Anonymous] == 0.0);
}

TEST_CASE("naive Bayes smoothing limits and symmetry") {
    const auto d = rand_dataset(4, 200);
    const auto raw = train_naive_bayes(d, 0.0);
    for (std::size_t f = 0; f < d.schema().feature_count(); ++f) {
        for (std::size_t c = 0; c < kClassCount; ++c) {
            std::vector<double> counts(d.schema().cardinality(f), 0.0);
            for (const auto& r : d.records()) if (index_of(r.label) == c) counts[r.codes[f]] += 1;
            for (std::size_t v = 0; v < counts.size(); ++v) {
                CHECK(raw.cond[f][c][v] == doctest::Approx(counts[v] / static_cast<double>(d.class_counts()[c])));
            }
        }
    }
    const auto flat = train_naive_bayes(d, 1e9);
    for (std::size_t f = 0; f < d.schema().feature_count(); ++f)
        for (const auto& row : flat.cond[f])
            for (double p : row) CHECK(std::abs(p - 1.0 / static_cast<double>(row.size())) <= 1e-6);

    // Identical class-conditionals with uniform priors give a uniform posterior.
    std::vector<std::vector<std::string>> rows;
    std::vector<ClassLabel> labels;
    for (auto l : kAllLabels) for (const char* v : {"x", "y"}) {
        rows.push_back({v});
        labels.push_back(l);
    }
    const auto sym = toy_dataset({{"a", {"x", "y"}}}, rows, labels);
    const auto ms = train_naive_bayes(sym, 1.0);
    const auto p = ms.predict(sym[0]);
    for (std::size_t c = 0; c < 3; ++c) CHECK(p.at(c) == doctest::Approx(1.0 / 3));

    // A code no class saw still yields a finite posterior.
    EncodedRecord unseen = d[0];
    for (std::size_t f = 0; f < unseen.codes.size(); ++f) unseen.codes[f] = static_cast<Code>(d.schema().cardinality(f) - 1);
    const auto q = train_naive_bayes(d, 1.0).predict(unseen);
    CHECK(std::isfinite(q.at(0)));
    CHECK(sum(q) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(code_of([&] { train_naive_bayes(d, -1); }) == Errc::InvalidHyperparameter);
    CHECK(code_of([&] { train_naive_bayes(d.subset(std::vector<std::size_t>{}), 1); }) == Errc::EmptyDataset);
}

TEST_CASE("argmax is invariant under positive rescaling of unnormalized scores") {
    const auto d = noisy(300, 8);
    const auto nb = train_naive_bayes(d, 1.0);
    const auto ovr = train_one_vs_rest(d, OvrOptions{}, 3);
    for (const auto& r : d.records()) {
        auto logs = nb_log_scores(nb, r);
        const auto base = argmax(logs);
        for (double c : {0.01, 7.0, 1e6}) {
            ClassScores scaled = logs;
            for (auto& s : scaled) s += std::log(c);
            CHECK(argmax(scaled) == base);
        }
        CHECK(nb.predict(r).argmax() == base);
        const auto scores = ovr_scores(ovr, r);
        for (double c : {0.01, 7.0, 1e6}) {
            ClassScores scaled = scores;
            for (auto& s : scaled) s *= c;
            CHECK(argmax(scaled) == argmax(scores));
            CHECK(ClassProbabilities::from_scores(scaled).argmax() == ovr.predict(r).argmax());
        }
    }
}

TEST_CASE("k-nearest neighbours") {
    const auto d = rand_dataset(12, 1000, 6, 5);
    const NeighborIndex linear(d.records(), NeighborVariant::LinearScan);
    const NeighborIndex ball(d.records(), NeighborVariant::BallTree);
    SUBCASE("k = 1 on a stored record with a unique code vector") {
        std::map<std::vector<Code>, int> seen;
        for (const auto& r : d.records()) ++seen[r.codes];
        for (const auto& r : d.records()) {
            if (seen[r.codes] != 1) continue;
            CHECK(knn_predict(linear, r, 1)[r.label] == 1.0);
            CHECK(knn_predict(ball, r, 1)[r.label] == 1.0);
        }
    }
    SUBCASE("k = N gives the training distribution") {
        const auto p = knn_predict(ball, d[0], d.size());
        for (std::size_t c = 0; c < 3; ++c) {
            CHECK(p.at(c) == doctest::Approx(static_cast<double>(d.class_counts()[c]) / d.size()));
        }
    }
    SUBCASE("ball tree equals linear scan") {
        const auto probe = rand_dataset(13, 200, 6, 5);
        for (const auto* q : {&probe, &d}) {
            for (std::size_t i = 0; i < 200; ++i) {
                for (std::size_t k : {1, 3, 5}) {
                    CHECK(linear.nearest((*q)[i], k) == ball.nearest((*q)[i], k));
                }
            }
        }
    }
    SUBCASE("ties at the k-th distance go to the lowest record index") {
        const auto n = linear.nearest(d[0], 10);
        for (std::size_t i = 1; i < n.size(); ++i) {
            CHECK((n[i - 1].distance < n[i].distance ||
                   (n[i - 1].distance == n[i].distance && n[i - 1].index < n[i].index)));
        }
        for (std::size_t i = 0; i < d.size(); ++i) {
            const auto dist = overlap_distance(d[0].codes, d[i].codes);
            const bool inside = std::any_of(n.begin(), n.end(), [&](const Neighbor& x) { return x.index == i; });
            if (dist < n.back().distance || (dist == n.back().distance && i < n.back().index)) CHECK(inside);
        }
    }
    SUBCASE("filtered search restricts candidates") {
        const RecordFilter only_anonymous = [](const EncodedRecord& r, std::size_t) {
            return r.label == ClassLabel::Anonymous;
        };
        for (std::size_t i = 0; i < 50; ++i) {
            CHECK(knn_predict(linear, d[i], 3, only_anonymous)[ClassLabel::Anonymous] == 1.0);
            CHECK(linear.nearest(d[i], 3, only_anonymous) == ball.nearest(d[i], 3, only_anonymous));
        }
        const RecordFilter none = [](const EncodedRecord&, std::size_t) { return false; };
        CHECK(code_of([&] { linear.nearest(d[0], 1, none); }) == Errc::EmptyIndex);
    }
    SUBCASE("errors") {
        CHECK(code_of([&] { train_knn(d.subset(std::vector<std::size_t>{}), 1, NeighborVariant::BallTree); }) ==
              Errc::EmptyIndex);
        CHECK(code_of([&] { knn_predict(linear, d[0], 0); }) == Errc::InvalidHyperparameter);
    }
}

TEST_CASE("K*") {
    SUBCASE("stop parameter and transformation probabilities") {
        CHECK(kstar_stop_parameter(0.2, 5) == doctest::Approx(0.16));
        CHECK(kstar_stop_parameter(1.0, 4) == doctest::Approx(0.75));
        CHECK(std::exp(kstar_log_transform(1.0, 4, true)) == doctest::Approx(0.25));
        CHECK(std::exp(kstar_log_transform(1.0, 4, false)) == doctest::Approx(0.25));
        CHECK(code_of([] { kstar_stop_parameter(0.0, 4); }) == Errc::InvalidHyperparameter);
        CHECK(code_of([] { kstar_stop_parameter(1.5, 4); }) == Errc::InvalidHyperparameter);
    }
    SUBCASE("single class") {
        const auto d = generate_synthetic(separable_spec(3, 2, {0, 0, 1}), 30, 1).dataset;
        CHECK(kstar_predict(d, d[0], KStarConfig{})[ClassLabel::Anonymous] == 1.0);
    }
    SUBCASE("two equidistant instances of different classes") {
        const auto d = toy_dataset({{"a", {"x", "y", "z"}}, {"b", {"x", "y", "z"}}}, {{"x", "y"}, {"y", "x"}}, {Yes, No});
        const auto p = kstar_predict(d, tennis_record(d, {"x", "x"}), KStarConfig{});
        CHECK(p[Yes] == doctest::Approx(0.5));
        CHECK(p[No] == doctest::Approx(0.5));
    }
    SUBCASE("tiny blend behaves like 1-NN") {
        const auto d = rand_dataset(31, 300, 8, 5);
        const auto queries = rand_dataset(32, 2000, 8, 5);
        const NeighborIndex index(d.records(), NeighborVariant::LinearScan);
        std::size_t tested = 0;
        for (const auto& q : queries.records()) {
            const auto n = index.nearest(q, 2);
            if (n[0].distance == n[1].distance) continue;
            if (++tested > 200) break;
            CHECK(kstar_predict(d, q, KStarConfig{1e-6}).argmax() == d[n[0].index].label);
        }
        CHECK(tested > 200);
    }
}

TEST_CASE("MLP forward pass") {
    SUBCASE("zero weights") {
        const auto m = MlpModel::zeros({6, 4, 3}, 0.3);
        const std::vector<double> x = {1, 0, 0, 1, 0, 1};
        for (double y : mlp_forward(m, x)) CHECK(y == 0.5);
        const auto p = mlp_probabilities(m, x);
        for (std::size_t c = 0; c < 3; ++c) CHECK(p.at(c) == doctest::Approx(1.0 / 3));
    }
    SUBCASE("hand-set 2-2-1 network") {
        auto m = MlpModel::zeros({2, 2, 1}, 0.3);
        m.layers[0].weights = {0.5, -0.5, 0.3, 0.8};
        m.layers[0].bias = {0.1, -0.2};
        m.layers[1].weights = {1.0, -1.0};
        m.layers[1].bias = {0.2};
        const auto acts = mlp_activations(m, std::vector<double>{1, 0});
        CHECK(std::abs(acts[1][0] - 0.6456563062257954) <= 1e-9);
        CHECK(std::abs(acts[1][1] - 0.5249791874789399) <= 1e-9);
        CHECK(std::abs(acts[2][0] - 0.5794892623068133) <= 1e-9);
    }
    SUBCASE("saturation") {
        auto m = MlpModel::zeros({1, 1, 1}, 0.3);
        m.layers[0].weights = {50};
        CHECK(std::abs(mlp_activations(m, std::vector<double>{1})[1][0] - 1.0) <= 1e-9);
    }
    SUBCASE("shape errors") {
        const auto m = MlpModel::zeros({6, 4, 3}, 0.3);
        CHECK(code_of([&] { mlp_forward(m, std::vector<double>{1, 0}); }) == Errc::ShapeMismatch);
        CHECK(code_of([] { MlpModel::zeros({6, 3}, 0.3); }) == Errc::ShapeMismatch);
    }
}

TEST_CASE("MLP backpropagation") {
    Rng rng(17);
    auto m = MlpModel::zeros({6, 4, 3}, 0.25);
    for (auto& layer : m.layers) {
        for (auto& w : layer.weights) w = rng.uniform(-1, 1);
        for (auto& b : layer.bias) b = rng.uniform(-1, 1);
    }
    const std::vector<double> x = {1, 0, 0, 1, 0, 1};
    SUBCASE("error terms") {
        CHECK(output_error(std::vector<double>{1}, std::vector<double>{0.75})[0] == 0.25);
        CHECK(squared_error(std::vector<double>{0.5}) == 0.125);
        CHECK(squared_error(std::vector<double>{0.25, -0.5}) == 0.15625);
    }
    SUBCASE("target equal to output leaves weights unchanged") {
        const auto y = mlp_forward(m, x);
        for (const auto& layer_delta : mlp_deltas(m, x, y))
            for (double dj : layer_delta) CHECK(dj == 0.0);
        const auto next = mlp_backprop_step(m, x, y);
        for (std::size_t l = 0; l < m.layers.size(); ++l) CHECK(next.layers[l].weights == m.layers[l].weights);
    }
    SUBCASE("gradients agree with central differences") {
        const std::vector<double> d = {1, 0, 0};
        const auto g = mlp_gradient(m, x, d);
        for (std::size_t l = 0; l < m.layers.size(); ++l) {
            for (std::size_t i = 0; i < m.layers[l].weights.size(); ++i) {
                auto up = m, down = m;
                up.layers[l].weights[i] += 1e-5;
                down.layers[l].weights[i] -= 1e-5;
                const double numeric = (mlp_error(up, x, d) - mlp_error(down, x, d)) / 2e-5;
                CHECK(std::abs(numeric - g.weights[l][i]) <= 1e-4 * std::max({std::abs(numeric), std::abs(g.weights[l][i]), 1e-8}));
            }
        }
    }
    SUBCASE("update is eta times delta times the upstream output") {
        const std::vector<double> d = {0, 0, 1};
        const auto g = mlp_gradient(m, x, d);
        const auto next = mlp_backprop_step(m, x, d);
        for (std::size_t l = 0; l < m.layers.size(); ++l) {
            for (std::size_t i = 0; i < m.layers[l].weights.size(); ++i)
                CHECK(next.layers[l].weights[i] == doctest::Approx(m.layers[l].weights[i] - 0.25 * g.weights[l][i]).epsilon(1e-12));
            for (std::size_t j = 0; j < m.layers[l].bias.size(); ++j)
                CHECK(next.layers[l].bias[j] == doctest::Approx(m.layers[l].bias[j] - 0.25 * g.bias[l][j]).epsilon(1e-12));
        }
        CHECK(mlp_error(next, x, d) < mlp_error(m, x, d));
    }
}

TEST_CASE("MLP training") {
    const auto d = noisy(200, 5);
    SUBCASE("hyperparameter checks") {
        MlpOptions o;
        o.epochs = 0;
        CHECK(code_of([&] { train_mlp(d, o, 1); }) == Errc::InvalidHyperparameter);
        o.epochs = 5;
        o.eta = 0;
        CHECK(code_of([&] { train_mlp(d, o, 1); }) == Errc::InvalidHyperparameter);
    }
    SUBCASE("same seed gives identical weights") {
        MlpOptions o;
        o.epochs = 20;
        const auto a = train_mlp(d, o, 8), b = train_mlp(d, o, 8), c = train_mlp(d, o, 9);
        for (std::size_t l = 0; l < a.model.layers.size(); ++l) {
            CHECK(a.model.layers[l].weights == b.model.layers[l].weights);
            CHECK(a.model.layers[l].weights != c.model.layers[l].weights);
        }
        CHECK(a.epoch_error.size() == 20);
        const auto width = one_hot_width(d.schema().cardinalities());
        CHECK(a.model.layer_sizes == std::vector<std::size_t>{width, std::max<std::size_t>(4, width / 2), 3});
    }
    SUBCASE("XOR over two categorical attributes") {
        const auto xor_data = toy_dataset({{"a", {"0", "1"}}, {"b", {"0", "1"}}},
                                          {{"0", "0"}, {"0", "1"}, {"1", "0"}, {"1", "1"}}, {Yes, No, No, Yes});
        MlpOptions o;
        o.hidden = {4};
        o.eta = 0.5;
        o.epochs = 2000;
        const auto t = train_mlp(xor_data, o, 1);
        for (const auto& r : xor_data.records()) CHECK(t.model.predict(r).argmax() == r.label);
        CHECK(t.epoch_error.back() < t.epoch_error.front());
    }
}

TEST_CASE("MLP initial weights lie in [-0.5, 0.5]") {
    const auto d = noisy(50, 6);
    const auto t = train_mlp(d, MlpOptions{{}, 1e-300, 1}, 3);
    for (const auto& layer : t.model.layers) {
        for (double w : layer.weights) CHECK(std::abs(w) <= 0.5);
        for (double b : layer.bias) CHECK(std::abs(b) <= 0.5);
    }
}

TEST_CASE("one-vs-rest") {
    SUBCASE("linearly separable one-hot data is fit exactly") {
        const auto d = generate_synthetic(separable_spec(3, 1), 300, 4).dataset;
        const auto m = train_one_vs_rest(d, OvrOptions{}, 1);
        for (const auto& r : d.records()) CHECK(m.predict(r).argmax() == r.label);
    }
    SUBCASE("equal scores give a uniform distribution") {
        const auto d = noisy(30, 2);
        OneVsRestModel m;
        m.cardinalities = d.schema().cardinalities();
        for (auto& s : m.scorers) {
            s.weights.assign(one_hot_width(m.cardinalities), 0.3);
            s.bias = -1;
        }
        const auto p = m.predict(d[0]);
        for (std::size_t c = 0; c < 3; ++c) CHECK(p.at(c) == doctest::Approx(1.0 / 3));
    }
    SUBCASE("two classes: argmax follows the binary scorer's threshold") {
        const auto d = generate_synthetic(testsupport::noisy_spec(4, 2, 0.5), 400, 3).dataset.filter(
            [](const EncodedRecord& r) { return r.label != ClassLabel::Anonymous; });
        const auto m = train_one_vs_rest(d, OvrOptions{}, 5);
        std::size_t agree = 0;
        for (const auto& r : d.records()) {
            const double s = m.scorers[0].score(r, m.cardinalities);
            if (std::abs(s - 0.5) < 1e-9) continue;
            agree += m.predict(r).argmax() == (s > 0.5 ? Yes : No);
            CHECK(m.predict(r).argmax() == (s > 0.5 ? Yes : No));
            CHECK(s + m.scorers[1].score(r, m.cardinalities) == doctest::Approx(1.0).epsilon(1e-6));
        }
        CHECK(agree > 0);
    }
    SUBCASE("single class is degenerate with a warning") {
        const auto d = generate_synthetic(separable_spec(2, 2, {0, 1, 0}), 20, 1).dataset;
        const auto m = train_one_vs_rest(d, OvrOptions{}, 1);
        CHECK(m.degenerate);
        CHECK(m.warnings().size() == 1);
        CHECK(m.predict(d[0])[No] == 1.0);
    }
}

TEST_CASE("every family returns distributions summing to 1") {
    const auto d = noisy(300, 12);
    const auto probe = noisy(200, 13);
    for (auto family : kAllFamilies) {
        ClassifierConfig c;
        c.family = family;
        c.epochs = 30;
        c.k = 3;
        const auto m = train_classifier(c, d, 4);
        CHECK(m->family() == family);
        for (const auto& r : probe.records()) {
            const auto p = m->predict(r);
            CHECK(std::abs(sum(p) - 1.0) <= 1e-9);
            for (std::size_t i = 0; i < 3; ++i) CHECK(p.at(i) >= 0);
        }
    }
}

TEST_CASE("family tags and config validation") {
    for (auto f : kAllFamilies) CHECK(parse_family(family_tag(f)) == f);
    CHECK_FALSE(parse_family("svm").has_value());
    ClassifierConfig c;
    validate(c);
    c.blend = 0;
    CHECK(code_of([&] { validate(c); }) == Errc::InvalidHyperparameter);
    c = {};
    c.k = 0;
    CHECK(code_of([&] { validate(c); }) == Errc::InvalidHyperparameter);
    c = {};
    c.hidden = {4, 0};
    CHECK(code_of([&] { validate(c); }) == Errc::InvalidHyperparameter);
}

TEST_CASE("model persistence round trip for every family") {
    const auto d = noisy(300, 21);
    const auto probe = noisy(1000, 22);
    for (auto family : kAllFamilies) {
        CAPTURE(family_tag(family));
        ClassifierConfig c;
        c.family = family;
        c.epochs = 30;
        c.k = 3;
        const auto m = train_classifier(c, d, 4);
        std::stringstream io;
        write_model(*m, d.schema(), io);
        const auto text = io.str();
        const auto back = read_model(io);
        CHECK(back.family == family);
        CHECK(back.schema_fingerprint == d.schema().fingerprint());
        for (const auto& r : probe.records()) CHECK(back.model->predict(r) == m->predict(r));
        std::ostringstream again;
        write_model(*back.model, d.schema(), again);
        CHECK(again.str() == text);
    }
}

TEST_CASE("model loading errors") {
    const auto d = noisy(100, 3);
    const auto m = train_naive_bayes(d, 1);
    std::ostringstream os;
    write_model(m, d.schema(), os);
    const auto text = os.str();

    auto read = [](const std::string& s) {
        std::istringstream in(s);
        return read_model(in);
    };
    auto replaced = [&](const std::string& from, const std::string& to) {
        auto s = text;
        s.replace(s.find(from), from.size(), to);
        return s;
    };
    CHECK(code_of([&] { read(replaced("gtdmine-model 1", "gtdmine-model 2")); }) == Errc::FormatVersionMismatch);
    CHECK(code_of([&] { read(replaced("family nb", "family svm")); }) == Errc::CorruptPayload);
    CHECK(code_of([&] { read(text.substr(0, text.size() / 2)); }) == Errc::CorruptPayload);
    CHECK(code_of([&] { read(replaced("end", "more")); }) == Errc::CorruptPayload);
    CHECK(code_of([&] { read(replaced("alpha", "alpah")); }) == Errc::CorruptPayload);
    CHECK(code_of([&] { read("hello\n"); }) == Errc::CorruptPayload);

    const auto dir = testsupport::scratch_dir("model-io");
    const auto path = dir + "/nb.model";
    save_model(m, d.schema(), path);
    CHECK(load_model(path, d.schema())->predict(d[0]) == m.predict(d[0]));
    const auto other = generate_synthetic(separable_spec(2, 2), 10, 1).dataset;
    CHECK(code_of([&] { load_model(path, other.schema()); }) == Errc::SchemaFingerprintMismatch);
    CHECK(code_of([&] { load_model(dir + "/missing.model"); }) == Errc::FileNotFound);
}
