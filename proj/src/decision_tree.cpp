#include "gtdmine/decision_tree.hpp"

#include <algorithm>
#include <cmath>

#include "gtdmine/error.hpp"

namespace gtdmine {

namespace {

constexpr double kGainEpsilon = 1e-12;

ClassCounts count_rows(const Dataset& data, std::span<const std::size_t> rows) {
    ClassCounts counts{};
    for (auto i : rows) ++counts[index_of(data[i].label)];
    return counts;
}

bool pure(const ClassCounts& counts) {
    std::size_t nonzero = 0;
    for (auto c : counts) nonzero += c > 0 ? 1 : 0;
    return nonzero <= 1;
}

// Per-code class counts of `rows` on feature f.
std::vector<ClassCounts> partition_counts(const Dataset& data, std::span<const std::size_t> rows,
                                          std::size_t f) {
    std::vector<ClassCounts> by_code(data.schema().cardinality(f), ClassCounts{});
    for (auto i : rows) ++by_code[data[i].codes[f]][index_of(data[i].label)];
    return by_code;
}

double gain_from_partition(const ClassCounts& parent, const std::vector<ClassCounts>& children) {
    std::size_t n = 0;
    for (auto c : parent) n += c;
    const double h = entropy(parent);
    double conditional = 0;
    for (const auto& child : children) {
        std::size_t m = 0;
        for (auto c : child) m += c;
        if (m == 0) continue;
        conditional += static_cast<double>(m) / static_cast<double>(n) * entropy(child);
    }
    return std::clamp(h - conditional, 0.0, h);
}

std::size_t nonempty_parts(const std::vector<ClassCounts>& children) {
    std::size_t parts = 0;
    for (const auto& child : children) {
        if (child[0] + child[1] + child[2] > 0) ++parts;
    }
    return parts;
}

class TreeBuilder {
public:
    TreeBuilder(const Dataset& data, const TreeGrowth& growth, Rng* rng)
        : data_(data), growth_(growth), rng_(rng) {}

    DecisionTree run(std::span<const std::size_t> rows) {
        tree_.cardinalities = data_.schema().cardinalities();
        tree_.min_leaf = growth_.min_leaf;
        std::vector<std::size_t> remaining(data_.schema().feature_count());
        for (std::size_t f = 0; f < remaining.size(); ++f) remaining[f] = f;
        build({rows.begin(), rows.end()}, remaining);
        return std::move(tree_);
    }

private:
    struct Choice {
        int feature = -1;
        std::vector<ClassCounts> parts;
    };

    Choice choose(std::span<const std::size_t> rows, const ClassCounts& counts,
                  const std::vector<std::size_t>& candidates) {
        Choice best;
        double best_gain = -1;
        int first_splitter = -1;
        std::vector<ClassCounts> splitter_parts;
        for (auto f : candidates) {
            auto parts = partition_counts(data_, rows, f);
            if (nonempty_parts(parts) < 2) continue;
            const double g = gain_from_partition(counts, parts);
            if (first_splitter < 0) {
                first_splitter = static_cast<int>(f);
                splitter_parts = parts;
            }
            if (g > best_gain) {
                best_gain = g;
                best.feature = static_cast<int>(f);
                best.parts = std::move(parts);
            }
        }
        if (best.feature >= 0 && best_gain <= kGainEpsilon) {
            best.feature = first_splitter;
            best.parts = std::move(splitter_parts);
        }
        return best;
    }

    int build(std::vector<std::size_t> rows, const std::vector<std::size_t>& remaining) {
        const auto id = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        const auto counts = count_rows(data_, rows);
        tree_.nodes[id].counts = counts;
        if (pure(counts) || rows.size() < growth_.min_leaf || remaining.empty()) return id;

        std::vector<std::size_t> candidates = remaining;
        const bool sampled = growth_.mtry > 0 && growth_.mtry < remaining.size() && rng_ != nullptr;
        if (sampled) {
            // Partial Fisher-Yates, then restore index order for tie-breaking.
            for (std::size_t i = 0; i < growth_.mtry; ++i) {
                const auto j = i + static_cast<std::size_t>(rng_->uniform_index(candidates.size() - i));
                std::swap(candidates[i], candidates[j]);
            }
            candidates.resize(growth_.mtry);
            std::sort(candidates.begin(), candidates.end());
        }
        auto choice = choose(rows, counts, candidates);
        if (choice.feature < 0 && sampled) choice = choose(rows, counts, remaining);
        if (choice.feature < 0) return id;

        const auto f = static_cast<std::size_t>(choice.feature);
        std::vector<std::vector<std::size_t>> child_rows(data_.schema().cardinality(f));
        for (auto i : rows) child_rows[data_[i].codes[f]].push_back(i);
        rows.clear();
        rows.shrink_to_fit();

        std::vector<std::size_t> next;
        for (auto g : remaining) {
            if (g != f) next.push_back(g);
        }
        std::vector<int> children(child_rows.size(), -1);
        for (std::size_t v = 0; v < child_rows.size(); ++v) {
            if (!child_rows[v].empty()) children[v] = build(std::move(child_rows[v]), next);
        }
        tree_.nodes[id].feature = choice.feature;
        tree_.nodes[id].children = std::move(children);
        return id;
    }

    const Dataset& data_;
    TreeGrowth growth_;
    Rng* rng_;
    DecisionTree tree_;
};

}  // namespace

double entropy(std::span<const std::size_t> counts) {
    std::size_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) throw Error(Errc::EmptyCounts, "entropy of an empty count vector");
    double h = 0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

double entropy(const ClassCounts& counts) { return entropy(std::span<const std::size_t>(counts)); }

double information_gain(const Dataset& data, std::span<const std::size_t> rows, std::size_t feature) {
    return gain_from_partition(count_rows(data, rows), partition_counts(data, rows, feature));
}

double information_gain(const Dataset& data, std::size_t feature) {
    std::vector<std::size_t> rows(data.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    return information_gain(data, rows, feature);
}

DecisionTree grow_tree(const Dataset& data, std::span<const std::size_t> rows, const TreeGrowth& growth,
                       Rng* rng) {
    if (rows.empty()) throw Error(Errc::EmptyDataset, "cannot grow a tree on zero records");
    return TreeBuilder(data, growth, rng).run(rows);
}

DecisionTree train_decision_tree(const Dataset& data, std::size_t min_leaf) {
    if (data.empty()) throw Error(Errc::EmptyDataset, "cannot grow a tree on zero records");
    std::vector<std::size_t> rows(data.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    return grow_tree(data, rows, TreeGrowth{min_leaf, 0}, nullptr);
}

std::size_t DecisionTree::terminal_node(const EncodedRecord& record) const {
    std::size_t at = 0;
    while (!nodes[at].leaf()) {
        const auto& node = nodes[at];
        const auto code = record.codes[static_cast<std::size_t>(node.feature)];
        if (code >= node.children.size() || node.children[code] < 0) break;
        at = static_cast<std::size_t>(node.children[code]);
    }
    return at;
}

std::size_t DecisionTree::depth() const {
    std::vector<std::size_t> d(nodes.size(), 0);
    std::size_t deepest = 0;
    // Children always have larger indices than their parent.
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        deepest = std::max(deepest, d[i]);
        for (int c : nodes[i].children) {
            if (c >= 0) d[static_cast<std::size_t>(c)] = d[i] + 1;
        }
    }
    return deepest;
}

ClassProbabilities predict_tree(const DecisionTree& tree, const EncodedRecord& record) {
    const auto& counts = tree.nodes[tree.terminal_node(record)].counts;
    ClassScores s{};
    for (std::size_t c = 0; c < kClassCount; ++c) s[c] = static_cast<double>(counts[c]);
    return ClassProbabilities::from_scores(s);
}

ClassProbabilities DecisionTree::predict(const EncodedRecord& record) const {
    return predict_tree(*this, record);
}

void DecisionTree::write_payload(std::ostream& out) const {
    out << "min_leaf " << min_leaf << '\n';
    out << "features " << cardinalities.size();
    for (auto m : cardinalities) out << ' ' << m;
    out << "\nnodes " << nodes.size() << '\n';
    for (const auto& n : nodes) {
        out << n.counts[0] << ' ' << n.counts[1] << ' ' << n.counts[2] << ' ' << n.feature;
        for (int c : n.children) out << ' ' << c;
        out << '\n';
    }
}

DecisionTree DecisionTree::read_payload(TokenReader& in) {
    DecisionTree t;
    in.expect("min_leaf");
    t.min_leaf = in.count();
    in.expect("features");
    t.cardinalities = in.counts(in.count());
    in.expect("nodes");
    const auto n = in.count();
    t.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& node = t.nodes[i];
        for (auto& c : node.counts) c = in.count();
        const auto f = in.integer();
        if (f < -1 || f >= static_cast<long long>(t.cardinalities.size())) {
            throw Error(Errc::CorruptPayload, "tree node has invalid feature " + std::to_string(f));
        }
        node.feature = static_cast<int>(f);
        if (f >= 0) {
            node.children.resize(t.cardinalities[static_cast<std::size_t>(f)]);
            for (auto& c : node.children) {
                const auto v = in.integer();
                if (v != -1 && (v <= static_cast<long long>(i) || v >= static_cast<long long>(n))) {
                    throw Error(Errc::CorruptPayload, "tree node has invalid child " + std::to_string(v));
                }
                c = static_cast<int>(v);
            }
        }
    }
    if (n == 0) throw Error(Errc::CorruptPayload, "tree without nodes");
    return t;
}

}  // namespace gtdmine
