#include "gtdmine/folds.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

#include "gtdmine/error.hpp"
#include "gtdmine/rng.hpp"

namespace gtdmine {

namespace {

// Edmonds-Karp over an edge list; graphs here have k + 5 nodes.
class FlowGraph {
public:
    explicit FlowGraph(std::size_t nodes) : adj_(nodes) {}

    std::size_t add_edge(std::size_t from, std::size_t to, std::size_t cap) {
        adj_[from].push_back(edges_.size());
        edges_.push_back({to, cap});
        adj_[to].push_back(edges_.size());
        edges_.push_back({from, 0});
        return edges_.size() - 2;
    }

    std::size_t flow_on(std::size_t edge) const { return edges_[edge ^ 1].cap; }

    std::size_t max_flow(std::size_t source, std::size_t sink) {
        std::size_t total = 0;
        while (true) {
            std::vector<long> via(adj_.size(), -1);
            std::vector<std::size_t> queue{source};
            via[source] = -2;
            for (std::size_t qi = 0; qi < queue.size() && via[sink] == -1; ++qi) {
                const auto u = queue[qi];
                for (auto e : adj_[u]) {
                    const auto v = edges_[e].to;
                    if (edges_[e].cap > 0 && via[v] == -1) {
                        via[v] = static_cast<long>(e);
                        queue.push_back(v);
                    }
                }
            }
            if (via[sink] == -1) return total;
            std::size_t push = SIZE_MAX;
            for (auto v = sink; v != source; v = edges_[static_cast<std::size_t>(via[v]) ^ 1].to) {
                push = std::min(push, edges_[static_cast<std::size_t>(via[v])].cap);
            }
            for (auto v = sink; v != source; v = edges_[static_cast<std::size_t>(via[v]) ^ 1].to) {
                const auto e = static_cast<std::size_t>(via[v]);
                edges_[e].cap -= push;
                edges_[e ^ 1].cap += push;
            }
            total += push;
        }
    }

private:
    struct Edge {
        std::size_t to;
        std::size_t cap;
    };
    std::vector<std::vector<std::size_t>> adj_;
    std::vector<Edge> edges_;
};

// Rounds the quota matrix size_f * n_c / N to integers keeping every fold
// size and class count. Cells start at the floor; a max-flow picks which
// fractional cells round up.
std::vector<ClassCounts> fold_quotas(const ClassCounts& n, std::size_t k) {
    std::size_t total = 0;
    for (auto c : n) total += c;

    std::vector<std::size_t> size(k, total / k);
    for (std::size_t f = 0; f < total % k; ++f) ++size[f];

    const std::size_t source = 0;
    const std::size_t sink = k + kClassCount + 1;
    FlowGraph graph(k + kClassCount + 2);
    std::vector<ClassCounts> quota(k);
    ClassCounts class_deficit = n;
    std::vector<std::array<std::size_t, kClassCount>> edge(k);
    for (std::size_t f = 0; f < k; ++f) {
        std::size_t used = 0;
        for (std::size_t c = 0; c < kClassCount; ++c) {
            const auto num = size[f] * n[c];
            quota[f][c] = num / total;
            edge[f][c] = num % total != 0 ? graph.add_edge(1 + f, 1 + k + c, 1) : SIZE_MAX;
            used += quota[f][c];
            class_deficit[c] -= quota[f][c];
        }
        graph.add_edge(source, 1 + f, size[f] - used);
    }
    std::size_t needed = 0;
    for (std::size_t c = 0; c < kClassCount; ++c) {
        graph.add_edge(1 + k + c, sink, class_deficit[c]);
        needed += class_deficit[c];
    }
    if (graph.max_flow(source, sink) != needed) {
        throw Error(Errc::TooFewRecords, "fold quota rounding failed");
    }
    for (std::size_t f = 0; f < k; ++f) {
        for (std::size_t c = 0; c < kClassCount; ++c) {
            if (edge[f][c] != SIZE_MAX) quota[f][c] += graph.flow_on(edge[f][c]);
        }
    }
    return quota;
}

}  // namespace

FoldPlan stratified_kfold(std::span<const ClassLabel> labels, std::size_t k, std::uint64_t seed,
                          SmallClassPolicy policy) {
    const auto n = labels.size();
    if (k < 2) throw Error(Errc::InvalidHyperparameter, "k must be at least 2");
    if (n < k) {
        throw Error(Errc::TooFewRecords,
                    std::to_string(n) + " records cannot fill " + std::to_string(k) + " folds");
    }
    ClassCounts counts{};
    for (auto l : labels) ++counts[index_of(l)];

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    for (auto label : kAllLabels) {
        const auto c = counts[index_of(label)];
        if (c > 0 && c < k) {
            if (policy == SmallClassPolicy::Reject) {
                throw Error(Errc::ClassTooSmall, std::string(label_name(label)) + " has " +
                                                     std::to_string(c) + " records, fewer than k=" +
                                                     std::to_string(k));
            }
            plan.undersized.push_back(label);
        }
    }

    const auto quota = fold_quotas(counts, k);
    plan.folds.assign(k, {});
    Rng rng(seed);
    std::size_t cursor = 0;
    for (auto label : kAllLabels) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i) {
            if (labels[i] == label) members.push_back(i);
        }
        rng.shuffle(std::span(members));
        // Round-robin over folds, skipping folds whose quota for this class is full.
        std::vector<std::size_t> left(k);
        for (std::size_t f = 0; f < k; ++f) left[f] = quota[f][index_of(label)];
        for (auto idx : members) {
            while (left[cursor % k] == 0) ++cursor;
            const auto f = cursor % k;
            plan.folds[f].push_back(idx);
            --left[f];
            ++cursor;
        }
    }
    for (auto& fold : plan.folds) std::sort(fold.begin(), fold.end());
    return plan;
}

FoldPlan stratified_kfold(const Dataset& dataset, std::size_t k, std::uint64_t seed,
                          SmallClassPolicy policy) {
    std::vector<ClassLabel> labels;
    labels.reserve(dataset.size());
    for (const auto& r : dataset.records()) labels.push_back(r.label);
    return stratified_kfold(labels, k, seed, policy);
}

}  // namespace gtdmine
