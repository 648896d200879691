#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gtdmine/classifier.hpp"
#include "gtdmine/token_io.hpp"

namespace gtdmine {

/// Number of positions at which two code vectors differ.
std::size_t overlap_distance(std::span<const Code> a, std::span<const Code> b);

enum class NeighborVariant { LinearScan, BallTree };

struct Neighbor {
    std::size_t index;
    std::size_t distance;

    bool operator==(const Neighbor&) const = default;
};

/// Restricts the candidate set; receives the stored record and its index.
using RecordFilter = std::function<bool(const EncodedRecord&, std::size_t)>;

/// k-nearest-neighbour search under overlap distance. Neighbours are ranked
/// by (distance, record index), so both variants return identical sets.
class NeighborIndex {
public:
    NeighborIndex(std::vector<EncodedRecord> points, NeighborVariant variant, std::size_t leaf_size = 16);

    NeighborVariant variant() const { return variant_; }
    const std::vector<EncodedRecord>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }

    /// Up to k neighbours, nearest first. Throws EmptyIndex when the index
    /// (or the filtered candidate set) is empty.
    std::vector<Neighbor> nearest(const EncodedRecord& query, std::size_t k,
                                  const RecordFilter& filter = {}) const;

private:
    struct Ball {
        std::size_t center;  // into centers_
        std::size_t radius;
        std::size_t begin;   // range into order_
        std::size_t end;
        int left = -1;
        int right = -1;
    };

    int build(std::size_t begin, std::size_t end);

    std::vector<EncodedRecord> points_;
    NeighborVariant variant_;
    std::size_t leaf_size_;
    std::vector<std::size_t> order_;
    std::vector<Ball> balls_;
    std::vector<std::vector<Code>> centers_;  // per-feature mode of each ball
};

/// Label frequencies among the k nearest stored records.
ClassProbabilities knn_predict(const NeighborIndex& index, const EncodedRecord& record, std::size_t k,
                               const RecordFilter& filter = {});

/// IBk: lazy k-NN over the stored training set.
class KnnModel final : public Classifier {
public:
    KnnModel(std::vector<std::size_t> cardinalities, NeighborIndex index, std::size_t k)
        : cardinalities(std::move(cardinalities)), index(std::move(index)), k(k) {}

    std::vector<std::size_t> cardinalities;
    NeighborIndex index;
    std::size_t k;

    Family family() const override;
    ClassProbabilities predict(const EncodedRecord& record) const override;
    void write_payload(std::ostream& out) const override;
    static KnnModel read_payload(TokenReader& in, NeighborVariant variant);
};

KnnModel train_knn(const Dataset& data, std::size_t k, NeighborVariant variant);

void write_records(std::ostream& out, const std::vector<EncodedRecord>& records);
std::vector<EncodedRecord> read_records(TokenReader& in, std::size_t features);

}  // namespace gtdmine
