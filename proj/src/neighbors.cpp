#include "gtdmine/neighbors.hpp"

#include <algorithm>
#include <queue>

#include "gtdmine/error.hpp"

namespace gtdmine {

std::size_t overlap_distance(std::span<const Code> a, std::span<const Code> b) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i] ? 1 : 0;
    return d;
}

namespace {

using Candidate = std::pair<std::size_t, std::size_t>;  // (distance, index)

// Per-feature most frequent code (lowest code on ties) of the points in a range.
std::vector<Code> mode_vector(const std::vector<EncodedRecord>& points, std::span<const std::size_t> members) {
    const auto width = points[members.front()].codes.size();
    std::vector<Code> mode(width, 0);
    std::vector<std::size_t> tally;
    for (std::size_t f = 0; f < width; ++f) {
        tally.clear();
        for (auto i : members) {
            const auto c = points[i].codes[f];
            if (c >= tally.size()) tally.resize(c + 1, 0);
            ++tally[c];
        }
        mode[f] = static_cast<Code>(std::max_element(tally.begin(), tally.end()) - tally.begin());
    }
    return mode;
}

}  // namespace

NeighborIndex::NeighborIndex(std::vector<EncodedRecord> points, NeighborVariant variant, std::size_t leaf_size)
    : points_(std::move(points)), variant_(variant), leaf_size_(std::max<std::size_t>(1, leaf_size)) {
    if (variant_ == NeighborVariant::BallTree && !points_.empty()) {
        order_.resize(points_.size());
        for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
        build(0, order_.size());
    }
}

int NeighborIndex::build(std::size_t begin, std::size_t end) {
    const auto id = static_cast<int>(balls_.size());
    const std::span<const std::size_t> members(order_.data() + begin, end - begin);
    Ball ball;
    ball.begin = begin;
    ball.end = end;
    centers_.push_back(mode_vector(points_, members));
    const auto& center = centers_.back();
    std::size_t radius = 0;
    std::size_t far_a = members.front();
    for (auto i : members) {
        const auto d = overlap_distance(points_[i].codes, center);
        if (d > radius) {
            radius = d;
            far_a = i;
        }
    }
    ball.center = static_cast<std::size_t>(id);
    ball.radius = radius;
    balls_.push_back(ball);
    if (end - begin <= leaf_size_ || radius == 0) return id;

    std::size_t far_b = far_a;
    std::size_t spread = 0;
    for (auto i : members) {
        const auto d = overlap_distance(points_[i].codes, points_[far_a].codes);
        if (d > spread) {
            spread = d;
            far_b = i;
        }
    }
    if (spread == 0) return id;
    const auto& pa = points_[far_a].codes;
    const auto& pb = points_[far_b].codes;
    const auto mid = std::stable_partition(order_.begin() + static_cast<long>(begin),
                                           order_.begin() + static_cast<long>(end), [&](std::size_t i) {
                                               return overlap_distance(points_[i].codes, pa) <=
                                                      overlap_distance(points_[i].codes, pb);
                                           });
    const auto split = static_cast<std::size_t>(mid - order_.begin());
    if (split == begin || split == end) return id;
    const int left = build(begin, split);
    const int right = build(split, end);
    balls_[static_cast<std::size_t>(id)].left = left;
    balls_[static_cast<std::size_t>(id)].right = right;
    return id;
}

std::vector<Neighbor> NeighborIndex::nearest(const EncodedRecord& query, std::size_t k,
                                             const RecordFilter& filter) const {
    if (points_.empty()) throw Error(Errc::EmptyIndex, "neighbour index holds no records");
    if (k == 0) throw Error(Errc::InvalidHyperparameter, "k must be at least 1");
    const auto accept = [&](std::size_t i) { return !filter || filter(points_[i], i); };

    std::vector<Candidate> best;
    if (variant_ == NeighborVariant::LinearScan) {
        for (std::size_t i = 0; i < points_.size(); ++i) {
            if (accept(i)) best.emplace_back(overlap_distance(points_[i].codes, query.codes), i);
        }
        const auto keep = std::min(k, best.size());
        std::partial_sort(best.begin(), best.begin() + static_cast<long>(keep), best.end());
        best.resize(keep);
    } else {
        std::priority_queue<Candidate> heap;  // worst candidate on top
        auto offer = [&](Candidate c) {
            if (heap.size() < k) heap.push(c);
            else if (c < heap.top()) {
                heap.pop();
                heap.push(c);
            }
        };
        auto lower_bound = [&](int node) {
            const auto& b = balls_[static_cast<std::size_t>(node)];
            const auto d = overlap_distance(query.codes, centers_[b.center]);
            return d > b.radius ? d - b.radius : 0;
        };
        auto visit = [&](auto&& self, int node, std::size_t bound) -> void {
            // Strict comparison: a ball at exactly the k-th distance may hold a lower index.
            if (heap.size() == k && bound > heap.top().first) return;
            const auto& b = balls_[static_cast<std::size_t>(node)];
            if (b.left < 0) {
                for (auto pos = b.begin; pos < b.end; ++pos) {
                    const auto i = order_[pos];
                    if (accept(i)) offer({overlap_distance(points_[i].codes, query.codes), i});
                }
                return;
            }
            const auto bl = lower_bound(b.left);
            const auto br = lower_bound(b.right);
            if (bl <= br) {
                self(self, b.left, bl);
                self(self, b.right, br);
            } else {
                self(self, b.right, br);
                self(self, b.left, bl);
            }
        };
        visit(visit, 0, lower_bound(0));
        while (!heap.empty()) {
            best.push_back(heap.top());
            heap.pop();
        }
        std::reverse(best.begin(), best.end());
    }
    if (best.empty()) throw Error(Errc::EmptyIndex, "filter admits no stored records");
    std::vector<Neighbor> out;
    out.reserve(best.size());
    for (const auto& [d, i] : best) out.push_back({i, d});
    return out;
}

ClassProbabilities knn_predict(const NeighborIndex& index, const EncodedRecord& record, std::size_t k,
                               const RecordFilter& filter) {
    const auto neighbors = index.nearest(record, k, filter);
    ClassScores votes{};
    for (const auto& n : neighbors) votes[index_of(index.points()[n.index].label)] += 1.0;
    return ClassProbabilities::from_scores(votes);
}

Family KnnModel::family() const {
    return index.variant() == NeighborVariant::BallTree ? Family::IbkBallTree : Family::IbkLinear;
}

ClassProbabilities KnnModel::predict(const EncodedRecord& record) const { return knn_predict(index, record, k); }

void write_records(std::ostream& out, const std::vector<EncodedRecord>& records) {
    out << "records " << records.size() << '\n';
    for (const auto& r : records) {
        out << index_of(r.label);
        for (auto c : r.codes) out << ' ' << c;
        out << '\n';
    }
}

std::vector<EncodedRecord> read_records(TokenReader& in, std::size_t features) {
    in.expect("records");
    const auto n = in.count();
    std::vector<EncodedRecord> out(n);
    for (auto& r : out) {
        const auto label = in.count();
        if (label >= kClassCount) throw Error(Errc::CorruptPayload, "record label out of range");
        r.label = label_at(label);
        r.codes.resize(features);
        for (auto& c : r.codes) c = static_cast<Code>(in.count());
    }
    return out;
}

void KnnModel::write_payload(std::ostream& out) const {
    out << "k " << k << '\n';
    out << "features " << cardinalities.size();
    for (auto m : cardinalities) out << ' ' << m;
    out << '\n';
    write_records(out, index.points());
}

KnnModel KnnModel::read_payload(TokenReader& in, NeighborVariant variant) {
    in.expect("k");
    const auto k = in.count();
    in.expect("features");
    auto cards = in.counts(in.count());
    auto records = read_records(in, cards.size());
    if (k == 0 || records.empty()) throw Error(Errc::CorruptPayload, "k-NN model needs k >= 1 and records");
    return KnnModel(std::move(cards), NeighborIndex(std::move(records), variant), k);
}

KnnModel train_knn(const Dataset& data, std::size_t k, NeighborVariant variant) {
    if (data.empty()) throw Error(Errc::EmptyIndex, "k-NN needs at least one stored record");
    if (k == 0) throw Error(Errc::InvalidHyperparameter, "k must be at least 1");
    return KnnModel(data.schema().cardinalities(), NeighborIndex(data.records(), variant), k);
}

}  // namespace gtdmine
