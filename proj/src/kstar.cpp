#include "gtdmine/kstar.hpp"

#include <cmath>
#include <limits>

#include "gtdmine/error.hpp"
#include "gtdmine/neighbors.hpp"
#include "gtdmine/text.hpp"

namespace gtdmine {

double kstar_stop_parameter(double blend, std::size_t codes) {
    if (!(blend > 0 && blend <= 1)) {
        throw Error(Errc::InvalidHyperparameter, "K* blend must be in (0, 1], got " + format_double(blend));
    }
    if (codes <= 1) return 0;
    const auto m = static_cast<double>(codes);
    return blend * (m - 1) / m;
}

double kstar_log_transform(double blend, std::size_t codes, bool same) {
    const double s = kstar_stop_parameter(blend, codes);
    if (same) return std::log1p(-s);
    if (codes <= 1) return -std::numeric_limits<double>::infinity();
    return std::log(s / static_cast<double>(codes - 1));
}

namespace {

ClassProbabilities kstar_score(std::span<const EncodedRecord> instances, std::span<const std::size_t> cards,
                               const EncodedRecord& query, double blend) {
    std::vector<double> log_same(cards.size());
    std::vector<double> log_diff(cards.size());
    for (std::size_t f = 0; f < cards.size(); ++f) {
        log_same[f] = kstar_log_transform(blend, cards[f], true);
        log_diff[f] = kstar_log_transform(blend, cards[f], false);
    }
    // Log-sum-exp per class, accumulated in one pass with a running maximum.
    ClassScores top;
    top.fill(-std::numeric_limits<double>::infinity());
    ClassScores sum{};
    for (const auto& inst : instances) {
        double lp = 0;
        for (std::size_t f = 0; f < cards.size(); ++f) {
            lp += inst.codes[f] == query.codes[f] ? log_same[f] : log_diff[f];
        }
        if (std::isinf(lp)) continue;
        const auto c = index_of(inst.label);
        if (lp > top[c]) {
            sum[c] = sum[c] * std::exp(top[c] - lp) + 1.0;
            top[c] = lp;
        } else {
            sum[c] += std::exp(lp - top[c]);
        }
    }
    ClassScores log_mass;
    for (std::size_t c = 0; c < kClassCount; ++c) {
        log_mass[c] = sum[c] > 0 ? top[c] + std::log(sum[c]) : -std::numeric_limits<double>::infinity();
    }
    return ClassProbabilities::from_log_scores(log_mass, ClassProbabilities());
}

}  // namespace

KStarModel train_kstar(const Dataset& data, const KStarConfig& config) {
    if (data.empty()) throw Error(Errc::EmptyDataset, "K* needs at least one stored record");
    kstar_stop_parameter(config.blend, 2);
    KStarModel m;
    m.cardinalities = data.schema().cardinalities();
    m.config = config;
    m.instances = data.records();
    return m;
}

ClassProbabilities kstar_predict(const Dataset& data, const EncodedRecord& record, const KStarConfig& config) {
    if (data.empty()) throw Error(Errc::EmptyDataset, "K* needs at least one stored record");
    const auto cards = data.schema().cardinalities();
    return kstar_score(data.records(), cards, record, config.blend);
}

ClassProbabilities KStarModel::predict(const EncodedRecord& record) const {
    return kstar_score(instances, cardinalities, record, config.blend);
}

void KStarModel::write_payload(std::ostream& out) const {
    out << "blend " << format_double(config.blend) << '\n';
    out << "features " << cardinalities.size();
    for (auto m : cardinalities) out << ' ' << m;
    out << '\n';
    write_records(out, instances);
}

KStarModel KStarModel::read_payload(TokenReader& in) {
    KStarModel m;
    in.expect("blend");
    m.config.blend = in.real();
    in.expect("features");
    m.cardinalities = in.counts(in.count());
    m.instances = read_records(in, m.cardinalities.size());
    if (m.instances.empty()) throw Error(Errc::CorruptPayload, "K* model without instances");
    return m;
}

}  // namespace gtdmine
