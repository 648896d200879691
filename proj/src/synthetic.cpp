#include "gtdmine/synthetic.hpp"

#include <cmath>

#include "gtdmine/error.hpp"
#include "gtdmine/rng.hpp"

namespace gtdmine {

namespace {

constexpr double kSumTolerance = 1e-9;

std::size_t draw(Rng& rng, const std::vector<double>& probs) {
    const double u = rng.uniform01();
    double acc = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return i;
    }
    // u landed in the rounding slack above the last cumulative sum.
    for (std::size_t i = probs.size(); i > 0; --i) {
        if (probs[i - 1] > 0) return i - 1;
    }
    return 0;
}

bool sums_to_one(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) {
        if (!(x >= 0)) return false;
        s += x;
    }
    return std::abs(s - 1) <= kSumTolerance;
}

}  // namespace

void validate(const SyntheticSpec& spec) {
    if (spec.attribute_names.size() != spec.code_counts.size()) {
        throw Error(Errc::InvalidDistribution, "attribute names and code counts differ in length");
    }
    std::vector<double> weights(spec.class_weights.begin(), spec.class_weights.end());
    if (!sums_to_one(weights)) throw Error(Errc::InvalidDistribution, "class weights do not sum to 1");
    for (auto label : kAllLabels) {
        const auto c = index_of(label);
        if (spec.class_weights[c] == 0 && spec.conditionals[c].empty()) continue;
        const auto& cond = spec.conditionals[c];
        if (cond.size() != spec.code_counts.size()) {
            throw Error(Errc::InvalidDistribution,
                        std::string(label_name(label)) + ": one distribution per attribute expected");
        }
        for (std::size_t a = 0; a < cond.size(); ++a) {
            if (cond[a].size() != spec.code_counts[a] || !sums_to_one(cond[a])) {
                throw Error(Errc::InvalidDistribution, std::string(label_name(label)) + ", attribute '" +
                                                           spec.attribute_names[a] +
                                                           "': not a distribution over its codes");
            }
        }
    }
}

AttributeSchema synthetic_schema(const SyntheticSpec& spec) {
    std::vector<Attribute> attrs;
    for (std::size_t a = 0; a < spec.attribute_names.size(); ++a) {
        Attribute attr;
        attr.name = spec.attribute_names[a];
        attr.kind = AttributeKind::Categorical;
        for (std::size_t c = 0; c < spec.code_counts[a]; ++c) attr.codes.push_back("v" + std::to_string(c));
        attr.codes.emplace_back(kUnknownCode);
        attrs.push_back(std::move(attr));
    }
    Attribute cls;
    cls.name = "class";
    cls.kind = AttributeKind::Class;
    attrs.push_back(std::move(cls));
    return AttributeSchema(std::move(attrs));
}

SyntheticDraw generate_synthetic(const SyntheticSpec& spec, std::size_t n, std::uint64_t seed) {
    validate(spec);
    Rng rng(seed);
    const std::vector<double> weights(spec.class_weights.begin(), spec.class_weights.end());
    SyntheticDraw out;
    std::vector<EncodedRecord> records;
    records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = draw(rng, weights);
        ++out.tallies[c];
        EncodedRecord r;
        r.label = label_at(c);
        for (const auto& dist : spec.conditionals[c]) r.codes.push_back(static_cast<Code>(draw(rng, dist)));
        records.push_back(std::move(r));
    }
    out.dataset = Dataset(synthetic_schema(spec), std::move(records));
    return out;
}

SyntheticSpec separable_spec(std::size_t attributes, std::size_t codes_per_class,
                             std::array<double, kClassCount> class_weights) {
    SyntheticSpec spec;
    spec.class_weights = class_weights;
    const auto m = codes_per_class * kClassCount;
    for (std::size_t a = 0; a < attributes; ++a) {
        spec.attribute_names.push_back("a" + std::to_string(a));
        spec.code_counts.push_back(m);
    }
    for (std::size_t c = 0; c < kClassCount; ++c) {
        for (std::size_t a = 0; a < attributes; ++a) {
            std::vector<double> dist(m, 0.0);
            for (std::size_t j = 0; j < codes_per_class; ++j) {
                dist[c * codes_per_class + j] = 1.0 / static_cast<double>(codes_per_class);
            }
            spec.conditionals[c].push_back(std::move(dist));
        }
    }
    return spec;
}

SyntheticSpec uniform_spec(std::size_t attributes, std::size_t codes,
                           std::array<double, kClassCount> class_weights) {
    SyntheticSpec spec;
    spec.class_weights = class_weights;
    for (std::size_t a = 0; a < attributes; ++a) {
        spec.attribute_names.push_back("a" + std::to_string(a));
        spec.code_counts.push_back(codes);
    }
    for (std::size_t c = 0; c < kClassCount; ++c) {
        for (std::size_t a = 0; a < attributes; ++a) {
            spec.conditionals[c].emplace_back(codes, 1.0 / static_cast<double>(codes));
        }
    }
    return spec;
}

}  // namespace gtdmine
