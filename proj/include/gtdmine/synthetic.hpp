#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gtdmine/dataset.hpp"

namespace gtdmine {

/// Per-class categorical distributions for drawing synthetic datasets.
/// Attribute a has codes "v0".."v{m-1}" plus the "U" sentinel, which is
/// never drawn.
struct SyntheticSpec {
    std::vector<std::string> attribute_names;
    std::vector<std::size_t> code_counts;  // m per attribute, excluding "U"
    std::array<double, kClassCount> class_weights{};
    /// conditionals[class][attribute][code]; may be empty for zero-weight classes.
    std::array<std::vector<std::vector<double>>, kClassCount> conditionals;
};

struct SyntheticDraw {
    Dataset dataset;
    ClassCounts tallies{};  // labels drawn, counted as they were drawn
};

/// Throws InvalidDistribution when weights or a conditional row miss 1 by
/// more than 1e-9, or shapes disagree with code_counts.
void validate(const SyntheticSpec& spec);

SyntheticDraw generate_synthetic(const SyntheticSpec& spec, std::size_t n, std::uint64_t seed);

/// Class c draws attribute codes uniformly from its own block of
/// `codes_per_class` codes, so supports are disjoint across classes.
SyntheticSpec separable_spec(std::size_t attributes, std::size_t codes_per_class,
                             std::array<double, kClassCount> class_weights = {1.0 / 3, 1.0 / 3,
                                                                              1.0 / 3});

/// Same attribute layout, every class drawing uniformly over all codes.
SyntheticSpec uniform_spec(std::size_t attributes, std::size_t codes,
                           std::array<double, kClassCount> class_weights = {1.0 / 3, 1.0 / 3,
                                                                            1.0 / 3});

AttributeSchema synthetic_schema(const SyntheticSpec& spec);

}  // namespace gtdmine
