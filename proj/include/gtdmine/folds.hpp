#pragma once

#include <cstdint>
#include <vector>

#include "gtdmine/dataset.hpp"

namespace gtdmine {

struct FoldPlan {
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<std::size_t>> folds;  // ascending record indices
    std::vector<ClassLabel> undersized;           // present classes with fewer than k records

    bool operator==(const FoldPlan&) const = default;
};

enum class SmallClassPolicy {
    Flag,    // keep going, list the class in FoldPlan::undersized
    Reject,  // throw ClassTooSmall
};

/// Stratified k-fold partition of [0, N). Fold sizes differ by at most one
/// and each fold's class counts are the floor or ceiling of
/// |fold| * n_class / N. Deterministic in (class sequence, k, seed).
FoldPlan stratified_kfold(const Dataset& dataset, std::size_t k, std::uint64_t seed,
                          SmallClassPolicy policy = SmallClassPolicy::Flag);
FoldPlan stratified_kfold(std::span<const ClassLabel> labels, std::size_t k, std::uint64_t seed,
                          SmallClassPolicy policy = SmallClassPolicy::Flag);

}  // namespace gtdmine
