#pragma once

#include <array>

#include "gtdmine/labels.hpp"

namespace gtdmine {

using ClassScores = std::array<double, kClassCount>;

/// Distribution over the three class labels; entries sum to 1.
class ClassProbabilities {
public:
    /// Uniform distribution.
    ClassProbabilities();

    /// Normalizes non-negative scores by their sum. All-zero scores give
    /// the uniform distribution.
    static ClassProbabilities from_scores(const ClassScores& scores);
    /// Normalizes log-domain scores (log-sum-exp). -inf entries get zero
    /// mass; if every entry is -inf the result is `fallback`.
    static ClassProbabilities from_log_scores(const ClassScores& log_scores,
                                              const ClassProbabilities& fallback);
    static ClassProbabilities certain(ClassLabel label);

    double operator[](ClassLabel label) const { return p_[index_of(label)]; }
    double at(std::size_t i) const { return p_[i]; }
    const ClassScores& values() const { return p_; }

    /// Most probable label; ties go to the lowest label index.
    ClassLabel argmax() const;

    bool operator==(const ClassProbabilities&) const = default;

private:
    ClassScores p_;
};

/// Index of the largest score, lowest index on ties.
ClassLabel argmax(const ClassScores& scores);

}  // namespace gtdmine
