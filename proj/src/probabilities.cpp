#include "gtdmine/probabilities.hpp"

#include <cmath>
#include <limits>

namespace gtdmine {

ClassProbabilities::ClassProbabilities() { p_.fill(1.0 / kClassCount); }

ClassProbabilities ClassProbabilities::from_scores(const ClassScores& scores) {
    double total = 0;
    for (double s : scores) total += s;
    ClassProbabilities out;
    if (!(total > 0)) return out;
    for (std::size_t i = 0; i < kClassCount; ++i) out.p_[i] = scores[i] / total;
    return out;
}

ClassProbabilities ClassProbabilities::from_log_scores(const ClassScores& log_scores,
                                                       const ClassProbabilities& fallback) {
    double top = -std::numeric_limits<double>::infinity();
    for (double s : log_scores) top = std::max(top, s);
    if (std::isinf(top) && top < 0) return fallback;
    ClassScores e{};
    for (std::size_t i = 0; i < kClassCount; ++i) e[i] = std::exp(log_scores[i] - top);
    return from_scores(e);
}

ClassProbabilities ClassProbabilities::certain(ClassLabel label) {
    ClassProbabilities out;
    out.p_.fill(0.0);
    out.p_[index_of(label)] = 1.0;
    return out;
}

ClassLabel ClassProbabilities::argmax() const { return gtdmine::argmax(p_); }

ClassLabel argmax(const ClassScores& scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < kClassCount; ++i) {
        if (scores[i] > scores[best]) best = i;
    }
    return label_at(best);
}

}  // namespace gtdmine
