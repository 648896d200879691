#pragma once

#include <array>
#include <vector>

#include "gtdmine/classifier.hpp"
#include "gtdmine/token_io.hpp"

namespace gtdmine {

/// Categorical naive Bayes with a Laplace pseudo-count.
class NaiveBayesModel final : public Classifier {
public:
    std::vector<std::size_t> cardinalities;
    double alpha = 1.0;
    ClassScores priors{};  // P(C_k)
    ClassCounts class_counts{};
    /// cond[feature][class][code] = P(x_i = code | C_k)
    std::vector<std::array<std::vector<double>, kClassCount>> cond;

    Family family() const override { return Family::NaiveBayes; }
    ClassProbabilities predict(const EncodedRecord& record) const override;
    void write_payload(std::ostream& out) const override;
    static NaiveBayesModel read_payload(TokenReader& in);
};

/// priors = class frequencies; cond = (count + alpha) / (class_count + alpha * m).
/// A class with no records (or alpha = 0 and no records) gets uniform rows.
NaiveBayesModel train_naive_bayes(const Dataset& data, double alpha);

/// Unnormalized log posterior: log P(C_k) + sum_i log P(x_i | C_k).
ClassScores nb_log_scores(const NaiveBayesModel& model, const EncodedRecord& record);

/// exp(log scores) renormalized, i.e. divided by the evidence P(x). Falls
/// back to the priors when every class has zero likelihood.
ClassProbabilities nb_posterior(const NaiveBayesModel& model, const EncodedRecord& record);

}  // namespace gtdmine
