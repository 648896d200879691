#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gtdmine/classifier.hpp"
#include "gtdmine/folds.hpp"

namespace gtdmine {

/// Rows are the true class, columns the predicted class.
struct ConfusionMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<std::size_t>> counts;

    static ConfusionMatrix zeros(std::vector<std::string> labels);
    /// The three responsibility classes in label order.
    static ConfusionMatrix for_classes();

    std::size_t size() const { return labels.size(); }
    std::size_t total() const;
    std::size_t trace() const;
    std::size_t support(std::size_t c) const;  // row sum

    bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix build_confusion(std::span<const std::pair<ClassLabel, ClassLabel>> pairs);
/// Throws UnknownLabel for a name outside `labels`.
ConfusionMatrix build_confusion(std::vector<std::string> labels,
                                std::span<const std::pair<std::string, std::string>> pairs);

struct ScoredPrediction {
    ClassLabel true_label = ClassLabel::Claimed;
    ClassProbabilities scores;
};

struct ClassMetrics {
    double tp_rate = 0;
    double fp_rate = 0;
    double precision = 0;
    double recall = 0;
    double f_measure = 0;
    double mcc = 0;
    std::optional<double> roc_area;  // absent when undefined for the class
    std::optional<double> prc_area;
    std::size_t support = 0;
    bool degenerate = false;  // some ratio was 0/0 and reported as 0

    bool operator==(const ClassMetrics&) const = default;
};

/// One-vs-rest binarization of every class. Areas are left empty.
/// Throws EmptyMatrix when the matrix holds no records.
std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& cm);

/// Binary metrics from raw counts, as used per class above.
ClassMetrics binary_metrics(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn);

/// Mann-Whitney statistic of scores[c], ties counted 1/2. Throws
/// DegenerateClass without both positives and negatives.
double roc_area(std::span<const ScoredPrediction> scored, ClassLabel c);
/// Descending-score sweep, tied scores forming one operating point,
/// trapezoids between points, anchored at (0, precision of the first
/// point with nonzero recall). Throws DegenerateClass without positives.
double prc_area(std::span<const ScoredPrediction> scored, ClassLabel c);

struct ReportRow {
    std::string label;
    ClassMetrics metrics;

    bool operator==(const ReportRow&) const = default;
};

struct EvaluationReport {
    std::vector<ReportRow> per_class;
    ClassMetrics weighted_avg;
    double accuracy = 0;
    ConfusionMatrix confusion;

    bool operator==(const EvaluationReport&) const = default;
};

/// Support-weighted mean of the rows; areas average over the rows that
/// define them.
ClassMetrics weighted_average(std::span<const ReportRow> rows);

/// Predicted label = argmax of the scores.
EvaluationReport evaluate_predictions(std::span<const ScoredPrediction> scored);
EvaluationReport evaluate_model(const Classifier& model, const Dataset& data);

struct CrossValidation {
    FoldPlan plan;
    std::vector<ScoredPrediction> predictions;  // by record index
    EvaluationReport report;
    std::vector<std::string> warnings;
};

/// Fold f trains with seed mix_seed(seed, f); held-out predictions are
/// pooled into one report.
CrossValidation cross_validate(const ClassifierConfig& config, const Dataset& data, std::size_t k,
                               std::uint64_t seed, SmallClassPolicy policy = SmallClassPolicy::Flag);

std::string render_report(const EvaluationReport& report);
/// Machine-readable form holding the full-precision values.
std::string render_report_csv(const EvaluationReport& report);
/// Inverse of render_report_csv. Throws CorruptPayload.
EvaluationReport parse_report_csv(std::istream& in);

}  // namespace gtdmine
