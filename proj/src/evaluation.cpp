#include "gtdmine/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <sstream>

#include "gtdmine/error.hpp"
#include "gtdmine/rng.hpp"
#include "gtdmine/text.hpp"

namespace gtdmine {

ConfusionMatrix ConfusionMatrix::zeros(std::vector<std::string> labels) {
    ConfusionMatrix cm;
    const auto n = labels.size();
    cm.labels = std::move(labels);
    cm.counts.assign(n, std::vector<std::size_t>(n, 0));
    return cm;
}

ConfusionMatrix ConfusionMatrix::for_classes() {
    std::vector<std::string> names;
    for (auto l : kAllLabels) names.emplace_back(label_name(l));
    return zeros(std::move(names));
}

std::size_t ConfusionMatrix::total() const {
    std::size_t t = 0;
    for (const auto& row : counts) t = std::accumulate(row.begin(), row.end(), t);
    return t;
}

std::size_t ConfusionMatrix::trace() const {
    std::size_t t = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
    return t;
}

std::size_t ConfusionMatrix::support(std::size_t c) const {
    return std::accumulate(counts[c].begin(), counts[c].end(), std::size_t{0});
}

ConfusionMatrix build_confusion(std::span<const std::pair<ClassLabel, ClassLabel>> pairs) {
    auto cm = ConfusionMatrix::for_classes();
    for (const auto& [t, p] : pairs) ++cm.counts[index_of(t)][index_of(p)];
    return cm;
}

ConfusionMatrix build_confusion(std::vector<std::string> labels,
                                std::span<const std::pair<std::string, std::string>> pairs) {
    auto cm = ConfusionMatrix::zeros(std::move(labels));
    auto find = [&](const std::string& name) {
        const auto it = std::find(cm.labels.begin(), cm.labels.end(), name);
        if (it == cm.labels.end()) throw Error(Errc::UnknownLabel, "label '" + name + "' is not a known class");
        return static_cast<std::size_t>(it - cm.labels.begin());
    };
    for (const auto& [t, p] : pairs) ++cm.counts[find(t)][find(p)];
    return cm;
}

namespace {

double ratio(double num, double den, bool& degenerate) {
    if (den == 0) {
        degenerate = true;
        return 0;
    }
    return num / den;
}

}  // namespace

ClassMetrics binary_metrics(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn) {
    ClassMetrics m;
    const double TP = static_cast<double>(tp), FP = static_cast<double>(fp);
    const double FN = static_cast<double>(fn), TN = static_cast<double>(tn);
    m.support = tp + fn;
    m.tp_rate = ratio(TP, TP + FN, m.degenerate);
    m.fp_rate = ratio(FP, FP + TN, m.degenerate);
    m.precision = ratio(TP, TP + FP, m.degenerate);
    m.recall = m.tp_rate;
    m.f_measure = ratio(2 * m.precision * m.recall, m.precision + m.recall, m.degenerate);
    const double den = (TP + FP) * (TP + FN) * (TN + FP) * (TN + FN);
    m.mcc = ratio(TP * TN - FP * FN, std::sqrt(den), m.degenerate);
    return m;
}

std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& cm) {
    const auto total = cm.total();
    if (total == 0) throw Error(Errc::EmptyMatrix, "confusion matrix holds no records");
    std::vector<ClassMetrics> out;
    for (std::size_t c = 0; c < cm.size(); ++c) {
        const auto tp = cm.counts[c][c];
        const auto fn = cm.support(c) - tp;
        std::size_t col = 0;
        for (std::size_t r = 0; r < cm.size(); ++r) col += cm.counts[r][c];
        const auto fp = col - tp;
        out.push_back(binary_metrics(tp, fp, fn, total - tp - fn - fp));
    }
    return out;
}

namespace {

struct Scored {
    double score;
    bool positive;
};

std::vector<Scored> one_vs_rest(std::span<const ScoredPrediction> scored, ClassLabel c, std::size_t& pos) {
    std::vector<Scored> v;
    v.reserve(scored.size());
    pos = 0;
    for (const auto& s : scored) {
        const bool p = s.true_label == c;
        pos += p ? 1 : 0;
        v.push_back({s.scores[c], p});
    }
    return v;
}

}  // namespace

double roc_area(std::span<const ScoredPrediction> scored, ClassLabel c) {
    std::size_t pos = 0;
    auto v = one_vs_rest(scored, c, pos);
    const auto neg = v.size() - pos;
    if (pos == 0 || neg == 0) {
        throw Error(Errc::DegenerateClass, "ROC area of " + std::string(label_name(c)) +
                                               " needs both positive and negative examples");
    }
    std::sort(v.begin(), v.end(), [](const Scored& a, const Scored& b) { return a.score < b.score; });
    double wins = 0;
    std::size_t neg_below = 0;
    for (std::size_t i = 0; i < v.size();) {
        std::size_t j = i, p = 0, n = 0;
        for (; j < v.size() && v[j].score == v[i].score; ++j) (v[j].positive ? p : n) += 1;
        wins += static_cast<double>(p) * static_cast<double>(neg_below) +
                0.5 * static_cast<double>(p) * static_cast<double>(n);
        neg_below += n;
        i = j;
    }
    return wins / (static_cast<double>(pos) * static_cast<double>(neg));
}

double prc_area(std::span<const ScoredPrediction> scored, ClassLabel c) {
    std::size_t pos = 0;
    auto v = one_vs_rest(scored, c, pos);
    if (pos == 0) {
        throw Error(Errc::DegenerateClass, "PRC area of " + std::string(label_name(c)) + " needs a positive example");
    }
    std::sort(v.begin(), v.end(), [](const Scored& a, const Scored& b) { return a.score > b.score; });
    std::vector<std::pair<double, double>> curve;  // (recall, precision)
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < v.size();) {
        std::size_t j = i;
        for (; j < v.size() && v[j].score == v[i].score; ++j) (v[j].positive ? tp : fp) += 1;
        i = j;
        if (tp == 0) continue;
        curve.emplace_back(static_cast<double>(tp) / static_cast<double>(pos),
                           static_cast<double>(tp) / static_cast<double>(tp + fp));
    }
    double area = 0;
    double r0 = 0, p0 = curve.front().second;
    for (const auto& [r, p] : curve) {
        area += (r - r0) * (p + p0) / 2;
        r0 = r;
        p0 = p;
    }
    return area;
}

ClassMetrics weighted_average(std::span<const ReportRow> rows) {
    ClassMetrics w;
    for (const auto& row : rows) w.support += row.metrics.support;
    if (w.support == 0) return w;
    const double total = static_cast<double>(w.support);
    double roc = 0, roc_weight = 0, prc = 0, prc_weight = 0;
    bool any_roc = false, any_prc = false;
    for (const auto& row : rows) {
        const auto& m = row.metrics;
        const double s = static_cast<double>(m.support);
        w.tp_rate += s * m.tp_rate;
        w.fp_rate += s * m.fp_rate;
        w.precision += s * m.precision;
        w.f_measure += s * m.f_measure;
        w.mcc += s * m.mcc;
        if (m.roc_area) {
            any_roc = true;
            roc += s * *m.roc_area;
            roc_weight += s;
        }
        if (m.prc_area) {
            any_prc = true;
            prc += s * *m.prc_area;
            prc_weight += s;
        }
    }
    w.tp_rate /= total;
    w.fp_rate /= total;
    w.precision /= total;
    w.recall = w.tp_rate;
    w.f_measure /= total;
    w.mcc /= total;
    if (any_roc && roc_weight > 0) w.roc_area = roc / roc_weight;
    if (any_prc && prc_weight > 0) w.prc_area = prc / prc_weight;
    return w;
}

EvaluationReport evaluate_predictions(std::span<const ScoredPrediction> scored) {
    std::vector<std::pair<ClassLabel, ClassLabel>> pairs;
    pairs.reserve(scored.size());
    for (const auto& s : scored) pairs.emplace_back(s.true_label, s.scores.argmax());
    EvaluationReport r;
    r.confusion = build_confusion(pairs);
    const auto metrics = per_class_metrics(r.confusion);
    for (std::size_t c = 0; c < kClassCount; ++c) {
        ReportRow row{r.confusion.labels[c], metrics[c]};
        try {
            row.metrics.roc_area = roc_area(scored, label_at(c));
        } catch (const Error& e) {
            if (e.code() != Errc::DegenerateClass) throw;
        }
        try {
            row.metrics.prc_area = prc_area(scored, label_at(c));
        } catch (const Error& e) {
            if (e.code() != Errc::DegenerateClass) throw;
        }
        r.per_class.push_back(std::move(row));
    }
    r.weighted_avg = weighted_average(r.per_class);
    r.accuracy = static_cast<double>(r.confusion.trace()) / static_cast<double>(r.confusion.total());
    return r;
}

EvaluationReport evaluate_model(const Classifier& model, const Dataset& data) {
    std::vector<ScoredPrediction> scored;
    scored.reserve(data.size());
    for (const auto& rec : data.records()) scored.push_back({rec.label, model.predict(rec)});
    return evaluate_predictions(scored);
}

CrossValidation cross_validate(const ClassifierConfig& config, const Dataset& data, std::size_t k,
                               std::uint64_t seed, SmallClassPolicy policy) {
    validate(config);
    CrossValidation cv;
    cv.plan = stratified_kfold(data, k, seed, policy);
    for (auto c : cv.plan.undersized) {
        cv.warnings.push_back("class " + std::string(label_name(c)) + " has fewer records than folds");
    }
    cv.predictions.resize(data.size());
    std::vector<char> held(data.size());
    for (std::size_t f = 0; f < cv.plan.folds.size(); ++f) {
        std::fill(held.begin(), held.end(), 0);
        for (auto i : cv.plan.folds[f]) held[i] = 1;
        std::vector<std::size_t> train;
        train.reserve(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (!held[i]) train.push_back(i);
        }
        const auto model = train_classifier(config, data.subset(train), mix_seed(seed, f));
        for (const auto& w : model->warnings()) cv.warnings.push_back("fold " + std::to_string(f + 1) + ": " + w);
        for (auto i : cv.plan.folds[f]) cv.predictions[i] = {data[i].label, model->predict(data[i])};
    }
    cv.report = evaluate_predictions(cv.predictions);
    return cv;
}

namespace {

constexpr std::array<const char*, 8> kColumns = {"TP Rate", "FP Rate", "Precision", "Recall",
                                                 "F-Measure", "MCC", "ROC Area", "PRC Area"};
constexpr const char* kWeighted = "Weighted Avg.";

std::string fixed3(double v) {
    auto s = format_fixed(v, 3);
    if (s == "-0.000") s = "0.000";
    return s;
}

void pad(std::string& line, const std::string& cell, std::size_t width) {
    line += cell;
    if (cell.size() < width) line.append(width - cell.size(), ' ');
}

std::size_t column_width(std::size_t i) { return std::max<std::size_t>(std::string_view(kColumns[i]).size(), 6) + 2; }

std::string metric_line(const std::string& prefix, const ClassMetrics& m, const std::string& label) {
    const std::array<std::optional<double>, 8> values = {m.tp_rate, m.fp_rate,  m.precision, m.recall,
                                                         m.f_measure, m.mcc, m.roc_area, m.prc_area};
    std::string line;
    pad(line, prefix, 15);
    for (std::size_t i = 0; i < values.size(); ++i) pad(line, values[i] ? fixed3(*values[i]) : "?", column_width(i));
    line += label;
    while (!line.empty() && line.back() == ' ') line.pop_back();
    return line + '\n';
}

std::string column_letter(std::size_t i) {
    std::string s;
    do {
        s.insert(s.begin(), static_cast<char>('a' + i % 26));
        i /= 26;
    } while (i-- > 0);
    return s;
}

}  // namespace

std::string render_report(const EvaluationReport& report) {
    std::string out = "=== Detailed Accuracy By Class ===\n\n";
    std::string header;
    pad(header, "", 15);
    for (std::size_t i = 0; i < kColumns.size(); ++i) pad(header, kColumns[i], column_width(i));
    out += header + "Class\n";
    for (const auto& row : report.per_class) out += metric_line("", row.metrics, row.label);
    out += metric_line(kWeighted, report.weighted_avg, "");

    const auto& cm = report.confusion;
    out += "\nAccuracy: " + fixed3(report.accuracy) + " (" + std::to_string(cm.trace()) + "/" +
           std::to_string(cm.total()) + ")\n";
    if (cm.size() == 0) return out;

    std::size_t width = 1;
    for (std::size_t i = 0; i < cm.size(); ++i) {
        width = std::max(width, column_letter(i).size());
        for (auto v : cm.counts[i]) width = std::max(width, std::to_string(v).size());
    }
    auto cell = [&](const std::string& s) { return std::string(width + 1 - s.size(), ' ') + s; };
    out += "\n=== Confusion Matrix ===\n\n";
    for (std::size_t i = 0; i < cm.size(); ++i) out += cell(column_letter(i));
    out += "   <-- classified as\n";
    for (std::size_t i = 0; i < cm.size(); ++i) {
        for (auto v : cm.counts[i]) out += cell(std::to_string(v));
        out += " |   " + column_letter(i) + " = " + cm.labels[i] + '\n';
    }
    return out;
}

namespace {

constexpr const char* kCsvHeader =
    "kind,class,tp_rate,fp_rate,precision,recall,f_measure,mcc,roc_area,prc_area,support,degenerate";

std::string csv_metrics(const std::string& kind, const std::string& label, const ClassMetrics& m) {
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    return kind + ',' + csv_escape(label) + ',' + format_double(m.tp_rate) + ',' + format_double(m.fp_rate) + ',' +
           format_double(m.precision) + ',' + format_double(m.recall) + ',' + format_double(m.f_measure) + ',' +
           format_double(m.mcc) + ',' + opt(m.roc_area) + ',' + opt(m.prc_area) + ',' +
           std::to_string(m.support) + ',' + (m.degenerate ? "1" : "0") + '\n';
}

[[noreturn]] void corrupt(std::size_t line, const std::string& what) {
    throw Error(Errc::CorruptPayload, "report line " + std::to_string(line) + ": " + what);
}

double real_field(const std::string& s, std::size_t line) {
    const auto v = parse_double(s);
    if (!v) corrupt(line, "'" + s + "' is not a number");
    return *v;
}

std::size_t count_field(const std::string& s, std::size_t line) {
    const auto v = parse_int(s);
    if (!v || *v < 0) corrupt(line, "'" + s + "' is not a count");
    return static_cast<std::size_t>(*v);
}

ClassMetrics parse_metrics(const std::vector<std::string>& f, std::size_t line) {
    if (f.size() != 12) corrupt(line, "expected 12 fields");
    ClassMetrics m;
    m.tp_rate = real_field(f[2], line);
    m.fp_rate = real_field(f[3], line);
    m.precision = real_field(f[4], line);
    m.recall = real_field(f[5], line);
    m.f_measure = real_field(f[6], line);
    m.mcc = real_field(f[7], line);
    if (!f[8].empty()) m.roc_area = real_field(f[8], line);
    if (!f[9].empty()) m.prc_area = real_field(f[9], line);
    m.support = count_field(f[10], line);
    if (f[11] != "0" && f[11] != "1") corrupt(line, "degenerate flag must be 0 or 1");
    m.degenerate = f[11] == "1";
    return m;
}

}  // namespace

std::string render_report_csv(const EvaluationReport& report) {
    std::string out = std::string(kCsvHeader) + '\n';
    for (const auto& row : report.per_class) out += csv_metrics("class", row.label, row.metrics);
    out += csv_metrics("weighted", kWeighted, report.weighted_avg);
    out += "accuracy,," + format_double(report.accuracy) + '\n';
    const auto& cm = report.confusion;
    for (std::size_t i = 0; i < cm.size(); ++i) {
        out += "confusion," + csv_escape(cm.labels[i]);
        for (auto v : cm.counts[i]) out += ',' + std::to_string(v);
        out += '\n';
    }
    return out;
}

EvaluationReport parse_report_csv(std::istream& in) {
    CsvReader reader(in);
    std::vector<std::string> f;
    if (!reader.next(f)) corrupt(1, "empty report");
    std::string header;
    for (std::size_t i = 0; i < f.size(); ++i) header += (i ? "," : "") + f[i];
    if (header != kCsvHeader) corrupt(reader.line(), "unexpected header");

    EvaluationReport r;
    bool weighted = false, accuracy = false;
    std::vector<std::vector<std::string>> confusion_rows;
    while (reader.next(f)) {
        const auto line = reader.line();
        if (f.size() == 1 && f[0].empty()) continue;
        if (f[0] == "class") {
            r.per_class.push_back({f.size() > 1 ? f[1] : "", parse_metrics(f, line)});
        } else if (f[0] == "weighted") {
            if (weighted) corrupt(line, "duplicate weighted row");
            r.weighted_avg = parse_metrics(f, line);
            weighted = true;
        } else if (f[0] == "accuracy") {
            if (accuracy || f.size() != 3) corrupt(line, "malformed accuracy row");
            r.accuracy = real_field(f[2], line);
            accuracy = true;
        } else if (f[0] == "confusion") {
            f.push_back(std::to_string(line));
            confusion_rows.push_back(f);
        } else {
            corrupt(line, "unknown row kind '" + f[0] + "'");
        }
    }
    if (!weighted || !accuracy) corrupt(reader.line(), "missing weighted or accuracy row");
    std::vector<std::string> labels;
    for (const auto& row : confusion_rows) labels.push_back(row.size() > 1 ? row[1] : "");
    r.confusion = ConfusionMatrix::zeros(labels);
    for (std::size_t i = 0; i < confusion_rows.size(); ++i) {
        const auto& row = confusion_rows[i];
        const auto line = static_cast<std::size_t>(std::stoull(row.back()));
        if (row.size() != labels.size() + 3) corrupt(line, "confusion row width does not match class count");
        for (std::size_t j = 0; j < labels.size(); ++j) r.confusion.counts[i][j] = count_field(row[j + 2], line);
    }
    return r;
}

}  // namespace gtdmine
