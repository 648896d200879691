// Acceptance criteria runner: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gtdmine/cli.hpp"
#include "gtdmine/csv_loader.hpp"
#include "gtdmine/decision_tree.hpp"
#include "gtdmine/encoding.hpp"
#include "gtdmine/evaluation.hpp"
#include "gtdmine/geodensity.hpp"
#include "gtdmine/mlp.hpp"
#include "gtdmine/neighbors.hpp"
#include "gtdmine/synthetic.hpp"
#include "gtdmine/text.hpp"
#include "support.hpp"

using namespace gtdmine;
using testsupport::data_file;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// ---- 1 -------------------------------------------------------------------

struct OracleCounts {
    double tp = 0, fp = 0, fn = 0, tn = 0;
};

double safe_div(double a, double b) { return b == 0 ? 0 : a / b; }

Outcome metric_oracle() {
    const auto t0 = Clock::now();
    Rng rng(1001);
    double worst = 0;
    std::size_t flag_mismatch = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t c = 1 + rng.uniform_index(4);
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < c; ++i) labels.push_back("c" + std::to_string(i));
        auto cm = ConfusionMatrix::zeros(labels);
        do {
            for (auto& row : cm.counts)
                for (auto& v : row) v = rng.uniform_index(21);
        } while (cm.total() == 0);
        const auto got = per_class_metrics(cm);
        for (std::size_t k = 0; k < c; ++k) {
            OracleCounts o;
            for (std::size_t t = 0; t < c; ++t) {
                for (std::size_t p = 0; p < c; ++p) {
                    const double n = static_cast<double>(cm.counts[t][p]);
                    if (t == k && p == k) o.tp += n;
                    else if (t == k) o.fn += n;
                    else if (p == k) o.fp += n;
                    else o.tn += n;
                }
            }
            const double tpr = safe_div(o.tp, o.tp + o.fn);
            const double fpr = safe_div(o.fp, o.fp + o.tn);
            const double prec = safe_div(o.tp, o.tp + o.fp);
            const double f = safe_div(2 * prec * tpr, prec + tpr);
            const double mcc = safe_div(o.tp * o.tn - o.fp * o.fn,
                                        std::sqrt((o.tp + o.fp) * (o.tp + o.fn) * (o.tn + o.fp) * (o.tn + o.fn)));
            const bool degenerate = o.tp + o.fn == 0 || o.fp + o.tn == 0 || o.tp + o.fp == 0 || prec + tpr == 0 ||
                                    (o.tp + o.fp) * (o.tp + o.fn) * (o.tn + o.fp) * (o.tn + o.fn) == 0;
            const auto& m = got[k];
            for (double d : {m.tp_rate - tpr, m.fp_rate - fpr, m.precision - prec, m.recall - tpr,
                             m.f_measure - f, m.mcc - mcc}) {
                worst = std::max(worst, std::abs(d));
            }
            if (m.degenerate != degenerate) ++flag_mismatch;
        }
    }
    const double s = seconds_since(t0);
    return {worst <= 1e-12 && flag_mismatch == 0 && s < 5,
            "1000 matrices, max |diff| " + num(worst) + ", flag mismatches " + std::to_string(flag_mismatch) +
                ", " + num(s) + " s"};
}

// ---- 2 -------------------------------------------------------------------

Outcome roc_mann_whitney() {
    Rng rng(2002);
    double worst = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(49);
        const std::size_t levels = 1 + rng.uniform_index(8);
        std::vector<ScoredPrediction> scored(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double s = static_cast<double>(rng.uniform_index(levels + 1)) / static_cast<double>(levels);
            scored[i].scores = ClassProbabilities::from_scores({s, 1 - s + 0.01, 0.02});
            scored[i].true_label = label_at(rng.uniform_index(3));
        }
        scored[0].true_label = ClassLabel::Claimed;
        scored[1].true_label = ClassLabel::NotClaimed;
        double wins = 0, pairs = 0;
        for (const auto& p : scored) {
            if (p.true_label != ClassLabel::Claimed) continue;
            for (const auto& q : scored) {
                if (q.true_label == ClassLabel::Claimed) continue;
                const double a = p.scores[ClassLabel::Claimed], b = q.scores[ClassLabel::Claimed];
                wins += a > b ? 1.0 : a == b ? 0.5 : 0.0;
                pairs += 1;
            }
        }
        worst = std::max(worst, std::abs(roc_area(scored, ClassLabel::Claimed) - wins / pairs));
    }
    return {worst <= 1e-9, "200 score sets, max |diff| " + num(worst)};
}

// ---- 3 -------------------------------------------------------------------

Outcome balltree_equivalence() {
    const auto t0 = Clock::now();
    Rng rng(3003);
    std::size_t mismatches = 0, queries = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.uniform_index(2000);
        const std::size_t attrs = 1 + rng.uniform_index(10);
        const auto spec = testsupport::random_spec(rng, attrs, 6);
        const auto train = generate_synthetic(spec, n, rng.next()).dataset;
        const auto probe = generate_synthetic(spec, 40, rng.next()).dataset;
        const NeighborIndex linear(train.records(), NeighborVariant::LinearScan);
        const NeighborIndex ball(train.records(), NeighborVariant::BallTree);
        std::vector<EncodedRecord> qs = probe.records();
        for (std::size_t i = 0; i < std::min<std::size_t>(20, n); ++i) qs.push_back(train[rng.uniform_index(n)]);
        for (const auto& q : qs) {
            for (std::size_t k : {1, 3, 5}) {
                ++queries;
                if (linear.nearest(q, k) != ball.nearest(q, k) ||
                    !(knn_predict(linear, q, k) == knn_predict(ball, q, k))) {
                    ++mismatches;
                }
            }
        }
    }
    const double s = seconds_since(t0);
    return {mismatches == 0 && s < 30,
            "50 datasets, " + std::to_string(queries) + " queries, mismatches " + std::to_string(mismatches) +
                ", " + num(s) + " s"};
}

// ---- 4 -------------------------------------------------------------------

Outcome mlp_gradient_check() {
    Rng rng(4004);
    auto model = MlpModel::zeros({6, 4, 3}, 0.3);
    for (auto& layer : model.layers) {
        for (auto& w : layer.weights) w = rng.uniform(-1, 1);
        for (auto& b : layer.bias) b = rng.uniform(-1, 1);
    }
    std::vector<double> x(6);
    for (auto& v : x) v = rng.uniform01();
    const std::vector<double> d = {0, 1, 0};
    const auto g = mlp_gradient(model, x, d);
    const double eps = 1e-5;
    double worst = 0;
    std::size_t checked = 0;
    auto probe = [&](double& param, double analytic) {
        const double keep = param;
        param = keep + eps;
        const double up = mlp_error(model, x, d);
        param = keep - eps;
        const double down = mlp_error(model, x, d);
        param = keep;
        const double numeric = (up - down) / (2 * eps);
        const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
        worst = std::max(worst, std::abs(analytic - numeric) / scale);
        ++checked;
    };
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        for (std::size_t i = 0; i < model.layers[l].weights.size(); ++i) probe(model.layers[l].weights[i], g.weights[l][i]);
        for (std::size_t i = 0; i < model.layers[l].bias.size(); ++i) probe(model.layers[l].bias[i], g.bias[l][i]);
    }
    return {worst < 1e-4, std::to_string(checked) + " parameters, max relative error " + num(worst)};
}

// ---- 5 -------------------------------------------------------------------

Outcome tree_memorizes() {
    Rng rng(5005);
    std::size_t failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto spec = testsupport::random_spec(rng, 1 + rng.uniform_index(8), 5);
        const auto raw = generate_synthetic(spec, 1 + rng.uniform_index(400), rng.next()).dataset;
        const auto data = testsupport::make_consistent(raw, rng);
        const auto tree = train_decision_tree(data, 1);
        for (const auto& r : data.records()) {
            if (tree.predict(r).argmax() != r.label || tree.predict(r)[r.label] != 1.0) {
                ++failures;
                break;
            }
        }
    }
    return {failures == 0, "100 consistent datasets, datasets below accuracy 1.0: " + std::to_string(failures)};
}

// ---- 6 -------------------------------------------------------------------

Outcome separable_accuracy() {
    const auto t0 = Clock::now();
    const auto data = generate_synthetic(separable_spec(6, 2), 5000, 6006).dataset;
    std::string detail;
    bool ok = true;
    const std::vector<std::pair<std::string, Family>> roster = {
        {"nb", Family::NaiveBayes}, {"tree", Family::DecisionTree}, {"forest", Family::RandomForest},
        {"ibk", Family::IbkLinear}, {"kstar", Family::KStar},       {"mlp", Family::Mlp},
        {"ovr", Family::OneVsRest}};
    for (const auto& [name, family] : roster) {
        ClassifierConfig cfg;
        cfg.family = family;
        const auto cv = cross_validate(cfg, data, 10, 42);
        ok = ok && cv.report.accuracy >= 0.90;
        detail += name + " " + format_fixed(cv.report.accuracy, 4) + ", ";
    }
    const auto trained = train_mlp(data, MlpOptions{}, 42);
    const auto& e = trained.epoch_error;
    const std::size_t tail = std::max<std::size_t>(1, e.size() / 10);
    bool monotone = true;
    for (std::size_t i = e.size() - tail; i < e.size(); ++i) monotone = monotone && e[i] <= e[i - 1];
    const double s = seconds_since(t0);
    ok = ok && monotone && s < 120;
    detail += std::string("mlp tail error ") + (monotone ? "non-increasing" : "INCREASES") + " (" +
              num(e[e.size() - tail - 1]) + " -> " + num(e.back()) + "), " + num(s) + " s";
    return {ok, detail};
}

// ---- 7 -------------------------------------------------------------------

Outcome hand_checks() {
    const double h = entropy(ClassCounts{9, 5, 0});
    const double mcc = binary_metrics(2, 1, 1, 2).mcc;
    const std::vector<double> d = {1}, y = {0.75};
    const double e = output_error(d, y)[0];
    const double big_e = squared_error(std::vector<double>{0.5});
    const bool ok = std::abs(h - 0.9403) <= 5e-5 && std::abs(mcc - 1.0 / 3) <= 1e-12 && e == 0.25 && big_e == 0.125;
    return {ok, "entropy{9,5} " + format_fixed(h, 6) + ", mcc " + format_double(mcc) + ", e " + format_double(e) +
                    ", E " + format_double(big_e)};
}

// ---- 8 -------------------------------------------------------------------

int cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv = {"gtdmine"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

Outcome determinism() {
    const auto dir = testsupport::scratch_dir("acceptance-determinism");
    const auto sample = data_file("sample.csv");
    std::size_t compared = 0;
    std::vector<std::string> bad;
    for (const auto* tag : {"nb", "tree", "forest", "ibk-linear", "ibk-ball", "kstar", "mlp", "ovr"}) {
        std::vector<std::string> outputs[2];
        for (int run = 0; run < 2; ++run) {
            const auto base = dir + "/" + tag + "_" + std::to_string(run);
            const std::vector<std::string> common = {"--data", sample, "--classifier", tag, "--seed", "7"};
            auto cv = std::vector<std::string>{"crossval", "--k", "5", "--out-report", base + ".report"};
            cv.insert(cv.end(), common.begin(), common.end());
            auto tr = std::vector<std::string>{"train", "--out-model", base + ".model"};
            tr.insert(tr.end(), common.begin(), common.end());
            if (cli(cv) != 0 || cli(tr) != 0) bad.push_back(std::string(tag) + " (exit)");
            outputs[run] = {testsupport::slurp(base + ".report"), testsupport::slurp(base + ".report.csv"),
                            testsupport::slurp(base + ".model")};
        }
        for (std::size_t i = 0; i < 3; ++i) {
            ++compared;
            if (outputs[0][i].empty() || outputs[0][i] != outputs[1][i]) bad.push_back(tag);
        }
    }
    std::string detail = std::to_string(compared) + " artifact pairs compared";
    for (const auto& b : bad) detail += ", differs: " + b;
    return {bad.empty(), detail};
}

// ---- 9 -------------------------------------------------------------------

// Minimal quote-aware field splitter for single-line CSV records.
std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                out.back() += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.emplace_back();
        } else {
            out.back() += ch;
        }
    }
    return out;
}

Outcome ingestion_fidelity() {
    const std::map<std::string, std::string> region_code = {
        {"Central America & Caribbean", "R1"}, {"Central Asia", "R2"},        {"East Asia", "R3"},
        {"Eastern Europe", "R4"},              {"Middle East & North Africa", "R5"},
        {"North America", "R6"},               {"Australasia & Oceania", "R7"}, {"Oceania", "R7"},
        {"South America", "R8"},               {"Southeast Asia", "R9"},     {"Sub-Saharan Africa", "R10"},
        {"South Asia", "R11"},                 {"Western Europe", "R12"}};
    const std::map<std::string, std::size_t> class_index = {{"Claimed", 0}, {"Not-Claimed", 1}, {"Anonymous", 2}};
    std::ifstream f(data_file("sample.csv"));
    std::string line;
    std::getline(f, line);
    const auto header = split_line(line);
    const auto col = [&](const std::string& name) {
        return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
    };
    const auto region_col = col("region_txt"), class_col = col("claim_status");
    ClassCounts expected{};
    std::map<std::string, std::size_t> expected_region;
    std::size_t rows = 0;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto fields = split_line(line);
        ++rows;
        ++expected[class_index.at(fields[class_col])];
        ++expected_region[region_code.at(fields[region_col])];
    }

    const auto data = load_csv(data_file("sample.csv"), load_schema(data_file("schema.default")),
                               EncodingTable::load(data_file("table1.encoding")))
                          .dataset;
    bool ok = data.size() == rows && class_distribution(data) == expected;
    std::size_t region_mismatch = 0;
    for (int r = 1; r <= 12; ++r) {
        const auto code = "R" + std::to_string(r);
        const auto it = expected_region.find(code);
        if (filter_region(data, code).size() != (it == expected_region.end() ? 0 : it->second)) ++region_mismatch;
    }
    const bool bins = bin_year(1970) == "T-1" && bin_year(1976) == "T-2" && bin_year(2015) == "T-9";
    ok = ok && region_mismatch == 0 && bins;
    return {ok, std::to_string(rows) + " rows, classes " + std::to_string(expected[0]) + "/" +
                    std::to_string(expected[1]) + "/" + std::to_string(expected[2]) + ", region mismatches " +
                    std::to_string(region_mismatch) + ", timeline " + (bins ? "ok" : "wrong")};
}

// ---- 10 ------------------------------------------------------------------

Outcome density_grids() {
    Rng rng(1010);
    std::size_t conservation = 0, roundtrip = 0;
    double worst_mass = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const GeoBounds b{-10 - rng.uniform(0, 20), 10 + rng.uniform(0, 20), -30 - rng.uniform(0, 50), 20 + rng.uniform(0, 50)};
        const std::size_t nx = 1 + rng.uniform_index(30), ny = 1 + rng.uniform_index(30);
        std::vector<GeoPoint> pts(rng.uniform_index(600));
        for (auto& p : pts) {
            switch (rng.uniform_index(6)) {
                case 0: p = {b.lat_max, b.lon_max}; break;
                case 1: p = {cell_edge(b.lat_min, b.lat_max, ny, rng.uniform_index(ny + 1)),
                             cell_edge(b.lon_min, b.lon_max, nx, rng.uniform_index(nx + 1))}; break;
                default: p = {rng.uniform(b.lat_min - 5, b.lat_max + 5), rng.uniform(b.lon_min - 5, b.lon_max + 5)};
            }
        }
        const auto g = build_density_grid(pts, b, nx, ny);
        if (g.mass() + static_cast<double>(g.out_of_bounds) != static_cast<double>(pts.size())) ++conservation;
        const auto s = smooth_grid(g, rng.uniform(0.3, 4));
        worst_mass = std::max(worst_mass, std::abs(s.mass() - g.mass()));
        for (const auto* grid : {&g, &s}) {
            std::stringstream io;
            write_grid(*grid, io);
            if (!(read_grid(io) == *grid)) ++roundtrip;
        }
    }
    return {conservation == 0 && worst_mass <= 1e-6 && roundtrip == 0,
            "100 point sets, conservation failures " + std::to_string(conservation) + ", max mass drift " +
                num(worst_mass) + ", round-trip failures " + std::to_string(roundtrip)};
}

// ---- 11 ------------------------------------------------------------------

Outcome report_golden() {
    const auto data = generate_synthetic(testsupport::noisy_spec(4, 2, 0.55), 300, 1111).dataset;
    ClassifierConfig cfg;
    const auto cv = cross_validate(cfg, data, 5, 42);
    const auto text = render_report(cv.report);
    const auto golden = testsupport::slurp(testsupport::golden_file("report_nb.txt"));
    const bool columns = text.find("TP Rate  FP Rate  Precision  Recall  F-Measure  MCC     ROC Area  PRC Area  Class") !=
                         std::string::npos;
    const bool same = !golden.empty() && text == golden;
    return {same && columns, std::string(same ? "byte-identical" : "DIFFERS from golden") + ", column order " +
                                 (columns ? "ok" : "wrong")};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"metric oracle equivalence", metric_oracle},
        {"ROC area equals Mann-Whitney", roc_mann_whitney},
        {"ball tree equals linear scan", balltree_equivalence},
        {"MLP gradient check", mlp_gradient_check},
        {"fully grown tree memorizes consistent data", tree_memorizes},
        {"separable synthetic accuracy >= 0.90", separable_accuracy},
        {"hand-worked numeric checks", hand_checks},
        {"determinism of crossval and train", determinism},
        {"ingestion fidelity", ingestion_fidelity},
        {"density grids", density_grids},
        {"report golden file", report_golden},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s  %2zu  %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
