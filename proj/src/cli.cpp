#include "gtdmine/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gtdmine/csv_loader.hpp"
#include "gtdmine/error.hpp"
#include "gtdmine/evaluation.hpp"
#include "gtdmine/model_io.hpp"
#include "gtdmine/text.hpp"

#ifndef GTDMINE_DATA_DIR
#define GTDMINE_DATA_DIR "data"
#endif

namespace gtdmine {

namespace {

const std::vector<std::string> kHyper = {"alpha", "min-leaf", "trees",  "mtry",   "bootstrap",  "threads",
                                         "neighbors", "blend", "hidden", "eta", "epochs", "ovr-eta",
                                         "ovr-epochs", "ovr-l2"};

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

const std::map<std::string, std::vector<std::string>>& key_table() {
    static const std::map<std::string, std::vector<std::string>> t = {
        {"ingest", {"csv", "schema", "encoding", "out", "strict"}},
        {"stats", {"data", "schema", "encoding"}},
        {"train", concat({"data", "schema", "encoding", "classifier", "seed", "out-model"}, kHyper)},
        {"predict", {"model", "data", "schema", "encoding", "out"}},
        {"evaluate", {"model", "data", "schema", "encoding", "out-report"}},
        {"crossval", concat({"data", "schema", "encoding", "classifier", "k", "seed", "out-report"}, kHyper)},
        {"density",
         {"data", "schema", "encoding", "bounds", "region", "presets", "nx", "ny", "smooth", "out-grid"}},
        {"report", {"in", "format", "out"}},
    };
    return t;
}

const std::map<std::string, std::string>& help_text() {
    static const std::map<std::string, std::string> h = {
        {"csv", "raw incident CSV"},
        {"schema", "attribute schema file"},
        {"encoding", "encoding table file"},
        {"out", "output file"},
        {"strict", "fail on the first rejected row (true|false)"},
        {"data", "dataset file or raw CSV"},
        {"model", "saved model file"},
        {"in", "CSV report to re-render"},
        {"format", "text|csv"},
        {"classifier", "nb|tree|forest|ibk-linear|ibk-ball|kstar|mlp|ovr"},
        {"seed", "random seed"},
        {"k", "number of folds"},
        {"out-model", "model output file"},
        {"out-report", "report output file (CSV copy written beside it)"},
        {"out-grid", "grid output file"},
        {"bounds", "lat_min,lat_max,lon_min,lon_max"},
        {"region", "region preset name; also filters records to that region"},
        {"presets", "region presets file"},
        {"nx", "cells along longitude"},
        {"ny", "cells along latitude"},
        {"smooth", "Gaussian bandwidth in cells (0 disables)"},
        {"alpha", "naive Bayes pseudo-count"},
        {"min-leaf", "minimum records per tree leaf"},
        {"trees", "forest size"},
        {"mtry", "attributes tried per split (0: ceil(sqrt(F)))"},
        {"bootstrap", "forest bootstrap sampling (true|false)"},
        {"threads", "forest training threads"},
        {"neighbors", "IBk neighbour count"},
        {"blend", "K* blend in (0, 1]"},
        {"hidden", "MLP hidden layer sizes, comma separated (empty: automatic)"},
        {"eta", "MLP learning rate"},
        {"epochs", "MLP epochs"},
        {"ovr-eta", "one-vs-rest learning rate"},
        {"ovr-epochs", "one-vs-rest epochs"},
        {"ovr-l2", "one-vs-rest L2 decay"},
    };
    return h;
}

[[noreturn]] void invalid(const std::string& what) { throw Error(Errc::InvalidConfig, what); }

std::string data_path(const char* file) { return std::string(GTDMINE_DATA_DIR) + "/" + file; }

std::size_t to_count(const Settings& s, const std::string& key) {
    const auto& v = s.at(key);
    const auto n = parse_int(v);
    if (!n || *n < 0) invalid(key + " must be a non-negative integer, got '" + v + "'");
    return static_cast<std::size_t>(*n);
}

double to_real(const Settings& s, const std::string& key) {
    const auto& v = s.at(key);
    const auto d = parse_double(v);
    if (!d || !std::isfinite(*d)) invalid(key + " must be a number, got '" + v + "'");
    return *d;
}

bool to_bool(const Settings& s, const std::string& key) {
    const auto& v = s.at(key);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    invalid(key + " must be true or false, got '" + v + "'");
}

std::uint64_t to_seed(const Settings& s) {
    const auto& v = s.at("seed");
    std::uint64_t seed = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), seed);
    if (ec != std::errc() || p != v.data() + v.size()) invalid("seed must be an unsigned 64-bit integer, got '" + v + "'");
    return seed;
}

bool has(const RunConfig& c, const std::string& key) {
    const auto it = c.settings.find(key);
    return it != c.settings.end() && !it->second.empty();
}

void require_file(const RunConfig& c, const std::string& key) {
    if (!has(c, key)) invalid("--" + key + " is required for " + c.command);
    const auto& path = c.settings.at(key);
    if (!std::filesystem::is_regular_file(path)) throw Error(Errc::FileNotFound, "--" + key + ": no such file " + path);
}

void require_output(const RunConfig& c, const std::string& key) {
    if (!has(c, key)) invalid("--" + key + " is required for " + c.command);
}

bool is_validation(Errc code) {
    return code == Errc::InvalidConfig || code == Errc::InvalidHyperparameter || code == Errc::InvalidBounds ||
           code == Errc::FileNotFound;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(Errc::IoError, "cannot write " + path);
    f << content;
    if (!f.flush()) throw Error(Errc::IoError, "failed writing " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(Errc::FileNotFound, "cannot open " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"ingest", "stats",    "train",   "predict",
                                                   "evaluate", "crossval", "density", "report"};
    return names;
}

const std::vector<std::string>& command_keys(const std::string& command) {
    const auto it = key_table().find(command);
    if (it == key_table().end()) invalid("unknown command '" + command + "'");
    return it->second;
}

Settings default_settings(const std::string& command) {
    const ClassifierConfig c;
    const Settings all = {
        {"schema", data_path("schema.default")},
        {"encoding", data_path("table1.encoding")},
        {"presets", data_path("region_presets.txt")},
        {"strict", "false"},
        {"format", "text"},
        {"classifier", "nb"},
        {"seed", "42"},
        {"k", "10"},
        {"nx", "360"},
        {"ny", "180"},
        {"smooth", "0"},
        {"alpha", format_double(c.alpha)},
        {"min-leaf", std::to_string(c.min_leaf)},
        {"trees", std::to_string(c.trees)},
        {"mtry", std::to_string(c.mtry)},
        {"bootstrap", c.bootstrap ? "true" : "false"},
        {"threads", std::to_string(c.threads)},
        {"neighbors", std::to_string(c.k)},
        {"blend", format_double(c.blend)},
        {"hidden", ""},
        {"eta", format_double(c.eta)},
        {"epochs", std::to_string(c.epochs)},
        {"ovr-eta", format_double(c.ovr_eta)},
        {"ovr-epochs", std::to_string(c.ovr_epochs)},
        {"ovr-l2", format_double(c.ovr_l2)},
    };
    Settings s;
    for (const auto& key : command_keys(command)) {
        const auto it = all.find(key);
        s[key] = it == all.end() ? "" : it->second;
    }
    return s;
}

Settings read_config_file(const std::string& path, const std::string& command) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::FileNotFound, "cannot open config file " + path);
    std::vector<KeyValue> entries;
    try {
        entries = parse_key_values(in);
    } catch (const Error& e) {
        invalid(path + ": " + e.what());
    }
    const auto& keys = command_keys(command);
    Settings s;
    for (const auto& kv : entries) {
        const auto where = path + " line " + std::to_string(kv.line) + ": ";
        if (!kv.section.empty()) invalid(where + "sections are not allowed");
        if (kv.key.starts_with("digest.") || kv.key.starts_with("output.")) continue;
        if (kv.key == "command") {
            if (kv.value != command) invalid(where + "written for '" + kv.value + "', not '" + command + "'");
            continue;
        }
        if (std::find(keys.begin(), keys.end(), kv.key) == keys.end()) {
            invalid(where + "'" + kv.key + "' is not a setting of " + command);
        }
        s[kv.key] = kv.value;
    }
    return s;
}

RunConfig resolve_config(const std::string& command, const Settings& overrides,
                         const std::optional<std::string>& config_path) {
    RunConfig c;
    c.command = command;
    c.settings = default_settings(command);
    if (config_path) {
        for (const auto& [k, v] : read_config_file(*config_path, command)) c.settings[k] = v;
    }
    const auto& keys = command_keys(command);
    for (const auto& [k, v] : overrides) {
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) invalid("'" + k + "' is not a setting of " + command);
        c.settings[k] = v;
    }
    const auto& s = c.settings;
    auto get = [&](const std::string& key) { return s.count(key) ? s.at(key) : std::string(); };
    c.csv = get("csv");
    c.schema = get("schema");
    c.encoding = get("encoding");
    c.data = get("data");
    c.model = get("model");
    c.in = get("in");
    c.presets = get("presets");
    c.out = get("out");
    c.out_model = get("out-model");
    c.out_report = get("out-report");
    c.out_grid = get("out-grid");
    c.region = get("region");

    if (s.count("seed")) c.seed = to_seed(s);
    if (s.count("strict")) c.strict = to_bool(s, "strict");
    if (s.count("format")) {
        c.format = s.at("format");
        if (c.format != "text" && c.format != "csv") invalid("format must be text or csv, got '" + c.format + "'");
    }
    if (s.count("k")) {
        c.k = to_count(s, "k");
        if (c.k < 2) invalid("k must be at least 2");
    }
    if (s.count("classifier")) {
        const auto f = parse_family(s.at("classifier"));
        if (!f) invalid("unknown classifier '" + s.at("classifier") + "'");
        auto& h = c.classifier;
        h.family = *f;
        h.alpha = to_real(s, "alpha");
        h.min_leaf = to_count(s, "min-leaf");
        h.trees = to_count(s, "trees");
        h.mtry = to_count(s, "mtry");
        h.bootstrap = to_bool(s, "bootstrap");
        h.threads = to_count(s, "threads");
        h.k = to_count(s, "neighbors");
        h.blend = to_real(s, "blend");
        h.hidden.clear();
        for (const auto& part : split(s.at("hidden"), ',')) {
            const auto t = trim(part);
            if (t.empty()) continue;
            const auto n = parse_int(t);
            if (!n || *n <= 0) invalid("hidden layer sizes must be positive integers, got '" + std::string(t) + "'");
            h.hidden.push_back(static_cast<std::size_t>(*n));
        }
        h.eta = to_real(s, "eta");
        h.epochs = to_count(s, "epochs");
        h.ovr_eta = to_real(s, "ovr-eta");
        h.ovr_epochs = to_count(s, "ovr-epochs");
        h.ovr_l2 = to_real(s, "ovr-l2");
        validate(h);
    }
    if (command == "density") {
        c.nx = to_count(s, "nx");
        c.ny = to_count(s, "ny");
        if (c.nx == 0 || c.ny == 0) throw Error(Errc::InvalidBounds, "nx and ny must be at least 1");
        c.smooth = to_real(s, "smooth");
        if (c.smooth < 0) throw Error(Errc::InvalidHyperparameter, "smooth must be 0 or a positive bandwidth");
        if (has(c, "bounds") && has(c, "region")) invalid("give either --bounds or --region, not both");
        if (has(c, "bounds")) {
            const auto parts = split(s.at("bounds"), ',');
            std::vector<double> v;
            for (const auto& p : parts) {
                const auto d = parse_double(trim(p));
                if (!d) invalid("bounds must be four numbers lat_min,lat_max,lon_min,lon_max");
                v.push_back(*d);
            }
            if (v.size() != 4) invalid("bounds must be four numbers lat_min,lat_max,lon_min,lon_max");
            c.bounds = GeoBounds{v[0], v[1], v[2], v[3]};
            validate(*c.bounds);
        } else {
            require_file(c, "presets");
            const auto presets = load_region_presets(c.presets);
            c.bounds = find_preset(presets, has(c, "region") ? c.region : "world").bounds;
        }
    }

    if (command == "ingest") {
        require_file(c, "csv");
        require_output(c, "out");
    } else if (command == "stats" || command == "crossval" || command == "density" || command == "train") {
        require_file(c, "data");
    } else if (command == "predict" || command == "evaluate") {
        require_file(c, "model");
        require_file(c, "data");
    } else if (command == "report") {
        require_file(c, "in");
    }
    if (command == "train") require_output(c, "out-model");
    if (command == "predict") require_output(c, "out");
    if (command == "density") require_output(c, "out-grid");
    return c;
}

std::string sha256_file(const std::string& path) {
    const auto bytes = read_file(path);
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error(Errc::IoError, "sha256 failed for " + path);
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string manifest_text(const RunConfig& c, const std::vector<std::string>& outputs) {
    std::string m = "# gtdmine run manifest; replay with: gtdmine " + c.command + " --config <this file>\n";
    m += "command = " + c.command + '\n';
    for (const auto& key : command_keys(c.command)) m += key + " = " + c.settings.at(key) + '\n';
    for (const auto& key : {"csv", "data", "model", "in", "schema", "encoding", "presets"}) {
        if (!has(c, key)) continue;
        const auto& path = c.settings.at(key);
        if (std::filesystem::is_regular_file(path)) m += "digest." + path + " = " + sha256_file(path) + '\n';
    }
    for (const auto& path : outputs) m += "output." + path + " = " + sha256_file(path) + '\n';
    return m;
}

namespace {

struct Loaded {
    Dataset dataset;
    std::size_t rejected = 0;
};

bool is_dataset_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::string first;
    std::getline(f, first);
    return first.starts_with("gtdmine-dataset");
}

Loaded load_input(const RunConfig& c, std::ostream& err) {
    if (is_dataset_file(c.data)) return {load_dataset(c.data), 0};
    const auto table = EncodingTable::load(c.encoding);
    const auto schema = load_schema(c.schema);
    auto r = load_csv(c.data, schema, table, LoadOptions{c.strict});
    for (const auto& issue : r.rejected) err << "warning: " << describe(issue) << '\n';
    return {std::move(r.dataset), r.rejected.size()};
}

void write_manifest(const RunConfig& c, const std::string& primary, const std::vector<std::string>& outputs) {
    write_file(primary + ".manifest", manifest_text(c, outputs));
}

int cmd_ingest(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto table = EncodingTable::load(c.encoding);
    const auto schema = load_schema(c.schema);
    const auto r = load_csv(c.csv, schema, table, LoadOptions{c.strict});
    for (const auto& issue : r.rejected) err << "warning: " << describe(issue) << '\n';
    save_dataset(r.dataset, c.out);
    write_manifest(c, c.out, {c.out});
    out << "accepted " << r.dataset.size() << " rejected " << r.rejected.size() << '\n';
    return kExitOk;
}

int cmd_stats(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto in = load_input(c, err);
    const auto& d = in.dataset;
    out << "records " << d.size() << '\n';
    out << "rejected " << in.rejected << '\n';
    const auto counts = class_distribution(d);
    for (auto l : kAllLabels) {
        const auto n = counts[index_of(l)];
        out << "class " << label_name(l) << ' ' << n << ' '
            << format_fixed(d.empty() ? 0.0 : static_cast<double>(n) / static_cast<double>(d.size()), 4) << '\n';
    }
    const auto& schema = d.schema();
    for (std::size_t f = 0; f < schema.feature_count(); ++f) {
        out << "attribute " << schema.feature(f).name << ' ' << schema.cardinality(f) << '\n';
    }
    if (const auto rf = region_feature(schema)) {
        const auto& codes = schema.feature(*rf).codes;
        std::vector<std::size_t> per(codes.size());
        for (const auto& r : d.records()) ++per[r.codes[*rf]];
        for (std::size_t i = 0; i < codes.size(); ++i) {
            if (per[i]) out << "region " << codes[i] << ' ' << per[i] << '\n';
        }
    }
    std::size_t geo = 0;
    for (const auto& r : d.records()) geo += r.geo ? 1 : 0;
    out << "geo " << geo << '\n';
    return kExitOk;
}

int cmd_train(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto in = load_input(c, err);
    const auto model = train_classifier(c.classifier, in.dataset, c.seed);
    for (const auto& w : model->warnings()) err << "warning: " << w << '\n';
    save_model(*model, in.dataset.schema(), c.out_model);
    write_manifest(c, c.out_model, {c.out_model});
    out << "trained " << family_tag(model->family()) << " on " << in.dataset.size() << " records\n";
    return kExitOk;
}

int cmd_predict(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto in = load_input(c, err);
    const auto model = load_model(c.model, in.dataset.schema());
    std::string text = "row,true,predicted";
    for (auto l : kAllLabels) text += "," + std::string(label_name(l));
    text += '\n';
    for (std::size_t i = 0; i < in.dataset.size(); ++i) {
        const auto& r = in.dataset[i];
        const auto p = model->predict(r);
        text += std::to_string(i) + ',' + std::string(label_name(r.label)) + ',' + std::string(label_name(p.argmax()));
        for (double v : p.values()) text += ',' + format_double(v);
        text += '\n';
    }
    write_file(c.out, text);
    write_manifest(c, c.out, {c.out});
    out << "predicted " << in.dataset.size() << " records\n";
    return kExitOk;
}

int emit_report(const RunConfig& c, const EvaluationReport& report, std::ostream& out) {
    if (c.out_report.empty()) {
        out << render_report(report);
        return kExitOk;
    }
    const auto csv_path = c.out_report + ".csv";
    write_file(c.out_report, render_report(report));
    write_file(csv_path, render_report_csv(report));
    write_manifest(c, c.out_report, {c.out_report, csv_path});
    out << "accuracy " << format_fixed(report.accuracy, 4) << '\n';
    return kExitOk;
}

int cmd_evaluate(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto in = load_input(c, err);
    const auto model = load_model(c.model, in.dataset.schema());
    return emit_report(c, evaluate_model(*model, in.dataset), out);
}

int cmd_crossval(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto in = load_input(c, err);
    const auto cv = cross_validate(c.classifier, in.dataset, c.k, c.seed);
    for (const auto& w : cv.warnings) err << "warning: " << w << '\n';
    return emit_report(c, cv.report, out);
}

int cmd_density(const RunConfig& c, std::ostream& out, std::ostream& err) {
    auto in = load_input(c, err);
    Dataset data = std::move(in.dataset);
    if (!c.region.empty()) {
        const auto rf = region_feature(data.schema());
        const auto& codes = rf ? data.schema().feature(*rf).codes : std::vector<std::string>{};
        if (std::find(codes.begin(), codes.end(), c.region) != codes.end()) data = filter_region(data, c.region);
    }
    const auto points = geo_points(data);
    auto grid = build_density_grid(points, *c.bounds, c.nx, c.ny);
    if (c.smooth > 0) grid = smooth_grid(grid, c.smooth);
    export_grid(grid, c.out_grid);
    write_manifest(c, c.out_grid, {c.out_grid});
    out << "points " << grid.total_points << " in_bounds " << grid.total_points - grid.out_of_bounds
        << " out_of_bounds " << grid.out_of_bounds << " without_geo " << data.size() - points.size() << '\n';
    return kExitOk;
}

int cmd_report(const RunConfig& c, std::ostream& out, std::ostream&) {
    std::ifstream f(c.in, std::ios::binary);
    if (!f) throw Error(Errc::FileNotFound, "cannot open " + c.in);
    const auto report = parse_report_csv(f);
    const auto text = c.format == "csv" ? render_report_csv(report) : render_report(report);
    if (c.out.empty()) {
        out << text;
    } else {
        write_file(c.out, text);
        write_manifest(c, c.out, {c.out});
    }
    return kExitOk;
}

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        if (c.command == "ingest") return cmd_ingest(c, out, err);
        if (c.command == "stats") return cmd_stats(c, out, err);
        if (c.command == "train") return cmd_train(c, out, err);
        if (c.command == "predict") return cmd_predict(c, out, err);
        if (c.command == "evaluate") return cmd_evaluate(c, out, err);
        if (c.command == "crossval") return cmd_crossval(c, out, err);
        if (c.command == "density") return cmd_density(c, out, err);
        if (c.command == "report") return cmd_report(c, out, err);
        err << "error: unknown command '" << c.command << "'\n";
        return kExitValidation;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return is_validation(e.code()) ? kExitValidation : kExitRuntime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"gtdmine: categorical incident mining toolkit"};
    app.require_subcommand(1);
    std::map<std::string, std::map<std::string, std::string>> values;
    std::map<std::string, std::string> configs;
    std::map<std::string, CLI::App*> subs;
    const std::map<std::string, std::string> about = {
        {"ingest", "encode a raw CSV into a dataset file"},
        {"stats", "class and attribute counts"},
        {"train", "train a classifier and save it"},
        {"predict", "class probabilities from a saved model"},
        {"evaluate", "metric report of a saved model on a dataset"},
        {"crossval", "stratified k-fold cross-validation report"},
        {"density", "latitude/longitude density grid"},
        {"report", "re-render a CSV report"},
    };
    for (const auto& name : command_names()) {
        auto* sub = app.add_subcommand(name, about.at(name));
        subs[name] = sub;
        sub->add_option("--config", configs[name], "key=value settings file (flags override it)");
        for (const auto& key : command_keys(name)) {
            sub->add_option("--" + key, values[name][key], help_text().at(key));
        }
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    for (const auto& name : command_names()) {
        auto* sub = subs[name];
        if (!sub->parsed()) continue;
        Settings overrides;
        for (const auto& key : command_keys(name)) {
            if (sub->count("--" + key) > 0) overrides[key] = values[name][key];
        }
        std::optional<std::string> config;
        if (sub->count("--config") > 0) config = configs[name];
        RunConfig rc;
        try {
            rc = resolve_config(name, overrides, config);
        } catch (const Error& e) {
            err << "error: " << e.what() << '\n';
            return kExitValidation;
        }
        return run(rc, out, err);
    }
    err << "error: no command given\n";
    return kExitValidation;
}

}  // namespace gtdmine
