#include "gtdmine/dataset.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "gtdmine/error.hpp"
#include "gtdmine/text.hpp"

namespace gtdmine {

namespace {

constexpr std::string_view kDatasetTag = "gtdmine-dataset";
constexpr int kDatasetVersion = 1;

void check_record(const AttributeSchema& schema, const EncodedRecord& r, std::size_t i) {
    if (r.codes.size() != schema.feature_count()) {
        throw Error(Errc::InvalidSchema, "record " + std::to_string(i) + " has " +
                                             std::to_string(r.codes.size()) + " codes, schema has " +
                                             std::to_string(schema.feature_count()) + " features");
    }
    for (std::size_t f = 0; f < r.codes.size(); ++f) {
        if (r.codes[f] >= schema.cardinality(f)) {
            throw Error(Errc::InvalidSchema, "record " + std::to_string(i) + ": code " +
                                                 std::to_string(r.codes[f]) + " out of range for '" +
                                                 schema.feature(f).name + "'");
        }
    }
    if (index_of(r.label) >= kClassCount) {
        throw Error(Errc::InvalidSchema, "record " + std::to_string(i) + ": invalid label");
    }
    if (r.geo && (r.geo->lat < -90 || r.geo->lat > 90 || r.geo->lon < -180 || r.geo->lon > 180)) {
        throw Error(Errc::InvalidSchema, "record " + std::to_string(i) + ": coordinates out of range");
    }
}

}  // namespace

Dataset::Dataset(AttributeSchema schema, std::vector<EncodedRecord> records)
    : schema_(std::move(schema)), records_(std::move(records)) {
    schema_.require_resolved();
    for (std::size_t i = 0; i < records_.size(); ++i) {
        check_record(schema_, records_[i], i);
        ++class_counts_[index_of(records_[i].label)];
    }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    std::vector<EncodedRecord> out;
    out.reserve(indices.size());
    for (auto i : indices) out.push_back(records_.at(i));
    return Dataset(schema_, std::move(out));
}

Dataset Dataset::filter(const std::function<bool(const EncodedRecord&)>& keep) const {
    std::vector<EncodedRecord> out;
    for (const auto& r : records_) {
        if (keep(r)) out.push_back(r);
    }
    return Dataset(schema_, std::move(out));
}

ClassCounts class_distribution(const Dataset& dataset) {
    ClassCounts counts{};
    for (const auto& r : dataset.records()) ++counts[index_of(r.label)];
    return counts;
}

std::optional<std::size_t> region_feature(const AttributeSchema& schema) {
    for (std::size_t f = 0; f < schema.feature_count(); ++f) {
        const auto& a = schema.feature(f);
        if (a.source == CodeSource::Table && a.table == "region") return f;
    }
    return schema.feature_index("region");
}

Dataset filter_region(const Dataset& dataset, std::string_view region) {
    const auto f = region_feature(dataset.schema());
    if (!f) throw Error(Errc::InvalidConfig, "dataset has no region attribute");
    const auto code = dataset.schema().code_index(*f, region);
    if (!code || region == kUnknownCode) {
        throw Error(Errc::InvalidConfig, "'" + std::string(region) + "' is not a region code");
    }
    return dataset.filter([&](const EncodedRecord& r) { return r.codes[*f] == *code; });
}

void write_dataset(const Dataset& dataset, std::ostream& out) {
    out << kDatasetTag << '\t' << kDatasetVersion << '\n';
    for (const auto& a : dataset.schema().attributes()) {
        out << "attribute\t" << a.name << '\t' << kind_name(a.kind);
        for (const auto& c : a.codes) out << '\t' << c;
        out << '\n';
    }
    out << "records\t" << dataset.size() << '\n';
    for (const auto& r : dataset.records()) {
        out << label_name(r.label);
        for (auto c : r.codes) out << '\t' << c;
        if (r.geo) out << '\t' << format_double(r.geo->lat) << '\t' << format_double(r.geo->lon);
        else out << "\t-\t-";
        out << '\n';
    }
}

Dataset read_dataset(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& why) -> Error {
        return Error(Errc::CorruptPayload, "dataset line " + std::to_string(lineno) + ": " + why);
    };
    if (!std::getline(in, line)) throw Error(Errc::CorruptPayload, "empty dataset file");
    ++lineno;
    const auto head = split(line, '\t');
    if (head.size() != 2 || head[0] != kDatasetTag) throw fail("not a dataset file");
    if (head[1] != std::to_string(kDatasetVersion)) {
        throw Error(Errc::FormatVersionMismatch, "dataset version " + head[1]);
    }

    std::vector<Attribute> attrs;
    std::size_t expected = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto fields = split(line, '\t');
        if (fields[0] == "records") {
            const auto n = fields.size() == 2 ? parse_int(fields[1]) : std::nullopt;
            if (!n || *n < 0) throw fail("bad record count");
            expected = static_cast<std::size_t>(*n);
            break;
        }
        if (fields[0] != "attribute" || fields.size() < 3) throw fail("expected attribute line");
        Attribute a;
        a.name = fields[1];
        const auto kind = parse_kind(fields[2]);
        if (!kind) throw fail("unknown kind '" + fields[2] + "'");
        a.kind = *kind;
        a.codes.assign(fields.begin() + 3, fields.end());
        attrs.push_back(std::move(a));
    }
    AttributeSchema schema(std::move(attrs));
    const auto width = schema.feature_count() + 3;

    std::vector<EncodedRecord> records;
    records.reserve(expected);
    while (records.size() < expected && std::getline(in, line)) {
        ++lineno;
        const auto fields = split(line, '\t');
        if (fields.size() != width) throw fail("expected " + std::to_string(width) + " fields");
        EncodedRecord r;
        const auto label = parse_label(fields[0]);
        if (!label) throw fail("unknown label '" + fields[0] + "'");
        r.label = *label;
        for (std::size_t f = 0; f < schema.feature_count(); ++f) {
            const auto c = parse_int(fields[f + 1]);
            if (!c || *c < 0) throw fail("bad code '" + fields[f + 1] + "'");
            r.codes.push_back(static_cast<Code>(*c));
        }
        const auto& lat = fields[width - 2];
        const auto& lon = fields[width - 1];
        if (lat != "-" || lon != "-") {
            const auto la = parse_double(lat);
            const auto lo = parse_double(lon);
            if (!la || !lo) throw fail("bad coordinates");
            r.geo = GeoPoint{*la, *lo};
        }
        records.push_back(std::move(r));
    }
    if (records.size() != expected) throw fail("truncated: expected " + std::to_string(expected) + " records");
    return Dataset(std::move(schema), std::move(records));
}

void save_dataset(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write " + path);
    write_dataset(dataset, out);
    if (!out) throw Error(Errc::IoError, "write failed for " + path);
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::FileNotFound, path);
    return read_dataset(in);
}

}  // namespace gtdmine
