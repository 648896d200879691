#include "gtdmine/csv_loader.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "gtdmine/error.hpp"
#include "gtdmine/text.hpp"

namespace gtdmine {

namespace {

// Intermediate value of one feature cell: a final code string, or a raw
// string for open attributes whose code list is not yet known.
struct PendingRow {
    std::vector<std::string> codes;
    ClassLabel label = ClassLabel::Claimed;
    std::optional<GeoPoint> geo;
};

struct RowRejected {
    RowIssue issue;
};

}  // namespace

std::string describe(const RowIssue& issue) {
    return "row " + std::to_string(issue.row) + " (line " + std::to_string(issue.line) + "), column '" +
           issue.column + "', cell '" + issue.cell + "': " + issue.reason;
}

LoadResult read_csv(std::istream& in, const AttributeSchema& raw_schema, const EncodingTable& table,
                    const LoadOptions& options) {
    const auto schema = raw_schema.resolve_with(table);
    CsvReader reader(in);
    std::vector<std::string> header;
    if (!reader.next(header)) {
        throw Error(Errc::HeaderMismatch, "file is empty, expected a header row");
    }
    for (auto& h : header) h = std::string(trim(h));
    if (!header.empty() && header[0].starts_with("\xEF\xBB\xBF")) header[0].erase(0, 3);

    const auto& attrs = schema.attributes();
    std::vector<std::size_t> column_of(attrs.size());
    std::vector<std::string> missing;
    for (std::size_t a = 0; a < attrs.size(); ++a) {
        const auto it = std::find(header.begin(), header.end(), attrs[a].column);
        if (it == header.end()) missing.push_back(attrs[a].column);
        else column_of[a] = static_cast<std::size_t>(it - header.begin());
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
        throw Error(Errc::HeaderMismatch, "missing columns: " + list);
    }

    LoadResult result;
    std::vector<PendingRow> pending;
    std::vector<std::set<std::string>> open_values(attrs.size());
    std::vector<std::string> fields;
    std::size_t row = 0;
    while (reader.next(fields)) {
        ++row;
        if (fields.size() == 1 && trim(fields[0]).empty()) continue;  // blank line
        auto reject = [&](std::size_t a, std::string reason) {
            const auto c = column_of[a];
            throw RowRejected{RowIssue{row, reader.line(), attrs[a].column,
                                       c < fields.size() ? fields[c] : std::string(),
                                       std::move(reason)}};
        };
        try {
            PendingRow p;
            std::optional<double> lat;
            std::optional<double> lon;
            for (std::size_t a = 0; a < attrs.size(); ++a) {
                const auto& attr = attrs[a];
                const auto col = column_of[a];
                if (col >= fields.size()) reject(a, "row has only " + std::to_string(fields.size()) + " cells");
                const auto cell = std::string(trim(fields[col]));
                switch (attr.kind) {
                    case AttributeKind::Class: {
                        const auto label = table.label(cell);
                        if (!label) reject(a, "unmappable class label");
                        p.label = *label;
                        break;
                    }
                    case AttributeKind::Year: {
                        if (cell.empty()) {
                            p.codes.emplace_back(kUnknownCode);
                            break;
                        }
                        const auto year = parse_int(cell);
                        if (!year) reject(a, "year is not an integer");
                        try {
                            p.codes.push_back(table.bin_year(static_cast<int>(*year)));
                        } catch (const Error& e) {
                            reject(a, e.what());
                        }
                        break;
                    }
                    case AttributeKind::GeoLatitude:
                    case AttributeKind::GeoLongitude: {
                        if (cell.empty()) break;
                        const auto v = parse_double(cell);
                        const double limit = attr.kind == AttributeKind::GeoLatitude ? 90 : 180;
                        if (!v || *v < -limit || *v > limit) reject(a, "coordinate out of range");
                        (attr.kind == AttributeKind::GeoLatitude ? lat : lon) = v;
                        break;
                    }
                    case AttributeKind::Categorical: {
                        if (cell.empty()) {
                            p.codes.emplace_back(kUnknownCode);
                        } else if (attr.source == CodeSource::Table) {
                            try {
                                p.codes.push_back(table.encode(attr.table, cell));
                            } catch (const Error& e) {
                                reject(a, e.what());
                            }
                        } else if (attr.source == CodeSource::Open) {
                            p.codes.push_back(cell);
                        } else {
                            const bool known = std::find(attr.codes.begin(), attr.codes.end(), cell) !=
                                               attr.codes.end();
                            p.codes.push_back(known ? cell : std::string(kUnknownCode));
                        }
                        break;
                    }
                }
            }
            if (lat && lon) p.geo = GeoPoint{*lat, *lon};
            pending.push_back(std::move(p));
        } catch (RowRejected& r) {
            if (options.strict) throw Error(Errc::RowError, describe(r.issue));
            result.rejected.push_back(std::move(r.issue));
        }
    }

    // Open attributes: codes are the distinct values of accepted rows, sorted.
    auto resolved = schema;
    const auto features = [&] {
        std::vector<std::size_t> idx;
        for (std::size_t a = 0; a < attrs.size(); ++a) {
            if (attrs[a].kind == AttributeKind::Categorical || attrs[a].kind == AttributeKind::Year) {
                idx.push_back(a);
            }
        }
        return idx;
    }();
    for (std::size_t f = 0; f < features.size(); ++f) {
        const auto& attr = attrs[features[f]];
        if (attr.kind != AttributeKind::Categorical || attr.source != CodeSource::Open) continue;
        std::set<std::string> values{std::string(kUnknownCode)};
        for (const auto& p : pending) values.insert(p.codes[f]);
        resolved = resolved.with_codes(features[f], {values.begin(), values.end()});
    }

    std::vector<std::map<std::string, Code, std::less<>>> index(features.size());
    for (std::size_t f = 0; f < features.size(); ++f) {
        const auto& codes = resolved.feature(f).codes;
        for (std::size_t c = 0; c < codes.size(); ++c) index[f][codes[c]] = static_cast<Code>(c);
    }
    std::vector<EncodedRecord> records;
    records.reserve(pending.size());
    for (auto& p : pending) {
        EncodedRecord r;
        r.label = p.label;
        r.geo = p.geo;
        r.codes.reserve(features.size());
        for (std::size_t f = 0; f < features.size(); ++f) {
            const auto it = index[f].find(p.codes[f]);
            if (it == index[f].end()) {
                throw Error(Errc::InvalidSchema, "code '" + p.codes[f] + "' missing from attribute '" +
                                                     resolved.feature(f).name + "'");
            }
            r.codes.push_back(it->second);
        }
        records.push_back(std::move(r));
    }
    result.dataset = Dataset(std::move(resolved), std::move(records));
    return result;
}

LoadResult load_csv(const std::string& path, const AttributeSchema& schema, const EncodingTable& table,
                    const LoadOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::FileNotFound, path);
    return read_csv(in, schema, table, options);
}

}  // namespace gtdmine
