#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gtdmine/labels.hpp"
#include "gtdmine/schema.hpp"

namespace gtdmine {

using Code = std::uint32_t;

struct GeoPoint {
    double lat = 0;  // degrees, [-90, 90]
    double lon = 0;  // degrees, [-180, 180]

    bool operator==(const GeoPoint&) const = default;
};

struct EncodedRecord {
    std::vector<Code> codes;  // one per schema feature
    ClassLabel label = ClassLabel::Claimed;
    std::optional<GeoPoint> geo;

    bool operator==(const EncodedRecord&) const = default;
};

/// Immutable, schema-conforming record collection.
class Dataset {
public:
    Dataset() = default;
    /// Throws InvalidSchema if the schema is unresolved or a record does not
    /// conform (wrong code count, code out of range, geo out of range).
    Dataset(AttributeSchema schema, std::vector<EncodedRecord> records);

    const AttributeSchema& schema() const { return schema_; }
    const std::vector<EncodedRecord>& records() const { return records_; }
    const EncodedRecord& operator[](std::size_t i) const { return records_[i]; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    const ClassCounts& class_counts() const { return class_counts_; }

    Dataset subset(std::span<const std::size_t> indices) const;
    Dataset filter(const std::function<bool(const EncodedRecord&)>& keep) const;

private:
    AttributeSchema schema_;
    std::vector<EncodedRecord> records_;
    ClassCounts class_counts_{};
};

/// Full recount of the records' labels.
ClassCounts class_distribution(const Dataset& dataset);

/// Feature index of the region attribute: the first feature coded from the
/// "region" table, else a feature named "region".
std::optional<std::size_t> region_feature(const AttributeSchema& schema);

/// Records whose region code equals `region` (e.g. "R5"). Throws
/// InvalidConfig when the schema has no region attribute or the code is not
/// one of its codes.
Dataset filter_region(const Dataset& dataset, std::string_view region);

/// Line-oriented dataset file: a format tag, the resolved schema, then one
/// tab-separated line per record.
void write_dataset(const Dataset& dataset, std::ostream& out);
Dataset read_dataset(std::istream& in);
void save_dataset(const Dataset& dataset, const std::string& path);
Dataset load_dataset(const std::string& path);

}  // namespace gtdmine
