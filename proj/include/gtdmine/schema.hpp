#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gtdmine {

class EncodingTable;

enum class AttributeKind { Categorical, Year, GeoLatitude, GeoLongitude, Class };

std::string_view kind_name(AttributeKind kind);
std::optional<AttributeKind> parse_kind(std::string_view name);

/// Where a categorical attribute's code list comes from.
enum class CodeSource {
    Explicit,  // listed inline in the schema
    Table,     // a section of the EncodingTable
    Open,      // learned from the data file, sorted lexicographically
};

/// Sentinel code for unknown or missing values.
inline constexpr std::string_view kUnknownCode = "U";

struct Attribute {
    std::string name;
    AttributeKind kind = AttributeKind::Categorical;
    std::string column;  // CSV header; defaults to name
    CodeSource source = CodeSource::Explicit;
    std::string table;               // encoding section when source == Table
    std::vector<std::string> codes;  // allowed codes once resolved; contains "U"
};

/// Ordered attribute list. Features are the categorical and year attributes,
/// in schema order; EncodedRecord::codes is indexed by feature.
class AttributeSchema {
public:
    AttributeSchema() = default;
    explicit AttributeSchema(std::vector<Attribute> attributes);

    const std::vector<Attribute>& attributes() const { return attributes_; }
    const Attribute& attribute(std::string_view name) const;
    std::optional<std::size_t> attribute_index(std::string_view name) const;

    std::size_t feature_count() const { return features_.size(); }
    const Attribute& feature(std::size_t f) const { return attributes_[features_[f]]; }
    std::optional<std::size_t> feature_index(std::string_view name) const;
    std::size_t cardinality(std::size_t f) const { return feature(f).codes.size(); }
    std::optional<std::uint32_t> code_index(std::size_t f, std::string_view code) const;
    std::vector<std::size_t> cardinalities() const;

    std::optional<std::size_t> latitude_attribute() const { return latitude_; }
    std::optional<std::size_t> longitude_attribute() const { return longitude_; }
    const Attribute& class_attribute() const { return attributes_[class_]; }

    /// Every feature has a non-empty code list containing "U".
    bool resolved() const;
    /// Throws InvalidSchema unless resolved().
    void require_resolved() const;

    /// Fills code lists for Year and Table-sourced attributes from `table`.
    /// Open attributes are left untouched.
    AttributeSchema resolve_with(const EncodingTable& table) const;
    AttributeSchema with_codes(std::size_t attribute, std::vector<std::string> codes) const;

    /// Canonical text of names, kinds and code lists; the fingerprint hashes it.
    std::string canonical_text() const;
    std::uint64_t fingerprint() const;

    bool operator==(const AttributeSchema& other) const {
        return canonical_text() == other.canonical_text();
    }

private:
    std::vector<Attribute> attributes_;
    std::vector<std::size_t> features_;
    std::size_t class_ = 0;
    std::optional<std::size_t> latitude_;
    std::optional<std::size_t> longitude_;
};

/// Schema file: one "name = kind | column | codes" line per attribute, where
/// codes is a comma list, "table:<section>" or "open".
AttributeSchema parse_schema(std::istream& in);
AttributeSchema load_schema(const std::string& path);

}  // namespace gtdmine
