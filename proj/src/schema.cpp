#include "gtdmine/schema.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "gtdmine/encoding.hpp"
#include "gtdmine/error.hpp"
#include "gtdmine/labels.hpp"
#include "gtdmine/text.hpp"

namespace gtdmine {

std::string_view label_name(ClassLabel label) {
    switch (label) {
        case ClassLabel::Claimed: return "Claimed";
        case ClassLabel::NotClaimed: return "NotClaimed";
        case ClassLabel::Anonymous: return "Anonymous";
    }
    return "?";
}

std::optional<ClassLabel> parse_label(std::string_view name) {
    for (auto label : kAllLabels) {
        if (label_name(label) == name) return label;
    }
    return std::nullopt;
}

std::string_view kind_name(AttributeKind kind) {
    switch (kind) {
        case AttributeKind::Categorical: return "categorical";
        case AttributeKind::Year: return "year";
        case AttributeKind::GeoLatitude: return "geo-latitude";
        case AttributeKind::GeoLongitude: return "geo-longitude";
        case AttributeKind::Class: return "class";
    }
    return "?";
}

std::optional<AttributeKind> parse_kind(std::string_view name) {
    for (auto kind : {AttributeKind::Categorical, AttributeKind::Year, AttributeKind::GeoLatitude,
                      AttributeKind::GeoLongitude, AttributeKind::Class}) {
        if (kind_name(kind) == name) return kind;
    }
    return std::nullopt;
}

AttributeSchema::AttributeSchema(std::vector<Attribute> attributes)
    : attributes_(std::move(attributes)) {
    std::set<std::string> names;
    std::size_t class_count = 0;
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        auto& a = attributes_[i];
        if (a.name.empty()) throw Error(Errc::InvalidSchema, "attribute with empty name");
        if (!names.insert(a.name).second) {
            throw Error(Errc::InvalidSchema, "duplicate attribute name '" + a.name + "'");
        }
        if (a.column.empty()) a.column = a.name;
        switch (a.kind) {
            case AttributeKind::Class:
                ++class_count;
                class_ = i;
                break;
            case AttributeKind::GeoLatitude:
                if (latitude_) throw Error(Errc::InvalidSchema, "more than one latitude attribute");
                latitude_ = i;
                break;
            case AttributeKind::GeoLongitude:
                if (longitude_) throw Error(Errc::InvalidSchema, "more than one longitude attribute");
                longitude_ = i;
                break;
            default:
                features_.push_back(i);
        }
        std::set<std::string> codes(a.codes.begin(), a.codes.end());
        if (codes.size() != a.codes.size()) {
            throw Error(Errc::InvalidSchema, "duplicate code in attribute '" + a.name + "'");
        }
    }
    if (class_count != 1) {
        throw Error(Errc::InvalidSchema, "schema needs exactly one class attribute, found " +
                                             std::to_string(class_count));
    }
    if (latitude_.has_value() != longitude_.has_value()) {
        throw Error(Errc::InvalidSchema, "latitude and longitude attributes must come as a pair");
    }
}

const Attribute& AttributeSchema::attribute(std::string_view name) const {
    const auto i = attribute_index(name);
    if (!i) throw Error(Errc::InvalidSchema, "no attribute named '" + std::string(name) + "'");
    return attributes_[*i];
}

std::optional<std::size_t> AttributeSchema::attribute_index(std::string_view name) const {
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        if (attributes_[i].name == name) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> AttributeSchema::feature_index(std::string_view name) const {
    for (std::size_t f = 0; f < features_.size(); ++f) {
        if (feature(f).name == name) return f;
    }
    return std::nullopt;
}

std::optional<std::uint32_t> AttributeSchema::code_index(std::size_t f, std::string_view code) const {
    const auto& codes = feature(f).codes;
    const auto it = std::find(codes.begin(), codes.end(), code);
    if (it == codes.end()) return std::nullopt;
    return static_cast<std::uint32_t>(it - codes.begin());
}

std::vector<std::size_t> AttributeSchema::cardinalities() const {
    std::vector<std::size_t> out;
    out.reserve(features_.size());
    for (std::size_t f = 0; f < features_.size(); ++f) out.push_back(cardinality(f));
    return out;
}

bool AttributeSchema::resolved() const {
    for (std::size_t f = 0; f < features_.size(); ++f) {
        const auto& codes = feature(f).codes;
        if (codes.empty() || std::find(codes.begin(), codes.end(), kUnknownCode) == codes.end()) {
            return false;
        }
    }
    return true;
}

void AttributeSchema::require_resolved() const {
    for (std::size_t f = 0; f < features_.size(); ++f) {
        const auto& codes = feature(f).codes;
        if (codes.empty() || std::find(codes.begin(), codes.end(), kUnknownCode) == codes.end()) {
            throw Error(Errc::InvalidSchema,
                        "attribute '" + feature(f).name + "' has no code list containing U");
        }
    }
}

AttributeSchema AttributeSchema::resolve_with(const EncodingTable& table) const {
    auto attrs = attributes_;
    for (auto& a : attrs) {
        std::vector<std::string> codes;
        if (a.kind == AttributeKind::Year) {
            codes = table.timeline_codes();
        } else if (a.kind == AttributeKind::Categorical && a.source == CodeSource::Table) {
            if (!table.has_table(a.table)) {
                throw Error(Errc::InvalidSchema,
                            "attribute '" + a.name + "' refers to missing table '" + a.table + "'");
            }
            codes = table.table(a.table).code_list();
        } else {
            continue;
        }
        if (std::find(codes.begin(), codes.end(), kUnknownCode) == codes.end()) {
            codes.emplace_back(kUnknownCode);
        }
        a.codes = std::move(codes);
    }
    return AttributeSchema(std::move(attrs));
}

AttributeSchema AttributeSchema::with_codes(std::size_t attribute,
                                            std::vector<std::string> codes) const {
    auto attrs = attributes_;
    attrs.at(attribute).codes = std::move(codes);
    return AttributeSchema(std::move(attrs));
}

std::string AttributeSchema::canonical_text() const {
    std::string out;
    for (const auto& a : attributes_) {
        out += a.name;
        out += '\t';
        out += kind_name(a.kind);
        for (const auto& c : a.codes) {
            out += '\t';
            out += c;
        }
        out += '\n';
    }
    return out;
}

std::uint64_t AttributeSchema::fingerprint() const { return fnv1a64(canonical_text()); }

AttributeSchema parse_schema(std::istream& in) {
    std::vector<Attribute> attrs;
    for (const auto& kv : parse_key_values(in)) {
        const auto parts = split(kv.value, '|');
        const auto where = "schema line " + std::to_string(kv.line) + ": ";
        Attribute a;
        a.name = kv.key;
        const auto kind = parse_kind(trim(parts[0]));
        if (!kind) throw Error(Errc::InvalidSchema, where + "unknown kind '" + parts[0] + "'");
        a.kind = *kind;
        if (parts.size() > 1) a.column = std::string(trim(parts[1]));
        if (parts.size() > 2) {
            const auto codes = trim(parts[2]);
            if (a.kind != AttributeKind::Categorical) {
                throw Error(Errc::InvalidSchema, where + "only categorical attributes take codes");
            }
            if (codes == "open") {
                a.source = CodeSource::Open;
            } else if (codes.starts_with("table:")) {
                a.source = CodeSource::Table;
                a.table = std::string(trim(codes.substr(6)));
            } else {
                a.source = CodeSource::Explicit;
                for (const auto& c : split(codes, ',')) {
                    const auto code = trim(c);
                    if (!code.empty()) a.codes.emplace_back(code);
                }
                if (std::find(a.codes.begin(), a.codes.end(), kUnknownCode) == a.codes.end()) {
                    a.codes.emplace_back(kUnknownCode);
                }
            }
        } else if (a.kind == AttributeKind::Categorical) {
            a.source = CodeSource::Open;
        }
        if (parts.size() > 3) throw Error(Errc::InvalidSchema, where + "too many fields");
        attrs.push_back(std::move(a));
    }
    return AttributeSchema(std::move(attrs));
}

AttributeSchema load_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::FileNotFound, path);
    return parse_schema(in);
}

}  // namespace gtdmine
