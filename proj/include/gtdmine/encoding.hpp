#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gtdmine/labels.hpp"

namespace gtdmine {

/// One coded attribute: ordered codes with canonical display names, raw
/// string aliases, and the code used for unrecognized strings.
struct CodeTable {
    std::vector<std::pair<std::string, std::string>> codes;  // (code, canonical name)
    std::map<std::string, std::string, std::less<>> aliases;  // raw -> code
    std::optional<std::string> fallback;                    // nullopt: unknown strings are errors

    std::vector<std::string> code_list() const;
    const std::string* canonical_name(std::string_view code) const;
};

struct TimelineBin {
    int year_lo;  // inclusive
    int year_hi;  // inclusive
    std::string code;
};

class EncodingTable {
public:
    /// The categorical encoding bundled with the toolkit (attack type,
    /// property loss, region, weapon type, timeline).
    static EncodingTable table1();
    static EncodingTable parse(std::istream& in);
    static EncodingTable load(const std::string& path);

    /// Throws InvalidEncoding on overlapping or gapped timeline bins, on
    /// alias targets that are not codes, or on codes with no raw string.
    void validate() const;

    bool has_table(std::string_view section) const;
    const CodeTable& table(std::string_view section) const;
    const std::map<std::string, CodeTable, std::less<>>& tables() const { return tables_; }
    const std::vector<TimelineBin>& timeline() const { return timeline_; }
    std::vector<std::string> timeline_codes() const;

    /// Raw string -> code. Canonical names and the codes themselves are
    /// accepted alongside aliases. Unknown strings take the section's
    /// fallback, or throw UnknownRegion for the region section and
    /// InvalidEncoding for other sections without one.
    std::string encode(std::string_view section, std::string_view raw) const;
    std::string bin_year(int year) const;
    std::optional<ClassLabel> label(std::string_view raw) const;

    void set_table(std::string section, CodeTable table) { tables_[std::move(section)] = std::move(table); }
    void set_timeline(std::vector<TimelineBin> bins) { timeline_ = std::move(bins); }
    void set_label_alias(std::string raw, ClassLabel label) { class_aliases_[std::move(raw)] = label; }

    void write(std::ostream& out) const;

private:
    std::map<std::string, CodeTable, std::less<>> tables_;
    std::vector<TimelineBin> timeline_;
    std::map<std::string, ClassLabel, std::less<>> class_aliases_;
};

/// Table-1 code for one of the coded attributes ("attack_type",
/// "property_loss", "region", "weapon_type").
std::string encode_categorical(std::string_view attribute, std::string_view raw,
                               const EncodingTable& table);

/// Timeline code for a year in [1970, 2015]; throws YearOutOfRange.
std::string bin_year(int year, const EncodingTable& table = EncodingTable::table1());

}  // namespace gtdmine
