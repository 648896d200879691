#include "gtdmine/encoding.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>

#include "gtdmine/error.hpp"
#include "gtdmine/schema.hpp"
#include "gtdmine/text.hpp"

namespace gtdmine {

std::vector<std::string> CodeTable::code_list() const {
    std::vector<std::string> out;
    out.reserve(codes.size());
    for (const auto& [code, name] : codes) out.push_back(code);
    return out;
}

const std::string* CodeTable::canonical_name(std::string_view code) const {
    for (const auto& [c, name] : codes) {
        if (c == code) return &name;
    }
    return nullptr;
}

namespace {

CodeTable make_table(std::vector<std::pair<std::string, std::string>> codes,
                     std::vector<std::pair<std::string, std::string>> aliases,
                     std::optional<std::string> fallback) {
    CodeTable t;
    t.codes = std::move(codes);
    for (auto& [raw, code] : aliases) t.aliases.emplace(std::move(raw), std::move(code));
    t.fallback = std::move(fallback);
    return t;
}

std::optional<std::string> lookup(const CodeTable& t, std::string_view raw) {
    if (auto it = t.aliases.find(raw); it != t.aliases.end()) return it->second;
    for (const auto& [code, name] : t.codes) {
        if (raw == name || raw == code) return code;
    }
    return std::nullopt;
}

}  // namespace

EncodingTable EncodingTable::table1() {
    EncodingTable e;
    e.set_table("attack_type",
                make_table({{"AT-1", "Armed Assault"},
                            {"AT-2", "Assassination"},
                            {"AT-3", "Bombing"},
                            {"AT-4", "Facility/Infrastructure"},
                            {"AT-5", "Hostage(Kidnapping)"},
                            {"AT-6", "Hijacking"},
                            {"AT-7", "Others"}},
                           {{"Bombing/Explosion", "AT-3"},
                            {"Facility/Infrastructure Attack", "AT-4"},
                            {"Hostage Taking (Kidnapping)", "AT-5"},
                            {"Hostage Taking (Barricade Incident)", "AT-5"},
                            {"Unarmed Assault", "AT-7"},
                            {"Unknown", "AT-7"}},
                           "AT-7"));
    e.set_table("property_loss",
                make_table({{"S", "Major"}, {"M", "Moderate"}, {"L", "Minor"}, {"U", "Unknown"}},
                           {{"Catastrophic (likely >= $1 billion)", "S"},
                            {"Major (likely >= $1 million but < $1 billion)", "S"},
                            {"Minor (likely < $1 million)", "L"}},
                           "U"));
    e.set_table("region", make_table({{"R1", "Central America & Caribbean"},
                                      {"R2", "Central Asia"},
                                      {"R3", "East Asia"},
                                      {"R4", "Eastern Europe"},
                                      {"R5", "Middle East & North Africa"},
                                      {"R6", "North America"},
                                      {"R7", "Oceania"},
                                      {"R8", "South America"},
                                      {"R9", "Southeast Asia"},
                                      {"R10", "Sub-Saharan Africa"},
                                      {"R11", "South Asia"},
                                      {"R12", "Western Europe"}},
                                     {{"Australasia & Oceania", "R7"}}, std::nullopt));
    e.set_table("weapon_type",
                make_table({{"WT-1", "Explosives-Bombs"},
                            {"WT-2", "Fake Weapons"},
                            {"WT-3", "Firearms"},
                            {"WT-4", "Incendiary"},
                            {"WT-5", "Melee"},
                            {"WT-6", "Miscellaneous"},
                            {"WT-7", "Sabotage Equipment"},
                            {"WT-8", "Unknown"},
                            {"WT-9", "Vehicle"}},
                           {{"Explosives", "WT-1"},
                            {"Explosives/Bombs/Dynamite", "WT-1"},
                            {"Biological", "WT-6"},
                            {"Chemical", "WT-6"},
                            {"Radiological", "WT-6"},
                            {"Other", "WT-6"},
                            {"Vehicle (not to include vehicle-borne explosives, i.e., car or truck bombs)",
                             "WT-9"}},
                           "WT-8"));
    e.set_timeline({{1970, 1975, "T-1"},
                    {1976, 1980, "T-2"},
                    {1981, 1985, "T-3"},
                    {1986, 1990, "T-4"},
                    {1991, 1995, "T-5"},
                    {1996, 2000, "T-6"},
                    {2001, 2005, "T-7"},
                    {2006, 2010, "T-8"},
                    {2011, 2015, "T-9"}});
    e.set_label_alias("Not-Claimed", ClassLabel::NotClaimed);
    e.set_label_alias("Not Claimed", ClassLabel::NotClaimed);
    e.set_label_alias("No-Claim", ClassLabel::NotClaimed);
    e.set_label_alias("Unclaimed", ClassLabel::Anonymous);
    e.set_label_alias("Unknown", ClassLabel::Anonymous);
    return e;
}

EncodingTable EncodingTable::parse(std::istream& in) {
    EncodingTable e;
    for (const auto& kv : parse_key_values(in, /*split_at_last=*/true)) {
        const auto where = "encoding line " + std::to_string(kv.line) + ": ";
        const std::string_view section = kv.section;
        if (section.empty()) throw Error(Errc::InvalidEncoding, where + "entry outside a section");
        if (section == "timeline") {
            const auto dash = kv.value.find('-');
            const auto lo = parse_int(kv.value.substr(0, dash));
            const auto hi = dash == std::string::npos ? std::nullopt
                                                      : parse_int(kv.value.substr(dash + 1));
            if (!lo || !hi) throw Error(Errc::InvalidEncoding, where + "expected YYYY-YYYY");
            e.timeline_.push_back({static_cast<int>(*lo), static_cast<int>(*hi), kv.key});
        } else if (section == "class.aliases") {
            const auto label = parse_label(kv.value);
            if (!label) throw Error(Errc::InvalidEncoding, where + "unknown class '" + kv.value + "'");
            e.class_aliases_[kv.key] = *label;
        } else if (section.ends_with(".codes")) {
            auto& t = e.tables_[std::string(section.substr(0, section.size() - 6))];
            t.codes.emplace_back(kv.key, kv.value);
        } else if (section.ends_with(".aliases")) {
            auto& t = e.tables_[std::string(section.substr(0, section.size() - 8))];
            t.aliases[kv.key] = kv.value;
        } else if (kv.key == "fallback") {
            auto& t = e.tables_[std::string(section)];
            if (kv.value == "error") t.fallback.reset();
            else t.fallback = kv.value;
        } else {
            throw Error(Errc::InvalidEncoding, where + "unexpected key '" + kv.key + "'");
        }
    }
    e.validate();
    return e;
}

EncodingTable EncodingTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::FileNotFound, path);
    return parse(in);
}

void EncodingTable::validate() const {
    for (const auto& [section, t] : tables_) {
        if (t.codes.empty()) throw Error(Errc::InvalidEncoding, "table '" + section + "' has no codes");
        std::set<std::string> codes;
        std::set<std::string> names;
        for (const auto& [code, name] : t.codes) {
            if (!codes.insert(code).second) {
                throw Error(Errc::InvalidEncoding, "table '" + section + "': duplicate code " + code);
            }
            // The canonical name is the raw string every code is guaranteed to have.
            if (name.empty() || !names.insert(name).second) {
                throw Error(Errc::InvalidEncoding,
                            "table '" + section + "': code " + code + " needs a unique name");
            }
        }
        for (const auto& [raw, code] : t.aliases) {
            if (!codes.contains(code)) {
                throw Error(Errc::InvalidEncoding,
                            "table '" + section + "': alias '" + raw + "' maps to unknown code " + code);
            }
        }
        if (t.fallback && !codes.contains(*t.fallback) && *t.fallback != kUnknownCode) {
            throw Error(Errc::InvalidEncoding,
                        "table '" + section + "': fallback " + *t.fallback + " is not a code");
        }
    }
    if (timeline_.empty()) throw Error(Errc::InvalidEncoding, "timeline has no bins");
    if (timeline_.front().year_lo != 1970 || timeline_.back().year_hi != 2015) {
        throw Error(Errc::InvalidEncoding, "timeline must cover 1970-2015");
    }
    for (std::size_t i = 0; i < timeline_.size(); ++i) {
        const auto& b = timeline_[i];
        if (b.year_lo > b.year_hi) throw Error(Errc::InvalidEncoding, "empty timeline bin " + b.code);
        if (i > 0 && b.year_lo != timeline_[i - 1].year_hi + 1) {
            throw Error(Errc::InvalidEncoding, "timeline bin " + b.code + " is not contiguous");
        }
    }
}

bool EncodingTable::has_table(std::string_view section) const {
    return tables_.find(section) != tables_.end();
}

const CodeTable& EncodingTable::table(std::string_view section) const {
    const auto it = tables_.find(section);
    if (it == tables_.end()) {
        throw Error(Errc::InvalidEncoding, "no encoding table '" + std::string(section) + "'");
    }
    return it->second;
}

std::vector<std::string> EncodingTable::timeline_codes() const {
    std::vector<std::string> out;
    for (const auto& b : timeline_) out.push_back(b.code);
    return out;
}

std::string EncodingTable::encode(std::string_view section, std::string_view raw) const {
    const auto& t = table(section);
    raw = trim(raw);
    if (auto code = lookup(t, raw)) return *code;
    if (t.fallback) return *t.fallback;
    if (section == "region") {
        throw Error(Errc::UnknownRegion, "'" + std::string(raw) + "' is not one of the 12 regions");
    }
    throw Error(Errc::InvalidEncoding,
                "'" + std::string(raw) + "' has no code in table '" + std::string(section) + "'");
}

std::string EncodingTable::bin_year(int year) const {
    for (const auto& b : timeline_) {
        if (year >= b.year_lo && year <= b.year_hi) return b.code;
    }
    throw Error(Errc::YearOutOfRange, std::to_string(year) + " is outside the timeline");
}

std::optional<ClassLabel> EncodingTable::label(std::string_view raw) const {
    raw = trim(raw);
    if (auto l = parse_label(raw)) return l;
    if (auto it = class_aliases_.find(raw); it != class_aliases_.end()) return it->second;
    return std::nullopt;
}

void EncodingTable::write(std::ostream& out) const {
    for (const auto& [section, t] : tables_) {
        out << '[' << section << "]\n";
        out << "fallback = " << (t.fallback ? *t.fallback : std::string("error")) << "\n\n";
        out << '[' << section << ".codes]\n";
        for (const auto& [code, name] : t.codes) out << code << " = " << name << '\n';
        out << '\n';
        if (!t.aliases.empty()) {
            out << '[' << section << ".aliases]\n";
            for (const auto& [raw, code] : t.aliases) out << raw << " = " << code << '\n';
            out << '\n';
        }
    }
    out << "[timeline]\n";
    for (const auto& b : timeline_) out << b.code << " = " << b.year_lo << '-' << b.year_hi << '\n';
    if (!class_aliases_.empty()) {
        out << "\n[class.aliases]\n";
        for (const auto& [raw, label] : class_aliases_) out << raw << " = " << label_name(label) << '\n';
    }
}

std::string encode_categorical(std::string_view attribute, std::string_view raw,
                               const EncodingTable& table) {
    return table.encode(attribute, raw);
}

std::string bin_year(int year, const EncodingTable& table) { return table.bin_year(year); }

}  // namespace gtdmine
