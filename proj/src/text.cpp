#include "gtdmine/text.hpp"

#include <charconv>
#include <cstdio>
#include <istream>

#include "gtdmine/error.hpp"

namespace gtdmine {

std::string_view errc_name(Errc code) {
    switch (code) {
        case Errc::FileNotFound: return "FileNotFound";
        case Errc::HeaderMismatch: return "HeaderMismatch";
        case Errc::RowError: return "RowError";
        case Errc::UnknownRegion: return "UnknownRegion";
        case Errc::YearOutOfRange: return "YearOutOfRange";
        case Errc::TooFewRecords: return "TooFewRecords";
        case Errc::ClassTooSmall: return "ClassTooSmall";
        case Errc::InvalidDistribution: return "InvalidDistribution";
        case Errc::InvalidSchema: return "InvalidSchema";
        case Errc::InvalidEncoding: return "InvalidEncoding";
        case Errc::EmptyCounts: return "EmptyCounts";
        case Errc::EmptyDataset: return "EmptyDataset";
        case Errc::EmptyIndex: return "EmptyIndex";
        case Errc::ShapeMismatch: return "ShapeMismatch";
        case Errc::InvalidHyperparameter: return "InvalidHyperparameter";
        case Errc::UnknownLabel: return "UnknownLabel";
        case Errc::EmptyMatrix: return "EmptyMatrix";
        case Errc::DegenerateClass: return "DegenerateClass";
        case Errc::InvalidBounds: return "InvalidBounds";
        case Errc::IoError: return "IoError";
        case Errc::FormatVersionMismatch: return "FormatVersionMismatch";
        case Errc::SchemaFingerprintMismatch: return "SchemaFingerprintMismatch";
        case Errc::CorruptPayload: return "CorruptPayload";
        case Errc::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            return out;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<long long> parse_int(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<std::uint64_t> parse_hex64(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v, 16);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

bool CsvReader::next(std::vector<std::string>& fields) {
    fields.clear();
    std::string line;
    if (!std::getline(in_, line)) return false;
    ++line_;
    record_line_ = line_;

    std::string field;
    bool quoted = false;
    std::size_t i = 0;
    while (true) {
        if (i == line.size()) {
            if (quoted) {
                // Quoted field continues on the next physical line.
                if (!std::getline(in_, line)) {
                    throw Error(Errc::RowError, "line " + std::to_string(record_line_) +
                                                    ": unterminated quoted field");
                }
                ++line_;
                field.push_back('\n');
                i = 0;
                continue;
            }
            break;
        }
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\r' && i + 1 == line.size()) {
            // CRLF line ending
        } else {
            field.push_back(c);
        }
        ++i;
    }
    fields.push_back(std::move(field));
    return true;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::vector<KeyValue> parse_key_values(std::istream& in, bool split_at_last) {
    std::vector<KeyValue> out;
    std::string section;
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw Error(Errc::CorruptPayload,
                            "line " + std::to_string(lineno) + ": malformed section header");
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = split_at_last ? line.rfind('=') : line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(Errc::CorruptPayload,
                        "line " + std::to_string(lineno) + ": expected key = value");
        }
        out.push_back(KeyValue{section, std::string(trim(line.substr(0, eq))),
                               std::string(trim(line.substr(eq + 1))), lineno});
    }
    return out;
}

}  // namespace gtdmine
