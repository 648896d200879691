#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gtdmine {

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);
/// Fixed-point with the given number of decimals ("%.*f").
std::string format_fixed(double value, int decimals);

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);
std::optional<std::uint64_t> parse_hex64(std::string_view s);
std::string hex64(std::uint64_t value);

std::uint64_t fnv1a64(std::string_view bytes);

/// One CSV record per call: comma delimiter, double-quote escaping, quoted
/// fields may span lines. Returns false at end of input.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    bool next(std::vector<std::string>& fields);
    /// Physical line on which the last returned record started (1-based).
    std::size_t line() const { return record_line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
    std::size_t record_line_ = 0;
};

std::string csv_escape(std::string_view field);

struct KeyValue {
    std::string section;
    std::string key;
    std::string value;
    std::size_t line = 0;
};

/// Parses "key = value" lines grouped under optional "[section]" headers.
/// '#' starts a comment line; blank lines are skipped. Keys end at the first
/// '=' by default, or at the last one when values never contain it.
std::vector<KeyValue> parse_key_values(std::istream& in, bool split_at_last = false);

}  // namespace gtdmine
