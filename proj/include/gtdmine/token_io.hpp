#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace gtdmine {

/// Whitespace-separated token reader for model payloads. Every malformed or
/// missing token throws CorruptPayload.
class TokenReader {
public:
    explicit TokenReader(std::istream& in) : in_(in) {}

    std::string word();
    void expect(std::string_view token);
    double real();
    std::size_t count();
    long long integer();
    std::uint64_t u64();
    std::vector<double> reals(std::size_t n);
    std::vector<std::size_t> counts(std::size_t n);

private:
    std::istream& in_;
};

}  // namespace gtdmine
