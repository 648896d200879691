#include "gtdmine/token_io.hpp"

#include <charconv>

#include "gtdmine/error.hpp"
#include "gtdmine/text.hpp"

namespace gtdmine {

std::string TokenReader::word() {
    std::string token;
    if (!(in_ >> token)) throw Error(Errc::CorruptPayload, "unexpected end of model payload");
    return token;
}

void TokenReader::expect(std::string_view token) {
    const auto got = word();
    if (got != token) {
        throw Error(Errc::CorruptPayload, "expected '" + std::string(token) + "', found '" + got + "'");
    }
}

double TokenReader::real() {
    const auto token = word();
    const auto v = parse_double(token);
    if (!v) throw Error(Errc::CorruptPayload, "expected a number, found '" + token + "'");
    return *v;
}

long long TokenReader::integer() {
    const auto token = word();
    const auto v = parse_int(token);
    if (!v) throw Error(Errc::CorruptPayload, "expected an integer, found '" + token + "'");
    return *v;
}

std::uint64_t TokenReader::u64() {
    const auto token = word();
    std::uint64_t v = 0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
        throw Error(Errc::CorruptPayload, "expected an unsigned integer, found '" + token + "'");
    }
    return v;
}

std::size_t TokenReader::count() {
    const auto v = integer();
    if (v < 0) throw Error(Errc::CorruptPayload, "negative count");
    return static_cast<std::size_t>(v);
}

std::vector<double> TokenReader::reals(std::size_t n) {
    std::vector<double> out(n);
    for (auto& x : out) x = real();
    return out;
}

std::vector<std::size_t> TokenReader::counts(std::size_t n) {
    std::vector<std::size_t> out(n);
    for (auto& x : out) x = count();
    return out;
}

}  // namespace gtdmine
