#include "lassopath/scalar.hpp"

#include <array>
#include <cstring>

#include "lassopath/errors.hpp"

namespace lassopath {

std::string_view to_string(PrecisionMode mode) {
    return mode == PrecisionMode::Extended ? "extended" : "standard";
}

PrecisionMode parse_precision(std::string_view name) {
    if (name == "standard") return PrecisionMode::Standard;
    if (name == "extended") return PrecisionMode::Extended;
    throw FormatError("unknown precision mode: " + std::string(name));
}

std::string quad_to_hex(quad x) {
    static_assert(sizeof(quad) == 16);
    std::array<unsigned char, 16> bytes{};
    std::memcpy(bytes.data(), &x, 16);
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(32, '0');
    // x86-64 is little-endian; emit the most significant byte first.
    for (int k = 0; k < 16; ++k) {
        const unsigned char b = bytes[15 - k];
        out[2 * k] = digits[b >> 4];
        out[2 * k + 1] = digits[b & 0xf];
    }
    return out;
}

quad quad_from_hex(std::string_view hex) {
    if (hex.size() != 32) throw FormatError("binary128 hex payload must have 32 digits");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw FormatError(std::string("bad hex digit: ") + c);
    };
    std::array<unsigned char, 16> bytes{};
    for (int k = 0; k < 16; ++k) {
        bytes[15 - k] = static_cast<unsigned char>(nibble(hex[2 * k]) << 4 | nibble(hex[2 * k + 1]));
    }
    quad x;
    std::memcpy(&x, bytes.data(), 16);
    return x;
}

std::string quad_to_string(quad x, int digits) {
    char buf[128];
    quadmath_snprintf(buf, sizeof buf, "%.*Qg", digits, x);
    return buf;
}

}  // namespace lassopath
