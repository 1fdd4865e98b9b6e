#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include <quadmath.h>

namespace lassopath {

using quad = __float128;

// Storage scalar for instances and paths. Computation may run in double
// (PrecisionMode::Standard) and is widened back to this type on output.
using Real = quad;

enum class PrecisionMode { Standard, Extended };

std::string_view to_string(PrecisionMode mode);
PrecisionMode parse_precision(std::string_view name);

template <class T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr int significand_bits = 53;
    static constexpr PrecisionMode mode = PrecisionMode::Standard;
    static double epsilon() { return std::numeric_limits<double>::epsilon(); }
    static double infinity() { return std::numeric_limits<double>::infinity(); }
};

template <>
struct scalar_traits<quad> {
    static constexpr int significand_bits = 113;
    static constexpr PrecisionMode mode = PrecisionMode::Extended;
    static quad epsilon() { return FLT128_EPSILON; }
    static quad infinity() { return __builtin_inff128(); }
};

inline double sqrt(double x) { return std::sqrt(x); }
inline quad sqrt(quad x) { return sqrtq(x); }
inline double abs(double x) { return std::fabs(x); }
inline quad abs(quad x) { return fabsq(x); }
inline bool isfinite(double x) { return std::isfinite(x); }
inline bool isfinite(quad x) { return finiteq(x) != 0; }
inline bool isinf(quad x) { return isinfq(x) != 0; }

template <class T>
int sign_of(T x) {
    return (x > T(0)) - (x < T(0));
}

inline double to_double(double x) { return x; }
inline double to_double(quad x) { return static_cast<double>(x); }

// 32 lowercase hex digits of the IEEE binary128 bit pattern, most
// significant byte first. Round-trips every value including infinities.
std::string quad_to_hex(quad x);
quad quad_from_hex(std::string_view hex);

// Shortest-ish decimal rendering for logs and CSV cells.
std::string quad_to_string(quad x, int digits = 36);

}  // namespace lassopath
