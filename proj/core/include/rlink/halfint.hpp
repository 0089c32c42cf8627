#pragma once

#include <cmath>
#include <cstdlib>
#include <string>

#include "rlink/errors.hpp"

namespace rlink {

/// Exact half-integer, stored as twice its value.  Linking numbers in the
/// rational homology sphere RP^3 live here.
struct HalfInt {
    long long twice = 0;

    constexpr HalfInt() = default;
    constexpr explicit HalfInt(long long twice_value) : twice(twice_value) {}

    static constexpr HalfInt whole(long long n) { return HalfInt(2 * n); }

    /// Round a raw double to the nearest half-integer.  Throws if the raw
    /// value sits farther than `guard` from every half-integer.
    static HalfInt round(double raw, double guard = 0.1) {
        double t = 2.0 * raw;
        double r = std::nearbyint(t);
        if (std::abs(t - r) > 2.0 * guard)
            throw RoundingUnsafe("raw value " + std::to_string(raw) +
                                 " is not within " + std::to_string(guard) +
                                 " of a half-integer");
        return HalfInt(static_cast<long long>(r));
    }

    double value() const { return 0.5 * static_cast<double>(twice); }
    bool is_integer() const { return twice % 2 == 0; }

    HalfInt operator-() const { return HalfInt(-twice); }
    HalfInt operator+(HalfInt o) const { return HalfInt(twice + o.twice); }
    HalfInt operator-(HalfInt o) const { return HalfInt(twice - o.twice); }
    bool operator==(const HalfInt&) const = default;
    auto operator<=>(const HalfInt&) const = default;

    HalfInt abs() const { return HalfInt(std::llabs(twice)); }

    std::string str() const {
        if (twice % 2 == 0) return std::to_string(twice / 2);
        return std::to_string(twice) + "/2";
    }
};

}  // namespace rlink
