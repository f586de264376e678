#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "pfbasis/errors.hpp"

namespace pfb {

// Exact rational arithmetic for game values and causal bounds.  Always kept
// normalized with a positive denominator.  Magnitudes stay desk-scale here,
// so 64-bit components are plenty.
struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Fraction() = default;
    Fraction(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }
    static Fraction whole(std::int64_t n) { return Fraction(n, 1); }

    void normalize() {
        if (den == 0) throw ShapeError("Fraction: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    friend bool operator==(const Fraction& a, const Fraction& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Fraction& a, const Fraction& b) { return !(a == b); }
    friend bool operator<(const Fraction& a, const Fraction& b) {
        return a.num * b.den < b.num * a.den;
    }
    friend bool operator<=(const Fraction& a, const Fraction& b) {
        return a.num * b.den <= b.num * a.den;
    }

    // "3/4" for proper fractions, bare integer otherwise.
    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

}  // namespace pfb
