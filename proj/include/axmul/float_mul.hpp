#pragma once

#include <cstdint>
#include <string>

#include "axmul/approx.hpp"

namespace axmul {

// Binary interchange format parameters. Stored mantissa is m-1 bits; the
// full significand 1.M has m bits.
struct FpFormat {
    int total_bits;
    int exp_bits;  // w
    int frac_bits; // m - 1
    int bias;      // e_max

    static FpFormat half() { return {16, 5, 10, 15}; }
    static FpFormat single() { return {32, 8, 23, 127}; }

    int significand_bits() const { return frac_bits + 1; } // m
    std::uint32_t exp_max() const { return (1u << exp_bits) - 1; }

    bool operator==(const FpFormat& o) const {
        return total_bits == o.total_bits && exp_bits == o.exp_bits &&
               frac_bits == o.frac_bits && bias == o.bias;
    }
};

enum class FpClass { Normal, Subnormal, Zero, NaN, Inf };

// Sign / biased exponent / stored mantissa triple.
struct FpDatum {
    int sign = 0;
    std::uint32_t exponent = 0;
    std::uint64_t mantissa = 0;

    static FpDatum from_bits(std::uint64_t bits, const FpFormat& fmt);
    std::uint64_t to_bits(const FpFormat& fmt) const;

    // Hex bit-pattern form for fixtures, e.g. "0x3C00" is half 1.0.
    static FpDatum from_hex(const std::string& hex, const FpFormat& fmt);
    std::string to_hex(const FpFormat& fmt) const;

    bool operator==(const FpDatum& o) const {
        return sign == o.sign && exponent == o.exponent && mantissa == o.mantissa;
    }
};

FpClass fp_classify(const FpDatum& x, const FpFormat& fmt);

// Exact real value of a normal datum (exact in double for half and single).
double fp_decode(const FpDatum& x, const FpFormat& fmt);

// Encodes a real value that is exactly representable as a normal datum (or
// zero). Values needing rounding or outside the normal range are rejected;
// this is a fixture/test helper, not a general conversion.
FpDatum fp_encode(double value, const FpFormat& fmt);

// A multiplication outcome: either a datum or an out-of-range verdict,
// recorded before any clamping so overflow/underflow bookkeeping stays exact.
struct FpProduct {
    enum class Flag { Value, Overflow, Underflow };
    Flag flag = Flag::Value;
    FpDatum datum;
    int sign = 0; // result sign, valid for every flag

    bool is_value() const { return flag == Flag::Value; }
};

// Accurate multiply of two normal data: full m x m significand product,
// normalization, round-to-nearest-even. Non-normal inputs are rejected.
FpProduct fp_multiply_accurate(const FpDatum& a, const FpDatum& b, const FpFormat& fmt);

// Significand product computed by the perforation/rounding fixed-point
// multiplier (significands zero-extended into the signed machinery); the
// rounding unit is gone, leftover bits are truncated. A significand product
// that lost its integer bits (00.x form) is reported as overflow.
FpProduct fp_multiply_axfpu(const FpDatum& a, const FpDatum& b, const FpFormat& fmt,
                            int p, int r, RoundingConvention conv = kDefaultRounding);

// Runtime-masked variant over the significand domain.
FpProduct fp_multiply_dyfpu(const FpDatum& a, const FpDatum& b, const FpFormat& fmt,
                            const DyFxuMasks& masks);

} // namespace axmul
