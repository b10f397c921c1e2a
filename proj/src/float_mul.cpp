#include "axmul/float_mul.hpp"

#include <cmath>
#include <stdexcept>

namespace axmul {

FpDatum FpDatum::from_bits(std::uint64_t bits, const FpFormat& fmt) {
    FpDatum d;
    d.mantissa = bits & ((std::uint64_t(1) << fmt.frac_bits) - 1);
    d.exponent = std::uint32_t((bits >> fmt.frac_bits) & ((1u << fmt.exp_bits) - 1));
    d.sign = int((bits >> (fmt.total_bits - 1)) & 1u);
    return d;
}

std::uint64_t FpDatum::to_bits(const FpFormat& fmt) const {
    return (std::uint64_t(sign) << (fmt.total_bits - 1)) |
           (std::uint64_t(exponent) << fmt.frac_bits) | mantissa;
}

FpDatum FpDatum::from_hex(const std::string& hex, const FpFormat& fmt) {
    std::size_t pos = 0;
    std::uint64_t bits = std::stoull(hex, &pos, 16);
    if (pos != hex.size()) throw std::invalid_argument("bad hex pattern: " + hex);
    return from_bits(bits, fmt);
}

std::string FpDatum::to_hex(const FpFormat& fmt) const {
    static const char* digits = "0123456789ABCDEF";
    std::uint64_t bits = to_bits(fmt);
    std::string s;
    for (int i = fmt.total_bits - 4; i >= 0; i -= 4)
        s += digits[(bits >> i) & 0xF];
    return "0x" + s;
}

FpClass fp_classify(const FpDatum& x, const FpFormat& fmt) {
    if (x.exponent == fmt.exp_max()) return x.mantissa ? FpClass::NaN : FpClass::Inf;
    if (x.exponent == 0) return x.mantissa ? FpClass::Subnormal : FpClass::Zero;
    return FpClass::Normal;
}

double fp_decode(const FpDatum& x, const FpFormat& fmt) {
    if (fp_classify(x, fmt) != FpClass::Normal)
        throw std::domain_error("fp_decode handles normal data only");
    double significand = 1.0 + double(x.mantissa) / double(std::uint64_t(1) << fmt.frac_bits);
    return (x.sign ? -1.0 : 1.0) *
           std::ldexp(significand, int(x.exponent) - fmt.bias);
}

FpDatum fp_encode(double value, const FpFormat& fmt) {
    if (value == 0.0) return FpDatum{std::signbit(value) ? 1 : 0, 0, 0};
    int sign = value < 0 ? 1 : 0;
    int e2;
    double mant = std::frexp(std::abs(value), &e2); // in [0.5, 1)
    long exponent = e2 - 1 + fmt.bias;
    if (exponent < 1 || exponent > long(fmt.exp_max()) - 1)
        throw std::domain_error("fp_encode: value outside the normal range");
    double frac = (mant * 2.0 - 1.0) * double(std::uint64_t(1) << fmt.frac_bits);
    std::uint64_t m = std::uint64_t(frac);
    if (double(m) != frac)
        throw std::domain_error("fp_encode: value is not exactly representable");
    return FpDatum{sign, std::uint32_t(exponent), m};
}

namespace {

void require_normal(const FpDatum& x, const FpFormat& fmt, const char* who) {
    if (fp_classify(x, fmt) != FpClass::Normal)
        throw std::domain_error(std::string(who) + ": only normal inputs are modeled");
}

// Packs a normalized significand product into a datum or a range verdict.
FpProduct finalize(int sign, long exponent, std::uint64_t stored, const FpFormat& fmt) {
    FpProduct out;
    out.sign = sign;
    if (exponent > long(fmt.exp_max()) - 1) {
        out.flag = FpProduct::Flag::Overflow;
        return out;
    }
    if (exponent < 1) {
        out.flag = FpProduct::Flag::Underflow;
        return out;
    }
    out.datum = FpDatum{sign, std::uint32_t(exponent), stored};
    return out;
}

} // namespace

FpProduct fp_multiply_accurate(const FpDatum& a, const FpDatum& b, const FpFormat& fmt) {
    require_normal(a, fmt, "fp_multiply_accurate");
    require_normal(b, fmt, "fp_multiply_accurate");
    const int m = fmt.significand_bits();
    const std::uint64_t hidden = std::uint64_t(1) << fmt.frac_bits;

    int sign = a.sign ^ b.sign;
    long exponent = long(a.exponent) + long(b.exponent) - fmt.bias;

    uwide_t prod = uwide_t(hidden | a.mantissa) * (hidden | b.mantissa);
    // Product of 1.Ma * 1.Mb lies in [1, 4): top bit at column 2m-1 means
    // a shift-and-increment normalization.
    int top = int(prod >> (2 * m - 1)) & 1;
    int drop = (m - 1) + top; // fraction bits below the stored field
    std::uint64_t kept = std::uint64_t(prod >> drop);
    uwide_t rem = prod & ((uwide_t(1) << drop) - 1);
    uwide_t half = uwide_t(1) << (drop - 1);
    if (rem > half || (rem == half && (kept & 1))) ++kept; // round to nearest even
    exponent += top;
    if (kept >> m) { // rounding carried into a new integer bit
        kept >>= 1;
        ++exponent;
    }
    return finalize(sign, exponent, kept & (hidden - 1), fmt);
}

namespace {

FpProduct axfpu_core(const FpDatum& a, const FpDatum& b, const FpFormat& fmt, int p, int r,
                     RoundingConvention conv) {
    require_normal(a, fmt, "fp_multiply_axfpu");
    require_normal(b, fmt, "fp_multiply_axfpu");
    const int m = fmt.significand_bits();
    if (p < 0 || 2 * p >= m - 1) throw std::invalid_argument("axfpu: P must lie in [0, m/2-1)");
    if (r < 0 || r >= m - 1) throw std::invalid_argument("axfpu: R must lie in [0, m-1)");
    const std::uint64_t hidden = std::uint64_t(1) << fmt.frac_bits;

    int sign = a.sign ^ b.sign;
    long exponent = long(a.exponent) + long(b.exponent) - fmt.bias;

    // Significands ride through the signed fixed-point machinery with at
    // least one zero guard bit so the MSB never reads as a sign.
    int n = m + 1 + ((m + 1) % 2);
    FixedOperand fa(n, std::int64_t(hidden | a.mantissa));
    FixedOperand fb(n, std::int64_t(hidden | b.mantissa));
    // The significand datapath is 2m bits wide; an approximate product that
    // outgrows it wraps around, exactly as the accumulated matrix would.
    wide_t approx = multiply_axfxu(fa, fb, p, r, conv);
    uwide_t wrapped = uwide_t(approx) & ((uwide_t(1) << (2 * m)) - 1);

    // 01.x is already normalized; 10.x/11.x shift right once; 00.x lost its
    // integer bits to the approximations and is handled as overflow, unless
    // the exponent datapath already mandates underflow (which keeps the
    // underflow->overflow transition structurally impossible).
    int top2 = int(wrapped >> (2 * m - 2));
    if (top2 == 0) {
        FpProduct out;
        out.sign = sign;
        out.flag = exponent < 1 ? FpProduct::Flag::Underflow : FpProduct::Flag::Overflow;
        return out;
    }
    if (top2 >= 2) {
        wrapped >>= 1;
        ++exponent;
    }
    std::uint64_t kept = std::uint64_t(wrapped >> (m - 1)); // truncate, no rounding unit
    return finalize(sign, exponent, kept & (hidden - 1), fmt);
}

} // namespace

FpProduct fp_multiply_axfpu(const FpDatum& a, const FpDatum& b, const FpFormat& fmt, int p,
                            int r, RoundingConvention conv) {
    return axfpu_core(a, b, fmt, p, r, conv);
}

FpProduct fp_multiply_dyfpu(const FpDatum& a, const FpDatum& b, const FpFormat& fmt,
                            const DyFxuMasks& masks) {
    const int m = fmt.significand_bits();
    int n = m + 1 + ((m + 1) % 2);
    auto [p, r] = decode_dyfxu_masks(masks, n);
    return axfpu_core(a, b, fmt, p, r, kDefaultRounding);
}

} // namespace axmul
