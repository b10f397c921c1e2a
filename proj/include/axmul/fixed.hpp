#pragma once

#include <cstdint>
#include <vector>

#include "axmul/types.hpp"

namespace axmul {

// An n-bit two's-complement operand. Width is a runtime parameter: even,
// 4 <= n <= 64, so any product fits a 128-bit accumulator.
class FixedOperand {
public:
    FixedOperand(int width, std::int64_t value);

    int width() const { return width_; }
    std::int64_t value() const { return value_; }

    // Bit i of the two's-complement pattern; bit(-1) = 0 so Booth digit 0
    // can be formed uniformly.
    int bit(int i) const;

    static std::int64_t min_value(int width);
    static std::int64_t max_value(int width);

    // Reduces an arbitrary integer into the n-bit two's-complement range.
    static std::int64_t wrap(int width, wide_t raw);

    bool operator==(const FixedOperand& o) const {
        return width_ == o.width_ && value_ == o.value_;
    }

private:
    int width_;
    std::int64_t value_;
};

// One radix-4 (Modified Booth) digit with its encoding signals.
// value = (-1)^sign * (2*two + one), and one/two are never both set.
struct Radix4Digit {
    int value = 0; // in {0, +-1, +-2}
    bool sign = false;
    bool one = false;
    bool two = false;
};

// Radix-4 encoding of B into n/2 digits. b(-1) defaults to 0; a DLSB
// multiplier injects its extra LSB there instead.
std::vector<Radix4Digit> encode_radix4(const FixedOperand& b, int b_minus1 = 0);

// Value of sum_j 4^j * digit_j. Recomposes the encoded operand exactly.
wide_t recompose_radix4(const std::vector<Radix4Digit>& digits);

// Booth-encoded multiplication: sum_j 4^j * (A * y_j). Exact.
wide_t multiply_accurate(const FixedOperand& a, const FixedOperand& b);

// Independent cross-check: sign-magnitude shift-and-add, no Booth encoding.
wide_t oracle_multiply(const FixedOperand& a, const FixedOperand& b);

} // namespace axmul
