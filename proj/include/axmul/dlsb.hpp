#pragma once

#include "axmul/fixed.hpp"

namespace axmul {

// Two's-complement number with one extra LSB of weight 1 attached next to
// the original LSB. value = core + extra, so the representable range is the
// symmetric [-2^(n-1), 2^(n-1)] and negation is pure bit inversion.
struct DlsbOperand {
    FixedOperand core;
    int extra; // 0 or 1

    DlsbOperand(FixedOperand c, int extra_lsb);
};

std::int64_t dlsb_value(const DlsbOperand& x);

// Inverts all n+1 bits. Exact for every operand, never overflows.
DlsbOperand dlsb_negate(const DlsbOperand& x);

struct DlsbSum {
    DlsbOperand sum;
    // Set when the mathematical sum leaves [-2^(n-1), 2^(n-1)] and the core
    // wrapped. The adder itself wraps silently; the flag is for callers.
    bool wrapped;
};

// Conventional adder: B's extra LSB enters as carry-in, A's extra LSB is
// attached to the sum unchanged.
DlsbSum dlsb_add(const DlsbOperand& a, const DlsbOperand& b);

// Subtraction is negate-then-add on the subtrahend.
DlsbSum dlsb_sub(const DlsbOperand& a, const DlsbOperand& b);

// Booth multiplication with the extra LSBs folded into the encoding:
// A is re-expressed through a_i XOR a0+, B's least significant digit uses
// b(-1) = b0+, and the digit signs absorb (-1)^a0+. Exact product.
wide_t dlsb_multiply(const DlsbOperand& a, const DlsbOperand& b);

// Baseline formulation: conventional Booth product of A's core with the
// DLSB-encoded B, plus the explicit extra term a0+ * B. Exact product.
wide_t dlsb_multiply_straightforward(const DlsbOperand& a, const DlsbOperand& b);

// Splits a 2n-bit operand into two n-bit DLSB words: the high word absorbs
// the low word's MSB as its extra LSB, the low word gets extra LSB 0.
struct DlsbSplit {
    DlsbOperand high;
    DlsbOperand low;
};
DlsbSplit dlsb_split(const FixedOperand& x);

// 2n x 2n product assembled from four n-bit DLSB sub-products.
wide_t partition_multiply(const FixedOperand& a, const FixedOperand& b);

} // namespace axmul
