#include "axmul/dlsb.hpp"

#include <stdexcept>

namespace axmul {

DlsbOperand::DlsbOperand(FixedOperand c, int extra_lsb) : core(c), extra(extra_lsb) {
    if (extra_lsb != 0 && extra_lsb != 1)
        throw std::invalid_argument("extra LSB must be 0 or 1");
}

std::int64_t dlsb_value(const DlsbOperand& x) {
    return x.core.value() + x.extra;
}

DlsbOperand dlsb_negate(const DlsbOperand& x) {
    const int n = x.core.width();
    std::int64_t inverted = FixedOperand::wrap(n, ~wide_t(x.core.value()));
    return DlsbOperand(FixedOperand(n, inverted), 1 - x.extra);
}

DlsbSum dlsb_add(const DlsbOperand& a, const DlsbOperand& b) {
    const int n = a.core.width();
    if (n != b.core.width()) throw std::invalid_argument("operand widths differ");
    wide_t raw = wide_t(a.core.value()) + b.core.value() + b.extra;
    std::int64_t core = FixedOperand::wrap(n, raw);
    DlsbOperand sum(FixedOperand(n, core), a.extra);
    std::int64_t math = dlsb_value(a) + dlsb_value(b);
    return DlsbSum{sum, dlsb_value(sum) != math};
}

DlsbSum dlsb_sub(const DlsbOperand& a, const DlsbOperand& b) {
    return dlsb_add(a, dlsb_negate(b));
}

wide_t dlsb_multiply(const DlsbOperand& a, const DlsbOperand& b) {
    const int n = a.core.width();
    if (n != b.core.width()) throw std::invalid_argument("operand widths differ");
    // a'_i = a_i XOR a0+, so A+ = (-1)^a0+ * A' without a +1 step.
    std::int64_t xored = a.extra ? FixedOperand::wrap(n, ~wide_t(a.core.value()))
                                 : a.core.value();
    const FixedOperand a_prime(n, xored);
    auto digits = encode_radix4(b.core, b.extra);
    wide_t product = 0;
    for (std::size_t j = 0; j < digits.size(); ++j) {
        int digit = a.extra ? -digits[j].value : digits[j].value; // s'_j = s_j XOR a0+
        product += (wide_t(a_prime.value()) * digit) << (2 * j);
    }
    return product;
}

wide_t dlsb_multiply_straightforward(const DlsbOperand& a, const DlsbOperand& b) {
    const int n = a.core.width();
    if (n != b.core.width()) throw std::invalid_argument("operand widths differ");
    auto digits = encode_radix4(b.core, b.extra);
    wide_t core_product = 0;
    for (std::size_t j = 0; j < digits.size(); ++j)
        core_product += (wide_t(a.core.value()) * digits[j].value) << (2 * j);
    return core_product + wide_t(a.extra) * dlsb_value(b);
}

DlsbSplit dlsb_split(const FixedOperand& x) {
    const int w = x.width();
    if (w % 4 != 0)
        throw std::invalid_argument("partitioned width must be divisible by 4");
    const int n = w / 2;
    std::int64_t high = FixedOperand::wrap(n, wide_t(x.value()) >> n);
    std::int64_t low = FixedOperand::wrap(n, wide_t(x.value()));
    int shared_msb = x.bit(n - 1);
    return DlsbSplit{DlsbOperand(FixedOperand(n, high), shared_msb),
                     DlsbOperand(FixedOperand(n, low), 0)};
}

wide_t partition_multiply(const FixedOperand& a, const FixedOperand& b) {
    if (a.width() != b.width()) throw std::invalid_argument("operand widths differ");
    const int n = a.width() / 2;
    DlsbSplit as = dlsb_split(a);
    DlsbSplit bs = dlsb_split(b);
    wide_t hh = dlsb_multiply(as.high, bs.high);
    wide_t hl = dlsb_multiply(as.high, bs.low);
    wide_t lh = dlsb_multiply(as.low, bs.high);
    wide_t ll = dlsb_multiply(as.low, bs.low);
    return (hh << (2 * n)) + ((hl + lh) << n) + ll;
}

} // namespace axmul
