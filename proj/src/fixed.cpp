#include "axmul/fixed.hpp"

#include <stdexcept>
#include <string>

namespace axmul {

std::string to_string(wide_t v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    uwide_t u = neg ? uwide_t(-v) : uwide_t(v);
    std::string s;
    while (u != 0) {
        s.insert(s.begin(), char('0' + int(u % 10)));
        u /= 10;
    }
    if (neg) s.insert(s.begin(), '-');
    return s;
}

FixedOperand::FixedOperand(int width, std::int64_t value)
    : width_(width), value_(value) {
    if (width < 4 || width > 64 || width % 2 != 0)
        throw std::invalid_argument("operand width must be even and in [4, 64], got " +
                                    std::to_string(width));
    if (value < min_value(width) || value > max_value(width))
        throw std::out_of_range("value " + std::to_string(value) + " does not fit " +
                                std::to_string(width) + " bits two's-complement");
}

int FixedOperand::bit(int i) const {
    if (i < 0) return 0;
    if (i >= width_) throw std::out_of_range("bit index " + std::to_string(i));
    return int((std::uint64_t(value_) >> i) & 1u);
}

std::int64_t FixedOperand::min_value(int width) {
    return width == 64 ? INT64_MIN : -(std::int64_t(1) << (width - 1));
}

std::int64_t FixedOperand::max_value(int width) {
    return width == 64 ? INT64_MAX : (std::int64_t(1) << (width - 1)) - 1;
}

std::int64_t FixedOperand::wrap(int width, wide_t raw) {
    uwide_t mask = width == 64 ? ~uwide_t(0) >> 64 : (uwide_t(1) << width) - 1;
    std::uint64_t u = std::uint64_t(uwide_t(raw) & mask);
    if (width < 64 && (u >> (width - 1)) & 1u) u |= ~0ULL << width;
    return std::int64_t(u);
}

std::vector<Radix4Digit> encode_radix4(const FixedOperand& b, int b_minus1) {
    const int n = b.width();
    std::vector<Radix4Digit> digits(n / 2);
    for (int j = 0; j < n / 2; ++j) {
        int b_hi = b.bit(2 * j + 1);
        int b_mid = b.bit(2 * j);
        int b_lo = (2 * j - 1 < 0) ? b_minus1 : b.bit(2 * j - 1);
        Radix4Digit& d = digits[j];
        d.value = -2 * b_hi + b_mid + b_lo;
        d.sign = b_hi != 0;
        d.one = (b_lo ^ b_mid) != 0;
        d.two = ((b_hi ^ b_mid) & ~(b_lo ^ b_mid) & 1) != 0;
    }
    return digits;
}

wide_t recompose_radix4(const std::vector<Radix4Digit>& digits) {
    wide_t sum = 0;
    for (std::size_t j = 0; j < digits.size(); ++j)
        sum += wide_t(digits[j].value) << (2 * j);
    return sum;
}

wide_t multiply_accurate(const FixedOperand& a, const FixedOperand& b) {
    if (a.width() != b.width())
        throw std::invalid_argument("operand widths differ");
    wide_t product = 0;
    const auto digits = encode_radix4(b);
    for (std::size_t j = 0; j < digits.size(); ++j)
        product += (wide_t(a.value()) * digits[j].value) << (2 * j);
    return product;
}

wide_t oracle_multiply(const FixedOperand& a, const FixedOperand& b) {
    bool neg = (a.value() < 0) != (b.value() < 0);
    std::uint64_t ua = a.value() < 0 ? ~std::uint64_t(a.value()) + 1 : std::uint64_t(a.value());
    std::uint64_t ub = b.value() < 0 ? ~std::uint64_t(b.value()) + 1 : std::uint64_t(b.value());
    uwide_t acc = 0;
    for (int i = 0; i < 64; ++i)
        if ((ub >> i) & 1u) acc += uwide_t(ua) << i;
    return neg ? -wide_t(acc) : wide_t(acc);
}

} // namespace axmul
