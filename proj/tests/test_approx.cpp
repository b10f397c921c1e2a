#include "doctest.h"

#include <stdexcept>

#include <cmath>

#include "axmul/error_lab.hpp"

using namespace axmul;

namespace {

// Independent route for the digit approximation: nearest candidate in
// {0, +-2^(k-4) .. +-2^(k-1)}, ties toward +infinity.
std::int64_t nearest_tie_up(std::int64_t y, int k) {
    std::vector<std::int64_t> candidates{0};
    for (int e = k - 4; e <= k - 1; ++e) {
        candidates.push_back(std::int64_t(1) << e);
        candidates.push_back(-(std::int64_t(1) << e));
    }
    std::int64_t best = 0;
    std::int64_t best_dist = INT64_MAX;
    for (std::int64_t c : candidates) {
        std::int64_t dist = std::abs(y - c);
        if (dist < best_dist || (dist == best_dist && c > best)) {
            best = c;
            best_dist = dist;
        }
    }
    return best;
}

// Bit-matrix route for the truncate-and-correct designs: rows are realized
// as wrapped two's-complement patterns (inversion plus carry for negation),
// truncation masks the low columns, the corrections ride a separate vector.
uwide_t matrix_route(const FixedOperand& a, const std::vector<Radix4Digit>& digits,
                     int first_row, int r, int corr_col, uwide_t extra_term) {
    uwide_t acc = extra_term;
    bool any_truncated = false;
    for (std::size_t j = first_row; j < digits.size(); ++j) {
        const auto& d = digits[j];
        uwide_t magnitude = d.two ? uwide_t(std::uint64_t(a.value())) << 1
                                  : (d.one ? uwide_t(std::uint64_t(a.value())) : 0);
        uwide_t row = d.sign ? ~magnitude + 1 : magnitude; // wrapped negation
        row <<= 2 * j;
        if (int(2 * j) < r) {
            row &= ~((uwide_t(1) << r) - 1);
            if (d.one || d.two) {
                any_truncated = true;
                row += uwide_t(1) << corr_col;
            }
        }
        acc += row;
    }
    if (any_truncated) acc += uwide_t(1) << corr_col;
    return acc;
}

bool wrapped_equal(wide_t value, uwide_t pattern, int bits) {
    uwide_t mask = (uwide_t(1) << bits) - 1;
    return (uwide_t(value) & mask) == (pattern & mask);
}

} // namespace

TEST_CASE("high-radix digit approximation: table rows") {
    CHECK(approx_high_radix_digit(5, 6).approx == 4);  // [2, 6) row
    CHECK(approx_high_radix_digit(1, 6).approx == 0);  // [0, 2) row
    CHECK(approx_high_radix_digit(-32, 6).approx == -32);
    CHECK(approx_high_radix_digit(-1, 6).approx == 0);
    CHECK(approx_high_radix_digit(-1, 6).sign);
    CHECK(approx_high_radix_digit(12, 6).approx == 16); // boundary goes up
    CHECK(approx_high_radix_digit(-2, 6).approx == 0);  // tie toward +inf
}

TEST_CASE("high-radix digit approximation matches nearest-tie-up everywhere") {
    for (int k : {4, 6, 8, 10}) {
        std::int64_t half = std::int64_t(1) << (k - 1);
        for (std::int64_t y = -half; y < half; ++y) {
            auto d = approx_high_radix_digit(y, k);
            REQUIRE(d.approx == nearest_tie_up(y, k));
            REQUIRE(d.sign == (y < 0));
            if (d.approx == 0) REQUIRE(d.power == -1);
            else REQUIRE((std::int64_t(1) << d.power) == std::abs(d.approx));
        }
        CHECK_THROWS_AS(approx_high_radix_digit(half, k), std::out_of_range);
        CHECK_THROWS_AS(approx_high_radix_digit(-half - 1, k), std::out_of_range);
    }
}

TEST_CASE("hybrid high-radix multiplication") {
    FixedOperand a(16, 100), b(16, 5);
    CHECK(multiply_rad(a, b, 6) == 400); // 5 maps to 4 in the low digit
    CHECK(multiply_rad(a, FixedOperand(16, 0), 6) == 0);
    CHECK(multiply_rad(FixedOperand(16, -7), FixedOperand(16, 0), 10) == 0);
}

TEST_CASE("relative error of the hybrid design depends only on the encoded operand") {
    // exact rational comparison: |d1|*|a2*b| == |d2|*|a1*b|
    CounterRng rng(3);
    for (std::uint64_t i = 0; i < 2000; ++i) {
        FixedPair pr = sample_uniform_fixed_at(16, i, rng);
        if (pr.a == 0 || pr.b == 0) continue;
        std::int64_t a2v = pr.a == 1 ? 2 : 1;
        FixedOperand a1(16, pr.a), a2(16, a2v), b(16, pr.b);
        wide_t d1 = wide_abs(multiply_accurate(a1, b) - multiply_rad(a1, b, 8));
        wide_t d2 = wide_abs(multiply_accurate(a2, b) - multiply_rad(a2, b, 8));
        REQUIRE(d1 * wide_abs(wide_t(a2v) * pr.b) == d2 * wide_abs(wide_t(pr.a) * pr.b));
    }
}

TEST_CASE("closed-form hybrid metrics sit at the characterized level") {
    auto rep = rad_closed_form(16, 6);
    CHECK(rep.mred * 100 == doctest::Approx(0.08).epsilon(0.07));
    CHECK(rep.pred[0] * 100 == doctest::Approx(0.42).epsilon(0.05));
}

TEST_CASE("operand rounding") {
    CHECK(round_operand(FixedOperand(8, 7), 2) == 8);
    CHECK(round_operand(FixedOperand(8, 5), 2) == 4);
    for (int v = -128; v <= 127; ++v) CHECK(round_operand(FixedOperand(8, v), 0) == v);
    // the alternate convention shifts the whole scheme one bit down
    CHECK(round_operand(FixedOperand(8, 7), 2, RoundingConvention::DropRMinusOne) ==
          round_operand(FixedOperand(8, 7), 1));
}

TEST_CASE("perforation-and-rounding multiplier: identity and hand case") {
    for (int av = -128; av <= 127; av += 3)
        for (int bv = -128; bv <= 127; bv += 5) {
            FixedOperand a(8, av), b(8, bv);
            REQUIRE(multiply_axfxu(a, b, 0, 0) == multiply_accurate(a, b));
        }
    // B = 3 encodes to digits [-1, +1]; perforating the first leaves 4*1*1
    CHECK(multiply_axfxu(FixedOperand(8, 1), FixedOperand(8, 3), 1, 0) == 4);
}

TEST_CASE("runtime masks") {
    DyFxuMasks m = dyfxu_masks(2, 4, 8);
    CHECK(m.keep_a == 0xF8);
    CHECK(m.keep_b == 0xF8);
    CHECK(m.round_bit == 3);

    DyFxuMasks id = dyfxu_masks(0, 0, 8);
    CHECK(id.keep_a == 0xFF);
    CHECK(id.keep_b == 0xFF);
    CHECK(id.round_bit == -1);

    auto [p0, r0] = decode_dyfxu_masks(id, 8);
    CHECK(p0 == 0);
    CHECK(r0 == 0);

    DyFxuMasks bad = m;
    bad.keep_b = 0xF4; // hole in the run
    FixedOperand x(8, 9), y(8, -5);
    CHECK_THROWS_AS(multiply_dyfxu(x, y, bad), std::invalid_argument);
    bad = m;
    bad.round_bit = 1; // round bit away from the run boundary
    CHECK_THROWS_AS(multiply_dyfxu(x, y, bad), std::invalid_argument);
    bad = m;
    bad.keep_b = 0xF0; // even-length zero run cannot encode a perforation
    CHECK_THROWS_AS(multiply_dyfxu(x, y, bad), std::invalid_argument);
}

TEST_CASE("runtime masked multiply equals the design-time one on samples") {
    CounterRng rng(11);
    for (int p = 0; p < 7; ++p)
        for (int r = 0; r < 15; r += 3) {
            DyFxuMasks masks = dyfxu_masks(p, r, 16);
            for (std::uint64_t i = 0; i < 500; ++i) {
                FixedPair pr = sample_uniform_fixed_at(16, i + 1000 * p + 17 * r, rng);
                FixedOperand a(16, pr.a), b(16, pr.b);
                REQUIRE(multiply_dyfxu(a, b, masks) == multiply_axfxu(a, b, p, r));
            }
        }
}

TEST_CASE("perforation-only configuration equals rounding 0") {
    CounterRng rng(13);
    for (int n : {8, 12, 16})
        for (int p = 0; p < n / 2 - 1; ++p)
            for (std::uint64_t i = 0; i < 300; ++i) {
                FixedPair pr = sample_uniform_fixed_at(n, i, rng);
                FixedOperand a(n, pr.a), b(n, pr.b);
                REQUIRE(multiply_dispatch(AxConfig::perf(p), a, b) ==
                        multiply_axfxu(a, b, p, 0));
            }
}

TEST_CASE("sampled error grows monotonically with perforation") {
    std::vector<double> mred;
    for (int p = 0; p <= 5; ++p) {
        CounterRng rng(1);
        MetricsAccumulator acc;
        for (std::uint64_t i = 0; i < 50000; ++i) {
            FixedPair pr = sample_uniform_fixed_at(16, i, rng);
            FixedOperand a(16, pr.a), b(16, pr.b);
            acc.add(multiply_accurate(a, b), multiply_axfxu(a, b, p, 4));
        }
        mred.push_back(acc.report().mred);
    }
    for (std::size_t i = 1; i < mred.size(); ++i) CHECK(mred[i] >= mred[i - 1]);
}

TEST_CASE("column-truncating designs match the bit-matrix route") {
    CounterRng rng(17);
    for (std::uint64_t i = 0; i < 4000; ++i) {
        FixedPair pr = sample_uniform_fixed_at(16, i, rng);
        FixedOperand a(16, pr.a), b(16, pr.b);
        auto digits = encode_radix4(b);
        int p = int(rng.at(900000 + i) % 6);
        int r = int(rng.at(910000 + i) % 21);
        uwide_t want = matrix_route(a, digits, p, r, r - 1 < 0 ? 0 : r - 1, 0);
        REQUIRE(wrapped_equal(multiply_roup1(a, b, p, r), want, 40));

        int k = 6 + 2 * int(rng.at(920000 + i) % 3);
        std::int64_t y0 = approx_high_radix_digit(low_chunk_value(b, k), k).approx;
        uwide_t base = uwide_t(wide_t(a.value()) * y0);
        uwide_t radr_want = matrix_route(a, digits, k / 2, r, r - 1 < 0 ? 0 : r - 1, base);
        REQUIRE(wrapped_equal(multiply_radr(a, b, k, r), radr_want, 40));
    }
}

TEST_CASE("column truncation below the surviving rows is inert") {
    CounterRng rng(19);
    for (std::uint64_t i = 0; i < 2000; ++i) {
        FixedPair pr = sample_uniform_fixed_at(16, i, rng);
        FixedOperand a(16, pr.a), b(16, pr.b);
        REQUIRE(multiply_roup1(a, b, 3, 6) == multiply_axfxu(a, b, 3, 0));
        REQUIRE(multiply_radr(a, b, 6, 0) == multiply_rad(a, b, 6));
        REQUIRE(multiply_radr(a, b, 8, 8) == multiply_rad(a, b, 8));
    }
}

TEST_CASE("per-row rounding schedule") {
    CHECK(roup2_default_schedule(3, 10, 16) == std::vector<int>{10, 8, 6, 4, 2});
    // all-zero schedule with no perforation is the accurate product
    std::vector<int> zeros(8, 0);
    CounterRng rng(23);
    for (std::uint64_t i = 0; i < 1000; ++i) {
        FixedPair pr = sample_uniform_fixed_at(16, i, rng);
        FixedOperand a(16, pr.a), b(16, pr.b);
        REQUIRE(multiply_roup2(a, b, 0, 0, &zeros) == multiply_accurate(a, b));
    }
}

TEST_CASE("per-row rounding matches an independent row-sum") {
    FixedOperand a(16, 255), b(16, 255);
    auto digits = encode_radix4(b);
    auto sched = roup2_default_schedule(3, 10, 16);
    wide_t want = 0;
    for (int j = 3; j < 8; ++j) {
        int rj = sched[j - 3];
        // round-half-up expression instead of the shift-and-add-bit form
        std::int64_t rounded =
            rj == 0 ? a.value()
                    : ((a.value() + (std::int64_t(1) << (rj - 1))) >> rj) << rj;
        want += (wide_t(rounded) * digits[j].value) << (2 * j);
    }
    CHECK(multiply_roup2(a, b, 3, 10) == want);
    // an explicit schedule overrides the default diagonal
    FixedOperand a2(16, 21931);
    std::vector<int> flat(5, 4);
    CHECK(multiply_roup2(a2, b, 3, 4, &flat) != multiply_roup2(a2, b, 3, 4));
}

TEST_CASE("double high-radix design") {
    // low k/m bits zero on both operands leaves the product exact
    FixedOperand a(16, 0x100), b(16, 0x300);
    CHECK(multiply_drad(a, b, 8, 8, false) == multiply_accurate(a, b));

    // term-by-term route at (8,8), A = B = 0x00FF
    FixedOperand x(16, 0xFF), y(16, 0xFF);
    std::int64_t x0 = low_chunk_value(x, 8);
    CHECK(x0 == -1);
    std::int64_t a1 = x.value() - x0;
    wide_t b1 = 0;
    auto digits = encode_radix4(y);
    for (int j = 4; j < 8; ++j) b1 += wide_t(digits[j].value) << (2 * j);
    wide_t want = wide_t(a1) * b1 + b1 * approx_high_radix_digit(x0, 8).approx +
                  wide_t(x.value()) * approx_high_radix_digit(low_chunk_value(y, 8), 8).approx;
    CHECK(multiply_drad(x, y, 8, 8, false) == want);
    CHECK(want == 65536);
}

TEST_CASE("perforating the double high-radix design increases the error") {
    CounterRng rng(1);
    MetricsAccumulator drad_acc, dradp_acc;
    for (std::uint64_t i = 0; i < 50000; ++i) {
        FixedPair pr = sample_uniform_fixed_at(16, i, rng);
        FixedOperand a(16, pr.a), b(16, pr.b);
        wide_t exact = multiply_accurate(a, b);
        drad_acc.add(exact, multiply_drad(a, b, 8, 8, false));
        dradp_acc.add(exact, multiply_drad(a, b, 8, 8, true));
    }
    CHECK(dradp_acc.report().mred >= drad_acc.report().mred);
}

TEST_CASE("high-radix with rounding slots between the pure high-radix designs") {
    CounterRng rng(1);
    MetricsAccumulator rad6, rad8, radr68;
    for (std::uint64_t i = 0; i < 50000; ++i) {
        FixedPair pr = sample_uniform_fixed_at(16, i, rng);
        FixedOperand a(16, pr.a), b(16, pr.b);
        wide_t exact = multiply_accurate(a, b);
        rad6.add(exact, multiply_rad(a, b, 6));
        rad8.add(exact, multiply_rad(a, b, 8));
        radr68.add(exact, multiply_radr(a, b, 6, 8));
    }
    double lo = rad6.report().mred, mid = radr68.report().mred, hi = rad8.report().mred;
    CHECK(lo < mid);
    CHECK(mid < hi);
}

TEST_CASE("every approximate product stays inside the 2n-bit range") {
    CounterRng rng(29);
    std::vector<AxConfig> configs = {
        AxConfig::accurate(),    AxConfig::rad(6),        AxConfig::rad(10),
        AxConfig::perf(4),       AxConfig::axfxu(4, 12),  AxConfig::dyfxu(4, 12),
        AxConfig::roup1(4, 19),  AxConfig::roup2(4, 14),  AxConfig::radr(6, 20),
        AxConfig::drad(8, 8),    AxConfig::dradp(8, 8),
    };
    for (int n : {8, 16}) {
        const wide_t limit = wide_t(1) << (2 * n - 1);
        for (const AxConfig& cfg : configs) {
            bool legal = true;
            try {
                cfg.validate(n);
            } catch (const std::invalid_argument&) {
                legal = false;
            }
            if (!legal) continue;
            for (std::uint64_t i = 0; i < 2000; ++i) {
                FixedPair pr = sample_uniform_fixed_at(n, i, rng);
                FixedOperand a(n, pr.a), b(n, pr.b);
                wide_t product = multiply_dispatch(cfg, a, b);
                REQUIRE(product < limit);
                REQUIRE(product >= -limit);
            }
        }
    }
}

TEST_CASE("configuration text round-trips") {
    for (const char* text :
         {"acc", "rad:k=6", "perf:p=2", "axfxu:p=2,r=4", "dyfxu:p=1,r=2", "roup1:p=1,r=3",
          "roup2:p=3,r=10", "roup2:p=3,r=10,rj=10:8:6:4:2", "radr:k=6,r=8", "drad:k=8,m=8",
          "dradp:k=8,m=8"}) {
        AxConfig cfg = AxConfig::parse(text);
        REQUIRE(AxConfig::parse(cfg.to_string()) == cfg);
    }
    CHECK_THROWS_AS(AxConfig::parse("nope:p=1"), std::invalid_argument);
    CHECK_THROWS_AS(AxConfig::parse("rad:p=1"), std::invalid_argument);
    CHECK_THROWS_AS(AxConfig::parse("acc:k=4"), std::invalid_argument);
    CHECK_THROWS_AS(AxConfig::parse("axfxu:p=2"), std::invalid_argument);
}

TEST_CASE("dispatch routes and validates") {
    FixedOperand a(16, 1234), b(16, -567);
    CHECK(multiply_dispatch(AxConfig::accurate(), a, b) == multiply_accurate(a, b));
    CHECK(multiply_dispatch(AxConfig::rad(6), a, b) == multiply_rad(a, b, 6));
    CHECK(multiply_dispatch(AxConfig::axfxu(0, 0), a, b) == multiply_accurate(a, b));
    CHECK_THROWS_AS(multiply_dispatch(AxConfig::rad(5), a, b), std::invalid_argument);
    CHECK_THROWS_AS(multiply_dispatch(AxConfig::rad(16), a, b), std::invalid_argument);
    CHECK_THROWS_AS(multiply_dispatch(AxConfig::axfxu(7, 0), a, b), std::invalid_argument);
    CHECK_THROWS_AS(multiply_dispatch(AxConfig::axfxu(0, 15), a, b), std::invalid_argument);
    CHECK(AxConfig::axfxu(6, 12).extreme(16));
    CHECK(!AxConfig::axfxu(2, 4).extreme(16));
}
