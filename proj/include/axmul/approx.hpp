#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "axmul/fixed.hpp"

namespace axmul {

// Which bits a rounded operand keeps. DropR is the reference semantics:
// A_r = 2^r * (asr(A, r) + a_{r-1}). DropRMinusOne shifts the whole scheme
// down one bit (drops r-1 bits, rounds with a_{r-2}); kept selectable for
// comparison runs.
enum class RoundingConvention { DropR, DropRMinusOne };

inline constexpr RoundingConvention kDefaultRounding = RoundingConvention::DropR;

// Rounds away the low bits of A: value 2^r*(asr(A,r) + a_{r-1}) under DropR.
// r = 0 is the identity.
std::int64_t round_operand(const FixedOperand& a, int r,
                           RoundingConvention conv = kDefaultRounding);

// Column index where truncation corrections land: at the truncated MSB
// (column r-1) or one past it (column r). The r-1 placement is the default;
// see multiply_radr.
enum class CorrectionColumn { AtRMinusOne, AtR };

inline constexpr CorrectionColumn kDefaultCorrectionColumn = CorrectionColumn::AtRMinusOne;

// One high-radix-2^k digit: the accurate value y in [-2^(k-1), 2^(k-1)-1]
// and its approximation onto {0, +-2^(k-4), +-2^(k-3), +-2^(k-2), +-2^(k-1)}.
struct HighRadixDigit {
    std::int64_t accurate = 0;
    std::int64_t approx = 0;
    bool sign = false;      // set for y < 0
    int power = -1;         // selected exponent in {k-4..k-1}, -1 when approx == 0
};

// Maps y onto the nearest of the four largest powers of two (or zero),
// half-open interval table, ties toward +inf. Rejects y outside the k-bit
// digit range. k must be even, k >= 4.
HighRadixDigit approx_high_radix_digit(std::int64_t y, int k);

// Signed value of the k low bits of B: -2^(k-1) b_{k-1} + <b_{k-2}..b_0>.
std::int64_t low_chunk_value(const FixedOperand& b, int k);

// Hybrid high-radix multiplier: B's n-k+1 MSBs keep the accurate radix-4
// encoding, the k LSBs collapse into one approximate high-radix digit.
wide_t multiply_rad(const FixedOperand& a, const FixedOperand& b, int k);

// Perforation P drops the P least significant radix-4 partial products of B;
// rounding R replaces A by round_operand(A, R) in every remaining row.
wide_t multiply_axfxu(const FixedOperand& a, const FixedOperand& b, int p, int r,
                      RoundingConvention conv = kDefaultRounding);

// Runtime masks that select an (AxFXU-equivalent) configuration on the
// always-built accurate datapath. keep_a/keep_b are AND masks with a low run
// of zeros; round_bit is the index of A's surviving rounding bit (-1 when
// rounding is off). Masks alone cannot separate R=0 from R=1, hence the
// explicit rounding-bit control.
struct DyFxuMasks {
    std::uint64_t keep_a = ~0ULL;
    std::uint64_t keep_b = ~0ULL;
    int round_bit = -1;
};

DyFxuMasks dyfxu_masks(int p, int r, int n);

// Recovers (P, R) from a mask triple over an n-bit operand pair. Masks whose
// zero run is not of the canonical dyfxu_masks form are rejected.
std::pair<int, int> decode_dyfxu_masks(const DyFxuMasks& masks, int n);

// Decodes the masks back to (P, R) and dispatches to multiply_axfxu.
wide_t multiply_dyfxu(const FixedOperand& a, const FixedOperand& b, const DyFxuMasks& masks);

// Per-row rounding schedule for ROUP2: row j (j >= P) uses A rounded by
// schedule[j - P] bits. The default schedule R_j = max(R - 2(j - P), 0)
// follows the column-aligned diagonal.
std::vector<int> roup2_default_schedule(int p, int r, int n);

// ROUP1: perforate P rows, truncate every matrix column below R, then add
// one correction bit per truncated nonzero row plus a single constant one.
wide_t multiply_roup1(const FixedOperand& a, const FixedOperand& b, int p, int r,
                      CorrectionColumn col = kDefaultCorrectionColumn);

// ROUP2: perforate P rows, round row j with its own R_j from the schedule.
wide_t multiply_roup2(const FixedOperand& a, const FixedOperand& b, int p, int r,
                      const std::vector<int>* schedule = nullptr,
                      RoundingConvention conv = kDefaultRounding);

// High-radix low digit on B plus truncation of the radix-4 sub-matrix below
// column R, with the same correction scheme as ROUP1.
wide_t multiply_radr(const FixedOperand& a, const FixedOperand& b, int k, int r,
                     CorrectionColumn col = kDefaultCorrectionColumn);

// Double high-radix encoding: A's m LSBs and B's k LSBs each collapse into
// an approximate digit. perforate additionally drops the A * y0 term (DRADP).
wide_t multiply_drad(const FixedOperand& a, const FixedOperand& b, int k, int m,
                     bool perforate = false);

// Tagged configuration naming one multiplier family and its parameters.
// Serializes to the forms: acc | rad:k=6 | perf:p=2 | axfxu:p=2,r=4 |
// dyfxu:p=2,r=4 | roup1:p=1,r=3 | roup2:p=3,r=10[,rj=10:8:6] |
// radr:k=6,r=8 | drad:k=8,m=8 | dradp:k=8,m=8
struct AxConfig {
    enum class Family { Accurate, Rad, Perf, AxFxu, DyFxu, Roup1, Roup2, Radr, Drad, Dradp };

    Family family = Family::Accurate;
    int k = 0;
    int m = 0;
    int p = 0;
    int r = 0;
    std::optional<std::vector<int>> schedule; // ROUP2 only

    static AxConfig accurate();
    static AxConfig rad(int k);
    static AxConfig perf(int p);
    static AxConfig axfxu(int p, int r);
    static AxConfig dyfxu(int p, int r);
    static AxConfig roup1(int p, int r);
    static AxConfig roup2(int p, int r, std::optional<std::vector<int>> schedule = {});
    static AxConfig radr(int k, int r);
    static AxConfig drad(int k, int m);
    static AxConfig dradp(int k, int m);

    static AxConfig parse(const std::string& text);
    std::string to_string() const;

    // Throws if the parameters are outside their legal ranges for width n.
    void validate(int n) const;

    // True for configurations whose error is known to explode (P at its cap
    // combined with near-maximal R); reports mark these rows.
    bool extreme(int n) const;

    bool operator==(const AxConfig& o) const;
};

// Routes to the family implementation. b is the operand the approximate
// encodings transform (RAD's encoded operand, the perforated digit source).
wide_t multiply_dispatch(const AxConfig& cfg, const FixedOperand& a, const FixedOperand& b,
                         RoundingConvention conv = kDefaultRounding);

} // namespace axmul
