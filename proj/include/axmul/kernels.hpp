#pragma once

#include <cstdint>
#include <vector>

#include "axmul/approx.hpp"
#include "axmul/float_mul.hpp"
#include "axmul/image.hpp"

namespace axmul {

// Square convolution kernel with signed fixed-point coefficients and a
// declared binary point.
struct Kernel2D {
    int size = 3;
    int frac_bits = 0;
    std::vector<std::int64_t> coeffs; // row-major, size*size entries

    std::int64_t at(int x, int y) const { return coeffs[std::size_t(y) * size + x]; }
};

Kernel2D sobel_gx(int frac_bits = 12);
Kernel2D sobel_gy(int frac_bits = 12);
Kernel2D gaussian3x3(); // 1/16 [1 2 1; 2 4 2; 1 2 1], frac_bits 4

// Raw accumulator raster: sum over the window of kernel-weighted pixels,
// zero padding at the borders. config-selected multiplier per product; the
// image sample rides the encoded operand side of the multiplier. An
// accumulator excursion past acc_bits signals overflow.
std::vector<std::int64_t> conv2d(const GrayImage& img, const Kernel2D& k, const AxConfig& cfg,
                                 int mult_width = 16, int acc_bits = 48);

// F(2x2, 3x3) minimal-filtering convolution over 4x4 tiles with stride 2;
// transforms carried in doubles. Output matches conv2d on the valid region
// (the one-pixel border stays zero). Even image dimensions only.
std::vector<double> winograd_conv3x3(const GrayImage& img, const Kernel2D& k);

using EdgeMap = std::vector<std::uint8_t>; // 0/1, row-major, image-sized

// Edge where |Gx| + |Gy| > threshold. The threshold is in raw accumulator
// units (i.e. scaled by 2^frac_bits of the Sobel masks).
EdgeMap sobel(const GrayImage& img, const AxConfig& cfg, std::int64_t threshold,
              int frac_bits = 12);

// Correct-edge ratio: |test AND ref| / |ref|; an empty reference counts as 1.
double cer(const EdgeMap& test, const EdgeMap& ref);

struct FirResult {
    std::vector<std::int64_t> samples;
    bool overflow = false;
};

// Direct-form FIR with zero history before t=0.
FirResult fir(const std::vector<std::int64_t>& signal, const std::vector<std::int64_t>& taps,
              const AxConfig& cfg, int mult_width = 16, int acc_bits = 48);

// 32-tap Hamming-windowed low-pass taps, 20 kHz cutoff at 48 kHz, Q15.
std::vector<std::int64_t> lowpass_taps_q15(int ntaps = 32);

struct IntMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::int64_t> data;

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), data(std::size_t(r) * c, 0) {}
    std::int64_t& at(int r, int c) { return data[std::size_t(r) * cols + c]; }
    std::int64_t at(int r, int c) const { return data[std::size_t(r) * cols + c]; }
};

// Block matrix product; scalar products go through the configured
// multiplier, accumulation is exact. Dimensions are padded up to the tile.
IntMatrix matmul_tiled(const IntMatrix& a, const IntMatrix& b, const AxConfig& cfg,
                       int tile = 3, int mult_width = 16);

// 10*log10(255^2 / MSE); +inf for identical images.
double psnr(const GrayImage& a, const GrayImage& b);

// Mean structural similarity: 11x11 Gaussian window (sigma 1.5),
// K1 = 0.01, K2 = 0.03, L = 255.
double ssim(const GrayImage& a, const GrayImage& b);

// Gaussian 3x3 blur where every product is a floating-point multiply in the
// given format, configured accurate or approximate (perforation/rounding on
// the significand multiplier); the weighted sum is exact and the result is
// rounded back to 8 bits. Out-of-range verdicts saturate.
GrayImage gaussian_blur_fp(const GrayImage& img, const FpFormat& fmt, const AxConfig& cfg);

} // namespace axmul
