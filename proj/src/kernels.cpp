#include "axmul/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace axmul {

Kernel2D sobel_gx(int frac_bits) {
    const std::int64_t s = std::int64_t(1) << frac_bits;
    return Kernel2D{3, frac_bits, {-s, 0, s, -2 * s, 0, 2 * s, -s, 0, s}};
}

Kernel2D sobel_gy(int frac_bits) {
    const std::int64_t s = std::int64_t(1) << frac_bits;
    return Kernel2D{3, frac_bits, {-s, -2 * s, -s, 0, 0, 0, s, 2 * s, s}};
}

Kernel2D gaussian3x3() {
    return Kernel2D{3, 4, {1, 2, 1, 2, 4, 2, 1, 2, 1}};
}

std::vector<std::int64_t> conv2d(const GrayImage& img, const Kernel2D& k, const AxConfig& cfg,
                                 int mult_width, int acc_bits) {
    if (k.size % 2 == 0) throw std::invalid_argument("conv2d: kernel size must be odd");
    if (int(k.coeffs.size()) != k.size * k.size)
        throw std::invalid_argument("conv2d: coefficient count mismatch");
    cfg.validate(mult_width);
    const int half = k.size / 2;
    const wide_t acc_limit = (wide_t(1) << (acc_bits - 1)) - 1;

    std::vector<FixedOperand> coeff_ops;
    coeff_ops.reserve(k.coeffs.size());
    for (std::int64_t c : k.coeffs) coeff_ops.emplace_back(mult_width, c);
    // pixels fit any width >= 10; cache the per-value operands
    std::vector<FixedOperand> pixel_ops;
    pixel_ops.reserve(256);
    for (int v = 0; v < 256; ++v) pixel_ops.emplace_back(mult_width, v);

    std::vector<std::int64_t> out(img.pixels.size(), 0);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            wide_t acc = 0;
            for (int ky = 0; ky < k.size; ++ky) {
                int sy = y + ky - half;
                if (sy < 0 || sy >= img.height) continue;
                for (int kx = 0; kx < k.size; ++kx) {
                    int sx = x + kx - half;
                    if (sx < 0 || sx >= img.width) continue;
                    acc += multiply_dispatch(cfg, coeff_ops[std::size_t(ky) * k.size + kx],
                                             pixel_ops[img.at(sx, sy)]);
                }
            }
            if (acc > acc_limit || acc < -acc_limit - 1)
                throw std::overflow_error("conv2d: accumulator overflow");
            out[std::size_t(y) * img.width + x] = std::int64_t(acc);
        }
    }
    return out;
}

std::vector<double> winograd_conv3x3(const GrayImage& img, const Kernel2D& k) {
    if (k.size != 3) throw std::invalid_argument("winograd: 3x3 kernels only");
    if (img.width % 2 != 0 || img.height % 2 != 0)
        throw std::invalid_argument("winograd: image dimensions must be even");

    // F(2x2, 3x3) transform matrices.
    static const double G[4][3] = {{1, 0, 0}, {0.5, 0.5, 0.5}, {0.5, -0.5, 0.5}, {0, 0, 1}};
    static const double BT[4][4] = {{1, 0, -1, 0}, {0, 1, 1, 0}, {0, -1, 1, 0}, {0, 1, 0, -1}};
    static const double AT[2][4] = {{1, 1, 1, 0}, {0, 1, -1, -1}};

    // kernel transform: G g G^T
    double g[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g[i][j] = double(k.at(j, i));
    double gg[4][3];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j) {
            gg[i][j] = 0;
            for (int t = 0; t < 3; ++t) gg[i][j] += G[i][t] * g[t][j];
        }
    double kt[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            kt[i][j] = 0;
            for (int t = 0; t < 3; ++t) kt[i][j] += gg[i][t] * G[j][t];
        }

    std::vector<double> out(img.pixels.size(), 0.0);
    for (int ty = 0; ty + 4 <= img.height; ty += 2) {
        for (int tx = 0; tx + 4 <= img.width; tx += 2) {
            double d[4][4];
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) d[i][j] = double(img.at(tx + j, ty + i));
            // D = B^T d B
            double bd[4][4], D[4][4];
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    bd[i][j] = 0;
                    for (int t = 0; t < 4; ++t) bd[i][j] += BT[i][t] * d[t][j];
                }
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    D[i][j] = 0;
                    for (int t = 0; t < 4; ++t) D[i][j] += bd[i][t] * BT[j][t];
                }
            // F = D (elementwise) kernel transform; Y = A^T F A
            double F[4][4];
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) F[i][j] = D[i][j] * kt[i][j];
            double af[2][4], Y[2][2];
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 4; ++j) {
                    af[i][j] = 0;
                    for (int t = 0; t < 4; ++t) af[i][j] += AT[i][t] * F[t][j];
                }
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    Y[i][j] = 0;
                    for (int t = 0; t < 4; ++t) Y[i][j] += af[i][t] * AT[j][t];
                }
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    out[std::size_t(ty + 1 + i) * img.width + (tx + 1 + j)] = Y[i][j];
        }
    }
    return out;
}

EdgeMap sobel(const GrayImage& img, const AxConfig& cfg, std::int64_t threshold,
              int frac_bits) {
    if (threshold < 0) throw std::invalid_argument("sobel: threshold must be >= 0");
    auto gx = conv2d(img, sobel_gx(frac_bits), cfg);
    auto gy = conv2d(img, sobel_gy(frac_bits), cfg);
    EdgeMap edges(img.pixels.size(), 0);
    for (std::size_t i = 0; i < edges.size(); ++i)
        edges[i] = std::abs(gx[i]) + std::abs(gy[i]) > threshold ? 1 : 0;
    return edges;
}

double cer(const EdgeMap& test, const EdgeMap& ref) {
    if (test.size() != ref.size()) throw std::invalid_argument("cer: dimension mismatch");
    std::size_t both = 0, in_ref = 0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        if (ref[i]) {
            ++in_ref;
            if (test[i]) ++both;
        }
    }
    return in_ref == 0 ? 1.0 : double(both) / double(in_ref);
}

FirResult fir(const std::vector<std::int64_t>& signal, const std::vector<std::int64_t>& taps,
              const AxConfig& cfg, int mult_width, int acc_bits) {
    if (taps.empty()) throw std::invalid_argument("fir: empty tap list");
    cfg.validate(mult_width);
    const wide_t acc_limit = (wide_t(1) << (acc_bits - 1)) - 1;
    std::vector<FixedOperand> tap_ops;
    tap_ops.reserve(taps.size());
    for (std::int64_t h : taps) tap_ops.emplace_back(mult_width, h);

    FirResult result;
    result.samples.resize(signal.size());
    for (std::size_t t = 0; t < signal.size(); ++t) {
        wide_t acc = 0;
        for (std::size_t i = 0; i < taps.size() && i <= t; ++i) {
            FixedOperand x(mult_width, signal[t - i]);
            acc += multiply_dispatch(cfg, tap_ops[i], x);
        }
        if (acc > acc_limit || acc < -acc_limit - 1) result.overflow = true;
        result.samples[t] = std::int64_t(acc);
    }
    return result;
}

std::vector<std::int64_t> lowpass_taps_q15(int ntaps) {
    const double fc = 20000.0, fs = 48000.0;
    const double ratio = 2.0 * fc / fs;
    std::vector<std::int64_t> taps(ntaps);
    for (int i = 0; i < ntaps; ++i) {
        double t = i - (ntaps - 1) / 2.0;
        double x = ratio * t;
        double sinc = x == 0.0 ? 1.0 : std::sin(M_PI * x) / (M_PI * x);
        double window = 0.54 - 0.46 * std::cos(2.0 * M_PI * i / (ntaps - 1));
        taps[i] = std::llround(ratio * sinc * window * 32767.0);
    }
    return taps;
}

IntMatrix matmul_tiled(const IntMatrix& a, const IntMatrix& b, const AxConfig& cfg, int tile,
                       int mult_width) {
    if (a.cols != b.rows) throw std::invalid_argument("matmul: dimension mismatch");
    if (tile <= 0) throw std::invalid_argument("matmul: bad tile");
    cfg.validate(mult_width);
    auto pad = [&](int v) { return (v + tile - 1) / tile * tile; };
    const int m = pad(a.rows), kd = pad(a.cols), n = pad(b.cols);

    IntMatrix out(a.rows, b.cols);
    for (int bi = 0; bi < m; bi += tile)
        for (int bj = 0; bj < n; bj += tile)
            for (int bk = 0; bk < kd; bk += tile)
                for (int i = bi; i < std::min(bi + tile, a.rows); ++i)
                    for (int j = bj; j < std::min(bj + tile, b.cols); ++j) {
                        wide_t acc = out.at(i, j);
                        for (int kk = bk; kk < std::min(bk + tile, a.cols); ++kk) {
                            FixedOperand x(mult_width, a.at(i, kk));
                            FixedOperand y(mult_width, b.at(kk, j));
                            acc += multiply_dispatch(cfg, x, y);
                        }
                        out.at(i, j) = std::int64_t(acc);
                    }
    return out;
}

double psnr(const GrayImage& a, const GrayImage& b) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("psnr: dimension mismatch");
    double mse = 0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        double d = double(a.pixels[i]) - double(b.pixels[i]);
        mse += d * d;
    }
    mse /= double(a.pixels.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim(const GrayImage& a, const GrayImage& b) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("ssim: dimension mismatch");
    constexpr int W = 11;
    constexpr double sigma = 1.5, K1 = 0.01, K2 = 0.03, L = 255.0;
    const double C1 = (K1 * L) * (K1 * L), C2 = (K2 * L) * (K2 * L);
    if (a.width < W || a.height < W) throw std::invalid_argument("ssim: image smaller than window");

    std::array<double, W * W> w{};
    double wsum = 0;
    for (int y = 0; y < W; ++y)
        for (int x = 0; x < W; ++x) {
            double dx = x - W / 2, dy = y - W / 2;
            w[y * W + x] = std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
            wsum += w[y * W + x];
        }
    for (double& v : w) v /= wsum;

    double total = 0;
    std::size_t count = 0;
    for (int y = 0; y + W <= a.height; ++y) {
        for (int x = 0; x + W <= a.width; ++x) {
            double mx = 0, my = 0;
            for (int j = 0; j < W; ++j)
                for (int i = 0; i < W; ++i) {
                    mx += w[j * W + i] * a.at(x + i, y + j);
                    my += w[j * W + i] * b.at(x + i, y + j);
                }
            double vx = 0, vy = 0, cov = 0;
            for (int j = 0; j < W; ++j)
                for (int i = 0; i < W; ++i) {
                    double da = a.at(x + i, y + j) - mx;
                    double db = b.at(x + i, y + j) - my;
                    vx += w[j * W + i] * da * da;
                    vy += w[j * W + i] * db * db;
                    cov += w[j * W + i] * da * db;
                }
            double s = ((2 * mx * my + C1) * (2 * cov + C2)) /
                       ((mx * mx + my * my + C1) * (vx + vy + C2));
            total += s;
            ++count;
        }
    }
    return total / double(count);
}

GrayImage gaussian_blur_fp(const GrayImage& img, const FpFormat& fmt, const AxConfig& cfg) {
    if (cfg.family != AxConfig::Family::Accurate && cfg.family != AxConfig::Family::AxFxu &&
        cfg.family != AxConfig::Family::DyFxu)
        throw std::invalid_argument("gaussian_blur_fp: acc, axfxu, or dyfxu configurations only");
    const Kernel2D k = gaussian3x3();
    const double scale = 1.0 / double(std::int64_t(1) << k.frac_bits);
    std::array<FpDatum, 9> coeff;
    for (int i = 0; i < 9; ++i) coeff[i] = fp_encode(double(k.coeffs[i]) * scale, fmt);
    std::array<FpDatum, 256> pixel_data;
    for (int v = 1; v < 256; ++v) pixel_data[v] = fp_encode(double(v), fmt);

    const int m = fmt.significand_bits();
    const int n = m + 1 + ((m + 1) % 2);

    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0;
            for (int ky = 0; ky < 3; ++ky) {
                int sy = y + ky - 1;
                if (sy < 0 || sy >= img.height) continue;
                for (int kx = 0; kx < 3; ++kx) {
                    int sx = x + kx - 1;
                    if (sx < 0 || sx >= img.width) continue;
                    int v = img.at(sx, sy);
                    if (v == 0) continue;
                    // Pixels take the rounded port; the weights' power-of-two
                    // significands pass the encoded port without loss.
                    FpProduct p;
                    if (cfg.family == AxConfig::Family::Accurate)
                        p = fp_multiply_accurate(pixel_data[v], coeff[ky * 3 + kx], fmt);
                    else if (cfg.family == AxConfig::Family::AxFxu)
                        p = fp_multiply_axfpu(pixel_data[v], coeff[ky * 3 + kx], fmt, cfg.p,
                                              cfg.r);
                    else
                        p = fp_multiply_dyfpu(pixel_data[v], coeff[ky * 3 + kx], fmt,
                                              dyfxu_masks(cfg.p, cfg.r, n));
                    if (p.is_value())
                        acc += fp_decode(p.datum, fmt);
                    else if (p.flag == FpProduct::Flag::Overflow)
                        acc += p.sign ? -256.0 : 256.0;
                }
            }
            double v = std::lround(acc);
            out.at(x, y) = std::uint8_t(v < 0 ? 0 : (v > 255 ? 255 : v));
        }
    }
    return out;
}

} // namespace axmul
