#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace axmul {

// 8-bit grayscale raster, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), pixels(std::size_t(w) * h, fill) {}

    std::uint8_t at(int x, int y) const { return pixels[std::size_t(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return pixels[std::size_t(y) * width + x]; }

    bool operator==(const GrayImage& o) const {
        return width == o.width && height == o.height && pixels == o.pixels;
    }
};

// PGM I/O, maxval 255. P5 is the default output; P2 is accepted and written
// on request. '#' comments in headers are tolerated.
GrayImage pgm_read(const std::string& path);
GrayImage pgm_read(std::istream& in);
void pgm_write(const std::string& path, const GrayImage& img, bool ascii = false);
void pgm_write(std::ostream& out, const GrayImage& img, bool ascii = false);

// Deterministic 256x256 synthetic scene used by the kernel benchmarks:
// smooth illumination gradient, a few solid shapes with hard edges, and a
// mild texture band.
GrayImage make_test_image(int width = 256, int height = 256);

} // namespace axmul
