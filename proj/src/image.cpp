#include "axmul/image.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace axmul {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) continue;
        tok += char(c);
        while ((c = in.get()) != EOF && !std::isspace(c) && c != '#') tok += char(c);
        if (c == '#') in.unget();
        return tok;
    }
    throw std::runtime_error("pgm: truncated header");
}

int next_int(std::istream& in, const char* what) {
    std::string tok = next_token(in);
    try {
        std::size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(std::string("pgm: bad ") + what + " field: " + tok);
    }
}

} // namespace

GrayImage pgm_read(std::istream& in) {
    std::string magic = next_token(in);
    if (magic != "P2" && magic != "P5") throw std::runtime_error("pgm: not a P2/P5 file");
    int w = next_int(in, "width");
    int h = next_int(in, "height");
    int maxval = next_int(in, "maxval");
    if (w <= 0 || h <= 0) throw std::runtime_error("pgm: bad dimensions");
    if (maxval != 255) throw std::runtime_error("pgm: only maxval 255 is supported");

    GrayImage img(w, h);
    if (magic == "P5") {
        // the whitespace after maxval was consumed with the token
        in.read(reinterpret_cast<char*>(img.pixels.data()), std::streamsize(img.pixels.size()));
        if (std::size_t(in.gcount()) != img.pixels.size())
            throw std::runtime_error("pgm: truncated raster");
    } else {
        for (auto& px : img.pixels) {
            int v = next_int(in, "pixel");
            if (v < 0 || v > 255) throw std::runtime_error("pgm: pixel out of range");
            px = std::uint8_t(v);
        }
    }
    return img;
}

GrayImage pgm_read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("pgm: cannot open " + path);
    return pgm_read(in);
}

void pgm_write(std::ostream& out, const GrayImage& img, bool ascii) {
    if (img.width <= 0 || img.height <= 0 ||
        img.pixels.size() != std::size_t(img.width) * img.height)
        throw std::runtime_error("pgm: malformed image");
    if (ascii) {
        out << "P2\n" << img.width << " " << img.height << "\n255\n";
        int line_len = 0;
        for (std::size_t i = 0; i < img.pixels.size(); ++i) {
            std::string token = std::to_string(int(img.pixels[i]));
            if (line_len != 0 && line_len + 1 + int(token.size()) > 70) {
                out << "\n";
                line_len = 0;
            }
            if (line_len != 0) {
                out << " ";
                ++line_len;
            }
            out << token;
            line_len += int(token.size());
        }
        out << "\n";
    } else {
        out << "P5\n" << img.width << " " << img.height << "\n255\n";
        out.write(reinterpret_cast<const char*>(img.pixels.data()),
                  std::streamsize(img.pixels.size()));
    }
    if (!out) throw std::runtime_error("pgm: write failed");
}

void pgm_write(const std::string& path, const GrayImage& img, bool ascii) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("pgm: cannot open " + path + " for writing");
    pgm_write(out, img, ascii);
}

GrayImage make_test_image(int width, int height) {
    GrayImage img(width, height);
    auto put = [&](int x, int y, double v) {
        if (v < 0) v = 0;
        if (v > 255) v = 255;
        img.at(x, y) = std::uint8_t(std::lround(v));
    };
    const double cx1 = width * 0.32, cy1 = height * 0.36, r1 = width * 0.17;
    const double cx2 = width * 0.70, cy2 = height * 0.64, r2 = width * 0.11;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            // near-flat background with a faint diagonal band
            double v = 68.0 + 6.0 * std::sin(2.0 * M_PI * (x + 2 * y) / 97.0);
            // flat solid shapes give clean high-contrast steps
            double d1 = std::hypot(x - cx1, y - cy1);
            double d2 = std::hypot(x - cx2, y - cy2);
            if (d1 < r1) v = 192.0;
            if (d2 < r2) v = 16.0;
            if (x > width * 3 / 4 && x < width * 7 / 8 && y > height / 8 && y < height / 3)
                v = 240.0;
            if (y > height * 13 / 16 && y < height * 7 / 8 && x > width / 10 && x < width / 2)
                v = 0.0;
            put(x, y, v);
        }
    }
    return img;
}

} // namespace axmul
