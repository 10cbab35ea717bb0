// twinchan - hybrid ray-traced / stochastic THz urban macrocell channel simulator
// Copyright (C) 2026 twinchan contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace twinchan {

struct Rgb
{
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb &o) const { return r == o.r && g == o.g && b == o.b; }
};

/// 8-bit RGB raster, row-major, row 0 at the top of the file.
class Image
{
  public:
    Image() = default;
    Image(int width, int height, Rgb fill = {})
        : width_(width), height_(height), px_(static_cast<std::size_t>(width) * height, fill)
    {
        if (width <= 0 || height <= 0)
            throw std::invalid_argument("image dimensions must be positive");
    }

    int width() const { return width_; }
    int height() const { return height_; }

    Rgb &at(int x, int y) { return px_[index(x, y)]; }
    const Rgb &at(int x, int y) const { return px_[index(x, y)]; }

  private:
    std::size_t index(int x, int y) const
    {
        if (x < 0 || x >= width_ || y < 0 || y >= height_)
            throw std::out_of_range("pixel out of bounds");
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_ = 0, height_ = 0;
    std::vector<Rgb> px_;
};

namespace detail {

inline int next_pnm_token(std::istream &in)
{
    // Skips whitespace and '#' comments, then reads one unsigned integer.
    char c;
    while (in.get(c)) {
        if (c == '#') {
            while (in.get(c) && c != '\n') {
            }
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            in.putback(c);
            break;
        }
    }
    int v = -1;
    in >> v;
    if (!in || v < 0)
        throw std::runtime_error("malformed PNM header");
    return v;
}

} // namespace detail

/// Reads a P3 (ASCII) or P6 (binary) portable pixmap with maxval 255.
inline Image load_ppm(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open image file: " + path);
    std::string magic;
    in >> magic;
    if (magic != "P3" && magic != "P6")
        throw std::runtime_error("unsupported image format (want P3/P6 PPM): " + path);
    const int w = detail::next_pnm_token(in);
    const int h = detail::next_pnm_token(in);
    const int maxval = detail::next_pnm_token(in);
    if (maxval != 255)
        throw std::runtime_error("only maxval 255 is supported: " + path);
    Image img(w, h);
    if (magic == "P6") {
        in.get(); // the single whitespace byte after the header
        std::vector<char> buf(static_cast<std::size_t>(w) * h * 3);
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (in.gcount() != static_cast<std::streamsize>(buf.size()))
            throw std::runtime_error("truncated PPM payload: " + path);
        std::size_t i = 0;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                img.at(x, y) = {static_cast<std::uint8_t>(buf[i]),
                                static_cast<std::uint8_t>(buf[i + 1]),
                                static_cast<std::uint8_t>(buf[i + 2])};
                i += 3;
            }
    } else {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                int r = detail::next_pnm_token(in);
                int g = detail::next_pnm_token(in);
                int b = detail::next_pnm_token(in);
                if (r > 255 || g > 255 || b > 255)
                    throw std::runtime_error("sample exceeds maxval: " + path);
                img.at(x, y) = {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                                static_cast<std::uint8_t>(b)};
            }
    }
    return img;
}

inline void save_ppm(const Image &img, const std::string &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write image file: " + path);
    out << "P6\n" << img.width() << " " << img.height() << "\n255\n";
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            const Rgb &p = img.at(x, y);
            out.put(static_cast<char>(p.r));
            out.put(static_cast<char>(p.g));
            out.put(static_cast<char>(p.b));
        }
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

/// Single-channel raster (P5), used for boolean mask grids.
struct GrayImage
{
    int width = 0, height = 0;
    std::vector<std::uint8_t> data; // row-major, row 0 at top
};

inline GrayImage load_pgm(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open image file: " + path);
    std::string magic;
    in >> magic;
    if (magic != "P5")
        throw std::runtime_error("unsupported mask format (want P5 PGM): " + path);
    GrayImage img;
    img.width = detail::next_pnm_token(in);
    img.height = detail::next_pnm_token(in);
    const int maxval = detail::next_pnm_token(in);
    if (maxval != 255)
        throw std::runtime_error("only maxval 255 is supported: " + path);
    in.get();
    img.data.resize(static_cast<std::size_t>(img.width) * img.height);
    in.read(reinterpret_cast<char *>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.data.size()))
        throw std::runtime_error("truncated PGM payload: " + path);
    return img;
}

inline void save_pgm(const GrayImage &img, const std::string &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write image file: " + path);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char *>(img.data.data()),
              static_cast<std::streamsize>(img.data.size()));
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

} // namespace twinchan
