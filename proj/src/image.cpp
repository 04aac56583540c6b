// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#include <macrofacet/image.hpp>

#include <macrofacet/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace macrofacet {

RadianceImage::RadianceImage(int w, int h) : width(w), height(h) {
    if (w <= 0 || h <= 0)
        throw ParameterDomainError("image dimensions must be positive");
    pixels.assign(static_cast<std::size_t>(w) * h, Rgb(0.0));
}

Rgb RadianceImage::mean() const {
    Rgb sum(0.0);
    for (const Rgb& p : pixels)
        sum += p;
    return pixels.empty() ? sum : sum / static_cast<double>(pixels.size());
}

bool RadianceImage::all_finite_nonnegative() const {
    return std::all_of(pixels.begin(), pixels.end(), [](const Rgb& p) { return p.is_finite_nonnegative(); });
}

ImageFormat image_format_from_string(const std::string& name) {
    if (name == "pfm")
        return ImageFormat::PFM;
    if (name == "ppm")
        return ImageFormat::PPM;
    throw ParameterDomainError("unknown image format '" + name + "' (pfm|ppm)");
}

namespace {

void append_le_float(std::string& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

float read_float(const unsigned char* p, bool little) {
    std::uint32_t bits = 0;
    for (int i = 0; i < 4; ++i) {
        const int shift = little ? 8 * i : 8 * (3 - i);
        bits |= static_cast<std::uint32_t>(p[i]) << shift;
    }
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

unsigned char srgb_byte(double linear) {
    if (!(linear > 0.0))
        return 0;
    const double c = linear <= 0.0031308 ? 12.92 * linear : 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
    return static_cast<unsigned char>(std::clamp(std::lround(c * 255.0), 0L, 255L));
}

}  // namespace

std::string encode_pfm(const RadianceImage& img) {
    std::string out = "PF\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n-1.0\n";
    out.reserve(out.size() + img.pixels.size() * 12);
    for (int y = img.height - 1; y >= 0; --y) {
        for (int x = 0; x < img.width; ++x) {
            const Rgb& p = img.at(x, y);
            append_le_float(out, static_cast<float>(p.r));
            append_le_float(out, static_cast<float>(p.g));
            append_le_float(out, static_cast<float>(p.b));
        }
    }
    return out;
}

std::string encode_ppm(const RadianceImage& img) {
    std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    for (const Rgb& p : img.pixels) {
        out.push_back(static_cast<char>(srgb_byte(p.r)));
        out.push_back(static_cast<char>(srgb_byte(p.g)));
        out.push_back(static_cast<char>(srgb_byte(p.b)));
    }
    return out;
}

void write_image(const RadianceImage& img, const std::string& path, ImageFormat format) {
    const std::string bytes = format == ImageFormat::PFM ? encode_pfm(img) : encode_ppm(img);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw IoError("failed writing '" + path + "'");
}

RadianceImage decode_pfm(const std::string& bytes) {
    std::istringstream in(bytes);
    std::string magic;
    int w = 0, h = 0;
    double scale = 0;
    if (!(in >> magic >> w >> h >> scale) || (magic != "PF" && magic != "Pf") || w <= 0 || h <= 0 || scale == 0)
        throw IoError("malformed PFM header");
    in.get();
    const int channels = magic == "PF" ? 3 : 1;
    const auto offset = static_cast<std::size_t>(in.tellg());
    const std::size_t need = static_cast<std::size_t>(w) * h * channels * 4;
    if (bytes.size() < offset + need)
        throw IoError("truncated PFM payload");
    const bool little = scale < 0;
    const auto* data = reinterpret_cast<const unsigned char*>(bytes.data() + offset);
    RadianceImage img(w, h);
    for (int row = 0; row < h; ++row) {
        const int y = h - 1 - row;
        for (int x = 0; x < w; ++x) {
            const auto* p = data + (static_cast<std::size_t>(row) * w + x) * channels * 4;
            if (channels == 3)
                img.at(x, y) = Rgb(read_float(p, little), read_float(p + 4, little), read_float(p + 8, little));
            else
                img.at(x, y) = Rgb(read_float(p, little));
        }
    }
    return img;
}

RadianceImage read_pfm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return decode_pfm(buf.str());
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.what());
    }
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace macrofacet
