// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <macrofacet/color.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace macrofacet {

// Linear RGB radiance, row-major with row 0 at the top.
struct RadianceImage {
    int width = 0;
    int height = 0;
    std::vector<Rgb> pixels;
    std::uint64_t seed = 0;
    int spp = 0;
    std::uint64_t scene_hash = 0;

    RadianceImage() = default;
    RadianceImage(int w, int h);

    Rgb& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    const Rgb& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }

    Rgb mean() const;
    bool all_finite_nonnegative() const;
};

enum class ImageFormat { PFM, PPM };

ImageFormat image_format_from_string(const std::string& name);

// PFM: "PF\n<w> <h>\n-1.0\n" then little-endian float32 RGB, bottom row
// first. PPM: binary P6, sRGB transfer, exposure 1. Throws IoError.
void write_image(const RadianceImage& img, const std::string& path, ImageFormat format);

// Encoded file contents without touching the file system.
std::string encode_pfm(const RadianceImage& img);
std::string encode_ppm(const RadianceImage& img);

// Reads colour ("PF") and greyscale ("Pf") PFM of either endianness.
RadianceImage read_pfm(const std::string& path);
RadianceImage decode_pfm(const std::string& bytes);

// 64-bit FNV-1a, used for scene hashes.
std::uint64_t fnv1a64(const std::string& data);

}  // namespace macrofacet
