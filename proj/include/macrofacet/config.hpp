// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <macrofacet/gp_oracle.hpp>
#include <macrofacet/medium.hpp>
#include <macrofacet/renderer.hpp>
#include <macrofacet/scene.hpp>

#include <optional>
#include <string>
#include <vector>

namespace macrofacet {

// Statistics and appearance of one shell as written in a config file. The
// kernel is given either by correlation lengths or by roughness.
struct MediumSpec {
    double sigma = 1.0;
    bool by_roughness = false;
    Vec3 lengths{kSqrt2, kSqrt2, kSqrt2};  // lz may be +inf
    Vec3 roughness{1, 1, 1};
    NdfKind kind = NdfKind::Generalized;
    Rgb fresnel_eta{0.2, 0.92, 1.1};
    Rgb fresnel_k{3.9, 2.45, 2.14};
    double mix_ratio = 0.5;
    bool unit_fresnel = false;

    KernelParams kernel() const;
    RoughnessTriple roughness_triple() const;
    MacrofacetMedium medium() const;
    bool operator==(const MediumSpec&) const = default;
};

struct PrimitiveSpec {
    std::string name;
    std::string shape = "plane";  // plane | sphere | box
    double z0 = 0;
    Vec3 center{0, 0, 0};
    double radius = 1;
    Vec3 half_extents{1, 1, 1};
    MediumSpec medium;

    SdfPrimitive primitive() const;
    bool operator==(const PrimitiveSpec&) const = default;
};

struct SceneSpec {
    Vec3 camera_position{0, -4, 3};
    Vec3 look_at{0, 0, 0};
    Vec3 up{0, 0, 1};
    double vfov = 40;
    int width = 64;
    int height = 64;
    Rgb environment{1, 1, 1};
    std::string environment_map;  // PFM path, relative to the config file
    std::optional<Vec3> sun_direction;
    Rgb sun_irradiance{1, 1, 1};
    std::optional<Rgb> background;
    double max_distance = 1e4;
    bool operator==(const SceneSpec&) const = default;
};

struct RenderSpec {
    int spp = 16;
    std::uint64_t seed = 0;
    int max_bounces = 64;
    bool operator==(const RenderSpec&) const = default;
};

struct OracleSpec {
    int realizations = 1024;
    int rays_per_realization = 256;
    int grid_n = 64;
    int cells_per_length = 8;
    std::uint64_t seed = 0;
    bool operator==(const OracleSpec&) const = default;
    OracleSettings settings() const;
};

// Flat sectioned key = value document. Sections: [kernel], [medium],
// [scene], [render], [oracle] and any number of [primitive.<name>]. A
// primitive section may repeat kernel and medium keys to override them for
// that shell. Unknown sections or keys, duplicates and conflicting kernel
// forms raise ConfigError with the offending line.
struct Config {
    MediumSpec medium;
    SceneSpec scene;
    RenderSpec render;
    OracleSpec oracle;
    std::vector<PrimitiveSpec> primitives;
    std::string base_directory;  // for relative paths; not serialized

    static Config parse(const std::string& text, const std::string& base_directory = "");
    static Config load(const std::string& path);
    std::string serialize() const;

    // Builds the renderable scene (loads the environment map if any).
    ShellScene build_scene() const;

    bool operator==(const Config& o) const {
        return medium == o.medium && scene == o.scene && render == o.render && oracle == o.oracle &&
               primitives == o.primitives;
    }
};

// Reals with 17 significant digits, "inf" for infinity.
std::string format_real(double v);

}  // namespace macrofacet
