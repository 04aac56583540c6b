// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <macrofacet/color.hpp>
#include <macrofacet/geometry.hpp>
#include <macrofacet/image.hpp>
#include <macrofacet/medium.hpp>

#include <optional>
#include <string>
#include <vector>

namespace macrofacet {

struct ShellBinding {
    std::string name;
    SdfPrimitive primitive;
    MacrofacetMedium medium;
};

struct Camera {
    Point position{0, 0, 5};
    Point look_at{0, 0, 0};
    Vec3 up{0, 1, 0};
    double vfov_deg = 40;
    int width = 64;
    int height = 64;

    void validate() const;
    // (px, py) in pixel units, (0, 0) at the top-left corner of the image.
    Ray generate(double px, double py) const;
};

// Radiance arriving from infinitely far away: a constant or a
// latitude-longitude map (u = phi / 2pi, v = theta / pi, theta from +z).
struct Environment {
    Rgb constant{1, 1, 1};
    std::optional<RadianceImage> map;

    Rgb eval(const Direction& d) const;
};

// Parallel light; `to_light` points from the scene toward the light and
// `irradiance` is measured on a surface facing it.
struct DirectionalLight {
    Direction to_light;
    Rgb irradiance{1, 1, 1};
};

struct ShellScene {
    std::vector<ShellBinding> shells;
    Camera camera;
    Environment environment;
    std::optional<DirectionalLight> sun;
    // Radiance seen by camera rays that leave without a real collision.
    // Unset: camera rays see the environment.
    std::optional<Rgb> background;
    double max_distance = 1e4;

    // Checks media and that the inflated solids {f <= 3 sigma} of distinct
    // shells are disjoint. Throws ParameterDomainError.
    void validate() const;
};

enum class ShellRegion {
    Shell,  // -3 sigma <= f <= 3 sigma
    Deep,   // -6 sigma <= f < -3 sigma: the medium continues
    Cap,    // f < -6 sigma: rays reaching it are absorbed
};

struct RayInterval {
    double t_enter = 0;
    double t_exit = 0;
    std::size_t shell = 0;
    ShellRegion region = ShellRegion::Shell;
};

// Sorted disjoint intervals of the ray (up to ray.tmax and the scene's
// max_distance) inside the regions above. Crossings of the three SDF
// levels are located by sphere tracing plus bisection (analytic for planes).
// Throws NumericFailure when the tracing iteration cap is exceeded.
std::vector<RayInterval> shell_intersect(const Ray& ray, const ShellScene& scene);

}  // namespace macrofacet
