// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <macrofacet/image.hpp>
#include <macrofacet/random.hpp>
#include <macrofacet/scene.hpp>

#include <cstdint>

namespace macrofacet {

struct RenderSettings {
    int spp = 16;
    std::uint64_t seed = 0;
    // Maximum number of real scattering events per path.
    int max_bounces = 64;
    // 0: MACROFACET_THREADS or hardware concurrency.
    int threads = 0;
};

// Radiance along `ray` (propagation direction ray.dir). Delta tracking
// through the shells; at each real collision the directional light is
// gathered with a ratio-tracked shadow ray and the path continues by
// phase sampling. Escaping rays pick up the environment (or the scene
// background for camera rays). Russian roulette after the 8th bounce.
Rgb trace_path(const Ray& ray, const ShellScene& scene, int max_bounces, RandomStream& rng,
               bool camera_ray = true);

// Pixel (x, y) uses RandomStream(seed, y * width + x); output does not depend
// on the worker count.
RadianceImage render(const ShellScene& scene, const RenderSettings& settings);

}  // namespace macrofacet
