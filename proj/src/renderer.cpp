// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#include <macrofacet/renderer.hpp>

#include <macrofacet/error.hpp>
#include <macrofacet/medium.hpp>
#include <macrofacet/parallel.hpp>
#include <macrofacet/tracking.hpp>

#include <algorithm>
#include <string>

namespace macrofacet {

Rgb trace_path(const Ray& ray, const ShellScene& scene, int max_bounces, RandomStream& rng, bool camera_ray) {
    if (max_bounces < 1)
        throw ParameterDomainError("max_bounces must be at least 1");
    Rgb radiance(0.0);
    Rgb throughput(1.0);
    Ray current = ray;
    for (int bounce = 0;; ++bounce) {
        const MediumEvent ev = sample_collision(current, scene, rng);
        if (ev.kind == EventKind::Escaped) {
            const bool direct = bounce == 0 && camera_ray && scene.background;
            radiance += throughput * (direct ? *scene.background : scene.environment.eval(current.dir));
            break;
        }
        if (ev.kind != EventKind::RealScatter || bounce >= max_bounces)
            break;

        const MacrofacetMedium& m = scene.shells[ev.shell].medium;
        if (scene.sun) {
            const Rgb f = phase_eval(current.dir, scene.sun->to_light, m, ev.local_frame);
            if (f.max_component() > 0.0) {
                const double tr = ratio_tracking(Ray{ev.position, scene.sun->to_light}, scene, rng);
                radiance += throughput * f * scene.sun->irradiance * tr;
            }
        }

        const PhaseSample ps = phase_sample(current.dir, m, ev.local_frame, rng);
        if (!(ps.pdf > 0.0) || ps.weight.max_component() <= 0.0)
            break;
        throughput *= ps.weight;
        if (bounce + 1 >= 8) {
            const double q = std::min(1.0, throughput.max_component());
            if (rng.uniform() >= q)
                break;
            throughput *= 1.0 / q;
        }
        current = Ray{ev.position, ps.wi};
    }
    if (!radiance.is_finite_nonnegative())
        throw NumericFailure("trace_path produced a non-finite or negative radiance");
    return radiance;
}

RadianceImage render(const ShellScene& scene, const RenderSettings& settings) {
    if (settings.spp < 1)
        throw ParameterDomainError("spp must be at least 1");
    scene.validate();
    const Camera& cam = scene.camera;
    RadianceImage img(cam.width, cam.height);
    img.seed = settings.seed;
    img.spp = settings.spp;
    const std::size_t rows = static_cast<std::size_t>(cam.height);
    parallel_for(
        rows,
        [&](std::size_t y) {
            for (int x = 0; x < cam.width; ++x) {
                const std::uint64_t pixel = static_cast<std::uint64_t>(y) * cam.width + x;
                RandomStream rng(settings.seed, pixel);
                Rgb sum(0.0);
                for (int s = 0; s < settings.spp; ++s) {
                    const double px = x + rng.uniform();
                    const double py = static_cast<double>(y) + rng.uniform();
                    sum += trace_path(cam.generate(px, py), scene, settings.max_bounces, rng, true);
                }
                img.at(x, static_cast<int>(y)) = sum / static_cast<double>(settings.spp);
            }
        },
        settings.threads);
    return img;
}

}  // namespace macrofacet
