// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#include <macrofacet/tracking.hpp>

#include <macrofacet/error.hpp>

#include <cmath>
#include <string>

namespace macrofacet {

namespace {

struct Collision {
    Point position;
    double t = 0;
    double f = 0;
    Frame frame;
    double ratio = 0;  // sigma_t / majorant
};

// Walks the tentative collisions of the ray through every shell interval.
// `visit` returns true to stop; the walk reports how it ended.
template <class Visit>
EventKind walk(const Ray& ray, const ShellScene& scene, RandomStream& rng, Visit&& visit, Collision& last,
               double& stop_t, std::size_t& stop_shell) {
    for (const RayInterval& iv : shell_intersect(ray, scene)) {
        const ShellBinding& shell = scene.shells[iv.shell];
        stop_shell = iv.shell;
        if (iv.region == ShellRegion::Cap) {
            stop_t = iv.t_enter;
            return EventKind::Absorbed;
        }
        const MacrofacetMedium& m = shell.medium;
        const auto fixed_normal = shell.primitive.constant_normal();
        Frame fixed_frame;
        double area_bound = m.projected_area_bound();
        if (fixed_normal) {
            fixed_frame = build_frame(*fixed_normal);
            area_bound = local_projected_area(fixed_frame.to_local(ray.dir), m);
        }
        const double window = 0.5 * m.sigma;
        double t = iv.t_enter;
        while (t < iv.t_exit) {
            const double end = std::min(t + window, iv.t_exit);
            const double f_start = shell.primitive.distance(ray.at(t));
            const double majorant = density(f_start - (end - t), m.sigma) * area_bound;
            if (!(majorant > 0.0)) {
                t = end;
                continue;
            }
            const double step = -std::log1p(-rng.uniform()) / majorant;
            if (t + step >= end) {
                t = end;
                continue;
            }
            t += step;
            Collision c;
            c.t = t;
            c.position = ray.at(t);
            c.f = shell.primitive.distance(c.position);
            c.frame = fixed_normal ? fixed_frame : build_frame(shell.primitive.normal(c.position));
            const double sigma_t = extinction(ray.dir, c.f, m, c.frame);
            if (sigma_t > majorant * (1.0 + 1e-9))
                throw ConsistencyError("extinction " + std::to_string(sigma_t) + " exceeds majorant " +
                                       std::to_string(majorant) + " at f=" + std::to_string(c.f) + " in shell '" +
                                       shell.name + "'");
            c.ratio = sigma_t / majorant;
            if (visit(c)) {
                last = c;
                stop_shell = iv.shell;
                return EventKind::RealScatter;
            }
        }
    }
    return EventKind::Escaped;
}

}  // namespace

MediumEvent sample_collision(const Ray& ray, const ShellScene& scene, RandomStream& rng) {
    MediumEvent ev;
    int nulls = 0;
    Collision last;
    double stop_t = 0;
    std::size_t stop_shell = 0;
    ev.kind = walk(
        ray, scene, rng,
        [&](const Collision& c) {
            if (rng.uniform() < c.ratio)
                return true;
            ++nulls;
            return false;
        },
        last, stop_t, stop_shell);
    ev.null_collisions = nulls;
    ev.shell = stop_shell;
    if (ev.kind == EventKind::RealScatter) {
        ev.position = last.position;
        ev.distance = last.t;
        ev.local_f = last.f;
        ev.local_frame = last.frame;
    } else if (ev.kind == EventKind::Absorbed) {
        ev.distance = stop_t;
        ev.position = ray.at(stop_t);
    } else {
        ev.distance = std::min(ray.tmax, scene.max_distance);
        ev.position = std::isfinite(ev.distance) ? ray.at(ev.distance) : ray.origin;
    }
    return ev;
}

double ratio_tracking(const Ray& ray, const ShellScene& scene, RandomStream& rng) {
    double tr = 1.0;
    Collision last;
    double stop_t = 0;
    std::size_t stop_shell = 0;
    const EventKind kind = walk(
        ray, scene, rng,
        [&](const Collision& c) {
            tr *= 1.0 - c.ratio;
            return tr == 0.0;
        },
        last, stop_t, stop_shell);
    if (kind == EventKind::Absorbed)
        return 0.0;
    return tr;
}

TransmittanceEstimate transmittance_estimate(const Ray& ray, const ShellScene& scene, int n_samples,
                                             RandomStream& rng) {
    if (n_samples < 1)
        throw ParameterDomainError("transmittance_estimate needs at least one sample");
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const double tr = ratio_tracking(ray, scene, rng);
        sum += tr;
        sum_sq += tr * tr;
    }
    const double n = n_samples;
    const double mean = sum / n;
    const double var = n > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
    return {mean, std::sqrt(var / n)};
}

}  // namespace macrofacet
