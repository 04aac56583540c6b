// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <macrofacet/random.hpp>
#include <macrofacet/scene.hpp>

namespace macrofacet {

enum class EventKind { Escaped, Absorbed, RealScatter, NullScatter };

struct MediumEvent {
    EventKind kind = EventKind::Escaped;
    Point position;
    double distance = 0;
    double local_f = 0;
    Frame local_frame;
    std::size_t shell = 0;
    // Fictitious collisions passed on the way.
    int null_collisions = 0;
};

// Delta tracking along the ray. Returns the first real collision, or
// Escaped (left every shell, reached ray.tmax or max_distance) or Absorbed
// (reached the f < -6 sigma cap). Majorants are built per window of length
// sigma/2 from the monotonicity of the density and the 1-Lipschitz SDF.
// Throws ConsistencyError when a sampled extinction exceeds its majorant.
MediumEvent sample_collision(const Ray& ray, const ShellScene& scene, RandomStream& rng);

// One ratio-tracking estimate of the transmittance along the ray.
double ratio_tracking(const Ray& ray, const ShellScene& scene, RandomStream& rng);

struct TransmittanceEstimate {
    double mean = 1;
    double std_error = 0;
};

TransmittanceEstimate transmittance_estimate(const Ray& ray, const ShellScene& scene, int n_samples,
                                             RandomStream& rng);

}  // namespace macrofacet
