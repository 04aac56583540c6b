// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <macrofacet/color.hpp>
#include <macrofacet/ndf.hpp>
#include <macrofacet/random.hpp>
#include <macrofacet/vec.hpp>

namespace macrofacet {

// Appearance of one shell: microflake normal statistics, the SDF standard
// deviation that sets the shell half-width (3 sigma), and a conductor Fresnel
// term per RGB channel. Immutable once built; shareable across threads.
struct MacrofacetMedium {
    NdfKind kind = NdfKind::Generalized;
    RoughnessTriple a3;
    double sigma = 1.0;
    Rgb fresnel_eta{0.2, 0.92, 1.1};
    Rgb fresnel_k{3.9, 2.45, 2.14};
    double mix_ratio = 0.5;
    bool unit_fresnel = false;

    void validate() const;

    double shell_half_width() const { return 3.0 * sigma; }

    // Roughness with az forced to 0 for the height-field kinds.
    RoughnessTriple effective_roughness() const;

    // Probability of the height-field visible-normal sampler. The height-field
    // kinds sample their target exactly, so they always use 1.
    double sampling_mix() const { return kind == NdfKind::Generalized ? mix_ratio : 1.0; }

    // Upper bound of the projected area over all local directions.
    double projected_area_bound() const;
};

// Microflake density rho(f) = phi(f; 0, sigma^2) / Phi(f; 0, sigma^2).
double density(double f, double sigma);

// Projected area sigma(wo) for a direction already in the local frame.
double local_projected_area(const Direction& wo_local, const MacrofacetMedium& m);

// rho(f) sigma(wo) with wo expressed in `local_frame` (normal = base SDF
// gradient direction).
double extinction(const Direction& wo, double f, const MacrofacetMedium& m, const Frame& local_frame);

// Closed-form transmittance of the flat shell between SDF values h0 and h1,
// (Phi(h1)/Phi(h0))^(-Lambda), evaluated in log space. h1 must lie on the
// ray: (h1 - h0) cos(theta) >= 0. Throws UnsupportedGeometryError for
// horizontal rays.
double planar_transmittance(double h0, double h1, const SphericalAngles& w, const MacrofacetMedium& m);

// Exact unpolarized Fresnel reflectance of a conductor with complex index
// eta + i k.
double fresnel_conductor(double cos_i, double eta, double k);
Rgb fresnel_conductor(double cos_i, const Rgb& eta, const Rgb& k);

// Specular microflake phase function. wo is the propagation direction of the
// incoming ray, wi that of the scattered ray; both in world space.
// p = F(v.h) D(h) / (4 sigma(wo)) with v = -wo and h = normalize(v + wi).
Rgb phase_eval(const Direction& wo, const Direction& wi, const MacrofacetMedium& m, const Frame& local_frame);

// Density of phase_sample over wi (per steradian).
double phase_pdf(const Direction& wo, const Direction& wi, const MacrofacetMedium& m, const Frame& local_frame);

struct PhaseSample {
    Direction wi;
    double pdf = 0;
    Rgb weight;
};

// Draws a visible normal, reflects v = -wo about it. weight = phase/pdf.
PhaseSample phase_sample(const Direction& wo, const MacrofacetMedium& m, const Frame& local_frame,
                         RandomStream& rng);

}  // namespace macrofacet
