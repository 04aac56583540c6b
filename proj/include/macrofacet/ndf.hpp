// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <macrofacet/random.hpp>
#include <macrofacet/vec.hpp>

#include <string_view>

namespace macrofacet {

// Statistics of the squared-exponential Gaussian-process kernel:
// kappa(x, y) = sigma^2 exp(-1/2 d^T diag(lx^2, ly^2, lz^2)^-1 d).
// lz may be +inf (height-field limit).
struct KernelParams {
    double sigma = 1.0;
    double lx = 1.0;
    double ly = 1.0;
    double lz = 1.0;

    void validate() const;
};

// Slope-space roughness per axis; az == 0 encodes the height-field limit.
struct RoughnessTriple {
    double ax = 1.0;
    double ay = 1.0;
    double az = 1.0;

    void validate() const;
    static RoughnessTriple isotropic(double a) { return {a, a, a}; }
};

enum class NdfKind { Beckmann, GGX, Generalized };

std::string_view to_string(NdfKind kind);
NdfKind ndf_kind_from_string(std::string_view name);

// Unnormalized SDF gradient.
struct GradientSample {
    double gx = 0, gy = 0, gz = 0;
};

// alpha = sqrt(2) sigma / l per axis.
RoughnessTriple roughness_from_kernel(const KernelParams& k);

// Inverse map for a given sigma; az == 0 yields lz = +inf.
KernelParams kernel_from_roughness(double sigma, const RoughnessTriple& a3);

// --- height-field distributions --------------------------------------------

double beckmann_ndf(const Direction& wm, double ax, double ay);
double ggx_ndf(const Direction& wm, double ax, double ay);

// --- Smith Lambda and projected area ----------------------------------------

// Lambda(a) = exp(-a^2)/(2 a sqrt(pi)) + (erf(a) - 1)/2 for a != 0, with the
// exact reflection Lambda(-a) = -1 - Lambda(a) used for a < 0.
double lambda_of_a(double a);

// a = cos(theta) / sqrt(ax^2 x^2 + ay^2 y^2 + az^2 z^2); +-inf when the
// denominator vanishes.
double lambda_argument(const Direction& w, const RoughnessTriple& a3);

// Generalized Smith Lambda. Throws GrazingSingularityError for |a| < 1e-9.
double generalized_lambda(const Direction& w, const RoughnessTriple& a3);
double generalized_lambda(const SphericalAngles& w, const RoughnessTriple& a3);

// sigma(w) = Lambda(w) cos(theta) in a form that stays finite at grazing.
// Covers the Beckmann height field (az = 0) and the generalized model.
double projected_area(const Direction& w, const RoughnessTriple& a3);
double projected_area(const SphericalAngles& w, const RoughnessTriple& a3);

// GGX (Trowbridge-Reitz) counterparts, height field only.
double ggx_lambda(const Direction& w, double ax, double ay);
double ggx_projected_area(const Direction& w, double ax, double ay);

// Kind-dispatching helpers; Beckmann and GGX ignore az.
double smith_lambda(const Direction& w, NdfKind kind, const RoughnessTriple& a3);
double visible_projected_area(const Direction& w, NdfKind kind, const RoughnessTriple& a3);
double ndf_eval(const Direction& wm, NdfKind kind, const RoughnessTriple& a3);

// Upper bound of visible_projected_area over all directions.
double projected_area_bound(NdfKind kind, const RoughnessTriple& a3);

// --- generalized (full-sphere) NDF ------------------------------------------

// Closed-form NDF of the conditioned SE-kernel gradient field. Throws
// ParameterDomainError for az <= 0. At theta in {0, pi} phi is irrelevant.
double generalized_ndf(const Direction& wm, const RoughnessTriple& a3);
double generalized_ndf(const SphericalAngles& wm, const RoughnessTriple& a3);

// Density of the gradient conditioned on f = 0: N((0,0,1), diag(a^2/2)).
double gdf_pdf(const GradientSample& g, const RoughnessTriple& a3);
GradientSample sample_gdf(const RoughnessTriple& a3, RandomStream& rng);

struct QuadratureReport {
    int evaluations = 0;
    int refinements = 0;
    double relative_change = 0;
};

// D(wm) = int_0^inf P(t wm) t^3 dt by adaptive composite Gauss-Legendre with
// panel doubling until the relative change drops below 1e-8. Serves as the
// independent check of generalized_ndf. Throws NumericFailure when the
// refinement does not converge.
double ndf_from_gdf_quadrature(const Direction& wm, const RoughnessTriple& a3, QuadratureReport* report = nullptr);
double ndf_from_gdf_quadrature(const SphericalAngles& wm, const RoughnessTriple& a3,
                               QuadratureReport* report = nullptr);

// --- visible normals --------------------------------------------------------

// wo is the propagation direction of the ray; the microflakes it meets face
// -wo. D_wo(wm) = <-wo, wm> D(wm) / sigma(wo).
// Throws DegenerateVisibilityError when sigma(wo) < 1e-12.
double vndf_eval(const Direction& wm, const Direction& wo, NdfKind kind, const RoughnessTriple& a3);

struct VndfSample {
    Direction wm;
    double pdf = 0;
};

// Mixture sampler: with probability R the exact height-field visible-normal
// sampler of the kind's base distribution (Beckmann for Beckmann and
// Generalized, GGX for GGX) using (ax, ay); otherwise the uniform hemisphere
// around -wo. The returned pdf is the full mixture density.
VndfSample vndf_sample(const Direction& wo, NdfKind kind, const RoughnessTriple& a3, double mix_ratio,
                       RandomStream& rng);

// Mixture density that vndf_sample draws from, evaluated at wm.
double vndf_sample_pdf(const Direction& wm, const Direction& wo, NdfKind kind, const RoughnessTriple& a3,
                       double mix_ratio);

// Height-field visible-normal sampler on its own (Beckmann or GGX slopes).
// Valid for every view direction with a non-degenerate projected area,
// including views from below the mean plane.
Direction sample_height_field_vndf(const Direction& wo, NdfKind base, double ax, double ay, double u1, double u2,
                                   double u3);

}  // namespace macrofacet
