// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#include <macrofacet/medium.hpp>

#include <macrofacet/error.hpp>
#include <macrofacet/special.hpp>

#include <algorithm>
#include <cmath>
#include <complex>

namespace macrofacet {

void MacrofacetMedium::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw ParameterDomainError("medium sigma must be positive and finite");
    a3.validate();
    if (kind == NdfKind::Generalized && !(a3.az > 0.0))
        throw ParameterDomainError("the generalized NDF needs az > 0");
    if (!(mix_ratio >= 0.0 && mix_ratio <= 1.0))
        throw ParameterDomainError("mix_ratio must lie in [0, 1]");
    for (int c = 0; c < 3; ++c) {
        if (!(fresnel_eta[c] > 0.0) || !std::isfinite(fresnel_eta[c]))
            throw ParameterDomainError("fresnel eta must be positive");
        if (!(fresnel_k[c] >= 0.0) || !std::isfinite(fresnel_k[c]))
            throw ParameterDomainError("fresnel k must be non-negative");
    }
}

RoughnessTriple MacrofacetMedium::effective_roughness() const {
    if (kind == NdfKind::Generalized)
        return a3;
    return {a3.ax, a3.ay, 0.0};
}

double MacrofacetMedium::projected_area_bound() const {
    return macrofacet::projected_area_bound(kind, effective_roughness());
}

double density(double f, double sigma) {
    if (!(sigma > 0.0))
        throw ParameterDomainError("density: sigma must be positive");
    return standard_mills_inverse(f / sigma) / sigma;
}

double local_projected_area(const Direction& wo_local, const MacrofacetMedium& m) {
    return visible_projected_area(wo_local, m.kind, m.effective_roughness());
}

double extinction(const Direction& wo, double f, const MacrofacetMedium& m, const Frame& local_frame) {
    const double rho = density(f, m.sigma);
    if (rho == 0.0)
        return 0.0;
    return rho * local_projected_area(local_frame.to_local(wo), m);
}

double planar_transmittance(double h0, double h1, const SphericalAngles& w, const MacrofacetMedium& m) {
    const double c = std::cos(w.theta);
    if (std::fabs(c) < 1e-12)
        throw UnsupportedGeometryError("planar_transmittance: horizontal rays never change height");
    if ((h1 - h0) * c < 0.0)
        throw ParameterDomainError("planar_transmittance: h1 is not reachable from h0 along the ray");
    if (h1 == h0)
        return 1.0;
    const double lambda = smith_lambda(w.to_direction(), m.kind, m.effective_roughness());
    const double var = m.sigma * m.sigma;
    const double log_ratio = log_gauss_cdf(h1, 0.0, var) - log_gauss_cdf(h0, 0.0, var);
    return std::clamp(std::exp(-lambda * log_ratio), 0.0, 1.0);
}

double fresnel_conductor(double cos_i, double eta, double k) {
    cos_i = std::clamp(cos_i, 0.0, 1.0);
    using C = std::complex<double>;
    const C n(eta, k);
    const double sin2_i = 1.0 - cos_i * cos_i;
    const C sin2_t = sin2_i / (n * n);
    const C cos_t = std::sqrt(1.0 - sin2_t);
    const C r_parl = (n * cos_i - cos_t) / (n * cos_i + cos_t);
    const C r_perp = (cos_i - n * cos_t) / (cos_i + n * cos_t);
    return std::clamp(0.5 * (std::norm(r_parl) + std::norm(r_perp)), 0.0, 1.0);
}

Rgb fresnel_conductor(double cos_i, const Rgb& eta, const Rgb& k) {
    return {fresnel_conductor(cos_i, eta.r, k.r), fresnel_conductor(cos_i, eta.g, k.g),
            fresnel_conductor(cos_i, eta.b, k.b)};
}

namespace {

Rgb fresnel_of(const MacrofacetMedium& m, double cos_i) {
    if (m.unit_fresnel)
        return Rgb(1.0);
    return fresnel_conductor(cos_i, m.fresnel_eta, m.fresnel_k);
}

// Half vector of v = -wo and wi; false when they are opposite.
bool half_vector(const Direction& wo, const Direction& wi, Direction& h) {
    const Vec3 s = wi - wo;
    const double len = s.length();
    if (!(len > 1e-12))
        return false;
    h = Direction::unchecked(s / len);
    return true;
}

}  // namespace

Rgb phase_eval(const Direction& wo, const Direction& wi, const MacrofacetMedium& m, const Frame& local_frame) {
    const Direction lo = local_frame.to_local(wo);
    const Direction li = local_frame.to_local(wi);
    Direction h;
    if (!half_vector(lo, li, h))
        return Rgb(0.0);
    const double area = local_projected_area(lo, m);
    if (area < 1e-12)
        throw DegenerateVisibilityError("phase_eval: projected area of the visible microflakes is zero");
    const double d = ndf_eval(h, m.kind, m.effective_roughness());
    if (d == 0.0)
        return Rgb(0.0);
    return fresnel_of(m, -dot(lo, h)) * (d / (4.0 * area));
}

double phase_pdf(const Direction& wo, const Direction& wi, const MacrofacetMedium& m, const Frame& local_frame) {
    const Direction lo = local_frame.to_local(wo);
    const Direction li = local_frame.to_local(wi);
    Direction h;
    if (!half_vector(lo, li, h))
        return 0.0;
    const double cos_vh = -dot(lo, h);
    if (cos_vh <= 0.0)
        return 0.0;
    return vndf_sample_pdf(h, lo, m.kind, m.effective_roughness(), m.sampling_mix()) / (4.0 * cos_vh);
}

PhaseSample phase_sample(const Direction& wo, const MacrofacetMedium& m, const Frame& local_frame,
                         RandomStream& rng) {
    const Direction lo = local_frame.to_local(wo);
    const RoughnessTriple a3 = m.effective_roughness();
    const VndfSample s = vndf_sample(lo, m.kind, a3, m.sampling_mix(), rng);
    const Vec3 v = -lo;
    const double cos_vh = dot(v, s.wm);
    PhaseSample out;
    if (cos_vh <= 0.0 || s.pdf <= 0.0) {
        out.wi = wo;
        out.pdf = 0.0;
        out.weight = Rgb(0.0);
        return out;
    }
    const Direction li = Direction::normalize(reflect(v, s.wm));
    out.wi = Direction::normalize(local_frame.to_world(static_cast<const Vec3&>(li)));
    out.pdf = s.pdf / (4.0 * cos_vh);
    const double target = vndf_eval(s.wm, lo, m.kind, a3);
    out.weight = fresnel_of(m, cos_vh) * (target / s.pdf);
    return out;
}

}  // namespace macrofacet
