// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#include <macrofacet/ndf.hpp>

#include <macrofacet/error.hpp>
#include <macrofacet/quadrature.hpp>
#include <macrofacet/special.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace macrofacet {

namespace {

constexpr double kPi32 = 5.56832799683170784528;  // pi^(3/2)
constexpr double kMinProjectedArea = 1e-12;

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

double sq(double v) { return v * v; }

}  // namespace

void KernelParams::validate() const {
    if (!positive_finite(sigma) || !positive_finite(lx) || !positive_finite(ly) || !(lz > 0.0) || std::isnan(lz))
        throw ParameterDomainError("kernel parameters must be positive (sigma, lx, ly finite; lz may be inf)");
}

void RoughnessTriple::validate() const {
    if (!positive_finite(ax) || !positive_finite(ay) || !(az >= 0.0) || !std::isfinite(az))
        throw ParameterDomainError("roughness requires ax, ay > 0 and az >= 0");
}

std::string_view to_string(NdfKind kind) {
    switch (kind) {
        case NdfKind::Beckmann:
            return "beckmann";
        case NdfKind::GGX:
            return "ggx";
        case NdfKind::Generalized:
            return "generalized";
    }
    return "unknown";
}

NdfKind ndf_kind_from_string(std::string_view name) {
    if (name == "beckmann")
        return NdfKind::Beckmann;
    if (name == "ggx")
        return NdfKind::GGX;
    if (name == "generalized")
        return NdfKind::Generalized;
    throw ParameterDomainError("unknown NDF kind '" + std::string(name) + "' (beckmann|ggx|generalized)");
}

RoughnessTriple roughness_from_kernel(const KernelParams& k) {
    k.validate();
    const double s = kSqrt2 * k.sigma;
    return {s / k.lx, s / k.ly, std::isinf(k.lz) ? 0.0 : s / k.lz};
}

KernelParams kernel_from_roughness(double sigma, const RoughnessTriple& a3) {
    a3.validate();
    if (!positive_finite(sigma))
        throw ParameterDomainError("sigma must be positive");
    const double s = kSqrt2 * sigma;
    return {sigma, s / a3.ax, s / a3.ay, a3.az > 0.0 ? s / a3.az : kInfinity};
}

double beckmann_ndf(const Direction& wm, double ax, double ay) {
    if (wm.z <= 0.0)
        return 0.0;
    const double z2 = wm.z * wm.z;
    const double e = (sq(wm.x / ax) + sq(wm.y / ay)) / z2;
    return std::exp(-e) / (kPi * ax * ay * z2 * z2);
}

double ggx_ndf(const Direction& wm, double ax, double ay) {
    if (wm.z <= 0.0)
        return 0.0;
    const double z2 = wm.z * wm.z;
    const double t = (sq(wm.x / ax) + sq(wm.y / ay)) / z2;
    return 1.0 / (kPi * ax * ay * z2 * z2 * sq(1.0 + t));
}

double lambda_of_a(double a) {
    if (std::isnan(a))
        throw ParameterDomainError("lambda_of_a: NaN argument");
    if (a < 0.0)
        return -1.0 - lambda_of_a(-a);
    if (a == 0.0)
        return kInfinity;
    if (std::isinf(a))
        return 0.0;
    // exp(-a^2) [1/(2 a sqrt(pi)) - erfcx(a)/2]
    return std::exp(-a * a) * (0.5 / (a * kSqrtPi) - 0.5 * erfcx(a));
}

double lambda_argument(const Direction& w, const RoughnessTriple& a3) {
    const double s2 = sq(a3.ax * w.x) + sq(a3.ay * w.y) + sq(a3.az * w.z);
    if (s2 == 0.0)
        return std::copysign(kInfinity, w.z);
    return w.z / std::sqrt(s2);
}

double generalized_lambda(const Direction& w, const RoughnessTriple& a3) {
    const double a = lambda_argument(w, a3);
    if (std::fabs(a) < 1e-9)
        throw GrazingSingularityError("generalized_lambda is singular at grazing directions (|a| < 1e-9); "
                                      "use projected_area instead");
    return lambda_of_a(a);
}

double generalized_lambda(const SphericalAngles& w, const RoughnessTriple& a3) {
    return generalized_lambda(w.to_direction(), a3);
}

double projected_area(const Direction& w, const RoughnessTriple& a3) {
    const double s = std::sqrt(sq(a3.ax * w.x) + sq(a3.ay * w.y) + sq(a3.az * w.z));
    const double c = w.z;
    if (s == 0.0)
        return c > 0.0 ? 0.0 : -c;
    const double a = c / s;
    double area;
    if (a > 0.0)
        area = std::exp(-a * a) * (s / (2.0 * kSqrtPi) - 0.5 * c * erfcx(a));
    else
        area = s * std::exp(-a * a) / (2.0 * kSqrtPi) - 0.5 * c * erfc(a);
    return std::max(area, 0.0);
}

double projected_area(const SphericalAngles& w, const RoughnessTriple& a3) {
    return projected_area(w.to_direction(), a3);
}

double ggx_lambda(const Direction& w, double ax, double ay) {
    const double a = lambda_argument(w, {ax, ay, 0.0});
    if (std::fabs(a) < 1e-9)
        throw GrazingSingularityError("ggx_lambda is singular at grazing directions");
    auto upper = [](double b) { return std::isinf(b) ? 0.0 : 0.5 * (-1.0 + std::sqrt(1.0 + 1.0 / (b * b))); };
    return a > 0.0 ? upper(a) : -1.0 - upper(-a);
}

double ggx_projected_area(const Direction& w, double ax, double ay) {
    const double s2 = sq(ax * w.x) + sq(ay * w.y);
    return std::max(0.5 * (std::sqrt(w.z * w.z + s2) - w.z), 0.0);
}

double smith_lambda(const Direction& w, NdfKind kind, const RoughnessTriple& a3) {
    switch (kind) {
        case NdfKind::Beckmann:
            return generalized_lambda(w, {a3.ax, a3.ay, 0.0});
        case NdfKind::GGX:
            return ggx_lambda(w, a3.ax, a3.ay);
        case NdfKind::Generalized:
            return generalized_lambda(w, a3);
    }
    return 0.0;
}

double visible_projected_area(const Direction& w, NdfKind kind, const RoughnessTriple& a3) {
    switch (kind) {
        case NdfKind::Beckmann:
            return projected_area(w, {a3.ax, a3.ay, 0.0});
        case NdfKind::GGX:
            return ggx_projected_area(w, a3.ax, a3.ay);
        case NdfKind::Generalized:
            return projected_area(w, a3);
    }
    return 0.0;
}

double ndf_eval(const Direction& wm, NdfKind kind, const RoughnessTriple& a3) {
    switch (kind) {
        case NdfKind::Beckmann:
            return beckmann_ndf(wm, a3.ax, a3.ay);
        case NdfKind::GGX:
            return ggx_ndf(wm, a3.ax, a3.ay);
        case NdfKind::Generalized:
            return generalized_ndf(wm, a3);
    }
    return 0.0;
}

double projected_area_bound(NdfKind kind, const RoughnessTriple& a3) {
    switch (kind) {
        case NdfKind::Beckmann:
            return std::sqrt(sq(a3.ax) + sq(a3.ay)) / (2.0 * kSqrtPi) + 1.0;
        case NdfKind::GGX:
            return std::sqrt(sq(a3.ax) + sq(a3.ay)) / 2.0 + 1.0;
        case NdfKind::Generalized:
            return std::sqrt(sq(a3.ax) + sq(a3.ay) + sq(a3.az)) / (2.0 * kSqrtPi) + 1.0;
    }
    return 1.0;
}

double generalized_ndf(const Direction& wm, const RoughnessTriple& a3) {
    if (!(a3.az > 0.0))
        throw ParameterDomainError("generalized_ndf requires az > 0 (use beckmann_ndf for the height field)");
    const double s = sq(wm.x / a3.ax) + sq(wm.y / a3.ay);
    const double az2 = a3.az * a3.az;
    const double A = s + sq(wm.z) / az2;
    const double B = wm.z / az2;
    // -C + B^2/A rewritten without the cancellation of two O(1/az^2) terms.
    const double log_scale = -s / (az2 * A);
    const double u = B / std::sqrt(A);
    const double prefactor = 1.0 / (kPi32 * a3.ax * a3.ay * a3.az * 2.0 * A * A);
    const double u2 = u * u;
    double value;
    if (u >= 0.0) {
        const double bracket = (u2 + 1.0) * std::exp(-u2) + kSqrtPi * u * (u2 + 1.5) * erfc(-u);
        value = prefactor * std::exp(log_scale) * bracket;
    } else {
        const double bracket = (u2 + 1.0) + kSqrtPi * u * (u2 + 1.5) * erfcx(-u);
        value = prefactor * std::exp(log_scale - u2) * bracket;
    }
    return std::max(value, 0.0);
}

double generalized_ndf(const SphericalAngles& wm, const RoughnessTriple& a3) {
    return generalized_ndf(wm.to_direction(), a3);
}

double gdf_pdf(const GradientSample& g, const RoughnessTriple& a3) {
    if (!(a3.az > 0.0))
        throw ParameterDomainError("gdf_pdf requires az > 0");
    const double e = sq(g.gx / a3.ax) + sq(g.gy / a3.ay) + sq((g.gz - 1.0) / a3.az);
    return std::exp(-e) / (kPi32 * a3.ax * a3.ay * a3.az);
}

GradientSample sample_gdf(const RoughnessTriple& a3, RandomStream& rng) {
    const double k = 1.0 / kSqrt2;
    GradientSample g;
    g.gx = a3.ax * k * rng.normal();
    g.gy = a3.ay * k * rng.normal();
    g.gz = 1.0 + a3.az * k * rng.normal();
    return g;
}

double ndf_from_gdf_quadrature(const Direction& wm, const RoughnessTriple& a3, QuadratureReport* report) {
    if (!(a3.az > 0.0))
        throw ParameterDomainError("ndf_from_gdf_quadrature requires az > 0");
    // Locate the Gaussian factor along the ray g = t wm: peak at t* = B/A with
    // width 1/sqrt(A). Beyond 8 widths it is below 1e-27 of its peak.
    const double A = sq(wm.x / a3.ax) + sq(wm.y / a3.ay) + sq(wm.z / a3.az);
    const double B = wm.z / sq(a3.az);
    const double width = 1.0 / std::sqrt(A);
    const double peak = std::max(B / A, 0.0);
    const double lo = std::max(0.0, peak - 8.0 * width);
    const double hi = peak + 8.0 * width;

    int evaluations = 0;
    auto integrand = [&](double t) {
        ++evaluations;
        const GradientSample g{t * wm.x, t * wm.y, t * wm.z};
        return gdf_pdf(g, a3) * t * t * t;
    };

    int panels = 4;
    double previous = integrate_interval(integrand, lo, hi, panels);
    constexpr int kMaxRefinements = 14;
    for (int refinement = 1; refinement <= kMaxRefinements; ++refinement) {
        panels *= 2;
        const double current = integrate_interval(integrand, lo, hi, panels);
        const double change = current == 0.0 ? std::fabs(previous) : std::fabs(current - previous) / std::fabs(current);
        if (change < 1e-8 || (current == 0.0 && previous == 0.0)) {
            if (report)
                *report = {evaluations, refinement, change};
            return current;
        }
        previous = current;
    }
    throw NumericFailure("ndf_from_gdf_quadrature did not converge for wm=(" + std::to_string(wm.x) + ", " +
                         std::to_string(wm.y) + ", " + std::to_string(wm.z) + ") after " +
                         std::to_string(evaluations) + " evaluations");
}

double ndf_from_gdf_quadrature(const SphericalAngles& wm, const RoughnessTriple& a3, QuadratureReport* report) {
    return ndf_from_gdf_quadrature(wm.to_direction(), a3, report);
}

double vndf_eval(const Direction& wm, const Direction& wo, NdfKind kind, const RoughnessTriple& a3) {
    const double area = visible_projected_area(wo, kind, a3);
    if (area < kMinProjectedArea)
        throw DegenerateVisibilityError("vndf_eval: projected area of the visible microflakes is zero");
    const double cos_v = -dot(wo, wm);
    if (cos_v <= 0.0)
        return 0.0;
    return cos_v * ndf_eval(wm, kind, a3) / area;
}

// --- visible normal sampling -------------------------------------------------

namespace {

// One-dimensional visible slope distribution of the unit-roughness height
// field seen from a view with cos = c, sin = s (in stretched space):
// p(x) = P2(x) (c - s x) on x < c / s.
struct VisibleSlopeProfile {
    NdfKind base;
    double c;
    double s;

    double upper() const {
        if (s <= 0.0)
            return kInfinity;
        return c / s;
    }

    double log_density(double x) const {
        const double w = c - s * x;
        if (!(w > 0.0))
            return -kInfinity;
        if (base == NdfKind::GGX)
            return -std::log(2.0) - 1.5 * std::log1p(x * x) + std::log(w);
        return -x * x - 0.5 * std::log(kPi) + std::log(w);
    }

    double log_cdf(double x) const {
        if (std::isinf(x))
            return x > 0 ? std::log(c) : -kInfinity;
        if (base == NdfKind::GGX) {
            const double r = std::sqrt(1.0 + x * x);
            double v;
            if (x < 0.0)
                v = (c / (r - x) + s) / (2.0 * r);
            else
                v = 0.5 * (c * (x / r + 1.0) + s / r);
            return std::log(std::max(v, 0.0));
        }
        if (x < 0.0) {
            const double bracket = c * erfcx(-x) + s / kSqrtPi;
            return -x * x + std::log(std::max(0.5 * bracket, 0.0));
        }
        const double v = 0.5 * c * (1.0 + erf(x)) + s * std::exp(-x * x) / (2.0 * kSqrtPi);
        return std::log(std::max(v, 0.0));
    }
};

// Solves log_cdf(x) = target on (-inf, upper] by safeguarded Newton.
double invert_profile(const VisibleSlopeProfile& p, double u) {
    u = std::clamp(u, 0x1.0p-60, 1.0 - 0x1.0p-53);
    const double xmax = p.upper();
    const double log_total = p.log_cdf(xmax);
    const double target = std::log(u) + log_total;

    double hi;
    if (std::isinf(xmax)) {
        hi = 1.0;
        while (p.log_cdf(hi) < target)
            hi = 2.0 * hi + 1.0;
    } else {
        hi = xmax;
    }
    double lo = std::min(hi, 0.0) - 1.0;
    while (p.log_cdf(lo) > target)
        lo = 2.0 * lo - 1.0;

    double x = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double g = p.log_cdf(x) - target;
        if (std::isnan(g))
            break;
        if (g > 0.0)
            hi = x;
        else
            lo = x;
        if (std::fabs(g) < 1e-15 || hi - lo <= 1e-15 * (1.0 + std::fabs(x)))
            break;
        const double slope = std::exp(p.log_density(x) - p.log_cdf(x));
        double next = x - g / slope;
        if (!(next > lo && next < hi) || !std::isfinite(next))
            next = 0.5 * (lo + hi);
        x = next;
    }
    return x;
}

// Conditional slope orthogonal to the view for unit GGX: density proportional
// to (k^2 + y^2)^-2 with k^2 = 1 + x^2; y = k tan(psi), psi ~ cos^2.
double sample_ggx_orthogonal(double k, double u) {
    u = std::clamp(u, 1e-16, 1.0 - 1e-16);
    double lo = -0.5 * kPi, hi = 0.5 * kPi;
    double psi = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
        const double g = (psi + std::sin(psi) * std::cos(psi) + 0.5 * kPi) / kPi - u;
        if (g > 0.0)
            hi = psi;
        else
            lo = psi;
        if (std::fabs(g) < 1e-16 || hi - lo < 1e-15)
            break;
        const double slope = 2.0 * sq(std::cos(psi)) / kPi;
        double next = slope > 0.0 ? psi - g / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        psi = next;
    }
    return k * std::tan(psi);
}

double height_field_vndf_density(const Direction& wm, const Direction& wo, NdfKind base, double ax, double ay) {
    const double cos_v = -dot(wo, wm);
    if (cos_v <= 0.0 || wm.z <= 0.0)
        return 0.0;
    if (base == NdfKind::GGX)
        return cos_v * ggx_ndf(wm, ax, ay) / ggx_projected_area(wo, ax, ay);
    return cos_v * beckmann_ndf(wm, ax, ay) / projected_area(wo, {ax, ay, 0.0});
}

double height_field_area(const Direction& wo, NdfKind base, double ax, double ay) {
    return base == NdfKind::GGX ? ggx_projected_area(wo, ax, ay) : projected_area(wo, {ax, ay, 0.0});
}

NdfKind base_kind(NdfKind kind) { return kind == NdfKind::GGX ? NdfKind::GGX : NdfKind::Beckmann; }

// The height-field component is dropped when it cannot see anything from wo
// (e.g. a ray climbing straight up through a Beckmann layer). The decision
// depends on wo only, so the mixture density stays exact.
double effective_mix(const Direction& wo, NdfKind kind, const RoughnessTriple& a3, double mix_ratio) {
    if (height_field_area(wo, base_kind(kind), a3.ax, a3.ay) < kMinProjectedArea)
        return 0.0;
    return mix_ratio;
}

void check_mix_ratio(double mix_ratio) {
    if (!(mix_ratio >= 0.0 && mix_ratio <= 1.0))
        throw ParameterDomainError("vNDF mixture ratio must lie in [0, 1], got " + std::to_string(mix_ratio));
}

}  // namespace

Direction sample_height_field_vndf(const Direction& wo, NdfKind base, double ax, double ay, double u1, double u2,
                                   double u3) {
    const Vec3 v = -wo;
    const Direction vs = Direction::normalize({ax * v.x, ay * v.y, v.z});
    const double sin_t = std::sqrt(vs.x * vs.x + vs.y * vs.y);
    const double cos_t = vs.z;
    double cos_p = 1.0, sin_p = 0.0;
    if (sin_t > 1e-14) {
        cos_p = vs.x / sin_t;
        sin_p = vs.y / sin_t;
    }

    const VisibleSlopeProfile profile{base, cos_t, sin_t};
    const double sx = invert_profile(profile, u1);
    double sy;
    if (base == NdfKind::GGX) {
        sy = sample_ggx_orthogonal(std::sqrt(1.0 + sx * sx), u2);
    } else {
        const double r = std::sqrt(-2.0 * std::log(std::max(1.0 - u2, 1e-300)));
        sy = r * std::cos(2.0 * kPi * u3) / kSqrt2;
    }

    const double x = (cos_p * sx - sin_p * sy) * ax;
    const double y = (sin_p * sx + cos_p * sy) * ay;
    return Direction::normalize({-x, -y, 1.0});
}

double vndf_sample_pdf(const Direction& wm, const Direction& wo, NdfKind kind, const RoughnessTriple& a3,
                       double mix_ratio) {
    check_mix_ratio(mix_ratio);
    const double r = effective_mix(wo, kind, a3, mix_ratio);
    const double uniform = -dot(wo, wm) > 0.0 ? 1.0 / (2.0 * kPi) : 0.0;
    double guided = 0.0;
    if (r > 0.0)
        guided = height_field_vndf_density(wm, wo, base_kind(kind), a3.ax, a3.ay);
    return r * guided + (1.0 - r) * uniform;
}

VndfSample vndf_sample(const Direction& wo, NdfKind kind, const RoughnessTriple& a3, double mix_ratio,
                       RandomStream& rng) {
    check_mix_ratio(mix_ratio);
    if (visible_projected_area(wo, kind, a3) < kMinProjectedArea)
        throw DegenerateVisibilityError("vndf_sample: projected area of the visible microflakes is zero");
    const double r = effective_mix(wo, kind, a3, mix_ratio);
    const double u0 = rng.uniform();
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    const double u3 = rng.uniform();
    Direction wm;
    if (u0 < r) {
        wm = sample_height_field_vndf(wo, base_kind(kind), a3.ax, a3.ay, u1, u2, u3);
    } else {
        const double cos_t = 1.0 - u1;
        const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
        const double phi = 2.0 * kPi * u2;
        const Frame frame = build_frame(-wo);
        wm = Direction::normalize(frame.to_world(Vec3{sin_t * std::cos(phi), sin_t * std::sin(phi), cos_t}));
    }
    return {wm, vndf_sample_pdf(wm, wo, kind, a3, mix_ratio)};
}

}  // namespace macrofacet
