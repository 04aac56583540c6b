// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference implementations for the tests. Nothing here calls
// into the library's numerics: special functions are long-double series,
// sphere quadrature has its own Gauss-Legendre nodes.

#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

inline constexpr long double kPiL = 3.141592653589793238462643383279502884L;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;

// High-precision constants (mpmath, 30 digits, rounded to double).
inline constexpr double kLambda45Alpha1 = 0.08331547058768629838;  // Lambda at 45 deg, alpha = 1
inline constexpr double kLambdaOne = 0.02512727083000611051;       // Lambda(a = 1)
inline constexpr double kNdfPoleAlpha1 = 0.79925375972224953986;   // generalized NDF at the pole, alpha = 1

// erf by the positive-term series, |x| <= 3.
inline long double erf_series(long double x) {
    const long double x2 = x * x;
    long double term = x, sum = x;
    for (int n = 1; n < 500; ++n) {
        term *= 2.0L * x2 / (2.0L * n + 1.0L);
        sum += term;
        if (std::fabs(term) < 1e-24L * std::fabs(sum))
            break;
    }
    return 2.0L / std::sqrt(kPiL) * std::exp(-x2) * sum;
}

// erfc by the Laplace continued fraction (modified Lentz), x >= 2.5.
inline long double erfc_fraction(long double x) {
    long double f = x, c = x, d = 0;
    for (int n = 1; n < 5000; ++n) {
        const long double an = 0.5L * n;
        d = x + an * d;
        c = x + an / c;
        d = 1.0L / d;
        const long double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0L) < 1e-22L)
            break;
    }
    return std::exp(-x * x) / std::sqrt(kPiL) / f;
}

inline double erf(double x) {
    if (std::fabs(x) < 2.5)
        return static_cast<double>(erf_series(x));
    const long double c = erfc_fraction(std::fabs(x));
    return static_cast<double>(x > 0 ? 1.0L - c : c - 1.0L);
}

inline double erfc(double x) {
    if (x >= 2.5)
        return static_cast<double>(erfc_fraction(x));
    if (x <= -2.5)
        return static_cast<double>(2.0L - erfc_fraction(-x));
    return static_cast<double>(1.0L - erf_series(x));
}

inline double normal_cdf(double x) { return 0.5 * erfc(-x / std::sqrt(2.0)); }
inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }

// Smith Lambda as a function of a (either sign).
inline double lambda_of_a(double a) {
    return std::exp(-a * a) / (2.0 * a * std::sqrt(kPi)) + 0.5 * (erf(a) - 1.0);
}

// Height-field Beckmann Smith Lambda for an isotropic slope width alpha.
inline double beckmann_lambda(double theta, double alpha) {
    if (theta == 0.0)
        return 0.0;
    return lambda_of_a(1.0 / (alpha * std::tan(theta)));
}

inline double beckmann_ndf(double cos_m, double alpha) {
    if (cos_m <= 0)
        return 0;
    const double c2 = cos_m * cos_m;
    const double t2 = (1.0 - c2) / c2;
    return std::exp(-t2 / (alpha * alpha)) / (kPi * alpha * alpha * c2 * c2);
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton on P_n in long double.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        long double z = std::cos(kPiL * (i + 0.75L) / (n + 0.5L));
        long double dp = 0;
        for (int it = 0; it < 100; ++it) {
            long double p0 = 1, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const long double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1);
            const long double dz = p1 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-19L)
                break;
        }
        x[i] = static_cast<double>(z);
        w[i] = static_cast<double>(2.0L / ((1 - z * z) * dp * dp));
    }
    return {x, w};
}

struct V3 {
    double x, y, z;
};

// Integral of f over the unit sphere with polar axis `axis` (unit). Each
// hemisphere is integrated separately in cos(theta), with `panels` panels of
// a 24-point rule; phi uses `n_phi` trapezoid nodes.
inline double sphere_integral(const std::function<double(const V3&)>& f, V3 axis, int panels = 24, int n_phi = 192) {
    const auto [gx, gw] = gauss_legendre(24);
    V3 t = std::fabs(axis.x) < 0.9 ? V3{1, 0, 0} : V3{0, 1, 0};
    const double d = t.x * axis.x + t.y * axis.y + t.z * axis.z;
    t = {t.x - d * axis.x, t.y - d * axis.y, t.z - d * axis.z};
    const double tl = std::sqrt(t.x * t.x + t.y * t.y + t.z * t.z);
    t = {t.x / tl, t.y / tl, t.z / tl};
    const V3 b{axis.y * t.z - axis.z * t.y, axis.z * t.x - axis.x * t.z, axis.x * t.y - axis.y * t.x};
    double total = 0;
    for (int hemi = 0; hemi < 2; ++hemi) {
        for (int p = 0; p < panels; ++p) {
            // Panels in theta within the hemisphere, mapped to cos(theta).
            const double t0 = 0.5 * kPi * p / panels, t1 = 0.5 * kPi * (p + 1) / panels;
            for (std::size_t q = 0; q < gx.size(); ++q) {
                const double th = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * gx[q];
                const double wt = 0.5 * (t1 - t0) * gw[q] * std::sin(th);
                const double ct = hemi == 0 ? std::cos(th) : -std::cos(th);
                const double st = std::sin(th);
                double ring = 0;
                for (int j = 0; j < n_phi; ++j) {
                    const double ph = 2.0 * kPi * (j + 0.5) / n_phi;
                    const double cx = st * std::cos(ph), cy = st * std::sin(ph);
                    ring += f({cx * t.x + cy * b.x + ct * axis.x, cx * t.y + cy * b.y + ct * axis.y,
                               cx * t.z + cy * b.z + ct * axis.z});
                }
                total += wt * ring * 2.0 * kPi / n_phi;
            }
        }
    }
    return total;
}

// Ray-parameter interval where a ray is within the sphere of radius r around
// c; std::nullopt when it misses.
inline std::optional<std::pair<double, double>> ray_sphere(V3 o, V3 d, V3 c, double r) {
    const V3 oc{o.x - c.x, o.y - c.y, o.z - c.z};
    const double b = oc.x * d.x + oc.y * d.y + oc.z * d.z;
    const double cc = oc.x * oc.x + oc.y * oc.y + oc.z * oc.z - r * r;
    const double disc = b * b - cc;
    if (disc < 0)
        return std::nullopt;
    const double s = std::sqrt(disc);
    return std::make_pair(-b - s, -b + s);
}

// Closed-form flat-shell transmittance by direct numerical integration of
// rho(f) sigma along the ray (heights h0 -> h1, unit sigma). lambda is the signed Smith Lambda of the direction.
inline double flat_transmittance_by_integration(double h0, double h1, double lambda) {
    const auto [gx, gw] = gauss_legendre(32);
    const int panels = 64;
    double integral = 0;
    for (int p = 0; p < panels; ++p) {
        const double a = h0 + (h1 - h0) * p / panels, b = h0 + (h1 - h0) * (p + 1) / panels;
        for (std::size_t q = 0; q < gx.size(); ++q) {
            const double h = 0.5 * (a + b) + 0.5 * (b - a) * gx[q];
            integral += 0.5 * (b - a) * gw[q] * normal_pdf(h) / normal_cdf(h);
        }
    }
    // dt = dh / cos, sigma = Lambda cos; integral over t of rho sigma is
    // Lambda * integral over h of rho.
    return std::exp(-lambda * integral);
}

}  // namespace oracle
