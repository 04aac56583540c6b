// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#include <macrofacet/quadrature.hpp>

#include <macrofacet/error.hpp>

#include <cmath>
#include <map>
#include <mutex>

namespace macrofacet {

namespace {

QuadratureRule make_gauss_legendre(int n) {
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16)
                break;
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
    if (n < 1)
        throw ParameterDomainError("gauss_legendre: order must be >= 1");
    static std::mutex mutex;
    static std::map<int, QuadratureRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, make_gauss_legendre(n)).first;
    return it->second;
}

double integrate_interval(const std::function<double(double)>& f, double a, double b, int panels, int order) {
    const QuadratureRule& rule = gauss_legendre(order);
    const double width = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        const double half = 0.5 * width;
        const double mid = lo + half;
        double panel = 0.0;
        for (int i = 0; i < order; ++i)
            panel += rule.weights[i] * f(mid + half * rule.nodes[i]);
        sum += panel * half;
    }
    return sum;
}

double integrate_sphere(const std::function<double(const Direction&)>& f, const Direction& axis,
                        int theta_panels_per_hemisphere, int n_phi) {
    const Frame frame = build_frame(axis);
    std::vector<double> cos_phi(n_phi), sin_phi(n_phi);
    for (int j = 0; j < n_phi; ++j) {
        const double phi = 2.0 * kPi * (j + 0.5) / n_phi;
        cos_phi[j] = std::cos(phi);
        sin_phi[j] = std::sin(phi);
    }
    auto ring = [&](double theta) {
        const double st = std::sin(theta), ct = std::cos(theta);
        double sum = 0.0;
        for (int j = 0; j < n_phi; ++j) {
            const Vec3 local{st * cos_phi[j], st * sin_phi[j], ct};
            sum += f(Direction::unchecked(frame.to_world(local)));
        }
        return sum * (2.0 * kPi / n_phi) * st;
    };
    return integrate_interval(ring, 0.0, 0.5 * kPi, theta_panels_per_hemisphere) +
           integrate_interval(ring, 0.5 * kPi, kPi, theta_panels_per_hemisphere);
}

}  // namespace macrofacet
