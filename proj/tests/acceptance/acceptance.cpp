// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <macrofacet/gp_oracle.hpp>
#include <macrofacet/medium.hpp>
#include <macrofacet/ndf.hpp>
#include <macrofacet/renderer.hpp>
#include <macrofacet/tracking.hpp>

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

using namespace macrofacet;

namespace {

constexpr double kDeg = oracle::kPi / 180.0;

struct Outcome {
    bool passed = false;
    std::string detail;
};

Direction random_direction(RandomStream& rng) {
    const double z = 1 - 2 * rng.uniform();
    const double r = std::sqrt(std::max(0.0, 1 - z * z));
    const double p = 2 * oracle::kPi * rng.uniform();
    return Direction::normalize({r * std::cos(p), r * std::sin(p), z});
}

double sphere(const std::function<double(const Direction&)>& f, const Direction& axis) {
    return oracle::sphere_integral([&](const oracle::V3& v) { return f(Direction::normalize({v.x, v.y, v.z})); },
                                   {axis.x, axis.y, axis.z});
}

std::string fmt(const char* format, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

const KernelParams kUnitKernel{1.0, oracle::kSqrt2, oracle::kSqrt2, oracle::kSqrt2};

Outcome lambda_degeneracy() {
    double worst = 0;
    for (double alpha : {0.1, 0.3, 0.5, 1.0, 1.7})
        for (int deg = 0; deg <= 85; deg += 5) {
            const Direction w = SphericalAngles{deg * kDeg, 0.4}.to_direction();
            const double ref = deg == 0 ? 0.0 : oracle::beckmann_lambda(deg * kDeg, alpha);
            worst = std::max(worst, std::fabs(generalized_lambda(w, {alpha, alpha, 1e-4}) - ref));
        }
    return {worst <= 1e-4, fmt("max |Lambda - Lambda_beckmann| = %.3e (<= 1e-4)", worst)};
}

Outcome lambda_symmetry() {
    RandomStream rng(2026, 2);
    double worst = 0;
    int n = 0;
    while (n < 10000) {
        Direction w = random_direction(rng);
        if (std::fabs(w.z) < 1e-6)
            continue;
        const RoughnessTriple a3{0.02 + 2 * rng.uniform(), 0.02 + 2 * rng.uniform(), 0.02 + 2 * rng.uniform()};
        const double up = generalized_lambda(w, a3), down = generalized_lambda(-w, a3);
        worst = std::max(worst, std::fabs(up + down + 1.0) / std::max({1.0, std::fabs(up), std::fabs(down)}));
        ++n;
    }
    return {worst <= 1e-12, fmt("max |L(a) + L(-a) + 1| / max(1, |L|) = %.3e over 1e4 (<= 1e-12)", worst)};
}

Outcome ndf_oracle_equivalence() {
    double worst = 0;
    for (double alpha : {0.3, 0.6, 1.0})
        for (int t = 0; t <= 12; ++t)
            for (double phi : {0.0, 45.0, 90.0}) {
                const SphericalAngles wm{t * 15 * kDeg, phi * kDeg};
                const RoughnessTriple a3 = RoughnessTriple::isotropic(alpha);
                const double q = ndf_from_gdf_quadrature(wm, a3);
                worst = std::max(worst, std::fabs(generalized_ndf(wm, a3) - q) / q);
            }
    return {worst <= 5e-3, fmt("max relative error = %.3e on 13x3x3 (<= 5e-3)", worst)};
}

Outcome ndf_beckmann_limit() {
    double worst = 0;
    for (int deg = 0; deg <= 60; ++deg) {
        const Direction wm = SphericalAngles{deg * kDeg, 0.7}.to_direction();
        const double ref = oracle::beckmann_ndf(wm.z, 1.0);
        worst = std::max(worst, std::fabs(generalized_ndf(wm, {1, 1, 1e-3}) - ref) / ref);
    }
    return {worst <= 1e-2, fmt("max relative error = %.3e for theta <= 60 deg (<= 1e-2)", worst)};
}

Outcome signed_projected_area() {
    const RoughnessTriple triples[] = {{1, 1, 1}, {0.5, 0.5, 0.5}, {0.3, 0.6, 1.0}, {1.0, 0.5, 0.8}, {0.6, 0.6, 0.3}};
    RandomStream rng(5, 20);
    double worst = 0;
    for (const auto& a3 : triples)
        for (int i = 0; i < 20; ++i) {
            const Direction w = random_direction(rng);
            const double q = sphere([&](const Direction& m) { return dot(w, m) * generalized_ndf(m, a3); }, Direction{});
            worst = std::max(worst, std::fabs(q - w.z));
        }
    return {worst <= 1e-3, fmt("max |int (w.m) D dm - w.z| = %.3e (<= 1e-3)", worst)};
}

Outcome vndf_denominator() {
    double worst = 0;
    for (double lz : {1.0, 2.0, 10.0}) {
        const RoughnessTriple a3 = roughness_from_kernel({1.0, oracle::kSqrt2, oracle::kSqrt2, lz});
        for (int deg = 0; deg <= 85; deg += 5)
            for (double theta : {double(deg), 180.0 - deg}) {
                const Direction wo = SphericalAngles{theta * kDeg, 0.3}.to_direction();
                const double q =
                    sphere([&](const Direction& m) { return std::max(0.0, -dot(wo, m)) * generalized_ndf(m, a3); }, -wo);
                const double area = projected_area(wo, a3);
                worst = std::max(worst, std::fabs(q - area) / area);
            }
    }
    return {worst <= 1e-2, fmt("max relative error = %.3e (<= 1e-2)", worst)};
}

OracleSettings oracle_settings(int m, std::uint64_t seed) {
    OracleSettings s;
    s.realizations = m;
    s.rays_per_realization = 256;
    s.seed = seed;
    return s;
}

Outcome vndf_vs_gp() {
    std::vector<Direction> wos;
    for (double inc : {0.0, 30.0, 45.0, 60.0})
        wos.push_back(SphericalAngles{(180.0 - inc) * kDeg, 0}.to_direction());
    const auto hists = empirical_vndf(kUnitKernel, wos, 8, 8, oracle_settings(1024, 7));
    double worst = 0;
    std::string per;
    for (std::size_t i = 0; i < wos.size(); ++i) {
        const double l1 = l1_distance(hists[i], analytic_vndf_histogram(kUnitKernel, wos[i], 8, 8));
        worst = std::max(worst, l1);
        per += fmt(" %.4f", l1);
    }
    return {worst <= 0.05, "L1 at 0/30/45/60 deg:" + per + " (<= 0.05, M = 1024)"};
}

Outcome transmittance_estimator() {
    MacrofacetMedium m;
    m.a3 = RoughnessTriple::isotropic(1.0);
    ShellScene scene;
    scene.shells.push_back({"plane", SdfPrimitive(Plane{0}), m});
    RandomStream rng(8, 1);
    double worst = 0;
    const double length = 2.0;
    for (double z0 : {-2.0, -1.0, 0.0, 1.0, 2.0})
        for (double deg : {20.0, 45.0, 70.0, 110.0, 150.0}) {
            const SphericalAngles w{deg * kDeg, 0.6};
            const auto est = transmittance_estimate(Ray{{0.1, -0.2, z0}, w.to_direction(), length}, scene, 1000000, rng);
            const double h1 = std::min(z0 + length * std::cos(w.theta), m.shell_half_width());
            const double closed = planar_transmittance(z0, h1, w, m);
            worst = std::max(worst, std::fabs(est.mean - closed) / est.std_error);
        }
    return {worst <= 3.0, fmt("max z-score = %.2f on 5x5 grid at 1e6 samples (<= 3)", worst)};
}

Outcome transmittance_vs_gp() {
    std::vector<double> t;
    for (int i = 0; i <= 40; ++i)
        t.push_back(0.1 * i);
    const auto rows = empirical_transmittance(kUnitKernel, 0.0, SphericalAngles{135 * kDeg, 0}, t, oracle_settings(1024, 8));
    double first = 0, latter = 0;
    for (const auto& r : rows) {
        if (r.closed_form >= 0.3)
            first = std::max(first, std::fabs(r.tr - r.closed_form));
        else
            latter = std::max(latter, std::fabs(r.tr - r.closed_form));
    }
    return {first <= 0.05,
            fmt("max |GP - closed| = %.4f where Tr >= 0.3 (<= 0.05); latter-half deviation %.4f (reported)", first,
                latter)};
}

Outcome multiplicativity() {
    const auto rows = multiplicativity_probe(kUnitKernel, 0.0, SphericalAngles{std::acos(0.1), 0}, 3.0,
                                             {0.5, 1.0, 1.5, 2.0, 2.5}, oracle_settings(1024, 9));
    double z = 0, closed = 0, gap = 0;
    for (const auto& r : rows) {
        if (r.std_error > 0 && r.gap / r.std_error > z) {
            z = r.gap / r.std_error;
            gap = r.gap;
        }
        closed = std::max(closed, r.closed_form_gap);
    }
    return {z > 3.0 && closed <= 1e-12,
            fmt("GP gap %.5f at z = %.1f (> 3); closed-form gap %.1e (<= 1e-12)", gap, z, closed)};
}

Outcome phase_checks() {
    const Frame frame = build_frame(Direction{});
    RandomStream rng(10, 0);
    double recip = 0;
    int n = 0;
    while (n < 10000) {
        MacrofacetMedium m;
        m.a3 = {0.2 + rng.uniform(), 0.2 + rng.uniform(), 0.1 + rng.uniform()};
        const Direction wo = random_direction(rng), wi = random_direction(rng);
        const double so = local_projected_area(wo, m), si = local_projected_area(-wi, m);
        if (so < 1e-10 || si < 1e-10)
            continue;
        const double lhs = so * phase_eval(wo, wi, m, frame).r;
        const double rhs = si * phase_eval(-wi, -wo, m, frame).r;
        recip = std::max(recip, std::fabs(lhs - rhs) / std::max(1.0, lhs));
        ++n;
    }
    MacrofacetMedium m;
    m.a3 = RoughnessTriple::isotropic(1.0);
    m.unit_fresnel = true;
    double norm = 0;
    for (double deg : {150.0, 120.0, 30.0}) {
        const Direction wo = SphericalAngles{deg * kDeg, 0.2}.to_direction();
        norm = std::max(norm, std::fabs(sphere([&](const Direction& wi) { return phase_eval(wo, wi, m, frame).r; }, -wo) - 1));
    }
    return {recip <= 1e-12 && norm <= 1e-2,
            fmt("reciprocity %.2e over 1e4 pairs (<= 1e-12); |int p - 1| = %.2e (<= 1e-2)", recip, norm)};
}

Outcome furnace() {
    MacrofacetMedium m;
    m.a3 = RoughnessTriple::isotropic(1.0);
    m.unit_fresnel = true;
    ShellScene scene;
    scene.shells.push_back({"floor", SdfPrimitive(Plane{0}), m});
    scene.camera.position = {0, -5, 5};
    scene.camera.look_at = {0, 0, 0};
    scene.camera.up = {0, 0, 1};
    scene.camera.width = 64;
    scene.camera.height = 64;
    const double mean = render(scene, {256, 11, 100000, 0}).mean().r;
    return {std::fabs(mean - 1.0) <= 0.02, fmt("mean pixel %.4f (1 +- 0.02)", mean)};
}

Outcome microfacet_degeneracy() {
    MacrofacetMedium m;
    m.kind = NdfKind::Beckmann;
    m.a3 = {0.1, 0.1, 0};
    m.sigma = 0.01;
    m.unit_fresnel = true;
    ShellScene scene;
    scene.shells.push_back({"floor", SdfPrimitive(Plane{0}), m});
    scene.environment.constant = Rgb(0.0);
    RandomStream rng(12, 0);
    const double grid[] = {0, 15, 30, 45, 60};
    double sq = 0;
    for (double tv : grid)
        for (double tl : grid) {
            const Direction v = Direction::normalize({std::sin(tv * kDeg), 0, std::cos(tv * kDeg)});
            const Direction l = Direction::normalize({-std::sin(tl * kDeg), 0, std::cos(tl * kDeg)});
            scene.sun = DirectionalLight{l, Rgb(1.0)};
            const int n = 20000;
            double sum = 0;
            for (int i = 0; i < n; ++i)
                sum += trace_path(Ray{{0, 0, 0.05}, -v}, scene, 1, rng).r;
            const Direction h = Direction::normalize(v + l);
            const double lv = tv == 0 ? 0.0 : oracle::beckmann_lambda(tv * kDeg, 0.1);
            const double ll = tl == 0 ? 0.0 : oracle::beckmann_lambda(tl * kDeg, 0.1);
            const double ref = oracle::beckmann_ndf(h.z, 0.1) / (4 * v.z) / (1 + lv + ll);
            const double e = sum / n / ref - 1.0;
            sq += e * e;
        }
    const double rmse = std::sqrt(sq / 25);
    return {rmse <= 0.02, fmt("relative RMSE %.2e over 5x5 view/light grid (<= 0.02)", rmse)};
}

Outcome determinism() {
    ShellScene scene;
    MacrofacetMedium a;
    a.a3 = {0.4, 0.7, 0.5};
    a.sigma = 0.1;
    MacrofacetMedium b;
    b.kind = NdfKind::GGX;
    b.a3 = {0.2, 0.2, 0};
    b.sigma = 0.02;
    scene.shells.push_back({"floor", SdfPrimitive(Plane{0}), a});
    scene.shells.push_back({"ball", SdfPrimitive(Sphere{{0, 0, 1.2}, 0.6}), b});
    scene.camera.position = {0, -4, 2.5};
    scene.camera.look_at = {0, 0, 0.6};
    scene.camera.up = {0, 0, 1};
    scene.camera.width = 48;
    scene.camera.height = 32;
    scene.sun = DirectionalLight{Direction::normalize({0.4, -0.3, 1}), Rgb{3, 3, 3}};
    const RenderSettings settings{8, 1234, 64, 0};
    std::string images[3];
    const char* threads[3] = {"1", "4", "4"};
    for (int i = 0; i < 3; ++i) {
        setenv("MACROFACET_THREADS", threads[i], 1);
        images[i] = encode_pfm(render(scene, settings));
    }
    unsetenv("MACROFACET_THREADS");
    const bool same = images[0] == images[1] && images[1] == images[2];
    return {same, same ? "PFM bytes identical for MACROFACET_THREADS = 1, 4, 4" : "PFM bytes differ"};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"lambda-degeneracy", lambda_degeneracy},
        {"lambda-symmetry", lambda_symmetry},
        {"ndf-oracle-equivalence", ndf_oracle_equivalence},
        {"ndf-beckmann-limit", ndf_beckmann_limit},
        {"signed-projected-area", signed_projected_area},
        {"vndf-denominator", vndf_denominator},
        {"vndf-vs-gp-oracle", vndf_vs_gp},
        {"transmittance-estimator", transmittance_estimator},
        {"transmittance-vs-gp-oracle", transmittance_vs_gp},
        {"multiplicativity", multiplicativity},
        {"phase-reciprocity-normalization", phase_checks},
        {"white-furnace", furnace},
        {"microfacet-degeneracy", microfacet_degeneracy},
        {"determinism", determinism},
    };
    const char* labels[] = {"1", "2", "3", "4", "5", "6", "7", "8a", "8b", "9", "10", "11", "12", "13"};
    int failures = 0;
    int index = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %s %s: %s [%.1f s]\n", o.passed ? "PASS" : "FAIL", labels[index], c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += !o.passed;
        ++index;
    }
    return failures == 0 ? 0 : 1;
}
