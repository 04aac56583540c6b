// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <macrofacet/error.hpp>
#include <macrofacet/renderer.hpp>
#include <macrofacet/tracking.hpp>

#include "oracles.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace macrofacet;

namespace {

constexpr double kDeg = oracle::kPi / 180.0;

MacrofacetMedium iso_medium(double alpha, double sigma) {
    MacrofacetMedium m;
    m.a3 = RoughnessTriple::isotropic(alpha);
    m.sigma = sigma;
    return m;
}

ShellScene small_scene(int w = 8, int h = 8) {
    ShellScene scene;
    scene.shells.push_back({"floor", SdfPrimitive(Plane{0}), iso_medium(1.0, 0.2)});
    scene.shells.push_back({"ball", SdfPrimitive(Sphere{{0, 0, 1.5}, 0.5}), iso_medium(0.4, 0.05)});
    scene.camera.position = {0, -4, 3};
    scene.camera.look_at = {0, 0, 0.5};
    scene.camera.up = {0, 0, 1};
    scene.camera.width = w;
    scene.camera.height = h;
    scene.environment.constant = Rgb{0.8, 0.9, 1.0};
    scene.sun = DirectionalLight{Direction::normalize({0.3, 0.2, 1}), Rgb{2, 2, 2}};
    return scene;
}

double variance(const RadianceImage& img) {
    double s = 0, s2 = 0;
    for (const Rgb& p : img.pixels) {
        s += p.r;
        s2 += p.r * p.r;
    }
    const double n = double(img.pixels.size());
    return (s2 - s * s / n) / (n - 1);
}

}  // namespace

TEST_CASE("an empty scene shows the environment exactly") {
    ShellScene scene;
    scene.environment.constant = Rgb{0.25, 0.5, 2.0};
    scene.camera.width = 5;
    scene.camera.height = 3;
    const RadianceImage img = render(scene, {4, 1, 8, 1});
    for (const Rgb& p : img.pixels) {
        CHECK(p.r == 0.25);
        CHECK(p.g == 0.5);
        CHECK(p.b == 2.0);
    }
    scene.background = Rgb(0.125);
    const RadianceImage bg = render(scene, {2, 1, 8, 1});
    CHECK(bg.pixels[7].g == 0.125);
}

TEST_CASE("black environment without lights renders zero") {
    ShellScene scene = small_scene();
    scene.environment.constant = Rgb(0.0);
    scene.sun.reset();
    const RadianceImage img = render(scene, {8, 3, 16, 1});
    for (const Rgb& p : img.pixels) {
        CHECK(p.r == 0.0);
        CHECK(p.g == 0.0);
        CHECK(p.b == 0.0);
    }
}

TEST_CASE("render argument checks") {
    ShellScene scene = small_scene();
    CHECK_THROWS_AS(render(scene, {0, 1, 8, 1}), ParameterDomainError);
    RandomStream rng(1, 0);
    CHECK_THROWS_AS(trace_path(Ray{{0, 0, 5}, -Direction{}}, scene, 0, rng), ParameterDomainError);
}

TEST_CASE("renders are reproducible and independent of the worker count") {
    const ShellScene scene = small_scene(12, 9);
    const RadianceImage a = render(scene, {6, 42, 16, 1});
    const RadianceImage b = render(scene, {6, 42, 16, 1});
    const RadianceImage c = render(scene, {6, 42, 16, 3});
    const RadianceImage d = render(scene, {6, 43, 16, 2});
    CHECK(encode_pfm(a) == encode_pfm(b));
    CHECK(encode_pfm(a) == encode_pfm(c));
    CHECK(encode_pfm(a) != encode_pfm(d));
    CHECK(a.seed == 42);
    CHECK(a.spp == 6);
}

TEST_CASE("no NaN or negative pixels") {
    ShellScene scene = small_scene(16, 12);
    scene.shells.push_back({"crate", SdfPrimitive(Box{{1.5, 0.5, 1.2}, {0.3, 0.3, 0.3}}), iso_medium(0.2, 0.02)});
    scene.shells[2].medium.kind = NdfKind::GGX;
    scene.shells[0].medium.kind = NdfKind::Beckmann;
    RadianceImage map(8, 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 8; ++x)
            map.at(x, y) = Rgb(0.1 * x + y);
    scene.environment.map = map;
    const RadianceImage img = render(scene, {16, 5, 64, 2});
    CHECK(img.all_finite_nonnegative());
    CHECK(img.mean().r > 0.0);
}

TEST_CASE("white furnace") {
    ShellScene scene;
    MacrofacetMedium m = iso_medium(1.0, 1.0);
    m.unit_fresnel = true;
    scene.shells.push_back({"floor", SdfPrimitive(Plane{0}), m});
    scene.camera.position = {0, -5, 5};
    scene.camera.look_at = {0, 0, 0};
    scene.camera.up = {0, 0, 1};
    scene.camera.width = 16;
    scene.camera.height = 16;
    const RadianceImage img = render(scene, {64, 1, 100000, 0});
    CHECK(std::fabs(img.mean().r - 1.0) <= 0.02);
}

TEST_CASE("doubling spp halves the pixel variance") {
    ShellScene scene;
    scene.shells.push_back({"floor", SdfPrimitive(Plane{0}), iso_medium(0.8, 0.1)});
    scene.camera.position = {0, 0, 5};
    scene.camera.look_at = {0, 0, 0};
    scene.camera.up = {0, 1, 0};
    scene.camera.vfov_deg = 0.5;
    scene.camera.width = 32;
    scene.camera.height = 32;
    scene.environment.constant = Rgb(1.0);
    const double v16 = variance(render(scene, {16, 7, 8, 2}));
    const double v32 = variance(render(scene, {32, 8, 8, 2}));
    INFO("v16 = " << v16 << " v32 = " << v32);
    CHECK(v16 / v32 > 1.6);
    CHECK(v16 / v32 < 2.5);
}

TEST_CASE("single scattering matches depth quadrature on a flat shell") {
    MacrofacetMedium m = iso_medium(1.0, 1.0);
    ShellScene scene;
    scene.shells.push_back({"floor", SdfPrimitive(Plane{0}), m});
    scene.environment.constant = Rgb(0.0);
    const SphericalAngles light{40 * kDeg, oracle::kPi};
    scene.sun = DirectionalLight{light.to_direction(), Rgb(1.0)};
    const SphericalAngles view{150 * kDeg, 0.0};
    const Direction wo = view.to_direction();
    const Ray ray{{0, 0, 3}, wo};
    const Frame frame = build_frame(Direction{});

    // Radiance = int sigma_t(t) Tr(0, t) p(wo, l) Tr_shadow(t) dt, over heights 3 -> -6.
    const auto [gx, gw] = oracle::gauss_legendre(24);
    const double c = -wo.z;
    double reference = 0;
    const int panels = 90;
    for (int k = 0; k < panels; ++k) {
        const double h_top = 3.0 - 9.0 * k / panels, h_bot = 3.0 - 9.0 * (k + 1) / panels;
        for (std::size_t q = 0; q < gx.size(); ++q) {
            const double h = 0.5 * (h_top + h_bot) + 0.5 * (h_bot - h_top) * gx[q];
            const double dt = 0.5 * (h_top - h_bot) * gw[q] / c;
            const double sigma_t = extinction(wo, h, m, frame);
            const double tr_in = planar_transmittance(3.0, h, view, m);
            const double tr_out = planar_transmittance(h, 3.0, light, m);
            reference += dt * sigma_t * tr_in * phase_eval(wo, light.to_direction(), m, frame).g * tr_out;
        }
    }

    RandomStream rng(21, 0);
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        const double v = trace_path(ray, scene, 1, rng).g;
        s += v;
        s2 += v * v;
    }
    const double mean = s / n;
    const double se = std::sqrt((s2 / n - mean * mean) / n);
    INFO("mc = " << mean << " +- " << se << " reference = " << reference);
    CHECK(std::fabs(mean - reference) <= 3 * se);
}

TEST_CASE("single scattering from a thin Beckmann shell matches the Smith microfacet BRDF") {
    MacrofacetMedium m;
    m.kind = NdfKind::Beckmann;
    m.a3 = {0.3, 0.3, 0};
    m.sigma = 0.01;
    m.unit_fresnel = true;
    ShellScene scene;
    scene.shells.push_back({"floor", SdfPrimitive(Plane{0}), m});
    scene.environment.constant = Rgb(0.0);
    const double tv = 30 * kDeg, tl = 45 * kDeg;
    const Direction v = Direction::normalize({std::sin(tv), 0, std::cos(tv)});
    const Direction l = Direction::normalize({-std::sin(tl), 0, std::cos(tl)});
    scene.sun = DirectionalLight{l, Rgb(1.0)};
    RandomStream rng(22, 0);
    const int n = 40000;
    double sum = 0;
    for (int i = 0; i < n; ++i)
        sum += trace_path(Ray{{0, 0, 0.05}, -v}, scene, 1, rng).r;
    const Direction h = Direction::normalize(v + l);
    const double lv = oracle::beckmann_lambda(tv, 0.3), ll = oracle::beckmann_lambda(tl, 0.3);
    const double reference = oracle::beckmann_ndf(h.z, 0.3) / (4 * v.z) / (1 + lv + ll);
    CHECK(std::fabs(sum / n / reference - 1.0) < 0.03);
}

TEST_CASE("PFM encoding") {
    RadianceImage one(1, 1);
    one.at(0, 0) = Rgb(1.0);
    const std::string bytes = encode_pfm(one);
    const std::string header = "PF\n1 1\n-1.0\n";
    REQUIRE(bytes.size() == header.size() + 12);
    CHECK(bytes.substr(0, header.size()) == header);
    for (int i = 0; i < 3; ++i) {
        float f = 0;
        std::memcpy(&f, bytes.data() + header.size() + 4 * i, 4);
        CHECK(f == 1.0f);
    }
    const unsigned char one_le[4] = {0x00, 0x00, 0x80, 0x3f};
    CHECK(std::memcmp(bytes.data() + header.size(), one_le, 4) == 0);
}

TEST_CASE("PFM rows are stored bottom-up and round trip exactly") {
    RadianceImage img(3, 2);
    RandomStream rng(4, 4);
    for (auto& p : img.pixels)
        p = Rgb{float(rng.uniform()), float(rng.uniform() * 100), float(rng.uniform() * 1e-3)};
    const std::string bytes = encode_pfm(img);
    float first = 0;
    std::memcpy(&first, bytes.data() + std::string("PF\n3 2\n-1.0\n").size(), 4);
    CHECK(first == float(img.at(0, 1).r));
    const RadianceImage back = decode_pfm(bytes);
    REQUIRE(back.width == 3);
    REQUIRE(back.height == 2);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        CHECK(back.pixels[i].r == img.pixels[i].r);
        CHECK(back.pixels[i].g == img.pixels[i].g);
        CHECK(back.pixels[i].b == img.pixels[i].b);
    }
    const auto path = std::filesystem::temp_directory_path() / "macrofacet_roundtrip.pfm";
    write_image(img, path.string(), ImageFormat::PFM);
    const RadianceImage file = read_pfm(path.string());
    CHECK(encode_pfm(file) == bytes);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(decode_pfm("P6\n1 1\n255\n"), IoError);
    CHECK_THROWS_AS(decode_pfm("PF\n2 2\n-1.0\nabc"), IoError);
}

TEST_CASE("PPM encoding") {
    RadianceImage img(2, 1);
    img.at(1, 0) = Rgb(1.0);
    const std::string bytes = encode_ppm(img);
    const std::string header = "P6\n2 1\n255\n";
    REQUIRE(bytes.size() == header.size() + 6);
    CHECK(bytes.substr(0, header.size()) == header);
    CHECK(bytes[header.size()] == 0);
    CHECK(bytes[header.size() + 1] == 0);
    CHECK(bytes[header.size() + 2] == 0);
    CHECK(static_cast<unsigned char>(bytes[header.size() + 3]) == 255);
    CHECK_THROWS_AS(write_image(img, "/nonexistent/dir/out.ppm", ImageFormat::PPM), IoError);
    CHECK(image_format_from_string("ppm") == ImageFormat::PPM);
    CHECK_THROWS_AS(image_format_from_string("png"), ParameterDomainError);
}

TEST_CASE("scene hash is FNV-1a") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
}
