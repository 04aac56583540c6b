// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <macrofacet/error.hpp>
#include <macrofacet/geometry.hpp>
#include <macrofacet/scene.hpp>

#include "oracles.hpp"

#include <algorithm>
#include <cmath>

using namespace macrofacet;

namespace {

Point random_point(RandomStream& rng, double extent) {
    return {extent * (2 * rng.uniform() - 1), extent * (2 * rng.uniform() - 1), extent * (2 * rng.uniform() - 1)};
}

Direction random_direction(RandomStream& rng) {
    const double z = 1 - 2 * rng.uniform();
    const double r = std::sqrt(std::max(0.0, 1 - z * z));
    const double p = 2 * oracle::kPi * rng.uniform();
    return Direction::normalize({r * std::cos(p), r * std::sin(p), z});
}

// Distance to a box by clamping to the closest point outside and by the
// nearest face inside.
double box_oracle(const Point& p, const Box& b) {
    const double lo[3] = {b.center.x - b.half_extents.x, b.center.y - b.half_extents.y, b.center.z - b.half_extents.z};
    const double hi[3] = {b.center.x + b.half_extents.x, b.center.y + b.half_extents.y, b.center.z + b.half_extents.z};
    const double q[3] = {p.x, p.y, p.z};
    bool inside = true;
    double d2 = 0, face = kInfinity;
    for (int i = 0; i < 3; ++i) {
        const double c = std::clamp(q[i], lo[i], hi[i]);
        d2 += (q[i] - c) * (q[i] - c);
        inside = inside && q[i] > lo[i] && q[i] < hi[i];
        face = std::min({face, q[i] - lo[i], hi[i] - q[i]});
    }
    return inside ? -face : std::sqrt(d2);
}

MacrofacetMedium medium_with_sigma(double sigma) {
    MacrofacetMedium m;
    m.a3 = RoughnessTriple::isotropic(1.0);
    m.sigma = sigma;
    return m;
}

}  // namespace

TEST_CASE("SDF examples") {
    const SdfPrimitive plane(Plane{1.5});
    CHECK(plane.distance({3, -2, 4}) == doctest::Approx(2.5));
    CHECK(plane.constant_normal().has_value());
    const SdfPrimitive sphere(Sphere{{1, 0, 0}, 2});
    CHECK(sphere.distance({1, 0, 5}) == doctest::Approx(3));
    CHECK(sphere.distance({1, 0, 0}) == doctest::Approx(-2));
    CHECK(sphere.normal({1, 0, 0}).z == 1.0);
    CHECK_FALSE(sphere.constant_normal().has_value());
    const SdfPrimitive box(Box{{0, 0, 0}, {1, 2, 3}});
    CHECK(box.distance({2, 3, 0}) == doctest::Approx(std::sqrt(2.0)));
    CHECK(box.distance({0, 0, 0}) == doctest::Approx(-1));
    CHECK_THROWS_AS(SdfPrimitive(Sphere{{0, 0, 0}, 0}), ParameterDomainError);
    CHECK_THROWS_AS(SdfPrimitive(Box{{0, 0, 0}, {1, -1, 1}}), ParameterDomainError);
    CHECK_THROWS_AS(SdfPrimitive(Plane{kInfinity}), ParameterDomainError);
}

TEST_CASE("SDFs are exact distances with unit gradients") {
    RandomStream rng(1, 2);
    const Box b{{0.3, -0.2, 0.5}, {1.0, 0.4, 2.0}};
    const SdfPrimitive box(b);
    const SdfPrimitive sphere(Sphere{{0.5, 0.5, -0.5}, 1.3});
    for (int i = 0; i < 20000; ++i) {
        const Point p = random_point(rng, 4.0);
        CHECK(std::fabs(box.distance(p) - box_oracle(p, b)) < 1e-12);
        for (const SdfPrimitive* s : {&box, &sphere}) {
            const double h = 1e-6;
            const Vec3 g{(s->distance(p + Vec3{h, 0, 0}) - s->distance(p - Vec3{h, 0, 0})) / (2 * h),
                         (s->distance(p + Vec3{0, h, 0}) - s->distance(p - Vec3{0, h, 0})) / (2 * h),
                         (s->distance(p + Vec3{0, 0, h}) - s->distance(p - Vec3{0, 0, h})) / (2 * h)};
            const double len = g.length();
            // Skip the medial ridges of the box where the gradient jumps.
            if (std::fabs(len - 1.0) > 1e-3)
                continue;
            const Direction n = s->normal(p);
            CHECK(std::fabs(n.x - g.x) < 1e-5);
            CHECK(std::fabs(n.y - g.y) < 1e-5);
            CHECK(std::fabs(n.z - g.z) < 1e-5);
        }
    }
}

TEST_CASE("SDFs are 1-Lipschitz") {
    RandomStream rng(1, 3);
    const SdfPrimitive shapes[] = {SdfPrimitive(Plane{0.2}), SdfPrimitive(Sphere{{0, 0, 0}, 1}),
                                   SdfPrimitive(Box{{0, 0, 0}, {0.5, 1, 1.5}})};
    for (const auto& s : shapes)
        for (int i = 0; i < 5000; ++i) {
            const Point a = random_point(rng, 3), b = random_point(rng, 3);
            CHECK(std::fabs(s.distance(a) - s.distance(b)) <= (a - b).length() + 1e-12);
        }
}

TEST_CASE("plane_crossing") {
    const SdfPrimitive plane(Plane{1.0});
    const Ray down{{0, 0, 5}, -Direction{}};
    CHECK(*plane.plane_crossing(down, 0.0) == doctest::Approx(4.0));
    CHECK(*plane.plane_crossing(down, -3.0) == doctest::Approx(7.0));
    CHECK_FALSE(plane.plane_crossing(Ray{{0, 0, 5}, Direction::normalize({1, 0, 0})}, 0.0).has_value());
    CHECK_FALSE(SdfPrimitive(Sphere{{0, 0, 0}, 1}).plane_crossing(down, 0.0).has_value());
}

TEST_CASE("solid_separation closed forms") {
    const SdfPrimitive a(Sphere{{0, 0, 0}, 1}), b(Sphere{{4, 0, 0}, 0.5});
    CHECK(solid_separation(a, b) == doctest::Approx(2.5));
    CHECK(solid_separation(b, a) == doctest::Approx(2.5));
    CHECK(solid_separation(a, SdfPrimitive(Sphere{{1, 0, 0}, 1})) == 0.0);
    CHECK(solid_separation(SdfPrimitive(Plane{-1}), SdfPrimitive(Sphere{{5, 5, 2}, 1})) == doctest::Approx(2));
    CHECK(solid_separation(SdfPrimitive(Plane{0}), SdfPrimitive(Plane{-10})) == 0.0);
    const SdfPrimitive box1(Box{{0, 0, 0}, {1, 1, 1}}), box2(Box{{4, 5, 1}, {1, 1, 1}});
    CHECK(solid_separation(box1, box2) == doctest::Approx(std::sqrt(4.0 + 9.0)));
    CHECK(solid_separation(SdfPrimitive(Plane{0}), SdfPrimitive(Box{{0, 0, 3}, {1, 1, 1}})) == doctest::Approx(2));
    CHECK(solid_separation(box1, SdfPrimitive(Sphere{{3, 3, 0}, 1})) == doctest::Approx(std::sqrt(8.0) - 1));
}

TEST_CASE("solid_separation is a lower bound on point distances") {
    RandomStream rng(2, 0);
    for (int i = 0; i < 200; ++i) {
        const SdfPrimitive s(Sphere{random_point(rng, 3), 0.2 + rng.uniform()});
        const SdfPrimitive b(Box{random_point(rng, 3), {0.2 + rng.uniform(), 0.2 + rng.uniform(), 0.2 + rng.uniform()}});
        const double gap = solid_separation(s, b);
        // Any pair of points inside both solids is at least gap apart.
        for (int j = 0; j < 200; ++j) {
            const Point p = random_point(rng, 5), q = random_point(rng, 5);
            if (s.distance(p) <= 0 && b.distance(q) <= 0)
                CHECK((p - q).length() >= gap - 1e-12);
        }
        // Witness: the closest point of the sphere solid to the box.
        if (gap > 0) {
            const auto& sph = std::get<Sphere>(s.shape());
            const double d = b.distance(sph.center);
            CHECK(d - sph.radius == doctest::Approx(gap).epsilon(1e-12));
        }
    }
}

TEST_CASE("shell_intersect on a plane") {
    ShellScene scene;
    scene.shells.push_back({"floor", SdfPrimitive(Plane{0}), medium_with_sigma(1.0)});
    const auto iv = shell_intersect(Ray{{0, 0, 10}, -Direction{}}, scene);
    REQUIRE(iv.size() == 3);
    CHECK(iv[0].region == ShellRegion::Shell);
    CHECK(iv[0].t_enter == doctest::Approx(7));
    CHECK(iv[0].t_exit == doctest::Approx(13));
    CHECK(iv[1].region == ShellRegion::Deep);
    CHECK(iv[1].t_enter == doctest::Approx(13));
    CHECK(iv[1].t_exit == doctest::Approx(16));
    CHECK(iv[2].region == ShellRegion::Cap);
    CHECK(iv[2].t_enter == doctest::Approx(16));

    CHECK(shell_intersect(Ray{{0, 0, 10}, Direction{}}, scene).empty());
    const auto clipped = shell_intersect(Ray{{0, 0, 10}, -Direction{}, 9.0}, scene);
    REQUIRE(clipped.size() == 1);
    CHECK(clipped[0].t_exit == doctest::Approx(9));
}

TEST_CASE("shell_intersect on spheres") {
    ShellScene scene;
    scene.shells.push_back({"ball", SdfPrimitive(Sphere{{0, 0, 0}, 1}), medium_with_sigma(0.1)});
    CHECK(shell_intersect(Ray{{-5, 2, 0}, Direction::normalize({1, 0, 0})}, scene).empty());

    // Tangential ray skimming the outer shell surface.
    const double outer = 1.3;
    for (double offset : {outer - 1e-3, outer - 1e-2, 1.25, 0.9, 0.6}) {
        const Ray ray{{-5, offset, 0.0}, Direction::normalize({1, 0, 0})};
        const auto iv = shell_intersect(ray, scene);
        REQUIRE_FALSE(iv.empty());
        const auto hit = oracle::ray_sphere({-5, offset, 0}, {1, 0, 0}, {0, 0, 0}, outer);
        REQUIRE(hit.has_value());
        CHECK(std::fabs(iv.front().t_enter - hit->first) < 1e-4);
        CHECK(std::fabs(iv.back().t_exit - hit->second) < 1e-4);
        const auto inner = oracle::ray_sphere({-5, offset, 0}, {1, 0, 0}, {0, 0, 0}, 0.7);
        if (!inner) {
            CHECK(iv.size() == 1);
            CHECK(iv[0].region == ShellRegion::Shell);
        }
    }
}

TEST_CASE("shell_intersect intervals are sorted, disjoint and classified") {
    ShellScene scene;
    scene.shells.push_back({"ball", SdfPrimitive(Sphere{{0, 0, 1}, 1}), medium_with_sigma(0.05)});
    scene.shells.push_back({"box", SdfPrimitive(Box{{3, 0, 1}, {0.5, 0.5, 0.5}}), medium_with_sigma(0.02)});
    scene.shells.push_back({"floor", SdfPrimitive(Plane{-1}), medium_with_sigma(0.1)});
    CHECK_NOTHROW(scene.validate());
    RandomStream rng(3, 3);
    for (int i = 0; i < 3000; ++i) {
        const Ray ray{random_point(rng, 4) + Vec3{0, 0, 3}, random_direction(rng)};
        const auto iv = shell_intersect(ray, scene);
        double last = 0;
        for (const auto& r : iv) {
            CHECK(r.t_enter >= last - 1e-12);
            CHECK(r.t_exit >= r.t_enter);
            last = r.t_exit;
            const double tm = 0.5 * (r.t_enter + r.t_exit);
            if (r.t_exit - r.t_enter < 1e-6)
                continue;
            const auto& sh = scene.shells[r.shell];
            const double f = sh.primitive.distance(ray.at(tm)) / sh.medium.sigma;
            if (r.region == ShellRegion::Shell)
                CHECK(std::fabs(f) <= 3 + 1e-6);
            else if (r.region == ShellRegion::Deep)
                CHECK((f >= -6 - 1e-6 && f <= -3 + 1e-6));
            else
                CHECK(f <= -6 + 1e-6);
        }
        // Points between intervals are outside every region.
        for (std::size_t k = 0; k + 1 < iv.size(); ++k) {
            if (iv[k + 1].t_enter - iv[k].t_exit < 1e-6)
                continue;
            const Point p = ray.at(0.5 * (iv[k].t_exit + iv[k + 1].t_enter));
            for (const auto& sh : scene.shells)
                CHECK(sh.primitive.distance(p) > 3 * sh.medium.sigma - 1e-6);
        }
    }
}

TEST_CASE("ShellScene validation") {
    ShellScene scene;
    scene.shells.push_back({"a", SdfPrimitive(Sphere{{0, 0, 0}, 1}), medium_with_sigma(0.1)});
    scene.shells.push_back({"b", SdfPrimitive(Sphere{{2.8, 0, 0}, 1}), medium_with_sigma(0.1)});
    CHECK_NOTHROW(scene.validate());
    scene.shells[1].primitive = SdfPrimitive(Sphere{{2.8, 0, 0}, 1.25});
    CHECK_THROWS_AS(scene.validate(), ParameterDomainError);
    scene.shells[1].primitive = SdfPrimitive(Plane{-3});
    CHECK_NOTHROW(scene.validate());
    scene.shells.push_back({"c", SdfPrimitive(Plane{-20}), medium_with_sigma(0.1)});
    CHECK_THROWS_AS(scene.validate(), ParameterDomainError);

    ShellScene bad;
    bad.max_distance = 0;
    CHECK_THROWS_AS(bad.validate(), ParameterDomainError);
    ShellScene medium;
    medium.shells.push_back({"a", SdfPrimitive(Plane{0}), medium_with_sigma(-1)});
    CHECK_THROWS_AS(medium.validate(), ParameterDomainError);
}

TEST_CASE("camera rays") {
    Camera cam;
    cam.position = {0, -5, 0};
    cam.look_at = {0, 0, 0};
    cam.up = {0, 0, 1};
    cam.width = 64;
    cam.height = 32;
    cam.vfov_deg = 90;
    CHECK_NOTHROW(cam.validate());
    const Ray centre = cam.generate(32, 16);
    CHECK(centre.dir.y == doctest::Approx(1.0));
    const Ray top = cam.generate(32, 0);
    CHECK(top.dir.z == doctest::Approx(std::sqrt(0.5)));
    const Ray left = cam.generate(0, 16);
    CHECK(left.dir.x == doctest::Approx(-2 / std::sqrt(5.0)));
    cam.up = {0, 1, 0};
    CHECK_THROWS_AS(cam.validate(), ParameterDomainError);
    cam.up = {0, 0, 1};
    cam.vfov_deg = 180;
    CHECK_THROWS_AS(cam.validate(), ParameterDomainError);
    cam.vfov_deg = 40;
    cam.width = 0;
    CHECK_THROWS_AS(cam.validate(), ParameterDomainError);
}

TEST_CASE("environment lookup") {
    Environment env;
    env.constant = Rgb{0.5, 0.25, 1.0};
    CHECK(env.eval(Direction{}).g == 0.25);
    RadianceImage map(4, 2);
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 4; ++x)
            map.at(x, y) = Rgb(double(10 * y + x));
    env.map = map;
    CHECK(env.eval(Direction::normalize({1, 0.01, 0.5})).r == 0.0);
    CHECK(env.eval(Direction::normalize({-1, -0.01, -0.5})).r == 12.0);
    CHECK(env.eval(Direction::normalize({0.01, -1, 0.2})).r == 3.0);
}
