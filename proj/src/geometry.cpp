// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#include <macrofacet/geometry.hpp>

#include <macrofacet/error.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace macrofacet {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double box_distance(const Box& b, const Point& p) {
    const Vec3 q{std::fabs(p.x - b.center.x) - b.half_extents.x, std::fabs(p.y - b.center.y) - b.half_extents.y,
                 std::fabs(p.z - b.center.z) - b.half_extents.z};
    const Vec3 outside{std::max(q.x, 0.0), std::max(q.y, 0.0), std::max(q.z, 0.0)};
    return outside.length() + std::min(std::max({q.x, q.y, q.z}), 0.0);
}

Direction box_normal(const Box& b, const Point& p) {
    const Vec3 d = p - b.center;
    const Vec3 q{std::fabs(d.x) - b.half_extents.x, std::fabs(d.y) - b.half_extents.y,
                 std::fabs(d.z) - b.half_extents.z};
    const Vec3 sign{d.x < 0 ? -1.0 : 1.0, d.y < 0 ? -1.0 : 1.0, d.z < 0 ? -1.0 : 1.0};
    if (q.x > 0 || q.y > 0 || q.z > 0) {
        const Vec3 g{sign.x * std::max(q.x, 0.0), sign.y * std::max(q.y, 0.0), sign.z * std::max(q.z, 0.0)};
        return Direction::normalize(g);
    }
    if (q.x >= q.y && q.x >= q.z)
        return Direction::unchecked({sign.x, 0, 0});
    if (q.y >= q.z)
        return Direction::unchecked({0, sign.y, 0});
    return Direction::unchecked({0, 0, sign.z});
}

void check_shape(const SdfPrimitive::Shape& shape) {
    std::visit(Overloaded{[](const Plane& p) {
                              if (!std::isfinite(p.z0))
                                  throw ParameterDomainError("plane z0 must be finite");
                          },
                          [](const Sphere& s) {
                              if (!(s.radius > 0.0) || !std::isfinite(s.radius))
                                  throw ParameterDomainError("sphere radius must be positive");
                          },
                          [](const Box& b) {
                              if (!(b.half_extents.x > 0 && b.half_extents.y > 0 && b.half_extents.z > 0))
                                  throw ParameterDomainError("box half extents must be positive");
                          }},
               shape);
}

}  // namespace

SdfPrimitive::SdfPrimitive(Shape shape) : shape_(shape) { check_shape(shape_); }

double SdfPrimitive::distance(const Point& p) const {
    return std::visit(Overloaded{[&](const Plane& s) { return p.z - s.z0; },
                                 [&](const Sphere& s) { return (p - s.center).length() - s.radius; },
                                 [&](const Box& s) { return box_distance(s, p); }},
                      shape_);
}

Direction SdfPrimitive::normal(const Point& p) const {
    return std::visit(Overloaded{[&](const Plane&) { return Direction(); },
                                 [&](const Sphere& s) {
                                     const Vec3 d = p - s.center;
                                     const double len = d.length();
                                     return len > 0.0 ? Direction::unchecked(d / len) : Direction();
                                 },
                                 [&](const Box& s) { return box_normal(s, p); }},
                      shape_);
}

std::optional<Direction> SdfPrimitive::constant_normal() const {
    if (std::holds_alternative<Plane>(shape_))
        return Direction();
    return std::nullopt;
}

std::optional<double> SdfPrimitive::plane_crossing(const Ray& ray, double level) const {
    const auto* plane = std::get_if<Plane>(&shape_);
    if (!plane || ray.dir.z == 0.0)
        return std::nullopt;
    return (plane->z0 + level - ray.origin.z) / ray.dir.z;
}

std::string SdfPrimitive::describe() const {
    std::ostringstream out;
    std::visit(Overloaded{[&](const Plane& s) { out << "plane(z0=" << s.z0 << ")"; },
                          [&](const Sphere& s) {
                              out << "sphere(center=" << s.center.x << "," << s.center.y << "," << s.center.z
                                  << " radius=" << s.radius << ")";
                          },
                          [&](const Box& s) {
                              out << "box(center=" << s.center.x << "," << s.center.y << "," << s.center.z
                                  << " half=" << s.half_extents.x << "," << s.half_extents.y << ","
                                  << s.half_extents.z << ")";
                          }},
               shape_);
    return out.str();
}

namespace {

// Lowest point of a sphere or box above a plane, as a gap.
double gap_to_plane(const Plane& p, const SdfPrimitive::Shape& other) {
    return std::visit(Overloaded{[&](const Plane&) { return 0.0; },
                                 [&](const Sphere& s) { return std::max(0.0, s.center.z - s.radius - p.z0); },
                                 [&](const Box& b) {
                                     return std::max(0.0, b.center.z - b.half_extents.z - p.z0);
                                 }},
                      other);
}

double box_box_gap(const Box& a, const Box& b) {
    const Vec3 d{std::max(0.0, std::fabs(a.center.x - b.center.x) - a.half_extents.x - b.half_extents.x),
                 std::max(0.0, std::fabs(a.center.y - b.center.y) - a.half_extents.y - b.half_extents.y),
                 std::max(0.0, std::fabs(a.center.z - b.center.z) - a.half_extents.z - b.half_extents.z)};
    return d.length();
}

}  // namespace

double solid_separation(const SdfPrimitive& a, const SdfPrimitive& b) {
    const auto& sa = a.shape();
    const auto& sb = b.shape();
    if (const auto* p = std::get_if<Plane>(&sa))
        return gap_to_plane(*p, sb);
    if (const auto* p = std::get_if<Plane>(&sb))
        return gap_to_plane(*p, sa);
    if (const auto* s = std::get_if<Sphere>(&sa))
        return std::max(0.0, b.distance(s->center) - s->radius);
    if (const auto* s = std::get_if<Sphere>(&sb))
        return std::max(0.0, a.distance(s->center) - s->radius);
    return box_box_gap(std::get<Box>(sa), std::get<Box>(sb));
}

}  // namespace macrofacet
