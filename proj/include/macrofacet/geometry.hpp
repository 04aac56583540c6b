// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <macrofacet/vec.hpp>

#include <optional>
#include <string>
#include <variant>

namespace macrofacet {

// f = z - z0; the solid is the half space below.
struct Plane {
    double z0 = 0;
};

struct Sphere {
    Point center;
    double radius = 1;
};

// Axis-aligned box.
struct Box {
    Point center;
    Vec3 half_extents{1, 1, 1};
};

// Base surface of a shell. Every shape has an exact signed distance (so
// |grad f| = 1 almost everywhere and f is 1-Lipschitz along any ray).
class SdfPrimitive {
  public:
    using Shape = std::variant<Plane, Sphere, Box>;

    explicit SdfPrimitive(Shape shape);

    double distance(const Point& p) const;

    // Unit gradient of the distance. Falls back to +z where the gradient is
    // undefined (sphere centre).
    Direction normal(const Point& p) const;

    // Set when the gradient does not depend on position (planes).
    std::optional<Direction> constant_normal() const;

    // Solution of f(o + t d) = level for planes; empty for other shapes or
    // rays parallel to the plane.
    std::optional<double> plane_crossing(const Ray& ray, double level) const;

    const Shape& shape() const { return shape_; }
    std::string describe() const;

  private:
    Shape shape_;
};

// Euclidean gap between the solids {f_a <= 0} and {f_b <= 0}; 0 when they
// touch or overlap. Two planes always overlap.
double solid_separation(const SdfPrimitive& a, const SdfPrimitive& b);

}  // namespace macrofacet
