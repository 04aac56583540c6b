// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <limits>

namespace macrofacet {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInvPi = 0.31830988618379067154;
inline constexpr double kSqrtPi = 1.77245385090551602730;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Vec3 {
    double x = 0, y = 0, z = 0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr bool operator==(const Vec3&) const = default;

    double length() const { return std::sqrt(x * x + y * y + z * z); }
    constexpr double length_squared() const { return x * x + y * y + z * z; }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

using Point = Vec3;

// Unit vector. Construct through normalize() or unchecked() when the caller
// already guarantees unit length.
struct Direction : Vec3 {
    constexpr Direction() : Vec3(0, 0, 1) {}

    // Throws ParameterDomainError for zero or non-finite input.
    static Direction normalize(const Vec3& v);
    static constexpr Direction unchecked(const Vec3& v) { return Direction(v); }

    using Vec3::operator-;
    constexpr Direction operator-() const { return Direction(Vec3(-x, -y, -z)); }

  private:
    constexpr explicit Direction(const Vec3& v) : Vec3(v) {}
};

// Polar angle from +z and azimuth in [0, 2pi). At the poles phi is 0.
struct SphericalAngles {
    double theta = 0;
    double phi = 0;

    Direction to_direction() const;
    static SphericalAngles from_direction(const Direction& d);
};

struct Frame {
    Direction tangent;
    Direction bitangent;
    Direction normal;

    Vec3 to_local(const Vec3& v) const { return {dot(v, tangent), dot(v, bitangent), dot(v, normal)}; }
    Vec3 to_world(const Vec3& v) const { return tangent * v.x + bitangent * v.y + normal * v.z; }
    Direction to_local(const Direction& d) const { return Direction::unchecked(to_local(static_cast<const Vec3&>(d))); }
    Direction to_world(const Direction& d) const { return Direction::unchecked(to_world(static_cast<const Vec3&>(d))); }
};

// Orthonormal right-handed frame around n (Duff et al. branchless basis).
Frame build_frame(const Direction& n);

struct Ray {
    Point origin;
    Direction dir;
    double tmax = kInfinity;

    Point at(double t) const { return origin + dir * t; }
};

// Reflect v about the unit vector n: 2 (v.n) n - v.
inline Vec3 reflect(const Vec3& v, const Vec3& n) { return n * (2.0 * dot(v, n)) - v; }

}  // namespace macrofacet
