// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#include <macrofacet/vec.hpp>

#include <algorithm>

#include <macrofacet/error.hpp>

#include <cmath>

namespace macrofacet {

Direction Direction::normalize(const Vec3& v) {
    const double len = v.length();
    if (!(len > 0.0) || !std::isfinite(len))
        throw ParameterDomainError("cannot normalize a zero or non-finite vector");
    return Direction(v / len);
}

Direction SphericalAngles::to_direction() const {
    const double s = std::sin(theta);
    return Direction::unchecked({s * std::cos(phi), s * std::sin(phi), std::cos(theta)});
}

SphericalAngles SphericalAngles::from_direction(const Direction& d) {
    SphericalAngles a;
    a.theta = std::acos(std::clamp(d.z, -1.0, 1.0));
    if (d.x == 0.0 && d.y == 0.0) {
        a.phi = 0.0;
    } else {
        a.phi = std::atan2(d.y, d.x);
        if (a.phi < 0.0)
            a.phi += 2.0 * kPi;
        if (a.phi >= 2.0 * kPi)
            a.phi = 0.0;
    }
    return a;
}

Frame build_frame(const Direction& n) {
    const double sign = std::copysign(1.0, n.z);
    const double a = -1.0 / (sign + n.z);
    const double b = n.x * n.y * a;
    Frame f;
    f.tangent = Direction::unchecked({1.0 + sign * n.x * n.x * a, sign * b, -sign * n.x});
    f.bitangent = Direction::unchecked({b, sign + n.y * n.y * a, -n.y});
    f.normal = n;
    return f;
}

}  // namespace macrofacet
