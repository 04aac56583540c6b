// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#include <macrofacet/scene.hpp>

#include <macrofacet/error.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace macrofacet {

void Camera::validate() const {
    if (width <= 0 || height <= 0)
        throw ParameterDomainError("camera resolution must be positive");
    if (!(vfov_deg > 0.0 && vfov_deg < 180.0))
        throw ParameterDomainError("camera vfov must lie in (0, 180) degrees");
    const Vec3 forward = look_at - position;
    if (forward.length() == 0.0)
        throw ParameterDomainError("camera position and look_at coincide");
    if (cross(forward, up).length() <= 1e-12 * forward.length() * up.length())
        throw ParameterDomainError("camera up vector is parallel to the view direction");
}

Ray Camera::generate(double px, double py) const {
    const Direction forward = Direction::normalize(look_at - position);
    const Direction right = Direction::normalize(cross(forward, up));
    const Vec3 true_up = cross(right, forward);
    const double tan_half = std::tan(0.5 * vfov_deg * kPi / 180.0);
    const double aspect = static_cast<double>(width) / height;
    const double sx = (2.0 * px / width - 1.0) * tan_half * aspect;
    const double sy = (1.0 - 2.0 * py / height) * tan_half;
    return Ray{position, Direction::normalize(forward + right * sx + true_up * sy)};
}

Rgb Environment::eval(const Direction& d) const {
    if (!map)
        return constant;
    double phi = std::atan2(d.y, d.x);
    if (phi < 0.0)
        phi += 2.0 * kPi;
    const double theta = std::acos(std::clamp(d.z, -1.0, 1.0));
    const int x = std::clamp(static_cast<int>(phi / (2.0 * kPi) * map->width), 0, map->width - 1);
    const int y = std::clamp(static_cast<int>(theta / kPi * map->height), 0, map->height - 1);
    return map->at(x, y);
}

void ShellScene::validate() const {
    camera.validate();
    if (!(max_distance > 0.0))
        throw ParameterDomainError("max_distance must be positive");
    for (const ShellBinding& s : shells)
        s.medium.validate();
    for (std::size_t i = 0; i < shells.size(); ++i) {
        for (std::size_t j = i + 1; j < shells.size(); ++j) {
            const double gap = solid_separation(shells[i].primitive, shells[j].primitive);
            const double need = shells[i].medium.shell_half_width() + shells[j].medium.shell_half_width();
            if (!(gap > need))
                throw ParameterDomainError("shells '" + shells[i].name + "' and '" + shells[j].name +
                                           "' overlap: separation " + std::to_string(gap) + " <= " +
                                           std::to_string(need));
        }
    }
    if (sun && !sun->irradiance.is_finite_nonnegative())
        throw ParameterDomainError("sun irradiance must be finite and non-negative");
}

namespace {

constexpr int kMaxTraceSteps = 1000000;

std::vector<double> level_crossings(const Ray& ray, const SdfPrimitive& prim, const std::array<double, 3>& levels,
                                    double t_end, double min_step) {
    std::vector<double> out;
    if (prim.constant_normal()) {
        for (double level : levels) {
            const auto t = prim.plane_crossing(ray, level);
            if (t && *t > 0.0 && *t < t_end)
                out.push_back(*t);
        }
        std::sort(out.begin(), out.end());
        return out;
    }
    auto f = [&](double t) { return prim.distance(ray.at(t)); };
    double t = 0.0;
    double f0 = f(t);
    for (int step = 0;; ++step) {
        if (step >= kMaxTraceSteps)
            throw NumericFailure("shell_intersect: sphere tracing exceeded " + std::to_string(kMaxTraceSteps) +
                                 " steps against " + prim.describe());
        double safe = kInfinity;
        for (double level : levels)
            safe = std::min(safe, std::fabs(f0 - level));
        const double t1 = std::min(t + std::max(safe, min_step), t_end);
        const double f1 = f(t1);
        for (double level : levels) {
            const bool above0 = f0 > level;
            if (above0 == (f1 > level))
                continue;
            double lo = t, hi = t1;
            for (int k = 0; k < 100 && hi - lo > 1e-13 * (1.0 + hi); ++k) {
                const double mid = 0.5 * (lo + hi);
                if ((f(mid) > level) == above0)
                    lo = mid;
                else
                    hi = mid;
            }
            out.push_back(0.5 * (lo + hi));
        }
        t = t1;
        f0 = f1;
        if (t >= t_end)
            break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<RayInterval> shell_intersect(const Ray& ray, const ShellScene& scene) {
    std::vector<RayInterval> out;
    const double t_end = std::min(ray.tmax, scene.max_distance);
    if (!(t_end > 0.0))
        return out;
    for (std::size_t i = 0; i < scene.shells.size(); ++i) {
        const SdfPrimitive& prim = scene.shells[i].primitive;
        const double s = scene.shells[i].medium.sigma;
        const std::array<double, 3> levels{3.0 * s, -3.0 * s, -6.0 * s};
        std::vector<double> cuts = level_crossings(ray, prim, levels, t_end, 1e-4 * s);
        cuts.insert(cuts.begin(), 0.0);
        cuts.push_back(t_end);
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double a = cuts[k], b = cuts[k + 1];
            if (!(b > a))
                continue;
            const double f = prim.distance(ray.at(0.5 * (a + b)));
            if (f > levels[0])
                continue;
            const ShellRegion region =
                f >= levels[1] ? ShellRegion::Shell : (f >= levels[2] ? ShellRegion::Deep : ShellRegion::Cap);
            if (!out.empty() && out.back().shell == i && out.back().region == region && out.back().t_exit == a)
                out.back().t_exit = b;
            else
                out.push_back({a, b, i, region});
        }
    }
    std::sort(out.begin(), out.end(), [](const RayInterval& x, const RayInterval& y) { return x.t_enter < y.t_enter; });
    return out;
}

}  // namespace macrofacet
