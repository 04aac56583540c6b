// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <macrofacet/vec.hpp>

#include <functional>
#include <vector>

namespace macrofacet {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1] (Newton on P_n, cached per n).
const QuadratureRule& gauss_legendre(int n);

// Composite Gauss-Legendre over [a, b] with `panels` equal panels.
double integrate_interval(const std::function<double(double)>& f, double a, double b, int panels, int order = 16);

// Integral of f over the unit sphere. The polar axis is `axis`; each
// hemisphere is integrated separately in theta (composite Gauss-Legendre),
// so integrands with a kink on the great circle orthogonal to `axis` (clamped
// cosines) converge spectrally. phi uses the periodic trapezoidal rule.
double integrate_sphere(const std::function<double(const Direction&)>& f, const Direction& axis,
                        int theta_panels_per_hemisphere = 16, int n_phi = 128);

}  // namespace macrofacet
