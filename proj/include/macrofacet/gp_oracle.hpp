// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <macrofacet/image.hpp>
#include <macrofacet/ndf.hpp>
#include <macrofacet/random.hpp>
#include <macrofacet/vec.hpp>

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

namespace macrofacet {

enum class GpMean { Planar, ConstantZero };

// Periodic synthesis grid. A zero spacing component means l/8 on that axis.
struct GridSpec {
    int nx = 64;
    int ny = 64;
    int nz = 64;
    Vec3 spacing{0, 0, 0};

    // n nodes per axis at spacing l/cells (extent 8 l for n = 64, cells = 8).
    static GridSpec for_kernel(const KernelParams& k, int n = 64, int cells = 8);
    // Fills zero spacings and checks extent >= 8 l and spacing <= l/4 per
    // axis and at most 192 nodes per axis. Throws ConfigError.
    GridSpec resolved(const KernelParams& k) const;
    Vec3 extent() const { return {nx * spacing.x, ny * spacing.y, nz * spacing.z}; }
};

// One sampled field f = mean + noise on a periodic grid. Values between nodes
// are trilinear; gradients are trilinear interpolations of node central
// differences. The grid is centred on the origin and wraps on every axis.
class GpRealization {
  public:
    GpRealization(const KernelParams& kernel, GpMean mean, const GridSpec& grid, std::vector<double> noise);

    double value(const Point& p) const;
    double noise(const Point& p) const;
    Vec3 gradient(const Point& p) const;
    double node(int i, int j, int k) const;

    double max_abs_noise() const { return max_abs_noise_; }
    const KernelParams& kernel() const { return kernel_; }
    const GridSpec& grid() const { return grid_; }
    GpMean mean() const { return mean_; }

  private:
    std::size_t index(int i, int j, int k) const;

    KernelParams kernel_;
    GpMean mean_;
    GridSpec grid_;
    Point origin_;
    std::vector<double> noise_;
    double max_abs_noise_ = 0;
};

// Circulant-embedding synthesis: the periodised SE covariance is
// diagonalised by the 3D DFT (FFTW); one complex transform yields two
// independent realizations (real and imaginary parts). Negative eigenvalues
// of the periodised kernel are clamped to zero.
class GpSynthesizer {
  public:
    GpSynthesizer(const KernelParams& kernel, const GridSpec& grid);
    ~GpSynthesizer();
    GpSynthesizer(const GpSynthesizer&) = delete;
    GpSynthesizer& operator=(const GpSynthesizer&) = delete;

    std::pair<GpRealization, GpRealization> draw_pair(GpMean mean, RandomStream& rng) const;

    const GridSpec& grid() const { return grid_; }
    // Sum of clamped negative eigenvalues relative to the total.
    double clamped_fraction() const { return clamped_fraction_; }

  private:
    struct Plan;
    KernelParams kernel_;
    GridSpec grid_;
    std::vector<double> amplitude_;
    double clamped_fraction_ = 0;
    std::unique_ptr<Plan> plan_;
};

GpRealization realize_gp(const KernelParams& kernel, GpMean mean, const GridSpec& grid, RandomStream& rng);

struct FirstHit {
    bool hit = false;
    Point position;
    Direction normal;
    double travel = 0;
};

// Fixed-step march (step min(l)/8) for a sign change of the interpolated
// field, then 30 bisection steps. Honours ray.tmax; for the planar mean the
// march stops once |z| exceeds the realization's noise bound in the
// direction of travel.
FirstHit first_hit(const GpRealization& r, const Ray& ray);

struct OracleSettings {
    int realizations = 1024;
    int rays_per_realization = 256;
    std::uint64_t seed = 0;
    int grid_n = 64;
    // Grid spacing is l / cells_per_length on every axis.
    int cells_per_length = 8;
    int threads = 0;

    void validate() const;  // M in [1, 4096], grid_n <= 192, spacing <= l/4
};

struct TransmittanceRow {
    double t = 0;
    double tr = 1;
    double std_error = 0;
    double closed_form = 1;
};

// Fraction of rays started at height z0 (random x, y; only where f > 0)
// whose first crossing lies beyond t. Standard errors treat realizations as
// clusters. closed_form is the generalized-macrofacet planar transmittance.
std::vector<TransmittanceRow> empirical_transmittance(const KernelParams& kernel, double z0,
                                                      const SphericalAngles& w, const std::vector<double>& t_grid,
                                                      const OracleSettings& settings);

// Histogram over the full sphere, theta in [0, pi] and phi in [0, 2 pi)
// split into equal-angle bins. mass[i * n_phi + j] is a probability.
struct SphereHistogram {
    int n_theta = 8;
    int n_phi = 8;
    std::vector<double> mass;
    std::vector<double> std_error;
    long long samples = 0;

    double solid_angle(int i) const;
    double density(int i, int j) const { return mass[static_cast<std::size_t>(i) * n_phi + j] / solid_angle(i); }
    double total() const;
    static int theta_bin(double theta, int n_theta);
    static int phi_bin(double phi, int n_phi);
};

// Normals at first hits of rays arriving along wo from above the surface.
// Each hit counts once: the crossing rate along a ray already carries the
// <-wo, m> weight, so raw counts estimate the vNDF.
// Returns one histogram per entry of `wos`, all on shared realizations.
std::vector<SphereHistogram> empirical_vndf(const KernelParams& kernel, const std::vector<Direction>& wos,
                                            int n_theta, int n_phi, const OracleSettings& settings);

// Bin masses of vndf_eval for the generalized NDF of `kernel`.
SphereHistogram analytic_vndf_histogram(const KernelParams& kernel, const Direction& wo, int n_theta, int n_phi);

double l1_distance(const SphereHistogram& a, const SphereHistogram& b);

struct EnsembleScene {
    int width = 32;
    int height = 32;
    int spp = 4;
    Point camera_position{0, 0, 4};
    Point look_at{0, 0, 0};
    Vec3 up{0, 1, 0};
    double vfov_deg = 30;
    double environment = 1.0;
    bool unit_fresnel = true;
    Rgb fresnel_eta{0.2, 0.92, 1.1};
    Rgb fresnel_k{3.9, 2.45, 2.14};
    int max_bounces = 16;

    void validate() const;  // at most 64 x 64 pixels
};

struct EnsembleResult {
    RadianceImage mean;
    RadianceImage std_error;
    double mean_pixel = 0;
    double mean_pixel_std_error = 0;
};

// Per-realization mirror-reflection radiance off first-hit normals, averaged
// over realizations. Paths that are still bouncing after max_bounces count
// as zero.
EnsembleResult ensemble_radiance(const KernelParams& kernel, const EnsembleScene& scene,
                                 const OracleSettings& settings);

struct MultiplicativityRow {
    double split = 0;  // travel distance of the split point
    double tr_xy = 0;
    double tr_xz = 0;
    double tr_zy = 0;
    double gap = 0;
    double std_error = 0;
    double closed_form_gap = 0;
};

// Tr(x->y), Tr(x->z), Tr(z->y) on shared realizations for rays from height
// z0 along w with total length `length`. Each leg is conditioned on the
// field being positive at its start. gap = |Tr_xy - Tr_xz Tr_zy| with a
// jackknife standard error over realizations. closed_form_gap is the same
// gap for the generalized macrofacet medium.
std::vector<MultiplicativityRow> multiplicativity_probe(const KernelParams& kernel, double z0,
                                                        const SphericalAngles& w, double length,
                                                        const std::vector<double>& splits,
                                                        const OracleSettings& settings);

}  // namespace macrofacet
