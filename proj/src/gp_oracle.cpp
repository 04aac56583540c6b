// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#include <macrofacet/gp_oracle.hpp>

#include <macrofacet/error.hpp>
#include <macrofacet/medium.hpp>
#include <macrofacet/parallel.hpp>
#include <macrofacet/quadrature.hpp>
#include <macrofacet/scene.hpp>

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

namespace macrofacet {

namespace {

constexpr int kMaxNodesPerAxis = 192;
constexpr int kMaxRealizations = 4096;

int wrap(int i, int n) {
    const int r = i % n;
    return r < 0 ? r + n : r;
}

double min_length(const KernelParams& k) { return std::min({k.lx, k.ly, k.lz}); }

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

GridSpec GridSpec::for_kernel(const KernelParams& k, int n, int cells) {
    GridSpec g;
    g.nx = g.ny = g.nz = n;
    g.spacing = {k.lx / cells, k.ly / cells, k.lz / cells};
    return g;
}

GridSpec GridSpec::resolved(const KernelParams& k) const {
    k.validate();
    if (!std::isfinite(k.lz))
        throw ConfigError("GP synthesis needs a finite lz");
    GridSpec g = *this;
    const double l[3] = {k.lx, k.ly, k.lz};
    double* h[3] = {&g.spacing.x, &g.spacing.y, &g.spacing.z};
    const int n[3] = {g.nx, g.ny, g.nz};
    const char* axis = "xyz";
    for (int a = 0; a < 3; ++a) {
        if (*h[a] == 0.0)
            *h[a] = l[a] / 8.0;
        if (n[a] < 4 || n[a] > kMaxNodesPerAxis)
            throw ConfigError(std::string("grid nodes on ") + axis[a] + " must lie in [4, 192], got " +
                              std::to_string(n[a]));
        if (!(*h[a] > 0.0) || *h[a] > l[a] / 4.0 * (1.0 + 1e-12))
            throw ConfigError(std::string("grid spacing on ") + axis[a] + " must be positive and <= l/4");
        if (n[a] * *h[a] < 8.0 * l[a] * (1.0 - 1e-12))
            throw ConfigError(std::string("grid extent on ") + axis[a] + " is " + std::to_string(n[a] * *h[a]) +
                              ", below 8 l = " + std::to_string(8.0 * l[a]));
    }
    return g;
}

// --- realization ---------------------------------------------------------------

GpRealization::GpRealization(const KernelParams& kernel, GpMean mean, const GridSpec& grid, std::vector<double> noise)
    : kernel_(kernel), mean_(mean), grid_(grid), noise_(std::move(noise)) {
    if (noise_.size() != static_cast<std::size_t>(grid_.nx) * grid_.ny * grid_.nz)
        throw ParameterDomainError("GpRealization: noise size does not match the grid");
    const Vec3 e = grid_.extent();
    origin_ = e * -0.5;
    for (double v : noise_)
        max_abs_noise_ = std::max(max_abs_noise_, std::fabs(v));
}

std::size_t GpRealization::index(int i, int j, int k) const {
    return (static_cast<std::size_t>(wrap(i, grid_.nx)) * grid_.ny + wrap(j, grid_.ny)) * grid_.nz + wrap(k, grid_.nz);
}

double GpRealization::node(int i, int j, int k) const { return noise_[index(i, j, k)]; }

namespace {

struct Cell {
    int i, j, k;
    double fx, fy, fz;
};

Cell locate(const Point& p, const Point& origin, const Vec3& h) {
    const double gx = (p.x - origin.x) / h.x;
    const double gy = (p.y - origin.y) / h.y;
    const double gz = (p.z - origin.z) / h.z;
    const double ix = std::floor(gx), iy = std::floor(gy), iz = std::floor(gz);
    return {static_cast<int>(ix), static_cast<int>(iy), static_cast<int>(iz), gx - ix, gy - iy, gz - iz};
}

template <class F>
double trilinear(const Cell& c, F&& at) {
    const double c00 = at(c.i, c.j, c.k) * (1 - c.fz) + at(c.i, c.j, c.k + 1) * c.fz;
    const double c01 = at(c.i, c.j + 1, c.k) * (1 - c.fz) + at(c.i, c.j + 1, c.k + 1) * c.fz;
    const double c10 = at(c.i + 1, c.j, c.k) * (1 - c.fz) + at(c.i + 1, c.j, c.k + 1) * c.fz;
    const double c11 = at(c.i + 1, c.j + 1, c.k) * (1 - c.fz) + at(c.i + 1, c.j + 1, c.k + 1) * c.fz;
    const double c0 = c00 * (1 - c.fy) + c01 * c.fy;
    const double c1 = c10 * (1 - c.fy) + c11 * c.fy;
    return c0 * (1 - c.fx) + c1 * c.fx;
}

}  // namespace

double GpRealization::noise(const Point& p) const {
    const Cell c = locate(p, origin_, grid_.spacing);
    return trilinear(c, [&](int i, int j, int k) { return node(i, j, k); });
}

double GpRealization::value(const Point& p) const {
    return noise(p) + (mean_ == GpMean::Planar ? p.z : 0.0);
}

Vec3 GpRealization::gradient(const Point& p) const {
    const Cell c = locate(p, origin_, grid_.spacing);
    const Vec3& h = grid_.spacing;
    const double gx = trilinear(c, [&](int i, int j, int k) { return (node(i + 1, j, k) - node(i - 1, j, k)) / (2 * h.x); });
    const double gy = trilinear(c, [&](int i, int j, int k) { return (node(i, j + 1, k) - node(i, j - 1, k)) / (2 * h.y); });
    const double gz = trilinear(c, [&](int i, int j, int k) { return (node(i, j, k + 1) - node(i, j, k - 1)) / (2 * h.z); });
    return {gx, gy, gz + (mean_ == GpMean::Planar ? 1.0 : 0.0)};
}

// --- synthesis ------------------------------------------------------------------

struct GpSynthesizer::Plan {
    fftw_plan plan = nullptr;
    ~Plan() {
        if (plan) {
            std::lock_guard lock(fftw_planner_mutex());
            fftw_destroy_plan(plan);
        }
    }
};

namespace {

struct FftwBuffer {
    fftw_complex* data;
    explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
        if (!data)
            throw NumericFailure("FFTW allocation failed");
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

}  // namespace

GpSynthesizer::GpSynthesizer(const KernelParams& kernel, const GridSpec& grid)
    : kernel_(kernel), grid_(grid.resolved(kernel)), plan_(std::make_unique<Plan>()) {
    const int nx = grid_.nx, ny = grid_.ny, nz = grid_.nz;
    const std::size_t total = static_cast<std::size_t>(nx) * ny * nz;
    FftwBuffer buf(total);
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan_->plan = fftw_plan_dft_3d(nx, ny, nz, buf.data, buf.data, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    if (!plan_->plan)
        throw NumericFailure("FFTW could not create a plan");

    // Eigenvalues of the circulant covariance: forward DFT of the min-image
    // periodised kernel. The kernel is even, so the DFT is real.
    const double s2 = kernel_.sigma * kernel_.sigma;
    auto lag = [](int i, int n, double h) { return h * std::min(i, n - i); };
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            for (int k = 0; k < nz; ++k) {
                const double dx = lag(i, nx, grid_.spacing.x) / kernel_.lx;
                const double dy = lag(j, ny, grid_.spacing.y) / kernel_.ly;
                const double dz = lag(k, nz, grid_.spacing.z) / kernel_.lz;
                const std::size_t idx = (static_cast<std::size_t>(i) * ny + j) * nz + k;
                buf.data[idx][0] = s2 * std::exp(-0.5 * (dx * dx + dy * dy + dz * dz));
                buf.data[idx][1] = 0.0;
            }
    fftw_plan forward;
    {
        std::lock_guard lock(fftw_planner_mutex());
        forward = fftw_plan_dft_3d(nx, ny, nz, buf.data, buf.data, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(forward);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(forward);
    }
    amplitude_.resize(total);
    double negative = 0.0, positive = 0.0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        const double lambda = buf.data[idx][0];
        if (lambda < 0.0)
            negative -= lambda;
        else
            positive += lambda;
        amplitude_[idx] = std::sqrt(std::max(lambda, 0.0) / static_cast<double>(total));
    }
    clamped_fraction_ = positive > 0.0 ? negative / positive : 0.0;
}

GpSynthesizer::~GpSynthesizer() = default;

std::pair<GpRealization, GpRealization> GpSynthesizer::draw_pair(GpMean mean, RandomStream& rng) const {
    const std::size_t total = amplitude_.size();
    FftwBuffer buf(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        buf.data[idx][0] = amplitude_[idx] * rng.normal();
        buf.data[idx][1] = amplitude_[idx] * rng.normal();
    }
    fftw_execute_dft(plan_->plan, buf.data, buf.data);
    std::vector<double> re(total), im(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        re[idx] = buf.data[idx][0];
        im[idx] = buf.data[idx][1];
    }
    return {GpRealization(kernel_, mean, grid_, std::move(re)), GpRealization(kernel_, mean, grid_, std::move(im))};
}

GpRealization realize_gp(const KernelParams& kernel, GpMean mean, const GridSpec& grid, RandomStream& rng) {
    const GpSynthesizer synth(kernel, grid);
    return synth.draw_pair(mean, rng).first;
}

// --- ray casting ----------------------------------------------------------------

FirstHit first_hit(const GpRealization& r, const Ray& ray) {
    FirstHit out;
    const double step = min_length(r.kernel()) / 8.0;
    double t = 0.0;
    double t_end = ray.tmax;
    if (r.mean() == GpMean::Planar) {
        const double bound = r.max_abs_noise();
        const double oz = ray.origin.z, dz = ray.dir.z;
        if (dz == 0.0) {
            if (std::fabs(oz) > bound)
                return out;
        } else {
            // Beyond |z| > bound the sign of f is that of z.
            const double t_exit = ((dz > 0.0 ? bound : -bound) - oz) / dz;
            if (t_exit <= 0.0)
                return out;
            t_end = std::min(t_end, t_exit);
            if (std::fabs(oz) > bound)
                t = (oz - std::copysign(bound, oz)) / -dz;
        }
    }
    if (!std::isfinite(t_end)) {
        const Vec3 e = r.grid().extent();
        t_end = 4.0 * std::max({e.x, e.y, e.z});
    }
    double f0 = r.value(ray.at(t));
    const bool positive = f0 > 0.0;
    while (t < t_end) {
        const double t1 = std::min(t + step, t_end);
        const double f1 = r.value(ray.at(t1));
        if ((f1 > 0.0) != positive) {
            double lo = t, hi = t1;
            for (int k = 0; k < 30; ++k) {
                const double mid = 0.5 * (lo + hi);
                if ((r.value(ray.at(mid)) > 0.0) == positive)
                    lo = mid;
                else
                    hi = mid;
            }
            out.hit = true;
            out.travel = 0.5 * (lo + hi);
            out.position = ray.at(out.travel);
            const Vec3 g = r.gradient(out.position);
            out.normal = g.length() > 0.0 ? Direction::normalize(g) : Direction();
            return out;
        }
        t = t1;
        f0 = f1;
    }
    return out;
}

void OracleSettings::validate() const {
    if (realizations < 1 || realizations > kMaxRealizations)
        throw ConfigError("realizations must lie in [1, 4096], got " + std::to_string(realizations));
    if (rays_per_realization < 1)
        throw ConfigError("rays_per_realization must be positive");
    if (grid_n < 4 || grid_n > kMaxNodesPerAxis)
        throw ConfigError("grid_n must lie in [4, 192], got " + std::to_string(grid_n));
    if (cells_per_length < 4)
        throw ConfigError("cells_per_length must be at least 4 (spacing <= l/4)");
}

namespace {

// Runs body(realization index, realization, rng) for every realization.
// Pairs share one synthesis; each pair has its own stream.
template <class Body>
void for_each_realization(const KernelParams& kernel, const OracleSettings& s, Body&& body) {
    s.validate();
    const GpSynthesizer synth(kernel, GridSpec::for_kernel(kernel, s.grid_n, s.cells_per_length));
    const std::size_t pairs = (static_cast<std::size_t>(s.realizations) + 1) / 2;
    parallel_for(
        pairs,
        [&](std::size_t p) {
            RandomStream rng(s.seed, p);
            auto [a, b] = synth.draw_pair(GpMean::Planar, rng);
            body(2 * p, a, rng);
            if (2 * p + 1 < static_cast<std::size_t>(s.realizations))
                body(2 * p + 1, b, rng);
        },
        s.threads);
}

// Uniform (x, y) over the periodic patch at height z with f > 0. Returns
// false when no such point was found in 64 tries.
bool positive_start(const GpRealization& r, double z, RandomStream& rng, Point& out) {
    const Vec3 e = r.grid().extent();
    for (int attempt = 0; attempt < 64; ++attempt) {
        const Point p{(rng.uniform() - 0.5) * e.x, (rng.uniform() - 0.5) * e.y, z};
        if (r.value(p) > 0.0) {
            out = p;
            return true;
        }
    }
    return false;
}

MacrofacetMedium generalized_medium(const KernelParams& k) {
    MacrofacetMedium m;
    m.kind = NdfKind::Generalized;
    m.a3 = roughness_from_kernel(k);
    m.sigma = k.sigma;
    m.unit_fresnel = true;
    return m;
}

struct MeanAndError {
    double mean = 0;
    double std_error = 0;
};

MeanAndError cluster_mean(const std::vector<double>& per_cluster) {
    const double n = static_cast<double>(per_cluster.size());
    double sum = 0;
    for (double v : per_cluster)
        sum += v;
    const double mean = sum / n;
    double ss = 0;
    for (double v : per_cluster)
        ss += (v - mean) * (v - mean);
    return {mean, n > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0};
}

}  // namespace

std::vector<TransmittanceRow> empirical_transmittance(const KernelParams& kernel, double z0,
                                                      const SphericalAngles& w, const std::vector<double>& t_grid,
                                                      const OracleSettings& settings) {
    const Direction dir = w.to_direction();
    const int nt = static_cast<int>(t_grid.size());
    const double t_max = t_grid.empty() ? 0.0 : *std::max_element(t_grid.begin(), t_grid.end());
    std::vector<std::vector<double>> frac(static_cast<std::size_t>(nt), std::vector<double>(settings.realizations));
    for_each_realization(kernel, settings, [&](std::size_t idx, const GpRealization& r, RandomStream& rng) {
        std::vector<int> survive(static_cast<std::size_t>(nt), 0);
        int rays = 0;
        for (int k = 0; k < settings.rays_per_realization; ++k) {
            Point o;
            if (!positive_start(r, z0, rng, o))
                continue;
            ++rays;
            const FirstHit h = first_hit(r, Ray{o, dir, t_max * (1.0 + 1e-12) + 1e-12});
            for (int i = 0; i < nt; ++i)
                if (!h.hit || h.travel > t_grid[static_cast<std::size_t>(i)])
                    ++survive[static_cast<std::size_t>(i)];
        }
        for (int i = 0; i < nt; ++i)
            frac[static_cast<std::size_t>(i)][idx] = rays > 0 ? static_cast<double>(survive[static_cast<std::size_t>(i)]) / rays : 1.0;
    });
    const MacrofacetMedium m = generalized_medium(kernel);
    std::vector<TransmittanceRow> rows;
    for (int i = 0; i < nt; ++i) {
        const double t = t_grid[static_cast<std::size_t>(i)];
        const MeanAndError e = cluster_mean(frac[static_cast<std::size_t>(i)]);
        double closed = 1.0;
        if (t > 0.0 && std::fabs(dir.z) > 1e-12)
            closed = planar_transmittance(z0, z0 + t * dir.z, w, m);
        rows.push_back({t, e.mean, e.std_error, closed});
    }
    return rows;
}

// --- vNDF -----------------------------------------------------------------------

double SphereHistogram::solid_angle(int i) const {
    const double t0 = kPi * i / n_theta, t1 = kPi * (i + 1) / n_theta;
    return (std::cos(t0) - std::cos(t1)) * (2.0 * kPi / n_phi);
}

double SphereHistogram::total() const {
    double s = 0;
    for (double m : mass)
        s += m;
    return s;
}

int SphereHistogram::theta_bin(double theta, int n) {
    return std::clamp(static_cast<int>(theta / kPi * n), 0, n - 1);
}

int SphereHistogram::phi_bin(double phi, int n) {
    return std::clamp(static_cast<int>(phi / (2.0 * kPi) * n), 0, n - 1);
}

std::vector<SphereHistogram> empirical_vndf(const KernelParams& kernel, const std::vector<Direction>& wos,
                                            int n_theta, int n_phi, const OracleSettings& settings) {
    if (n_theta < 1 || n_phi < 1)
        throw ConfigError("histogram needs at least one bin per axis");
    const std::size_t bins = static_cast<std::size_t>(n_theta) * n_phi;
    const std::size_t nw = wos.size();
    // counts[realization][incidence][bin]
    std::vector<std::vector<double>> counts(static_cast<std::size_t>(settings.realizations),
                                            std::vector<double>(nw * bins, 0.0));
    std::vector<std::vector<int>> hits(static_cast<std::size_t>(settings.realizations), std::vector<int>(nw, 0));
    for_each_realization(kernel, settings, [&](std::size_t idx, const GpRealization& r, RandomStream& rng) {
        const Vec3 e = r.grid().extent();
        const double start_z = r.max_abs_noise() + 1e-9;
        for (std::size_t w = 0; w < nw; ++w) {
            for (int k = 0; k < settings.rays_per_realization; ++k) {
                const Point o{(rng.uniform() - 0.5) * e.x, (rng.uniform() - 0.5) * e.y, start_z};
                const FirstHit h = first_hit(r, Ray{o, wos[w]});
                if (!h.hit)
                    continue;
                const SphericalAngles a = SphericalAngles::from_direction(h.normal);
                const int bi = SphereHistogram::theta_bin(a.theta, n_theta);
                const int bj = SphereHistogram::phi_bin(a.phi, n_phi);
                counts[idx][w * bins + static_cast<std::size_t>(bi) * n_phi + bj] += 1.0;
                ++hits[idx][w];
            }
        }
    });
    std::vector<SphereHistogram> out(nw);
    for (std::size_t w = 0; w < nw; ++w) {
        SphereHistogram& hist = out[w];
        hist.n_theta = n_theta;
        hist.n_phi = n_phi;
        hist.mass.assign(bins, 0.0);
        hist.std_error.assign(bins, 0.0);
        long long total = 0;
        for (std::size_t r = 0; r < counts.size(); ++r)
            total += hits[r][w];
        hist.samples = total;
        if (total == 0)
            continue;
        const double m = static_cast<double>(counts.size());
        const double mean_hits = static_cast<double>(total) / m;
        for (std::size_t b = 0; b < bins; ++b) {
            double sum = 0;
            for (std::size_t r = 0; r < counts.size(); ++r)
                sum += counts[r][w * bins + b];
            const double p = sum / static_cast<double>(total);
            // Ratio estimator; linearised cluster variance.
            double ss = 0;
            for (std::size_t r = 0; r < counts.size(); ++r) {
                const double resid = counts[r][w * bins + b] - p * hits[r][w];
                ss += resid * resid;
            }
            hist.mass[b] = p;
            hist.std_error[b] = m > 1 ? std::sqrt(ss / (m - 1) / m) / mean_hits : 0.0;
        }
    }
    return out;
}

SphereHistogram analytic_vndf_histogram(const KernelParams& kernel, const Direction& wo, int n_theta, int n_phi) {
    const RoughnessTriple a3 = roughness_from_kernel(kernel);
    SphereHistogram hist;
    hist.n_theta = n_theta;
    hist.n_phi = n_phi;
    hist.mass.assign(static_cast<std::size_t>(n_theta) * n_phi, 0.0);
    hist.std_error.assign(hist.mass.size(), 0.0);
    const QuadratureRule& rule = gauss_legendre(16);
    for (int i = 0; i < n_theta; ++i) {
        const double t0 = kPi * i / n_theta, t1 = kPi * (i + 1) / n_theta;
        for (int j = 0; j < n_phi; ++j) {
            const double p0 = 2.0 * kPi * j / n_phi, p1 = 2.0 * kPi * (j + 1) / n_phi;
            double sum = 0;
            for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
                const double theta = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * rule.nodes[a];
                for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
                    const double phi = 0.5 * (p0 + p1) + 0.5 * (p1 - p0) * rule.nodes[b];
                    const Direction m = SphericalAngles{theta, phi}.to_direction();
                    sum += rule.weights[a] * rule.weights[b] * std::sin(theta) *
                           vndf_eval(m, wo, NdfKind::Generalized, a3);
                }
            }
            hist.mass[static_cast<std::size_t>(i) * n_phi + j] = sum * 0.25 * (t1 - t0) * (p1 - p0);
        }
    }
    return hist;
}

double l1_distance(const SphereHistogram& a, const SphereHistogram& b) {
    if (a.mass.size() != b.mass.size())
        throw ParameterDomainError("l1_distance: histograms have different binning");
    double s = 0;
    for (std::size_t i = 0; i < a.mass.size(); ++i)
        s += std::fabs(a.mass[i] - b.mass[i]);
    return s;
}

// --- ensemble radiance ------------------------------------------------------------

void EnsembleScene::validate() const {
    if (width < 1 || height < 1 || width > 64 || height > 64)
        throw ConfigError("ensemble scenes are limited to 64 x 64 pixels");
    if (spp < 1 || max_bounces < 1)
        throw ConfigError("ensemble spp and max_bounces must be positive");
    if (!(environment >= 0.0))
        throw ConfigError("ensemble environment radiance must be non-negative");
}

EnsembleResult ensemble_radiance(const KernelParams& kernel, const EnsembleScene& scene,
                                 const OracleSettings& settings) {
    scene.validate();
    Camera cam;
    cam.position = scene.camera_position;
    cam.look_at = scene.look_at;
    cam.up = scene.up;
    cam.vfov_deg = scene.vfov_deg;
    cam.width = scene.width;
    cam.height = scene.height;
    cam.validate();
    const std::size_t npix = static_cast<std::size_t>(scene.width) * scene.height;
    std::vector<std::vector<Rgb>> per(static_cast<std::size_t>(settings.realizations), std::vector<Rgb>(npix));
    const double eps = 1e-6 * min_length(kernel);

    for_each_realization(kernel, settings, [&](std::size_t idx, const GpRealization& r, RandomStream& rng) {
        for (int y = 0; y < scene.height; ++y) {
            for (int x = 0; x < scene.width; ++x) {
                Rgb sum(0.0);
                for (int s = 0; s < scene.spp; ++s) {
                    Ray ray = cam.generate(x + rng.uniform(), y + rng.uniform());
                    Rgb throughput(1.0);
                    bool escaped = false;
                    for (int bounce = 0; bounce <= scene.max_bounces; ++bounce) {
                        const FirstHit h = first_hit(r, ray);
                        if (!h.hit) {
                            escaped = true;
                            break;
                        }
                        if (bounce == scene.max_bounces)
                            break;
                        const double cos_i = std::fabs(dot(ray.dir, h.normal));
                        if (!scene.unit_fresnel)
                            throughput *= fresnel_conductor(cos_i, scene.fresnel_eta, scene.fresnel_k);
                        const Direction out = Direction::normalize(reflect(-ray.dir, h.normal));
                        ray = Ray{h.position + out * eps, out};
                    }
                    if (escaped)
                        sum += throughput * scene.environment;
                }
                per[idx][static_cast<std::size_t>(y) * scene.width + x] = sum / static_cast<double>(scene.spp);
            }
        }
    });

    EnsembleResult res;
    res.mean = RadianceImage(scene.width, scene.height);
    res.std_error = RadianceImage(scene.width, scene.height);
    res.mean.seed = res.std_error.seed = settings.seed;
    res.mean.spp = res.std_error.spp = scene.spp;
    const double m = static_cast<double>(per.size());
    std::vector<double> image_means(per.size(), 0.0);
    for (std::size_t p = 0; p < npix; ++p) {
        Rgb sum(0.0);
        for (const auto& img : per)
            sum += img[p];
        const Rgb mean = sum / m;
        Rgb ss(0.0);
        for (const auto& img : per) {
            const Rgb d = img[p] - mean;
            ss += d * d;
        }
        res.mean.pixels[p] = mean;
        const Rgb var = m > 1 ? ss / ((m - 1) * m) : Rgb(0.0);
        res.std_error.pixels[p] = Rgb(std::sqrt(var.r), std::sqrt(var.g), std::sqrt(var.b));
    }
    for (std::size_t r = 0; r < per.size(); ++r) {
        double s = 0;
        for (const Rgb& c : per[r])
            s += c.average();
        image_means[r] = s / static_cast<double>(npix);
    }
    const MeanAndError e = cluster_mean(image_means);
    res.mean_pixel = e.mean;
    res.mean_pixel_std_error = e.std_error;
    return res;
}

// --- multiplicativity -------------------------------------------------------------

std::vector<MultiplicativityRow> multiplicativity_probe(const KernelParams& kernel, double z0,
                                                        const SphericalAngles& w, double length,
                                                        const std::vector<double>& splits,
                                                        const OracleSettings& settings) {
    if (!(length > 0.0))
        throw ParameterDomainError("multiplicativity_probe: length must be positive");
    for (double s : splits)
        if (!(s > 0.0 && s < length))
            throw ParameterDomainError("multiplicativity_probe: split points must lie inside (0, length)");
    const Direction dir = w.to_direction();
    const std::size_t ns = splits.size();
    const std::size_t mr = static_cast<std::size_t>(settings.realizations);
    // Per realization: n_x, clear_xy, and per split clear_xz, n_z, clear_zy.
    struct Tally {
        double n_x = 0, clear_xy = 0;
        std::vector<double> clear_xz, n_z, clear_zy;
    };
    std::vector<Tally> tallies(mr);
    for_each_realization(kernel, settings, [&](std::size_t idx, const GpRealization& r, RandomStream& rng) {
        Tally t;
        t.clear_xz.assign(ns, 0.0);
        t.n_z.assign(ns, 0.0);
        t.clear_zy.assign(ns, 0.0);
        for (int k = 0; k < settings.rays_per_realization; ++k) {
            Point o;
            if (!positive_start(r, z0, rng, o))
                continue;
            t.n_x += 1;
            const FirstHit h = first_hit(r, Ray{o, dir, length});
            if (!h.hit)
                t.clear_xy += 1;
            for (std::size_t s = 0; s < ns; ++s) {
                if (!h.hit || h.travel > splits[s])
                    t.clear_xz[s] += 1;
                const Point z = o + dir * splits[s];
                if (r.value(z) > 0.0) {
                    t.n_z[s] += 1;
                    if (!first_hit(r, Ray{z, dir, length - splits[s]}).hit)
                        t.clear_zy[s] += 1;
                }
            }
        }
        tallies[idx] = std::move(t);
    });

    // Ratio estimators over all realizations; jackknife (leave one
    // realization out) for the gap.
    auto estimate = [&](std::size_t s, std::size_t skip) {
        double nx = 0, cxy = 0, cxz = 0, nz = 0, czy = 0;
        for (std::size_t r = 0; r < mr; ++r) {
            if (r == skip)
                continue;
            nx += tallies[r].n_x;
            cxy += tallies[r].clear_xy;
            cxz += tallies[r].clear_xz[s];
            nz += tallies[r].n_z[s];
            czy += tallies[r].clear_zy[s];
        }
        MultiplicativityRow row;
        row.split = splits[s];
        row.tr_xy = nx > 0 ? cxy / nx : 1.0;
        row.tr_xz = nx > 0 ? cxz / nx : 1.0;
        row.tr_zy = nz > 0 ? czy / nz : 1.0;
        row.gap = std::fabs(row.tr_xy - row.tr_xz * row.tr_zy);
        return row;
    };

    const MacrofacetMedium m = generalized_medium(kernel);
    std::vector<MultiplicativityRow> rows;
    for (std::size_t s = 0; s < ns; ++s) {
        MultiplicativityRow row = estimate(s, mr);
        double sum = 0, sum_sq = 0;
        for (std::size_t r = 0; r < mr; ++r) {
            const MultiplicativityRow j = estimate(s, r);
            const double g = j.tr_xy - j.tr_xz * j.tr_zy;
            sum += g;
            sum_sq += g * g;
        }
        const double n = static_cast<double>(mr);
        const double mean = sum / n;
        const double var = (n - 1.0) / n * std::max(0.0, sum_sq - n * mean * mean);
        row.std_error = std::sqrt(var);
        if (std::fabs(dir.z) > 1e-12) {
            const double h_z = z0 + splits[s] * dir.z;
            const double h_y = z0 + length * dir.z;
            const double xy = planar_transmittance(z0, h_y, w, m);
            const double xz = planar_transmittance(z0, h_z, w, m);
            const double zy = planar_transmittance(h_z, h_y, w, m);
            row.closed_form_gap = std::fabs(xy - xz * zy);
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace macrofacet
