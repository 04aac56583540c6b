// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

// macrofacet command-line driver.
//
// Exit codes: 0 success, 1 configuration or parameter error, 2 numeric
// failure, 3 I/O error, 4 failed validation check.

#include <macrofacet/config.hpp>
#include <macrofacet/csv.hpp>
#include <macrofacet/error.hpp>
#include <macrofacet/gp_oracle.hpp>
#include <macrofacet/medium.hpp>
#include <macrofacet/parallel.hpp>
#include <macrofacet/quadrature.hpp>
#include <macrofacet/renderer.hpp>
#include <macrofacet/validate.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace mf = macrofacet;

namespace {

constexpr double kDeg = mf::kPi / 180.0;

// Kernel and medium overrides shared by curves and oracle.
struct KernelArgs {
    std::string config;
    std::optional<double> sigma, lx, ly, lz, alpha, ax, ay, az;
    std::string kind;

    void add(CLI::App* app) {
        app->add_option("--config", config, "Take [kernel], [medium] and [oracle] from this file");
        app->add_option("--sigma", sigma, "SDF standard deviation [length]");
        app->add_option("--lx", lx, "Correlation length along x [length]");
        app->add_option("--ly", ly, "Correlation length along y [length]");
        app->add_option("--lz", lz, "Correlation length along z [length], may be inf");
        app->add_option("--alpha", alpha, "Isotropic roughness (sets ax = ay = az)");
        app->add_option("--ax", ax, "Roughness along x");
        app->add_option("--ay", ay, "Roughness along y");
        app->add_option("--az", az, "Roughness along z (0: height field)");
        app->add_option("--kind", kind, "NDF kind: beckmann|ggx|generalized");
    }

    mf::Config base() const { return config.empty() ? mf::Config{} : mf::Config::load(config); }

    mf::MediumSpec resolve(mf::MediumSpec m) const {
        const bool has_l = lx || ly || lz;
        const bool has_a = alpha || ax || ay || az;
        if (has_l && has_a)
            throw mf::ConfigError("give correlation lengths (--lx/--ly/--lz) or roughness (--alpha/--ax/--ay/--az), not both");
        if (sigma)
            m.sigma = *sigma;
        if (has_l) {
            if (m.by_roughness) {
                const mf::KernelParams k = mf::kernel_from_roughness(m.sigma, m.roughness_triple());
                m.lengths = {k.lx, k.ly, k.lz};
                m.by_roughness = false;
            }
            m.lengths = {lx.value_or(m.lengths.x), ly.value_or(m.lengths.y), lz.value_or(m.lengths.z)};
        }
        if (has_a) {
            if (!m.by_roughness) {
                const mf::RoughnessTriple r = m.roughness_triple();
                m.roughness = {r.ax, r.ay, r.az};
                m.by_roughness = true;
            }
            if (alpha)
                m.roughness = {*alpha, *alpha, *alpha};
            m.roughness = {ax.value_or(m.roughness.x), ay.value_or(m.roughness.y), az.value_or(m.roughness.z)};
        }
        if (!kind.empty())
            m.kind = mf::ndf_kind_from_string(kind);
        return m;
    }
};

void echo_medium(mf::CsvTable& t, const mf::MediumSpec& m) {
    const mf::KernelParams k = m.kernel();
    const mf::RoughnessTriple a = m.roughness_triple();
    t.param("sigma", k.sigma);
    t.param("lx", k.lx);
    t.param("ly", k.ly);
    t.param("lz", k.lz);
    t.param("ax", a.ax);
    t.param("ay", a.ay);
    t.param("az", a.az);
    t.param("kind", std::string(mf::to_string(m.kind)));
}

void emit(const mf::CsvTable& t, const std::string& out) {
    if (out.empty() || out == "-")
        t.write(std::cout);
    else
        t.save(out);
}

std::vector<double> grid(double lo, double hi, double step) {
    if (!(step > 0) || !(hi >= lo))
        throw mf::ParameterDomainError("grid needs step > 0 and max >= min");
    std::vector<double> g;
    const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
    for (int i = 0; i <= n; ++i)
        g.push_back(lo + i * step);
    return g;
}

// --- render -----------------------------------------------------------------

struct RenderArgs {
    std::string config;
    std::optional<int> spp;
    std::optional<std::uint64_t> seed;
    std::string out = "render.pfm";
    std::string format;
    int threads = 0;
};

int cmd_render(const RenderArgs& a) {
    const mf::Config cfg = mf::Config::load(a.config);
    const mf::ShellScene scene = cfg.build_scene();
    mf::RenderSettings s;
    s.spp = a.spp.value_or(cfg.render.spp);
    s.seed = a.seed.value_or(cfg.render.seed);
    s.max_bounces = cfg.render.max_bounces;
    s.threads = a.threads;
    if (s.spp < 1)
        throw mf::ParameterDomainError("spp must be >= 1");
    std::string format = a.format;
    if (format.empty())
        format = a.out.size() >= 4 && a.out.substr(a.out.size() - 4) == ".ppm" ? "ppm" : "pfm";
    const mf::ImageFormat fmt = mf::image_format_from_string(format);

    const auto start = std::chrono::steady_clock::now();
    mf::RadianceImage img = mf::render(scene, s);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    img.scene_hash = mf::fnv1a64(cfg.serialize());
    mf::write_image(img, a.out, fmt);
    std::printf("rendered %dx%d spp=%d seed=%llu threads=%d time=%.3f s -> %s\n", img.width, img.height, s.spp,
                static_cast<unsigned long long>(s.seed), mf::worker_count(s.threads), seconds, a.out.c_str());
    return 0;
}

// --- curves -----------------------------------------------------------------

struct CurveArgs {
    std::string kind;
    KernelArgs kernel;
    double theta_min = 0, theta_max = 89, theta_step = 1;
    std::optional<double> theta;
    double phi = 0;
    double z0 = 0;
    double t_max = 6, t_step = 0.1;
    int n_theta = 8, n_phi = 8;
    std::string out;
};

int cmd_curves(const CurveArgs& a) {
    const mf::MediumSpec spec = a.kernel.resolve(a.kernel.base().medium);
    const mf::RoughnessTriple a3 = spec.roughness_triple();
    const mf::NdfKind kind = spec.kind;
    const mf::RoughnessTriple eff = kind == mf::NdfKind::Generalized ? a3 : mf::RoughnessTriple{a3.ax, a3.ay, 0};
    mf::CsvTable t;
    t.param("command", "curves " + a.kind);
    t.param("seed", "0");
    echo_medium(t, spec);
    const double phi = a.phi * kDeg;
    t.param("phi_deg", a.phi);

    if (a.kind == "lambda" || a.kind == "projected-area") {
        t.param("theta_min_deg", a.theta_min);
        t.param("theta_max_deg", a.theta_max);
        t.param("theta_step_deg", a.theta_step);
        if (a.kind == "lambda")
            t.columns = {"theta [deg]", "lambda [1]", "projected_area [1]"};
        else
            t.columns = {"theta [deg]", "projected_area [1]", "vndf_normalizer_quadrature [1]"};
        for (double deg : grid(a.theta_min, a.theta_max, a.theta_step)) {
            const mf::Direction w = mf::SphericalAngles{deg * kDeg, phi}.to_direction();
            const double pa = mf::visible_projected_area(w, kind, eff);
            if (a.kind == "lambda") {
                const double lam = std::fabs(w.z) < 1e-9 ? mf::kInfinity : mf::smith_lambda(w, kind, eff);
                t.add_row({deg, lam, pa});
            } else {
                const double q = mf::integrate_sphere(
                    [&](const mf::Direction& m) { return std::max(0.0, -mf::dot(w, m)) * mf::ndf_eval(m, kind, eff); },
                    -w);
                t.add_row({deg, pa, q});
            }
        }
    } else if (a.kind == "ndf") {
        const double hi = a.theta_max == 89 ? 180 : a.theta_max;
        const double step = a.theta_step == 1 ? 5 : a.theta_step;
        t.param("theta_min_deg", a.theta_min);
        t.param("theta_max_deg", hi);
        t.param("theta_step_deg", step);
        t.columns = {"theta_m [deg]", "ndf [1/sr]", "ndf_quadrature [1/sr]"};
        for (double deg : grid(a.theta_min, hi, step)) {
            const mf::Direction wm = mf::SphericalAngles{deg * kDeg, phi}.to_direction();
            const double d = mf::ndf_eval(wm, kind, eff);
            const double q = kind == mf::NdfKind::Generalized ? mf::ndf_from_gdf_quadrature(wm, a3) : d;
            t.add_row({deg, d, q});
        }
    } else if (a.kind == "vndf") {
        const double theta = a.theta.value_or(180.0);
        const mf::Direction wo = mf::SphericalAngles{theta * kDeg, phi}.to_direction();
        t.param("theta_deg", theta);
        t.param("n_theta", a.n_theta);
        t.param("n_phi", a.n_phi);
        t.columns = {"theta_lo [deg]", "theta_hi [deg]", "phi_lo [deg]", "phi_hi [deg]", "mass [1]", "density [1/sr]"};
        if (kind != mf::NdfKind::Generalized)
            throw mf::ParameterDomainError("vndf histograms are tabulated for the generalized kind");
        const mf::SphereHistogram h = mf::analytic_vndf_histogram(spec.kernel(), wo, a.n_theta, a.n_phi);
        for (int i = 0; i < h.n_theta; ++i)
            for (int j = 0; j < h.n_phi; ++j)
                t.add_row({180.0 * i / h.n_theta, 180.0 * (i + 1) / h.n_theta, 360.0 * j / h.n_phi,
                           360.0 * (j + 1) / h.n_phi, h.mass[static_cast<std::size_t>(i) * h.n_phi + j], h.density(i, j)});
    } else if (a.kind == "transmittance") {
        const double theta = a.theta.value_or(135.0);
        const mf::SphericalAngles w{theta * kDeg, phi};
        const mf::MacrofacetMedium m = spec.medium();
        t.param("theta_deg", theta);
        t.param("z0", a.z0);
        t.param("t_max", a.t_max);
        t.param("t_step", a.t_step);
        t.columns = {"t [length]", "height [length]", "transmittance [1]"};
        for (double s : grid(0, a.t_max, a.t_step)) {
            const double h1 = a.z0 + s * std::cos(w.theta);
            t.add_row({s, h1, mf::planar_transmittance(a.z0, h1, w, m)});
        }
    } else {
        throw mf::ParameterDomainError("unknown curve '" + a.kind + "' (lambda|ndf|vndf|transmittance|projected-area)");
    }
    emit(t, a.out);
    return 0;
}

// --- validate ---------------------------------------------------------------

struct ValidateArgs {
    std::string suite = "all";
    std::vector<std::string> tol;
    std::string mutation;
    std::uint64_t seed = 0;
    int threads = 0;
};

int cmd_validate(const ValidateArgs& a) {
    mf::ValidationOptions opt;
    opt.ops = mf::mutated_ops(a.mutation);
    opt.seed = a.seed;
    opt.threads = a.threads;
    for (const std::string& kv : a.tol) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw mf::ConfigError("--tol expects name=value, got '" + kv + "'");
        double v = 0;
        try {
            std::size_t used = 0;
            v = std::stod(kv.substr(eq + 1), &used);
            if (used != kv.size() - eq - 1)
                throw std::invalid_argument(kv);
        } catch (const std::exception&) {
            throw mf::ConfigError("--tol value in '" + kv + "' is not a number");
        }
        opt.tolerances[kv.substr(0, eq)] = v;
    }
    int failed = 0;
    const auto checks = mf::run_validation(a.suite, opt);
    for (const mf::Check& c : checks) {
        std::cout << mf::format_check(c) << "\n";
        failed += c.passed ? 0 : 1;
    }
    std::cout << (failed ? "FAILED " : "OK ") << checks.size() - failed << "/" << checks.size() << " checks passed\n";
    return failed ? 4 : 0;
}

// --- oracle -----------------------------------------------------------------

struct OracleArgs {
    std::string experiment;
    KernelArgs kernel;
    std::optional<int> realizations, rays, grid_n, cells;
    std::optional<std::uint64_t> seed;
    std::vector<double> thetas;
    double phi = 0;
    double z0 = 0;
    double t_max = 6, t_step = 0.25;
    int n_theta = 8, n_phi = 8;
    int width = 32, height = 32, spp = 4, max_bounces = 16;
    bool real_fresnel = false;
    std::string out;
    int threads = 0;
};

int cmd_oracle(const OracleArgs& a) {
    const mf::Config base = a.kernel.base();
    const mf::MediumSpec spec = a.kernel.resolve(base.medium);
    const mf::KernelParams k = spec.kernel();
    mf::OracleSettings s = base.oracle.settings();
    s.realizations = a.realizations.value_or(s.realizations);
    s.rays_per_realization = a.rays.value_or(s.rays_per_realization);
    s.grid_n = a.grid_n.value_or(s.grid_n);
    s.cells_per_length = a.cells.value_or(s.cells_per_length);
    s.seed = a.seed.value_or(s.seed);
    s.threads = a.threads;
    s.validate();
    if (!std::isfinite(k.lz))
        throw mf::ConfigError("the oracle needs a finite lz");
    mf::GridSpec::for_kernel(k, s.grid_n, s.cells_per_length).resolved(k);

    mf::CsvTable t;
    t.param("command", "oracle " + a.experiment);
    t.param("seed", std::to_string(s.seed));
    echo_medium(t, spec);
    t.param("realizations", s.realizations);
    t.param("rays_per_realization", s.rays_per_realization);
    t.param("grid_n", s.grid_n);
    t.param("cells_per_length", s.cells_per_length);

    if (a.experiment == "gp-transmittance") {
        const double theta = a.thetas.empty() ? 135.0 : a.thetas.front();
        const mf::SphericalAngles w{theta * kDeg, a.phi * kDeg};
        t.param("theta_deg", theta);
        t.param("phi_deg", a.phi);
        t.param("z0", a.z0);
        t.param("t_max", a.t_max);
        t.param("t_step", a.t_step);
        const auto rows = mf::empirical_transmittance(k, a.z0, w, grid(0, a.t_max, a.t_step), s);
        t.columns = {"t [length]", "transmittance [1]", "std_error [1]", "closed_form [1]"};
        double worst = 0;
        for (const auto& r : rows) {
            t.add_row({r.t, r.tr, r.std_error, r.closed_form});
            if (r.closed_form >= 0.3)
                worst = std::max(worst, std::fabs(r.tr - r.closed_form));
        }
        emit(t, a.out);
        std::fprintf(stderr, "max |empirical - closed form| where closed form >= 0.3: %.6f\n", worst);
    } else if (a.experiment == "gp-vndf") {
        std::vector<double> thetas = a.thetas.empty() ? std::vector<double>{135.0} : a.thetas;
        std::vector<mf::Direction> wos;
        for (double th : thetas)
            wos.push_back(mf::SphericalAngles{th * kDeg, a.phi * kDeg}.to_direction());
        const auto hists = mf::empirical_vndf(k, wos, a.n_theta, a.n_phi, s);
        t.param("phi_deg", a.phi);
        t.param("n_theta", a.n_theta);
        t.param("n_phi", a.n_phi);
        t.columns = {"theta_o [deg]",  "theta_lo [deg]", "theta_hi [deg]", "phi_lo [deg]",
                     "phi_hi [deg]",   "mass [1]",       "std_error [1]",  "analytic_mass [1]"};
        for (std::size_t n = 0; n < hists.size(); ++n) {
            const auto& h = hists[n];
            const auto ref = mf::analytic_vndf_histogram(k, wos[n], a.n_theta, a.n_phi);
            for (int i = 0; i < h.n_theta; ++i)
                for (int j = 0; j < h.n_phi; ++j) {
                    const std::size_t b = static_cast<std::size_t>(i) * h.n_phi + j;
                    t.add_row({thetas[n], 180.0 * i / h.n_theta, 180.0 * (i + 1) / h.n_theta, 360.0 * j / h.n_phi,
                               360.0 * (j + 1) / h.n_phi, h.mass[b], h.std_error[b], ref.mass[b]});
                }
            std::fprintf(stderr, "theta_o=%g deg: hits=%lld total=%.9f L1=%.6f\n", thetas[n], h.samples, h.total(),
                         mf::l1_distance(h, ref));
        }
        emit(t, a.out);
    } else if (a.experiment == "gp-ensemble") {
        mf::EnsembleScene scene;
        scene.width = a.width;
        scene.height = a.height;
        scene.spp = a.spp;
        scene.max_bounces = a.max_bounces;
        scene.unit_fresnel = !a.real_fresnel;
        scene.fresnel_eta = spec.fresnel_eta;
        scene.fresnel_k = spec.fresnel_k;
        scene.validate();
        const mf::EnsembleResult r = mf::ensemble_radiance(k, scene, s);
        const std::string out = a.out.empty() ? "ensemble.pfm" : a.out;
        mf::write_image(r.mean, out, mf::ImageFormat::PFM);
        std::printf("mean pixel = %.6f +- %.6f (realizations=%d, %dx%d, spp=%d) -> %s\n", r.mean_pixel,
                    r.mean_pixel_std_error, s.realizations, scene.width, scene.height, scene.spp, out.c_str());
    } else {
        throw mf::ParameterDomainError("unknown experiment '" + a.experiment + "' (gp-transmittance|gp-vndf|gp-ensemble)");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Macrofacet media: Gaussian-process surfaces rendered as exponential volumes"};
    app.set_version_flag("--version", std::string(mf::kVersion));
    app.require_subcommand(1);

    RenderArgs ra;
    auto* render = app.add_subcommand("render", "Render a scene file");
    render->add_option("config", ra.config, "Scene configuration")->required();
    render->add_option("--spp", ra.spp, "Samples per pixel (overrides [render] spp)");
    render->add_option("--seed", ra.seed, "Random seed (overrides [render] seed)");
    render->add_option("--out", ra.out, "Output image path");
    render->add_option("--format", ra.format, "pfm|ppm (default from the extension)");
    render->add_option("--threads", ra.threads, "Worker threads (default MACROFACET_THREADS or all cores)");

    CurveArgs ca;
    auto* curves = app.add_subcommand("curves", "Tabulate model functions as CSV");
    curves->add_option("curve", ca.kind, "lambda|ndf|vndf|transmittance|projected-area")->required();
    ca.kernel.add(curves);
    curves->add_option("--theta-min", ca.theta_min, "First polar angle [deg]");
    curves->add_option("--theta-max", ca.theta_max, "Last polar angle [deg]");
    curves->add_option("--theta-step", ca.theta_step, "Polar angle step [deg]");
    curves->add_option("--theta", ca.theta, "Polar angle of the propagation direction [deg]");
    curves->add_option("--phi", ca.phi, "Azimuth [deg]");
    curves->add_option("--z0", ca.z0, "Start height for transmittance [length]");
    curves->add_option("--t-max", ca.t_max, "Largest travel distance [length]");
    curves->add_option("--t-step", ca.t_step, "Travel distance step [length]");
    curves->add_option("--n-theta", ca.n_theta, "Histogram polar bins");
    curves->add_option("--n-phi", ca.n_phi, "Histogram azimuth bins");
    curves->add_option("--out", ca.out, "CSV path (default stdout)");

    ValidateArgs va;
    auto* validate = app.add_subcommand("validate", "Run invariant suites");
    validate->add_option("suite", va.suite,
                         "all|special-functions|lambda|ndf|vndf|phase|transmittance|furnace|multiplicativity");
    validate->add_option("--tol", va.tol, "Tolerance override name=value (repeatable)");
    validate->add_option("--mutation", va.mutation, "Inject a known bug: ndf-sign|lambda-sign");
    validate->add_option("--seed", va.seed, "Random seed");
    validate->add_option("--threads", va.threads, "Worker threads");

    OracleArgs oa;
    auto* oracle = app.add_subcommand("oracle", "Brute-force Gaussian-process experiments");
    oracle->add_option("experiment", oa.experiment, "gp-transmittance|gp-vndf|gp-ensemble")->required();
    oa.kernel.add(oracle);
    oracle->add_option("--realizations", oa.realizations, "Realizations M (<= 4096)");
    oracle->add_option("--rays", oa.rays, "Rays per realization");
    oracle->add_option("--grid-n", oa.grid_n, "Grid nodes per axis (<= 192)");
    oracle->add_option("--cells-per-length", oa.cells, "Grid cells per correlation length");
    oracle->add_option("--seed", oa.seed, "Random seed");
    oracle->add_option("--theta", oa.thetas, "Polar angle(s) of the propagation direction [deg]");
    oracle->add_option("--phi", oa.phi, "Azimuth [deg]");
    oracle->add_option("--z0", oa.z0, "Start height [length]");
    oracle->add_option("--t-max", oa.t_max, "Largest travel distance [length]");
    oracle->add_option("--t-step", oa.t_step, "Travel distance step [length]");
    oracle->add_option("--n-theta", oa.n_theta, "Histogram polar bins");
    oracle->add_option("--n-phi", oa.n_phi, "Histogram azimuth bins");
    oracle->add_option("--width", oa.width, "Ensemble image width");
    oracle->add_option("--height", oa.height, "Ensemble image height");
    oracle->add_option("--spp", oa.spp, "Ensemble samples per pixel");
    oracle->add_option("--max-bounces", oa.max_bounces, "Ensemble mirror bounces");
    oracle->add_flag("--real-fresnel", oa.real_fresnel, "Use the conductor Fresnel term instead of F = 1");
    oracle->add_option("--out", oa.out, "Output path (CSV, or PFM for gp-ensemble)");
    oracle->add_option("--threads", oa.threads, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*render)
            return cmd_render(ra);
        if (*curves)
            return cmd_curves(ca);
        if (*validate)
            return cmd_validate(va);
        return cmd_oracle(oa);
    } catch (const mf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const mf::ParameterDomainError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 1;
    } catch (const mf::NumericFailure& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    } catch (const mf::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
