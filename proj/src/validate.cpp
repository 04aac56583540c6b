// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#include <macrofacet/validate.hpp>

#include <macrofacet/config.hpp>
#include <macrofacet/error.hpp>
#include <macrofacet/gp_oracle.hpp>
#include <macrofacet/medium.hpp>
#include <macrofacet/quadrature.hpp>
#include <macrofacet/renderer.hpp>
#include <macrofacet/special.hpp>
#include <macrofacet/tracking.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace macrofacet {

namespace {

constexpr double kDeg = kPi / 180.0;

// Slow long-double references for the error functions: the positive-term
// series erf(x) = 2/sqrt(pi) exp(-x^2) sum 2^n x^(2n+1) / (2n+1)!! for
// |x| <= 3 and Lentz's continued fraction for erfc beyond.
long double series_erf(long double x) {
    const long double x2 = x * x;
    long double term = x;
    long double sum = x;
    for (int n = 1; n < 400; ++n) {
        term *= 2.0L * x2 / (2.0L * n + 1.0L);
        sum += term;
        if (std::fabs(term) < 1e-22L * std::fabs(sum))
            break;
    }
    return 2.0L / std::sqrt(static_cast<long double>(kPi)) * std::exp(-x2) * sum;
}

long double fraction_erfc(long double x) {
    // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    const long double tiny = 1e-300L;
    long double f = x;
    long double c = x;
    long double d = 0;
    for (int n = 1; n < 2000; ++n) {
        const long double an = n * 0.5L;
        d = x + an * d;
        d = std::fabs(d) < tiny ? tiny : d;
        c = x + an / c;
        c = std::fabs(c) < tiny ? tiny : c;
        d = 1.0L / d;
        const long double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0L) < 1e-21L)
            break;
    }
    return std::exp(-x * x) / std::sqrt(static_cast<long double>(kPi)) / f;
}

double reference_erf(double x) {
    if (std::fabs(x) <= 3.0)
        return static_cast<double>(series_erf(x));
    const long double c = fraction_erfc(std::fabs(x));
    return static_cast<double>(x > 0 ? 1.0L - c : c - 1.0L);
}

double reference_erfc(double x) {
    if (x >= 2.5)
        return static_cast<double>(fraction_erfc(x));
    return static_cast<double>(1.0L - series_erf(x));
}

// Height-field Beckmann Smith Lambda from its textbook form.
double beckmann_lambda(double theta, double alpha) {
    if (theta == 0.0)
        return 0.0;
    const double a = 1.0 / (alpha * std::tan(theta));
    return 0.5 * (std::erf(a) - 1.0) + std::exp(-a * a) / (2.0 * a * kSqrtPi);
}

Direction from_angles(double theta, double phi) { return SphericalAngles{theta, phi}.to_direction(); }

Direction random_direction(RandomStream& rng) {
    const double z = 1.0 - 2.0 * rng.uniform();
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * kPi * rng.uniform();
    return Direction::normalize({r * std::cos(phi), r * std::sin(phi), z});
}

class Suite {
  public:
    Suite(std::string name, const ValidationOptions& opt, std::vector<Check>& out)
        : name_(std::move(name)), opt_(opt), out_(out) {}

    void at_most(const std::string& check, double measured, double tol, std::string detail = {}) {
        add(check, measured, tol, false, std::move(detail));
    }
    void at_least(const std::string& check, double measured, double tol, std::string detail = {}) {
        add(check, measured, tol, true, std::move(detail));
    }
    const ValidationOptions& options() const { return opt_; }

  private:
    void add(const std::string& check, double measured, double tol, bool at_least, std::string detail) {
        if (auto it = opt_.tolerances.find(name_ + "." + check); it != opt_.tolerances.end())
            tol = it->second;
        else if (auto jt = opt_.tolerances.find(check); jt != opt_.tolerances.end())
            tol = jt->second;
        Check c{name_, check, measured, tol, at_least, false, std::move(detail)};
        c.passed = std::isfinite(measured) && (at_least ? measured >= tol : measured <= tol);
        out_.push_back(std::move(c));
    }

    std::string name_;
    const ValidationOptions& opt_;
    std::vector<Check>& out_;
};

void special_functions(Suite& s) {
    double erf_rel = 0, erfc_rel = 0, sum_err = 0, odd_err = 0;
    for (int i = -600; i <= 600; ++i) {
        const double x = i * 0.01;
        const double ref = reference_erf(x);
        if (ref != 0.0)
            erf_rel = std::max(erf_rel, std::fabs(erf(x) - ref) / std::fabs(ref));
        else
            erf_rel = std::max(erf_rel, std::fabs(erf(x)));
        sum_err = std::max(sum_err, std::fabs(erf(x) + erfc(x) - 1.0));
        odd_err = std::max(odd_err, std::fabs(erf(x) + erf(-x)));
    }
    for (int i = 0; i <= 460; ++i) {
        const double x = 3.0 + i * 0.05;
        const double ref = reference_erfc(x);
        erfc_rel = std::max(erfc_rel, std::fabs(erfc(x) - ref) / ref);
    }
    s.at_most("erf-vs-series", erf_rel, 1e-14, "max relative error, x in [-6, 6]");
    s.at_most("erfc-tail-vs-fraction", erfc_rel, 1e-13, "max relative error, x in [3, 26]");
    s.at_most("erf-plus-erfc", sum_err, 1e-14, "max |erf + erfc - 1|, |x| <= 6");
    s.at_most("erf-odd", odd_err, 0.0, "max |erf(x) + erf(-x)|");

    double cdf_err = 0;
    int decreasing = 0;
    double prev = 0;
    for (int i = 0; i <= 160; ++i) {
        const double x = -8.0 + i * 0.1;
        const double integral =
            integrate_interval([](double t) { return gauss_pdf(t, 0.0, 1.0); }, -8.0, x, std::max(1, i), 16);
        const double c = gauss_cdf(x, 0.0, 1.0);
        cdf_err = std::max(cdf_err, std::fabs(c - integral));
        if (i > 0 && c < prev)
            ++decreasing;
        prev = c;
    }
    s.at_most("cdf-vs-pdf-integral", cdf_err, 1e-13, "max |Phi(x) - int_{-8}^{x} phi|");
    s.at_most("cdf-monotone", decreasing, 0.0, "decreasing steps on a 0.1 grid");
}

void lambda_suite(Suite& s) {
    const auto& lambda = s.options().ops.generalized_lambda;
    double degeneracy = 0;
    for (double alpha : {0.3, 1.0}) {
        for (int deg = 0; deg <= 89; ++deg) {
            const double theta = deg * kDeg;
            const double gen = deg == 0 ? 0.0 : lambda(from_angles(theta, 0.7), {alpha, alpha, 1e-4});
            degeneracy = std::max(degeneracy, std::fabs(gen - beckmann_lambda(theta, alpha)));
        }
    }
    s.at_most("beckmann-degeneracy", degeneracy, 1e-4, "max |Lambda(az=1e-4) - Beckmann|, theta in [0, 89] deg");

    RandomStream rng(s.options().seed, 0x1a3bd);
    double symmetry = 0;
    double identity = 0;
    for (int i = 0; i < 10000; ++i) {
        Direction w = random_direction(rng);
        if (w.z < 0)
            w = -w;
        if (w.z < 1e-6)
            continue;
        const RoughnessTriple a3{0.05 + 1.95 * rng.uniform(), 0.05 + 1.95 * rng.uniform(),
                                 0.05 + 1.95 * rng.uniform()};
        const double up = lambda(w, a3);
        const double down = lambda(-w, a3);
        symmetry = std::max(symmetry, std::fabs(up + down + 1.0) / std::max(1.0, std::fabs(down)));
        const double pa = projected_area(w, a3);
        identity = std::max(identity, std::fabs(pa - up * w.z) / std::max(1e-300, std::fabs(pa)));
    }
    s.at_most("symmetry", symmetry, 1e-12, "max |Lambda(w) + Lambda(-w) + 1|, 1e4 configurations");
    s.at_most("projected-area-identity", identity, 1e-10, "max relative |sigma - Lambda cos|");

    double continuity = 0;
    for (int i = 0; i < 200; ++i) {
        const double phi = 2.0 * kPi * rng.uniform();
        const RoughnessTriple a3{0.1 + rng.uniform(), 0.1 + rng.uniform(), rng.uniform()};
        const double mid = projected_area(from_angles(0.5 * kPi, phi), a3);
        for (double eps : {-1e-7, 1e-7})
            continuity = std::max(continuity, std::fabs(projected_area(from_angles(0.5 * kPi + eps, phi), a3) - mid));
    }
    s.at_most("grazing-continuity", continuity, 1e-6, "max |sigma(90 deg +- 1e-7) - sigma(90 deg)|");

    const double l45 = lambda(from_angles(45 * kDeg, 0), RoughnessTriple::isotropic(1));
    s.at_most("lambda-45deg", std::fabs(l45 - 0.08331547058768630), 1e-12, "isotropic alpha = 1");
}

void ndf_suite(Suite& s) {
    const auto& ndf = s.options().ops.generalized_ndf;
    double oracle = 0;
    for (double alpha : {0.3, 0.6, 1.0}) {
        const auto a3 = RoughnessTriple::isotropic(alpha);
        for (int it = 0; it <= 12; ++it) {
            for (double phi_deg : {0.0, 45.0, 90.0}) {
                const Direction wm = from_angles(it * 15 * kDeg, phi_deg * kDeg);
                const double ref = ndf_from_gdf_quadrature(wm, a3);
                const double v = ndf(wm, a3);
                oracle = std::max(oracle, std::fabs(v - ref) / std::max(ref, 1e-300));
            }
        }
    }
    s.at_most("oracle-equivalence", oracle, 5e-3, "max relative error vs gradient-density quadrature");

    double limit = 0;
    for (int deg = 0; deg <= 60; deg += 5) {
        const Direction wm = from_angles(deg * kDeg, 0.3);
        const double b = beckmann_ndf(wm, 1, 1);
        limit = std::max(limit, std::fabs(ndf(wm, {1, 1, 1e-3}) - b) / b);
    }
    s.at_most("beckmann-limit", limit, 1e-2, "max relative error at az = 1e-3, theta <= 60 deg");

    const RoughnessTriple triples[] = {{1, 1, 1}, {0.5, 0.5, 0.5}, {0.3, 0.6, 1.0}, {1.0, 0.5, 0.8}, {0.6, 0.6, 0.3}};
    const Direction up{};
    RandomStream rng(s.options().seed, 0x2b1);
    double signed_area = 0;
    double clamped = 0;
    for (const auto& a3 : triples) {
        for (int i = 0; i < 20; ++i) {
            const Direction w = random_direction(rng);
            const double q = integrate_sphere([&](const Direction& m) { return dot(w, m) * ndf(m, a3); }, up);
            signed_area = std::max(signed_area, std::fabs(q - w.z));
        }
        const double q = integrate_sphere([&](const Direction& m) { return std::max(0.0, m.z) * ndf(m, a3); }, up);
        clamped = std::max(clamped, std::fabs(q - 1.0 - projected_area(up, a3)));
    }
    s.at_most("signed-projected-area", signed_area, 1e-3, "max |int (w.m) D dm - w.z|");
    s.at_most("full-sphere-clamped", clamped, 1e-3, "max |int <z, m> D dm - 1 - sigma(z)|");

    double height_field = 0;
    for (double a : {0.2, 0.5, 1.0}) {
        const double qb =
            integrate_sphere([&](const Direction& m) { return std::max(0.0, m.z) * beckmann_ndf(m, a, 0.7 * a); }, up);
        const double qg =
            integrate_sphere([&](const Direction& m) { return std::max(0.0, m.z) * ggx_ndf(m, a, 0.7 * a); }, up);
        height_field = std::max({height_field, std::fabs(qb - 1.0), std::fabs(qg - 1.0)});
    }
    s.at_most("height-field-normalization", height_field, 1e-3, "Beckmann and GGX projected-area integrals");
}

void vndf_suite(Suite& s) {
    double denominator = 0;
    for (double lz : {1.0, 2.0, 10.0}) {
        const auto a3 = roughness_from_kernel({1.0, kSqrt2, kSqrt2, lz});
        for (int deg = 0; deg <= 85; deg += 5) {
            for (double theta : {deg * kDeg, kPi - deg * kDeg}) {
                const Direction wo = from_angles(theta, 0.4);
                const double q = integrate_sphere(
                    [&](const Direction& m) { return std::max(0.0, -dot(wo, m)) * generalized_ndf(m, a3); }, -wo);
                const double pa = projected_area(wo, a3);
                denominator = std::max(denominator, std::fabs(q - pa) / pa);
            }
        }
    }
    s.at_most("denominator-is-projected-area", denominator, 1e-2, "max relative error, lz in {1, 2, 10}");

    RandomStream rng(s.options().seed, 0x3c2);
    double norm = 0;
    for (int i = 0; i < 5; ++i) {
        const Direction wo = random_direction(rng);
        for (NdfKind kind : {NdfKind::Generalized, NdfKind::Beckmann, NdfKind::GGX}) {
            const RoughnessTriple a3{0.6, 0.9, 0.8};
            if (kind != NdfKind::Generalized && std::fabs(wo.z) < 0.05)
                continue;
            const double q =
                integrate_sphere([&](const Direction& m) { return vndf_eval(m, wo, kind, a3); }, -wo);
            norm = std::max(norm, std::fabs(q - 1.0));
        }
    }
    s.at_most("normalization", norm, 1e-3, "max |int D_wo - 1|, 5 random directions");

    const auto a3 = RoughnessTriple::isotropic(1.0);
    const Direction wo = from_angles(135 * kDeg, 0.0);
    const int n = 100000;
    double sum = 0;
    for (int i = 0; i < n; ++i) {
        const VndfSample smp = vndf_sample(wo, NdfKind::Generalized, a3, 0.5, rng);
        const double w = vndf_eval(smp.wm, wo, NdfKind::Generalized, a3) / smp.pdf;
        sum += w;
    }
    s.at_most("sampler-unbiased", std::fabs(sum / n - 1.0), 1e-2, "|mean D_wo/pdf - 1|, 1e5 draws at 45 deg");

    double self = 0;
    for (int i = 0; i < 1000; ++i) {
        const Direction w = random_direction(rng);
        const Direction wv = w.z < 0.05 ? from_angles(150 * kDeg, 1.0) : -w;
        const RoughnessTriple hf{0.4, 0.7, 0};
        const VndfSample smp = vndf_sample(wv, NdfKind::Beckmann, hf, 1.0, rng);
        self = std::max(self, std::fabs(vndf_eval(smp.wm, wv, NdfKind::Beckmann, hf) / smp.pdf - 1.0));
    }
    s.at_most("height-field-self-consistency", self, 1e-9, "max |D_wo/pdf - 1| for R = 1, az = 0");
}

void phase_suite(Suite& s) {
    MacrofacetMedium m;
    m.a3 = RoughnessTriple::isotropic(1.0);
    const Frame frame = build_frame(Direction{});
    RandomStream rng(s.options().seed, 0x4d3);
    double recip = 0;
    for (int i = 0; i < 10000; ++i) {
        MacrofacetMedium mm = m;
        mm.a3 = {0.2 + rng.uniform(), 0.2 + rng.uniform(), 0.1 + rng.uniform()};
        const Direction wo = random_direction(rng);
        const Direction wi = random_direction(rng);
        if (local_projected_area(wo, mm) < 1e-10 || local_projected_area(-wi, mm) < 1e-10)
            continue;
        const double lhs = local_projected_area(wo, mm) * phase_eval(wo, wi, mm, frame).r;
        const double rhs = local_projected_area(-wi, mm) * phase_eval(-wi, -wo, mm, frame).r;
        recip = std::max(recip, std::fabs(lhs - rhs) / std::max(1.0, std::fabs(lhs)));
    }
    s.at_most("reciprocity", recip, 1e-12, "max |sigma(wo) p(wo, wi) - sigma(-wi) p(-wi, -wo)|");

    m.unit_fresnel = true;
    double norm = 0;
    for (double deg : {150.0, 120.0, 30.0, 91.0}) {
        const Direction wo = from_angles(deg * kDeg, 0.3);
        const double q = integrate_sphere([&](const Direction& wi) { return phase_eval(wo, wi, m, frame).r; }, wo, 32);
        norm = std::max(norm, std::fabs(q - 1.0));
    }
    s.at_most("normalization", norm, 1e-2, "max |int p dwi - 1| with F = 1");

    const Direction wo = from_angles(150 * kDeg, 0);
    const int n = 100000;
    double sum = 0;
    for (int i = 0; i < n; ++i)
        sum += phase_sample(wo, m, frame, rng).weight.r;
    s.at_most("sample-weight-mean", std::fabs(sum / n - 1.0), 2e-2, "|mean weight - 1| with F = 1, 1e5 draws");

    MacrofacetMedium hf = m;
    hf.kind = NdfKind::Beckmann;
    hf.a3 = {0.5, 0.5, 0};
    hf.mix_ratio = 1.0;
    double exact = 0;
    for (int i = 0; i < 1000; ++i)
        exact = std::max(exact, std::fabs(phase_sample(wo, hf, frame, rng).weight.r - 1.0));
    s.at_most("height-field-weight", exact, 1e-9, "max |weight - 1| for Beckmann, F = 1");
}

ShellScene flat_shell_scene(const MacrofacetMedium& m) {
    ShellScene scene;
    scene.shells.push_back({"plane", SdfPrimitive(Plane{0.0}), m});
    scene.environment.constant = Rgb(1.0);
    return scene;
}

void transmittance_suite(Suite& s) {
    MacrofacetMedium m;
    m.a3 = RoughnessTriple::isotropic(1.0);
    const ShellScene scene = flat_shell_scene(m);
    RandomStream rng(s.options().seed, 0x5e4);
    double worst_z = 0;
    const double length = 2.0;
    for (double z0 : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
        for (double deg : {20.0, 45.0, 70.0, 110.0, 150.0}) {
            const SphericalAngles w{deg * kDeg, 0.6};
            const Ray ray{{0.1, -0.2, z0}, w.to_direction(), length};
            const TransmittanceEstimate est = transmittance_estimate(ray, scene, 40000, rng);
            const double h1 = std::min(z0 + length * std::cos(w.theta), m.shell_half_width());
            const double closed = planar_transmittance(z0, h1, w, m);
            const double z = std::fabs(est.mean - closed) / std::max(est.std_error, 1e-12);
            worst_z = std::max(worst_z, est.std_error == 0 ? (est.mean == closed ? 0.0 : kInfinity) : z);
        }
    }
    s.at_most("estimator-vs-closed-form", worst_z, 3.0, "max z-score over a 5x5 (z0, theta) grid");

    double multiplicative = 0;
    for (double deg : {10.0, 45.0, 80.0, 100.0, 170.0}) {
        const SphericalAngles w{deg * kDeg, 0};
        const double c = std::cos(w.theta);
        for (double h0 : {-2.5, 0.0, 1.5}) {
            const double h2 = h0 + 1.0 * c;
            const double h1 = h0 + 0.37 * c;
            const double full = planar_transmittance(h0, h2, w, m);
            const double split = planar_transmittance(h0, h1, w, m) * planar_transmittance(h1, h2, w, m);
            multiplicative = std::max(multiplicative, std::fabs(full - split));
        }
    }
    s.at_most("closed-form-multiplicative", multiplicative, 1e-12, "max |Tr(h0,h2) - Tr(h0,h1) Tr(h1,h2)|");
}

void furnace_suite(Suite& s) {
    MacrofacetMedium m;
    m.a3 = RoughnessTriple::isotropic(1.0);
    m.unit_fresnel = true;
    ShellScene scene = flat_shell_scene(m);
    scene.camera.width = 16;
    scene.camera.height = 16;
    RenderSettings settings;
    settings.spp = 64;
    settings.seed = s.options().seed;
    settings.threads = s.options().threads;
    const RadianceImage img = render(scene, settings);
    s.at_most("flat-shell-unit-fresnel", std::fabs(img.mean().r - 1.0), 2e-2, "|mean pixel - 1|, 16x16 at 64 spp");

    scene.environment.constant = Rgb(0.0);
    const RadianceImage dark = render(scene, settings);
    double peak = 0;
    for (const Rgb& p : dark.pixels)
        peak = std::max({peak, p.r, p.g, p.b});
    s.at_most("black-environment", peak, 0.0, "max pixel with zero lighting");
}

void multiplicativity_suite(Suite& s) {
    const KernelParams kernel{1.0, kSqrt2, kSqrt2, kSqrt2};
    OracleSettings settings;
    settings.realizations = 256;
    settings.seed = s.options().seed;
    settings.threads = s.options().threads;
    const SphericalAngles w{std::acos(0.1), 0.0};
    const auto rows = multiplicativity_probe(kernel, 0.0, w, 3.0, {0.5, 1.0, 1.5, 2.0, 2.5}, settings);
    double best_z = 0, worst_closed = 0, best_gap = 0;
    for (const auto& r : rows) {
        best_z = std::max(best_z, r.std_error > 0 ? r.gap / r.std_error : 0.0);
        best_gap = std::max(best_gap, r.gap);
        worst_closed = std::max(worst_closed, r.closed_form_gap);
    }
    std::ostringstream d;
    d << "largest oracle gap " << format_real(best_gap) << ", M = 256";
    s.at_least("oracle-gap-significant", best_z, 3.0, d.str());
    s.at_most("medium-gap", worst_closed, 1e-12, "closed-form gap on the same rays");
}

}  // namespace

ValidationOps mutated_ops(const std::string& mutation) {
    ValidationOps ops;
    if (mutation.empty())
        return ops;
    if (mutation == "ndf-sign") {
        ops.generalized_ndf = [](const Direction& wm, const RoughnessTriple& a3) {
            return generalized_ndf(Direction::unchecked({wm.x, wm.y, -wm.z}), a3);
        };
        return ops;
    }
    if (mutation == "lambda-sign") {
        ops.generalized_lambda = [](const Direction& w, const RoughnessTriple& a3) {
            return generalized_lambda(Direction::unchecked({w.x, w.y, std::fabs(w.z)}), a3);
        };
        return ops;
    }
    throw ParameterDomainError("unknown mutation '" + mutation + "' (ndf-sign|lambda-sign)");
}

const std::vector<std::string>& validation_suites() {
    static const std::vector<std::string> names{"special-functions", "lambda",    "ndf",     "vndf",
                                                "phase",             "transmittance", "furnace", "multiplicativity"};
    return names;
}

std::vector<Check> run_validation(const std::string& suite, const ValidationOptions& options) {
    std::vector<Check> out;
    const auto& names = validation_suites();
    if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
        throw ParameterDomainError("unknown suite '" + suite + "'");
    for (const std::string& name : names) {
        if (suite != "all" && suite != name)
            continue;
        Suite s(name, options, out);
        if (name == "special-functions")
            special_functions(s);
        else if (name == "lambda")
            lambda_suite(s);
        else if (name == "ndf")
            ndf_suite(s);
        else if (name == "vndf")
            vndf_suite(s);
        else if (name == "phase")
            phase_suite(s);
        else if (name == "transmittance")
            transmittance_suite(s);
        else if (name == "furnace")
            furnace_suite(s);
        else
            multiplicativity_suite(s);
    }
    return out;
}

std::string format_check(const Check& c) {
    std::ostringstream o;
    o << (c.passed ? "PASS " : "FAIL ") << c.suite << "." << c.name << " measured=" << format_real(c.measured)
      << (c.at_least ? " required>=" : " tolerance<=") << format_real(c.tolerance);
    if (!c.detail.empty())
        o << "  (" << c.detail << ")";
    return o.str();
}

}  // namespace macrofacet
