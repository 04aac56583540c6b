// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#include <macrofacet/config.hpp>
#include <macrofacet/csv.hpp>
#include <macrofacet/error.hpp>
#include <macrofacet/gp_oracle.hpp>
#include <macrofacet/medium.hpp>
#include <macrofacet/ndf.hpp>
#include <macrofacet/renderer.hpp>
#include <macrofacet/special.hpp>
#include <macrofacet/tracking.hpp>
#include <macrofacet/validate.hpp>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

namespace py = pybind11;
namespace mf = macrofacet;

namespace {

mf::RoughnessTriple triple(double ax, double ay, double az) { return {ax, ay, az}; }

mf::Direction angles(double theta, double phi) { return mf::SphericalAngles{theta, phi}.to_direction(); }

mf::Direction direction(const std::array<double, 3>& v) { return mf::Direction::normalize({v[0], v[1], v[2]}); }

mf::MacrofacetMedium make_medium(const std::string& kind, double ax, double ay, double az, double sigma,
                                 bool unit_fresnel, double mix_ratio) {
    mf::MacrofacetMedium m;
    m.kind = mf::ndf_kind_from_string(kind);
    m.a3 = {ax, ay, az};
    m.sigma = sigma;
    m.unit_fresnel = unit_fresnel;
    m.mix_ratio = mix_ratio;
    m.validate();
    return m;
}

py::array_t<float> image_array(const mf::RadianceImage& img) {
    py::array_t<float> out({img.height, img.width, 3});
    auto v = out.mutable_unchecked<3>();
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const mf::Rgb& p = img.at(x, y);
            v(y, x, 0) = static_cast<float>(p.r);
            v(y, x, 1) = static_cast<float>(p.g);
            v(y, x, 2) = static_cast<float>(p.b);
        }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Macrofacet media: Gaussian-process surfaces as exponential volumes";
    m.attr("__version__") = mf::kVersion;

    auto base = py::register_exception<mf::Error>(m, "Error");
    py::register_exception<mf::ParameterDomainError>(m, "ParameterDomainError", base.ptr());
    py::register_exception<mf::NumericFailure>(m, "NumericFailure", base.ptr());
    py::register_exception<mf::ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<mf::IoError>(m, "IoError", base.ptr());

    m.def("erf", &mf::erf, py::arg("x"));
    m.def("erfc", &mf::erfc, py::arg("x"));
    m.def("gauss_pdf", &mf::gauss_pdf, py::arg("x"), py::arg("mu") = 0.0, py::arg("var") = 1.0);
    m.def("gauss_cdf", &mf::gauss_cdf, py::arg("x"), py::arg("mu") = 0.0, py::arg("var") = 1.0);

    m.def(
        "roughness_from_kernel",
        [](double sigma, double lx, double ly, double lz) {
            const mf::RoughnessTriple a = mf::roughness_from_kernel({sigma, lx, ly, lz});
            return std::make_tuple(a.ax, a.ay, a.az);
        },
        py::arg("sigma"), py::arg("lx"), py::arg("ly"), py::arg("lz"));
    m.def(
        "generalized_lambda",
        [](double theta, double phi, double ax, double ay, double az) {
            return mf::generalized_lambda(mf::SphericalAngles{theta, phi}, triple(ax, ay, az));
        },
        py::arg("theta"), py::arg("phi"), py::arg("ax"), py::arg("ay"), py::arg("az"));
    m.def(
        "projected_area",
        [](double theta, double phi, double ax, double ay, double az) {
            return mf::projected_area(mf::SphericalAngles{theta, phi}, triple(ax, ay, az));
        },
        py::arg("theta"), py::arg("phi"), py::arg("ax"), py::arg("ay"), py::arg("az"));
    m.def(
        "generalized_ndf",
        [](double theta, double phi, double ax, double ay, double az) {
            return mf::generalized_ndf(mf::SphericalAngles{theta, phi}, triple(ax, ay, az));
        },
        py::arg("theta"), py::arg("phi"), py::arg("ax"), py::arg("ay"), py::arg("az"));
    m.def(
        "ndf_from_gdf_quadrature",
        [](double theta, double phi, double ax, double ay, double az) {
            return mf::ndf_from_gdf_quadrature(mf::SphericalAngles{theta, phi}, triple(ax, ay, az));
        },
        py::arg("theta"), py::arg("phi"), py::arg("ax"), py::arg("ay"), py::arg("az"));
    m.def(
        "beckmann_ndf", [](double theta, double phi, double ax, double ay) { return mf::beckmann_ndf(angles(theta, phi), ax, ay); },
        py::arg("theta"), py::arg("phi"), py::arg("ax"), py::arg("ay"));
    m.def(
        "ggx_ndf", [](double theta, double phi, double ax, double ay) { return mf::ggx_ndf(angles(theta, phi), ax, ay); },
        py::arg("theta"), py::arg("phi"), py::arg("ax"), py::arg("ay"));
    m.def(
        "vndf_eval",
        [](const std::array<double, 3>& wm, const std::array<double, 3>& wo, const std::string& kind, double ax,
           double ay, double az) {
            return mf::vndf_eval(direction(wm), direction(wo), mf::ndf_kind_from_string(kind), triple(ax, ay, az));
        },
        py::arg("wm"), py::arg("wo"), py::arg("kind"), py::arg("ax"), py::arg("ay"), py::arg("az"));

    m.def("density", &mf::density, py::arg("f"), py::arg("sigma"));
    m.def(
        "planar_transmittance",
        [](double h0, double h1, double theta, double phi, const std::string& kind, double ax, double ay, double az,
           double sigma) {
            return mf::planar_transmittance(h0, h1, mf::SphericalAngles{theta, phi},
                                            make_medium(kind, ax, ay, az, sigma, false, 0.5));
        },
        py::arg("h0"), py::arg("h1"), py::arg("theta"), py::arg("phi"), py::arg("kind") = "generalized",
        py::arg("ax") = 1.0, py::arg("ay") = 1.0, py::arg("az") = 1.0, py::arg("sigma") = 1.0);
    m.def("fresnel_conductor", py::overload_cast<double, double, double>(&mf::fresnel_conductor), py::arg("cos_i"),
          py::arg("eta"), py::arg("k"));
    m.def(
        "phase_eval",
        [](const std::array<double, 3>& wo, const std::array<double, 3>& wi, const std::string& kind, double ax,
           double ay, double az, bool unit_fresnel) {
            const mf::Rgb p = mf::phase_eval(direction(wo), direction(wi),
                                             make_medium(kind, ax, ay, az, 1.0, unit_fresnel, 0.5),
                                             mf::build_frame(mf::Direction{}));
            return std::make_tuple(p.r, p.g, p.b);
        },
        py::arg("wo"), py::arg("wi"), py::arg("kind") = "generalized", py::arg("ax") = 1.0, py::arg("ay") = 1.0,
        py::arg("az") = 1.0, py::arg("unit_fresnel") = false);

    m.def(
        "parse_config", [](const std::string& text) { return mf::Config::parse(text).serialize(); }, py::arg("text"),
        "Parse a config document and return its canonical serialization.");
    m.def(
        "render_config",
        [](const std::string& text, int spp, std::uint64_t seed, int threads) {
            const mf::Config cfg = mf::Config::parse(text);
            const mf::ShellScene scene = cfg.build_scene();
            mf::RenderSettings s;
            s.spp = spp;
            s.seed = seed;
            s.max_bounces = cfg.render.max_bounces;
            s.threads = threads;
            mf::RadianceImage img;
            {
                py::gil_scoped_release release;
                img = mf::render(scene, s);
            }
            return image_array(img);
        },
        py::arg("text"), py::arg("spp") = 16, py::arg("seed") = 0, py::arg("threads") = 0,
        "Render a config document; returns a float32 array of shape (height, width, 3).");
    m.def(
        "encode_pfm",
        [](const py::array_t<float, py::array::c_style | py::array::forcecast>& a) {
            if (a.ndim() != 3 || a.shape(2) != 3)
                throw mf::ParameterDomainError("expected an array of shape (height, width, 3)");
            mf::RadianceImage img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
            auto v = a.unchecked<3>();
            for (int y = 0; y < img.height; ++y)
                for (int x = 0; x < img.width; ++x)
                    img.at(x, y) = {v(y, x, 0), v(y, x, 1), v(y, x, 2)};
            return py::bytes(mf::encode_pfm(img));
        },
        py::arg("image"));

    m.def(
        "transmittance_estimate",
        [](const std::array<double, 3>& origin, const std::array<double, 3>& dir, double tmax, double sigma,
           double alpha, int n, std::uint64_t seed) {
            mf::ShellScene scene;
            mf::MacrofacetMedium med;
            med.sigma = sigma;
            med.a3 = mf::RoughnessTriple::isotropic(alpha);
            scene.shells.push_back({"plane", mf::SdfPrimitive(mf::Plane{0.0}), med});
            mf::RandomStream rng(seed, 0);
            const mf::Ray ray{{origin[0], origin[1], origin[2]}, direction(dir), tmax};
            const mf::TransmittanceEstimate e = mf::transmittance_estimate(ray, scene, n, rng);
            return std::make_tuple(e.mean, e.std_error);
        },
        py::arg("origin"), py::arg("direction"), py::arg("tmax"), py::arg("sigma") = 1.0, py::arg("alpha") = 1.0,
        py::arg("n") = 10000, py::arg("seed") = 0,
        "Ratio-tracking transmittance through a flat generalized shell at z = 0.");

    m.def(
        "empirical_transmittance",
        [](double sigma, double l, double z0, double theta, const std::vector<double>& t_grid, int realizations,
           int rays, std::uint64_t seed) {
            mf::OracleSettings s;
            s.realizations = realizations;
            s.rays_per_realization = rays;
            s.seed = seed;
            std::vector<mf::TransmittanceRow> rows;
            {
                py::gil_scoped_release release;
                rows = mf::empirical_transmittance({sigma, l, l, l}, z0, mf::SphericalAngles{theta, 0.0}, t_grid, s);
            }
            std::vector<std::tuple<double, double, double, double>> out;
            for (const auto& r : rows)
                out.emplace_back(r.t, r.tr, r.std_error, r.closed_form);
            return out;
        },
        py::arg("sigma"), py::arg("l"), py::arg("z0"), py::arg("theta"), py::arg("t_grid"),
        py::arg("realizations") = 64, py::arg("rays") = 64, py::arg("seed") = 0,
        "Gaussian-process oracle rows (t, Tr, std_error, closed_form) for an isotropic kernel.");

    m.def(
        "validate",
        [](const std::string& suite, const std::string& mutation) {
            mf::ValidationOptions opt;
            opt.ops = mf::mutated_ops(mutation);
            std::vector<mf::Check> checks;
            {
                py::gil_scoped_release release;
                checks = mf::run_validation(suite, opt);
            }
            py::list out;
            for (const auto& c : checks) {
                py::dict d;
                d["suite"] = c.suite;
                d["name"] = c.name;
                d["measured"] = c.measured;
                d["tolerance"] = c.tolerance;
                d["passed"] = c.passed;
                out.append(d);
            }
            return out;
        },
        py::arg("suite"), py::arg("mutation") = "");
}
