// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#include <macrofacet/config.hpp>

#include <macrofacet/error.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace macrofacet {

KernelParams MediumSpec::kernel() const {
    if (by_roughness)
        return kernel_from_roughness(sigma, {roughness.x, roughness.y, roughness.z});
    KernelParams k{sigma, lengths.x, lengths.y, lengths.z};
    k.validate();
    return k;
}

RoughnessTriple MediumSpec::roughness_triple() const {
    if (by_roughness) {
        RoughnessTriple a{roughness.x, roughness.y, roughness.z};
        a.validate();
        return a;
    }
    return roughness_from_kernel(kernel());
}

MacrofacetMedium MediumSpec::medium() const {
    MacrofacetMedium m;
    m.kind = kind;
    m.a3 = roughness_triple();
    m.sigma = sigma;
    m.fresnel_eta = fresnel_eta;
    m.fresnel_k = fresnel_k;
    m.mix_ratio = mix_ratio;
    m.unit_fresnel = unit_fresnel;
    m.validate();
    return m;
}

SdfPrimitive PrimitiveSpec::primitive() const {
    if (shape == "plane")
        return SdfPrimitive(Plane{z0});
    if (shape == "sphere")
        return SdfPrimitive(Sphere{center, radius});
    if (shape == "box")
        return SdfPrimitive(Box{center, half_extents});
    throw ConfigError("primitive '" + name + "': unknown shape '" + shape + "' (plane|sphere|box)");
}

OracleSettings OracleSpec::settings() const {
    OracleSettings s;
    s.realizations = realizations;
    s.rays_per_realization = rays_per_realization;
    s.grid_n = grid_n;
    s.cells_per_length = cells_per_length;
    s.seed = seed;
    s.validate();
    return s;
}

std::string format_real(double v) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

struct Entry {
    std::string value;
    int line = 0;
};

struct Section {
    std::string name;
    int line = 0;
    std::map<std::string, Entry> entries;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double parse_real(const Entry& e, const std::string& key) {
    const std::string v = trim(e.value);
    double out = 0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    if (!v.empty() && v[0] == '+')
        ++first;
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc() || res.ptr != last || std::isnan(out))
        fail(e.line, "'" + key + "' expects a real number, got '" + v + "'");
    return out;
}

std::vector<double> parse_reals(const Entry& e, const std::string& key) {
    std::string v = e.value;
    std::replace(v.begin(), v.end(), ',', ' ');
    std::istringstream in(v);
    std::vector<double> out;
    std::string tok;
    while (in >> tok)
        out.push_back(parse_real({tok, e.line}, key));
    return out;
}

Vec3 parse_vec3(const Entry& e, const std::string& key) {
    const auto v = parse_reals(e, key);
    if (v.size() != 3)
        fail(e.line, "'" + key + "' expects three reals");
    return {v[0], v[1], v[2]};
}

Rgb parse_rgb(const Entry& e, const std::string& key) {
    const auto v = parse_reals(e, key);
    if (v.size() == 1)
        return Rgb(v[0]);
    if (v.size() != 3)
        fail(e.line, "'" + key + "' expects one or three reals");
    return {v[0], v[1], v[2]};
}

template <class Int>
Int parse_int(const Entry& e, const std::string& key) {
    const std::string v = trim(e.value);
    Int out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        fail(e.line, "'" + key + "' expects an integer, got '" + v + "'");
    return out;
}

bool parse_bool(const Entry& e, const std::string& key) {
    const std::string v = trim(e.value);
    if (v == "true" || v == "yes" || v == "1")
        return true;
    if (v == "false" || v == "no" || v == "0")
        return false;
    fail(e.line, "'" + key + "' expects true or false, got '" + v + "'");
}

const std::set<std::string> kKernelKeys{"sigma", "lx", "ly", "lz", "ax", "ay", "az"};
const std::set<std::string> kMediumKeys{"kind", "fresnel_eta", "fresnel_k", "mix_ratio", "unit_fresnel"};
const std::set<std::string> kSceneKeys{"camera_position", "look_at",        "up",         "vfov",
                                       "width",           "height",         "environment", "environment_map",
                                       "sun_direction",   "sun_irradiance", "background", "max_distance"};
const std::set<std::string> kRenderKeys{"spp", "seed", "max_bounces"};
const std::set<std::string> kOracleKeys{"realizations", "rays_per_realization", "grid_n", "cells_per_length", "seed"};
const std::set<std::string> kPrimitiveKeys{"shape", "z0", "center", "radius", "half_extents"};

void check_keys(const Section& s, std::initializer_list<const std::set<std::string>*> allowed) {
    for (const auto& [key, entry] : s.entries) {
        bool ok = false;
        for (const auto* set : allowed)
            ok = ok || set->count(key) > 0;
        if (!ok)
            fail(entry.line, "unknown key '" + key + "' in section [" + s.name + "]");
    }
}

void apply_kernel(const Section& s, MediumSpec& m) {
    const auto& e = s.entries;
    const bool has_l = e.count("lx") || e.count("ly") || e.count("lz");
    const bool has_a = e.count("ax") || e.count("ay") || e.count("az");
    if (has_l && has_a)
        fail(s.line, "section [" + s.name + "] gives both correlation lengths (l*) and roughness (a*); use one");
    if (auto it = e.find("sigma"); it != e.end())
        m.sigma = parse_real(it->second, "sigma");
    if (has_l) {
        if (m.by_roughness) {
            m.by_roughness = false;
            m.lengths = {kSqrt2 * m.sigma / m.roughness.x, kSqrt2 * m.sigma / m.roughness.y,
                         m.roughness.z > 0 ? kSqrt2 * m.sigma / m.roughness.z : kInfinity};
        }
        if (auto it = e.find("lx"); it != e.end())
            m.lengths.x = parse_real(it->second, "lx");
        if (auto it = e.find("ly"); it != e.end())
            m.lengths.y = parse_real(it->second, "ly");
        if (auto it = e.find("lz"); it != e.end())
            m.lengths.z = parse_real(it->second, "lz");
    }
    if (has_a) {
        if (!m.by_roughness) {
            const RoughnessTriple r = roughness_from_kernel({m.sigma, m.lengths.x, m.lengths.y, m.lengths.z});
            m.by_roughness = true;
            m.roughness = {r.ax, r.ay, r.az};
        }
        if (auto it = e.find("ax"); it != e.end())
            m.roughness.x = parse_real(it->second, "ax");
        if (auto it = e.find("ay"); it != e.end())
            m.roughness.y = parse_real(it->second, "ay");
        if (auto it = e.find("az"); it != e.end())
            m.roughness.z = parse_real(it->second, "az");
    }
}

void apply_medium(const Section& s, MediumSpec& m) {
    const auto& e = s.entries;
    if (auto it = e.find("kind"); it != e.end()) {
        try {
            m.kind = ndf_kind_from_string(trim(it->second.value));
        } catch (const ParameterDomainError& err) {
            fail(it->second.line, err.what());
        }
    }
    if (auto it = e.find("fresnel_eta"); it != e.end())
        m.fresnel_eta = parse_rgb(it->second, "fresnel_eta");
    if (auto it = e.find("fresnel_k"); it != e.end())
        m.fresnel_k = parse_rgb(it->second, "fresnel_k");
    if (auto it = e.find("mix_ratio"); it != e.end())
        m.mix_ratio = parse_real(it->second, "mix_ratio");
    if (auto it = e.find("unit_fresnel"); it != e.end())
        m.unit_fresnel = parse_bool(it->second, "unit_fresnel");
}

// Values are checked where they are read so errors carry a line number.
void check_medium(const MediumSpec& m, int line, const std::string& where) {
    try {
        m.medium().validate();
    } catch (const ParameterDomainError& err) {
        fail(line, where + ": " + err.what());
    }
}

std::vector<Section> split_sections(const std::string& text) {
    std::vector<Section> sections;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find_first_of("#;"); hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                fail(line_no, "malformed section header '" + line + "'");
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (name.empty())
                fail(line_no, "empty section name");
            for (const Section& s : sections)
                if (s.name == name)
                    fail(line_no, "duplicate section [" + name + "]");
            sections.push_back({name, line_no, {}});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(line_no, "expected 'key = value', got '" + line + "'");
        if (sections.empty())
            fail(line_no, "key outside of any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            fail(line_no, "empty key");
        auto& entries = sections.back().entries;
        if (entries.count(key))
            fail(line_no, "duplicate key '" + key + "' in section [" + sections.back().name + "]");
        entries[key] = {value, line_no};
    }
    return sections;
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& base_directory) {
    Config cfg;
    cfg.base_directory = base_directory;
    const std::vector<Section> sections = split_sections(text);

    // Global kernel and medium first: primitives inherit them regardless of
    // section order.
    for (const Section& s : sections) {
        if (s.name == "kernel") {
            check_keys(s, {&kKernelKeys});
            apply_kernel(s, cfg.medium);
        } else if (s.name == "medium") {
            check_keys(s, {&kMediumKeys});
            apply_medium(s, cfg.medium);
        }
    }
    for (const Section& s : sections) {
        const auto& e = s.entries;
        if (s.name == "kernel" || s.name == "medium")
            continue;
        if (s.name == "scene") {
            check_keys(s, {&kSceneKeys});
            SceneSpec& sc = cfg.scene;
            if (auto it = e.find("camera_position"); it != e.end())
                sc.camera_position = parse_vec3(it->second, it->first);
            if (auto it = e.find("look_at"); it != e.end())
                sc.look_at = parse_vec3(it->second, it->first);
            if (auto it = e.find("up"); it != e.end())
                sc.up = parse_vec3(it->second, it->first);
            if (auto it = e.find("vfov"); it != e.end())
                sc.vfov = parse_real(it->second, it->first);
            if (auto it = e.find("width"); it != e.end())
                sc.width = parse_int<int>(it->second, it->first);
            if (auto it = e.find("height"); it != e.end())
                sc.height = parse_int<int>(it->second, it->first);
            if (auto it = e.find("environment"); it != e.end())
                sc.environment = parse_rgb(it->second, it->first);
            if (auto it = e.find("environment_map"); it != e.end())
                sc.environment_map = it->second.value;
            if (auto it = e.find("sun_direction"); it != e.end())
                sc.sun_direction = parse_vec3(it->second, it->first);
            if (auto it = e.find("sun_irradiance"); it != e.end())
                sc.sun_irradiance = parse_rgb(it->second, it->first);
            if (auto it = e.find("background"); it != e.end())
                sc.background = parse_rgb(it->second, it->first);
            if (auto it = e.find("max_distance"); it != e.end())
                sc.max_distance = parse_real(it->second, it->first);
        } else if (s.name == "render") {
            check_keys(s, {&kRenderKeys});
            if (auto it = e.find("spp"); it != e.end())
                cfg.render.spp = parse_int<int>(it->second, it->first);
            if (auto it = e.find("seed"); it != e.end())
                cfg.render.seed = parse_int<std::uint64_t>(it->second, it->first);
            if (auto it = e.find("max_bounces"); it != e.end())
                cfg.render.max_bounces = parse_int<int>(it->second, it->first);
        } else if (s.name == "oracle") {
            check_keys(s, {&kOracleKeys});
            OracleSpec& o = cfg.oracle;
            if (auto it = e.find("realizations"); it != e.end())
                o.realizations = parse_int<int>(it->second, it->first);
            if (auto it = e.find("rays_per_realization"); it != e.end())
                o.rays_per_realization = parse_int<int>(it->second, it->first);
            if (auto it = e.find("grid_n"); it != e.end())
                o.grid_n = parse_int<int>(it->second, it->first);
            if (auto it = e.find("cells_per_length"); it != e.end())
                o.cells_per_length = parse_int<int>(it->second, it->first);
            if (auto it = e.find("seed"); it != e.end())
                o.seed = parse_int<std::uint64_t>(it->second, it->first);
        } else if (s.name.rfind("primitive.", 0) == 0) {
            check_keys(s, {&kPrimitiveKeys, &kKernelKeys, &kMediumKeys});
            PrimitiveSpec p;
            p.name = s.name.substr(std::string("primitive.").size());
            if (p.name.empty())
                fail(s.line, "primitive section needs a name: [primitive.<name>]");
            p.medium = cfg.medium;
            apply_kernel(s, p.medium);
            apply_medium(s, p.medium);
            if (auto it = e.find("shape"); it != e.end())
                p.shape = trim(it->second.value);
            if (p.shape != "plane" && p.shape != "sphere" && p.shape != "box")
                fail(s.line, "primitive '" + p.name + "': unknown shape '" + p.shape + "' (plane|sphere|box)");
            if (auto it = e.find("z0"); it != e.end())
                p.z0 = parse_real(it->second, it->first);
            if (auto it = e.find("center"); it != e.end())
                p.center = parse_vec3(it->second, it->first);
            if (auto it = e.find("radius"); it != e.end())
                p.radius = parse_real(it->second, it->first);
            if (auto it = e.find("half_extents"); it != e.end())
                p.half_extents = parse_vec3(it->second, it->first);
            check_medium(p.medium, s.line, "primitive '" + p.name + "'");
            try {
                (void)p.primitive();
            } catch (const ParameterDomainError& err) {
                fail(s.line, "primitive '" + p.name + "': " + err.what());
            }
            cfg.primitives.push_back(std::move(p));
        } else {
            fail(s.line, "unknown section [" + s.name + "]");
        }
    }
    // The global medium only has to be usable on its own when no primitive
    // overrides it (primitives may switch kind and kernel together).
    if (cfg.primitives.empty()) {
        int line = 0;
        for (const Section& s : sections)
            if (s.name == "kernel" || s.name == "medium")
                line = s.line;
        check_medium(cfg.medium, line, "global medium");
    }
    return cfg;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string dir = std::filesystem::path(path).parent_path().string();
    try {
        return parse(buf.str(), dir);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

namespace {

std::string fmt3(const Vec3& v) { return format_real(v.x) + " " + format_real(v.y) + " " + format_real(v.z); }
std::string fmt_rgb(const Rgb& c) { return format_real(c.r) + " " + format_real(c.g) + " " + format_real(c.b); }

void write_kernel(std::ostream& out, const MediumSpec& m) {
    out << "sigma = " << format_real(m.sigma) << "\n";
    if (m.by_roughness)
        out << "ax = " << format_real(m.roughness.x) << "\nay = " << format_real(m.roughness.y)
            << "\naz = " << format_real(m.roughness.z) << "\n";
    else
        out << "lx = " << format_real(m.lengths.x) << "\nly = " << format_real(m.lengths.y)
            << "\nlz = " << format_real(m.lengths.z) << "\n";
}

void write_medium(std::ostream& out, const MediumSpec& m) {
    out << "kind = " << to_string(m.kind) << "\n";
    out << "fresnel_eta = " << fmt_rgb(m.fresnel_eta) << "\n";
    out << "fresnel_k = " << fmt_rgb(m.fresnel_k) << "\n";
    out << "mix_ratio = " << format_real(m.mix_ratio) << "\n";
    out << "unit_fresnel = " << (m.unit_fresnel ? "true" : "false") << "\n";
}

}  // namespace

std::string Config::serialize() const {
    std::ostringstream out;
    out << "[kernel]\n";
    write_kernel(out, medium);
    out << "\n[medium]\n";
    write_medium(out, medium);
    out << "\n[scene]\n";
    out << "camera_position = " << fmt3(scene.camera_position) << "\n";
    out << "look_at = " << fmt3(scene.look_at) << "\n";
    out << "up = " << fmt3(scene.up) << "\n";
    out << "vfov = " << format_real(scene.vfov) << "\n";
    out << "width = " << scene.width << "\n";
    out << "height = " << scene.height << "\n";
    out << "environment = " << fmt_rgb(scene.environment) << "\n";
    if (!scene.environment_map.empty())
        out << "environment_map = " << scene.environment_map << "\n";
    if (scene.sun_direction)
        out << "sun_direction = " << fmt3(*scene.sun_direction) << "\n";
    out << "sun_irradiance = " << fmt_rgb(scene.sun_irradiance) << "\n";
    if (scene.background)
        out << "background = " << fmt_rgb(*scene.background) << "\n";
    out << "max_distance = " << format_real(scene.max_distance) << "\n";
    out << "\n[render]\n";
    out << "spp = " << render.spp << "\nseed = " << render.seed << "\nmax_bounces = " << render.max_bounces << "\n";
    out << "\n[oracle]\n";
    out << "realizations = " << oracle.realizations << "\nrays_per_realization = " << oracle.rays_per_realization
        << "\ngrid_n = " << oracle.grid_n << "\ncells_per_length = " << oracle.cells_per_length
        << "\nseed = " << oracle.seed << "\n";
    for (const PrimitiveSpec& p : primitives) {
        out << "\n[primitive." << p.name << "]\n";
        out << "shape = " << p.shape << "\n";
        out << "z0 = " << format_real(p.z0) << "\n";
        out << "center = " << fmt3(p.center) << "\n";
        out << "radius = " << format_real(p.radius) << "\n";
        out << "half_extents = " << fmt3(p.half_extents) << "\n";
        write_kernel(out, p.medium);
        write_medium(out, p.medium);
    }
    return out.str();
}

ShellScene Config::build_scene() const {
    ShellScene s;
    s.camera.position = scene.camera_position;
    s.camera.look_at = scene.look_at;
    s.camera.up = scene.up;
    s.camera.vfov_deg = scene.vfov;
    s.camera.width = scene.width;
    s.camera.height = scene.height;
    s.environment.constant = scene.environment;
    if (!scene.environment_map.empty()) {
        std::filesystem::path p(scene.environment_map);
        if (p.is_relative() && !base_directory.empty())
            p = std::filesystem::path(base_directory) / p;
        s.environment.map = read_pfm(p.string());
    }
    if (scene.sun_direction) {
        try {
            s.sun = DirectionalLight{Direction::normalize(*scene.sun_direction), scene.sun_irradiance};
        } catch (const ParameterDomainError&) {
            throw ConfigError("sun_direction must be a non-zero vector");
        }
    }
    s.background = scene.background;
    s.max_distance = scene.max_distance;
    for (const PrimitiveSpec& p : primitives)
        s.shells.push_back({p.name, p.primitive(), p.medium.medium()});
    s.validate();
    return s;
}

}  // namespace macrofacet
