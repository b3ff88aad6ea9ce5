#pragma once

// JSON curve files, deformation traces and family manifests.
//
// Curve files:
//   {"kind":"samples","closed":true,"points":[[x,y,z],...]}
//   {"kind":"analytic","name":"torus_knot","p":2,"q":3,"R":2.0,"r":1.0,"N":2048}
// Other analytic names: circle (radius), perturbed_circle (seed,
// radial_amplitude, height_amplitude, modes), coil (k, R, a, height).
// Numbers are written rounded to 12 significant digits, so a written file
// reads back and re-writes byte-identically.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "curve.hpp"
#include "deform.hpp"
#include "error.hpp"
#include "family.hpp"
#include "writhe.hpp"

namespace writhekit {

using json = nlohmann::ordered_json;

/// v rounded to 12 significant digits.
inline double round12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

inline json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::Io, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        fail(ErrorKind::Io, path.string() + ": " + e.what());
    }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot write " + path.string());
    out << text;
    require(static_cast<bool>(out), ErrorKind::Io, "write failed for " + path.string());
}

namespace detail {

template <class T>
T field(const json& j, const char* key) {
    require(j.contains(key), ErrorKind::InvalidArgument, std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        fail(ErrorKind::InvalidArgument, std::string("field '") + key + "' has the wrong type");
    }
}

template <class T>
T field_or(const json& j, const char* key, T fallback) {
    return j.contains(key) ? field<T>(j, key) : fallback;
}

inline json vec_json(const Vec3& v) { return json::array({round12(v.x), round12(v.y), round12(v.z)}); }

}  // namespace detail

/// Curve described by `j`. `samples` overrides N for analytic curves and
/// resamples sampled ones.
inline ClosedCurve curve_from_json(const json& j, std::optional<std::size_t> samples = std::nullopt) {
    require(j.is_object(), ErrorKind::InvalidArgument, "curve description must be a JSON object");
    const auto kind = detail::field<std::string>(j, "kind");
    if (kind == "samples") {
        require(detail::field_or<bool>(j, "closed", true), ErrorKind::InvalidArgument, "only closed curves are supported");
        const json& pts = j.contains("points") ? j.at("points") : json();
        require(pts.is_array(), ErrorKind::InvalidArgument, "missing field 'points'");
        std::vector<Vec3> v;
        v.reserve(pts.size());
        for (const auto& p : pts) {
            require(p.is_array() && p.size() == 3, ErrorKind::InvalidArgument, "points must be [x,y,z] triples");
            try {
                v.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
            } catch (const json::exception&) {
                fail(ErrorKind::InvalidArgument, "point coordinates must be numbers");
            }
        }
        std::optional<ConstantInterval> iv;
        if (j.contains("constant")) {
            const auto a = detail::field<std::vector<double>>(j, "constant");
            require(a.size() == 3, ErrorKind::InvalidArgument, "'constant' must be [s0,s1,s2]");
            iv = ConstantInterval{a[0], a[1], a[2]};
        }
        ClosedCurve c(std::move(v), detail::field_or<std::string>(j, "meta", "samples"), iv);
        return samples && *samples != c.size() ? resample(c, *samples) : c;
    }
    require(kind == "analytic", ErrorKind::InvalidArgument, "unknown curve kind '" + kind + "'");
    const auto name = detail::field<std::string>(j, "name");
    const std::size_t n = samples ? *samples : detail::field<std::size_t>(j, "N");
    if (name == "torus_knot")
        return make_torus_knot(detail::field<int>(j, "p"), detail::field<int>(j, "q"), detail::field<double>(j, "R"),
                               detail::field<double>(j, "r"), n);
    if (name == "circle") return make_circle(detail::field_or<double>(j, "radius", 1.0), n);
    if (name == "perturbed_circle")
        return make_perturbed_circle(detail::field<std::uint64_t>(j, "seed"), detail::field<double>(j, "radial_amplitude"),
                                     detail::field<double>(j, "height_amplitude"), detail::field_or<int>(j, "modes", 4), n);
    if (name == "coil")
        return make_coil(detail::field<int>(j, "k"), detail::field<double>(j, "R"), detail::field<double>(j, "a"),
                         detail::field_or<double>(j, "height", 1.0), n);
    fail(ErrorKind::InvalidArgument, "unknown analytic curve '" + name + "'");
}

inline json curve_to_json(const ClosedCurve& c) {
    json j;
    j["kind"] = "samples";
    j["closed"] = true;
    j["meta"] = c.meta();
    if (const auto& iv = c.constant_interval()) j["constant"] = json::array({iv->s0, iv->s1, iv->s2});
    json pts = json::array();
    for (const auto& p : c.points()) pts.push_back(detail::vec_json(p));
    j["points"] = std::move(pts);
    return j;
}

inline ClosedCurve read_curve(const std::filesystem::path& path, std::optional<std::size_t> samples = std::nullopt) {
    return curve_from_json(read_json_file(path), samples);
}

inline void write_curve(const std::filesystem::path& path, const ClosedCurve& c) {
    write_text_file(path, curve_to_json(c).dump() + "\n");
}

/// Indicatrix points in the curve point format, for plotting.
inline json points_json(const std::vector<Vec3>& pts) {
    json j;
    j["kind"] = "samples";
    j["closed"] = true;
    json a = json::array();
    for (const auto& p : pts) a.push_back(detail::vec_json(p));
    j["points"] = std::move(a);
    return j;
}

inline json to_json(const WritheReport& r) {
    json j;
    j["method"] = to_string(r.method);
    j["N"] = r.samples;
    j["band"] = r.band;
    j["value"] = round12(r.value);
    if (r.oracle_value) j["oracle_value"] = round12(*r.oracle_value);
    if (r.oracle_delta) j["oracle_delta"] = round12(*r.oracle_delta);
    return j;
}

inline json to_json(const IndicatrixReport& r) {
    json j;
    j["N"] = r.samples;
    j["writhe"] = round12(r.writhe);
    j["area"] = round12(r.area);
    j["raw_area"] = round12(r.raw_area);
    j["fuller_lhs"] = round12(r.fuller_lhs);
    j["fuller_rhs"] = round12(r.fuller_rhs);
    j["residual_mod2"] = round12(r.residual_mod2);
    return j;
}

inline json to_json(const HelixSpec& h) {
    json j;
    j["n"] = h.n;
    j["w"] = round12(h.w);
    j["S"] = round12(h.scale);
    j["epsilon"] = round12(h.epsilon);
    j["s3"] = round12(h.s3);
    j["s4"] = round12(h.s4);
    j["C"] = round12(h.C);
    j["r"] = round12(h.r);
    j["p"] = round12(h.p);
    j["pitch_angle"] = round12(h.pitch_angle());
    return j;
}

inline json to_json(const SpliceContext& c) {
    json j;
    j["s0"] = round12(c.s0);
    j["s1"] = round12(c.s1);
    j["s2"] = round12(c.s2);
    j["s3"] = round12(c.s3);
    j["s4"] = round12(c.s4);
    j["epsilon"] = round12(c.epsilon);
    j["center"] = detail::vec_json(c.center);
    j["tangent"] = detail::vec_json(c.tangent);
    return j;
}

inline json to_json(const DeformTrace& t) {
    json j;
    j["target"] = round12(t.target);
    j["wr_input"] = round12(t.wr_input);
    j["wr_tilde"] = round12(t.wr_tilde);
    j["w"] = round12(t.w_applied);
    j["wr_output"] = round12(t.wr_output);
    j["error"] = round12(t.error());
    j["embedded_before"] = t.embedded_before;
    j["embedded_after"] = t.embedded_after;
    j["min_distance_after"] = round12(t.min_distance_after);
    j["connector_area"] = round12(t.connector_area);
    j["splice_radius"] = round12(t.splice_radius);
    j["locality"] = t.locality;
    j["dist"] = round12(t.dist);
    j["splice"] = to_json(t.ctx);
    j["helix"] = to_json(t.helix);
    return j;
}

// ---------------------------------------------------------------------------
// Family manifests
//
//   {"kind":"sphere","n":1,"resolution":64,
//    "curves":["node_000.json", ...]}                    one file per node, or
//   {"kind":"sphere_cross_interval","n":1,"resolution":16,"steps":8,
//    "generator":{"name":"coil","k":4,"R":2.0,"a":0.3,"N":2048}}
// Curve paths are relative to the manifest.

inline ParamSpace space_from_json(const json& j) {
    const auto kind = detail::field<std::string>(j, "kind");
    const int n = detail::field<int>(j, "n");
    const auto res = detail::field_or<std::size_t>(j, "resolution", 0);
    if (kind == "sphere") return ParamSpace::sphere(n, res);
    require(kind == "sphere_cross_interval", ErrorKind::InvalidArgument, "unknown parameter space '" + kind + "'");
    return ParamSpace::sphere_cross_interval(n, res, detail::field_or<std::size_t>(j, "steps", 32));
}

inline CurveFamily read_family(const std::filesystem::path& manifest, std::optional<std::size_t> samples = std::nullopt) {
    const json j = read_json_file(manifest);
    const ParamSpace space = space_from_json(j);
    if (j.contains("generator")) {
        const json& g = j.at("generator");
        const auto name = detail::field<std::string>(g, "name");
        require(name == "coil", ErrorKind::InvalidArgument, "unknown family generator '" + name + "'");
        const std::size_t n = samples ? *samples : detail::field<std::size_t>(g, "N");
        return make_coil_family(space, detail::field<int>(g, "k"), detail::field<double>(g, "R"),
                                detail::field<double>(g, "a"), n);
    }
    const auto files = detail::field<std::vector<std::string>>(j, "curves");
    require(files.size() == space.size(), ErrorKind::InvalidArgument,
            "manifest lists " + std::to_string(files.size()) + " curves for " + std::to_string(space.size()) + " nodes");
    CurveFamily f;
    f.space = space;
    for (const auto& name : files) f.curves.push_back(read_curve(manifest.parent_path() / name, samples));
    return f;
}

inline std::string family_csv(const CurveFamily& corrected) {
    std::string out = csv_header_family() + "\n";
    for (std::size_t i = 0; i < corrected.size(); ++i)
        out += csv_row(i, corrected.space.nodes[i], corrected.traces[i]) + "\n";
    return out;
}

/// Writes manifest.json, one curve file per node, and, for corrected
/// families, summary.csv and traces.json.
inline void write_family(const std::filesystem::path& dir, const CurveFamily& fam) {
    json j;
    j["kind"] = to_string(fam.space.kind);
    j["n"] = fam.space.dim;
    j["resolution"] = fam.space.resolution;
    if (fam.space.has_interval()) j["steps"] = fam.space.steps;
    if (!std::isnan(fam.omega)) j["omega"] = round12(fam.omega);
    json files = json::array();
    for (std::size_t i = 0; i < fam.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "node_%03zu.json", i);
        write_curve(dir / name, fam.curves[i]);
        files.push_back(name);
    }
    j["curves"] = std::move(files);
    write_text_file(dir / "manifest.json", j.dump(2) + "\n");
    if (fam.traces.size() == fam.size() && fam.size() > 0) {
        write_text_file(dir / "summary.csv", family_csv(fam));
        json tr = json::array();
        for (const auto& t : fam.traces) tr.push_back(to_json(t));
        write_text_file(dir / "traces.json", tr.dump(2) + "\n");
    }
}

}  // namespace writhekit
