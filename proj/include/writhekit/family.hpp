#pragma once

// Writhe correction over sampled parameter spaces S^n and S^n x I, and the
// homotopies that shrink the inserted helix back to the uncorrected family.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "curve.hpp"
#include "deform.hpp"
#include "error.hpp"
#include "writhe.hpp"

namespace writhekit {

enum class SpaceKind { Sphere, SphereCrossInterval };

inline std::string to_string(SpaceKind k) { return k == SpaceKind::Sphere ? "sphere" : "sphere_cross_interval"; }

struct ParamNode {
    std::array<double, 3> sphere{};  // point of S^n in R^(n+1), unused coordinates zero
    double t = 0.0;                  // interval coordinate, 0 on plain spheres
    double dist = 0.0;               // normalized distance from the basepoint
};

/// Sampled parameter space. Node 0 is the basepoint.
struct ParamSpace {
    SpaceKind kind = SpaceKind::Sphere;
    int dim = 1;
    std::size_t resolution = 64;  // S^1 nodes or S^2 subdivision level
    std::size_t steps = 0;        // interval steps for S^n x I
    std::vector<ParamNode> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    std::size_t size() const { return nodes.size(); }
    bool has_interval() const { return kind == SpaceKind::SphereCrossInterval; }
    /// Nodes on S^n x {0} or S^n x {1}.
    bool on_end(std::size_t i) const { return has_interval() && (nodes[i].t == 0.0 || nodes[i].t == 1.0); }

    static ParamSpace sphere(int n, std::size_t resolution = 0);
    static ParamSpace sphere_cross_interval(int n, std::size_t resolution = 0, std::size_t steps = 32);
};

namespace detail {

struct SphereGrid {
    std::vector<std::array<double, 3>> points;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};

inline SphereGrid icosphere(std::size_t subdivisions) {
    const double phi = 0.5 * (1.0 + std::sqrt(5.0));
    std::vector<Vec3> v{{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
                        {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1},  {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
    for (auto& p : v) p = normalized(p);
    std::vector<std::array<std::size_t, 3>> f{{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                              {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                              {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                              {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    for (std::size_t level = 0; level < subdivisions; ++level) {
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> mid;
        auto midpoint = [&](std::size_t a, std::size_t b) {
            const auto key = std::minmax(a, b);
            if (auto it = mid.find(key); it != mid.end()) return it->second;
            v.push_back(normalized(v[a] + v[b]));
            mid.emplace(key, v.size() - 1);
            return v.size() - 1;
        };
        std::vector<std::array<std::size_t, 3>> next;
        next.reserve(4 * f.size());
        for (const auto& [a, b, c] : f) {
            const std::size_t ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
            next.push_back({a, ab, ca});
            next.push_back({b, bc, ab});
            next.push_back({c, ca, bc});
            next.push_back({ab, bc, ca});
        }
        f = std::move(next);
    }
    SphereGrid g;
    for (const auto& p : v) g.points.push_back({p.x, p.y, p.z});
    std::map<std::pair<std::size_t, std::size_t>, bool> seen;
    for (const auto& [a, b, c] : f)
        for (auto e : {std::minmax(a, b), std::minmax(b, c), std::minmax(c, a)})
            if (seen.emplace(e, true).second) g.edges.push_back(e);
    return g;
}

inline SphereGrid sphere_grid(int n, std::size_t resolution) {
    SphereGrid g;
    switch (n) {
        case 0:
            g.points = {{1, 0, 0}, {-1, 0, 0}};
            break;
        case 1: {
            require(resolution >= 3, ErrorKind::InvalidArgument, "circle grid needs at least 3 nodes");
            for (std::size_t j = 0; j < resolution; ++j) {
                const double a = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(resolution);
                g.points.push_back({std::cos(a), std::sin(a), 0.0});
                g.edges.emplace_back(j, (j + 1) % resolution);
            }
            break;
        }
        case 2:
            g = icosphere(resolution);
            break;
        default:
            fail(ErrorKind::InvalidArgument, "parameter spheres of dimension " + std::to_string(n) + " are not sampled");
    }
    return g;
}

inline double sphere_distance(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    const double d = std::clamp(a[0] * b[0] + a[1] * b[1] + a[2] * b[2], -1.0, 1.0);
    return std::acos(d) / M_PI;
}

inline std::size_t default_resolution(int n) { return n == 1 ? 64 : n == 2 ? 2 : 0; }

}  // namespace detail

inline ParamSpace ParamSpace::sphere(int n, std::size_t resolution) {
    if (resolution == 0) resolution = detail::default_resolution(n);
    const auto g = detail::sphere_grid(n, resolution);
    ParamSpace s;
    s.kind = SpaceKind::Sphere;
    s.dim = n;
    s.resolution = resolution;
    s.edges = g.edges;
    for (const auto& p : g.points) s.nodes.push_back({p, 0.0, detail::sphere_distance(g.points.front(), p)});
    s.nodes.front().dist = 0.0;
    return s;
}

inline ParamSpace ParamSpace::sphere_cross_interval(int n, std::size_t resolution, std::size_t steps) {
    require(steps >= 1, ErrorKind::InvalidArgument, "interval needs at least one step");
    if (resolution == 0) resolution = detail::default_resolution(n);
    const auto g = detail::sphere_grid(n, resolution);
    ParamSpace s;
    s.kind = SpaceKind::SphereCrossInterval;
    s.dim = n;
    s.resolution = resolution;
    s.steps = steps;
    const std::size_t layers = steps + 1;
    for (const auto& p : g.points) {
        const double ds = detail::sphere_distance(g.points.front(), p);
        for (std::size_t k = 0; k < layers; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(steps);
            s.nodes.push_back({p, t, std::sqrt(ds * ds + t * t) / std::sqrt(2.0)});
        }
    }
    s.nodes.front().dist = 0.0;
    for (std::size_t i = 0; i < g.points.size(); ++i)
        for (std::size_t k = 0; k + 1 < layers; ++k) s.edges.emplace_back(i * layers + k, i * layers + k + 1);
    for (const auto& [a, b] : g.edges)
        for (std::size_t k = 0; k < layers; ++k) s.edges.emplace_back(a * layers + k, b * layers + k);
    return s;
}

// ---------------------------------------------------------------------------

struct CurveFamily {
    ParamSpace space;
    std::vector<ClosedCurve> curves;
    double omega = std::nan("");
    std::vector<DeformTrace> traces;

    std::size_t size() const { return curves.size(); }
};

using NodeCurve = std::function<ClosedCurve(const ParamNode&)>;

inline CurveFamily make_family(const ParamSpace& space, const NodeCurve& generator) {
    CurveFamily f;
    f.space = space;
    f.curves.reserve(space.size());
    for (const auto& node : space.nodes) f.curves.push_back(generator(node));
    return f;
}

/// Closed curve winding k times around a circle of radius R at tube radius a,
/// with the vertical excursion scaled by `height`. Planar (writhe 0) at
/// height 0; height and -height are mirror images.
inline ClosedCurve make_coil(int k, double R, double a, double height, std::size_t N) {
    require(k >= 1 && R > a && a > 0.0, ErrorKind::InvalidArgument, "coil needs k >= 1 and R > a > 0");
    require(N >= 16 * static_cast<std::size_t>(k), ErrorKind::InvalidArgument, "coil needs N >= 16k samples");
    std::vector<Vec3> pts(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double phi = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(N);
        const double rad = R + a * std::cos(k * phi);
        pts[i] = {rad * std::cos(phi), rad * std::sin(phi), height * a * std::sin(k * phi)};
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "coil(k=%d,R=%s,a=%s,h=%s,N=%zu)", k, detail::fmt_param(R).c_str(),
                  detail::fmt_param(a).c_str(), detail::fmt_param(height).c_str(), N);
    return ClosedCurve(std::move(pts), buf);
}

/// Coil family: the height factor follows the second sphere coordinate,
/// damped to zero at both ends of the interval factor.
inline CurveFamily make_coil_family(const ParamSpace& space, int k, double R, double a, std::size_t N) {
    const bool interval = space.has_interval();
    return make_family(space, [=](const ParamNode& x) {
        const double h = x.sphere[1] * (interval ? std::sin(M_PI * x.t) : 1.0);
        return make_coil(k, R, a, h, N);
    });
}

// ---------------------------------------------------------------------------

struct FamilyOptions {
    double s0 = 0.5;
    double width = 0.25;
    double tol_writhe = 1e-2;
    std::size_t workers = 0;
};

/// One row per node: node_id,dist,wr_raw,wr_tilde,w,wr_final
inline std::string csv_header_family() { return "node_id,dist,wr_raw,wr_tilde,w,wr_final"; }

inline std::string csv_row(std::size_t id, const ParamNode& node, const DeformTrace& tr) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%zu,%.12g,%.12g,%.12g,%.12g,%.12g", id, node.dist, tr.wr_input, tr.wr_tilde,
                  tr.w_applied, tr.wr_output);
    return buf;
}

namespace detail {

/// Per-node splice contexts sharing one radius, the smallest automatic one.
inline std::vector<SpliceContext> family_contexts(const CurveFamily& fam, double s0, double width) {
    std::vector<SpliceContext> ctx;
    ctx.reserve(fam.size());
    double eps = std::numeric_limits<double>::infinity();
    for (const auto& c : fam.curves) {
        ctx.push_back(make_splice_context(c, s0, width));
        eps = std::min(eps, ctx.back().epsilon);
    }
    for (std::size_t i = 0; i < fam.size(); ++i) ctx[i] = make_splice_context(fam.curves[i], s0, width, eps);
    return ctx;
}

}  // namespace detail

/// Corrects every node to the basepoint value omega = Wr(gamma~_{x0}) using
/// one shared turn count n > M - m. Two phases: measure all nodes, then
/// insert all helices.
inline CurveFamily correct_family(const CurveFamily& fam, const FamilyOptions& opt = {}) {
    require(fam.size() == fam.space.size() && fam.size() >= 1, ErrorKind::InvalidArgument,
            "family must carry one curve per parameter node");
    const auto ctx = detail::family_contexts(fam, opt.s0, opt.width);

    std::vector<PreparedSplice> prep;
    prep.reserve(fam.size());
    for (std::size_t i = 0; i < fam.size(); ++i)
        prep.push_back(prepare_splice(fam.curves[i], ctx[i], fam.space.nodes[i].dist, true, opt.workers));

    const double omega = prep.front().wr_tilde;
    double hi = omega, lo = omega;
    for (const auto& p : prep) {
        hi = std::max(hi, p.wr_tilde);
        lo = std::min(lo, p.wr_tilde);
    }
    const int n = static_cast<int>(std::floor(hi - lo)) + 1;

    CurveFamily out;
    out.space = fam.space;
    out.omega = omega;
    out.curves.reserve(fam.size());
    out.traces.reserve(fam.size());
    for (std::size_t i = 0; i < fam.size(); ++i) {
        const double w = omega - prep[i].wr_tilde;
        require(std::abs(w) < n, ErrorKind::InvariantViolated,
                "node " + std::to_string(i) + ": deficit " + std::to_string(w) + " not below shared n = " +
                    std::to_string(n));
        auto [bar, tr] = apply_correction(prep[i], omega, n, opt.workers);
        out.curves.push_back(std::move(bar));
        out.traces.push_back(tr);
    }
    require(std::abs(out.traces.front().wr_output - omega) < opt.tol_writhe, ErrorKind::InvariantViolated,
            "basepoint writhe moved under the zero-scale insertion");
    return out;
}

/// Largest deviation |Wr(gamma-_x) - omega| over the corrected nodes.
inline double max_deviation(const CurveFamily& corrected) {
    double m = 0.0;
    for (const auto& tr : corrected.traces) m = std::max(m, std::abs(tr.wr_output - corrected.omega));
    return m;
}

/// Largest sample-wise distance between curves at adjacent nodes.
inline double max_adjacent_distance(const CurveFamily& fam) {
    double m = 0.0;
    for (const auto& [a, b] : fam.space.edges) {
        const auto& ca = fam.curves[a];
        const auto& cb = fam.curves[b];
        require(ca.size() == cb.size(), ErrorKind::InvalidArgument, "adjacent nodes differ in sample count");
        for (std::size_t i = 0; i < ca.size(); ++i) m = std::max(m, distance(ca[i], cb[i]));
    }
    return m;
}

// ---------------------------------------------------------------------------
// Homotopies

/// One node of the homotopy from the uncorrected to the corrected curve.
/// t in [1/2, 1]: helix radius scaled by 2t - 1, the parameter straightened in
/// step so that t = 1/2 gives the segment curve. t in [0, 1/2): the segment
/// curve built with radius 2t*eps; t = 0 gives the reparameterized input.
inline ClosedCurve homotopy_curve(const ClosedCurve& raw, const DeformTrace& trace, double t) {
    require(t >= 0.0 && t <= 1.0, ErrorKind::InvalidArgument, "homotopy time must lie in [0,1]");
    const SpliceContext& ctx = trace.ctx;
    const ClosedCurve reparam = reparameterize_constant(raw, ctx.s0, ctx.width).first;
    if (t < 0.5) {
        SpliceContext shrunk = ctx;
        shrunk.epsilon = 2.0 * t * ctx.epsilon;
        return build_tilde(reparam, shrunk, trace.dist);
    }
    const ClosedCurve tilde = build_tilde(reparam, ctx, trace.dist);
    if (t == 1.0) return splice_helix(tilde, ctx, trace.helix);
    return splice_helix(tilde, ctx, trace.helix, 2.0 * t - 1.0, 2.0 - 2.0 * t);
}

inline CurveFamily omega_homotopy(const CurveFamily& raw, const CurveFamily& corrected, double t) {
    require(raw.size() == corrected.size() && corrected.traces.size() == corrected.size(), ErrorKind::InvalidArgument,
            "corrected family does not match the raw family");
    require(t >= 0.0 && t <= 1.0, ErrorKind::InvalidArgument, "homotopy time must lie in [0,1]");
    CurveFamily out;
    out.space = raw.space;
    out.omega = corrected.omega;
    out.curves.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        out.curves.push_back(homotopy_curve(raw.curves[i], corrected.traces[i], t));
    return out;
}

/// The same homotopy on a family over S^n x I.
inline CurveFamily phi_homotopy(const CurveFamily& raw, const CurveFamily& corrected, double t) {
    require(raw.space.has_interval(), ErrorKind::InvalidArgument, "phi homotopy needs an S^n x I family");
    return omega_homotopy(raw, corrected, t);
}

/// The segment family gamma~_x for a corrected family, as used by the
/// correction (equal to the homotopy at t = 1/2 up to rounding).
inline CurveFamily tilde_family(const CurveFamily& raw, const CurveFamily& corrected) {
    CurveFamily out;
    out.space = raw.space;
    out.omega = corrected.omega;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto& ctx = corrected.traces[i].ctx;
        out.curves.push_back(
            build_tilde(reparameterize_constant(raw.curves[i], ctx.s0, ctx.width).first, ctx, corrected.traces[i].dist));
    }
    return out;
}

}  // namespace writhekit
