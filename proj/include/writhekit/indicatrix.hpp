#pragma once

// Tangent indicatrix, its signed enclosed area, and the Fuller relation
// 1 + Wr = A / 2pi (mod 2).
//
// The indicatrix of a sampled curve is the spherical polygon of its edge
// directions, consecutive directions joined by great-circle arcs. For the
// inscribed polygon this is exactly the indicatrix of the polygon with its
// corners rounded off, so the relation holds for the polygonal writhe up to
// rounding, with no smoothing of corners required.

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "curve.hpp"
#include "writhe.hpp"

namespace writhekit {

using SphericalPolygon = std::vector<Vec3>;

/// Unit edge directions, one per sample. Zero-length edges are dropped when
/// they lie on the declared constant interval and rejected anywhere else.
inline SphericalPolygon tangent_indicatrix(const ClosedCurve& c) {
    const std::size_t n = c.size();
    SphericalPolygon out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 e = c[i + 1] - c[i];
        if (norm2(e) == 0.0) {
            require(c.constant_interval() && c.constant_interval()->contains(c.parameter(i)), ErrorKind::Degenerate,
                    "zero tangent at sample " + std::to_string(i) + " outside a constant interval");
            continue;
        }
        out.push_back(normalized(e));
    }
    require(out.size() >= 3, ErrorKind::Degenerate, "indicatrix has fewer than 3 points");
    return out;
}

namespace detail {

/// Signed area of the geodesic triangle (a, b, c) on the unit sphere,
/// positive when a, b, c run counterclockwise seen from outside.
inline double signed_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    const double num = triple(a, b, c);
    const double den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    return 2.0 * std::atan2(num, den);
}

inline std::vector<Vec3> fibonacci_directions(std::size_t count) {
    std::vector<Vec3> dirs(count);
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
        // upper hemisphere only; +P and -P are equivalent candidates
        const double z = 1.0 - (static_cast<double>(i) + 0.5) / static_cast<double>(count);
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * static_cast<double>(i);
        dirs[i] = {rho * std::cos(phi), rho * std::sin(phi), z};
    }
    return dirs;
}

}  // namespace detail

/// Reference direction for the fan: the candidate whose great circle of
/// perpendicular directions hugs the polygon best, so neither it nor its
/// antipode comes close to any vertex.
inline Vec3 choose_reference(const SphericalPolygon& poly) {
    static const std::vector<Vec3> candidates = [] {
        std::vector<Vec3> c{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}};
        auto f = detail::fibonacci_directions(256);
        c.insert(c.end(), f.begin(), f.end());
        return c;
    }();
    Vec3 best = candidates.front();
    double best_score = 2.0;
    for (const auto& p : candidates) {
        double worst = 0.0;
        for (const auto& v : poly) {
            worst = std::max(worst, std::abs(dot(p, v)));
            if (worst >= best_score) break;
        }
        if (worst < best_score) {
            best_score = worst;
            best = p;
        }
    }
    return best;
}

/// Signed area enclosed by a closed spherical polygon, counted with winding
/// multiplicity: the fan of geodesic triangles from `reference` covers each
/// region as many times as the polygon winds around it, with the region
/// holding -reference counted zero times. Not reduced modulo 4pi.
///
/// Orientation: a loop running clockwise when seen from outside the sphere
/// encloses positive area. This pairs with the writhe sign convention so that
/// the Fuller relation holds with the same signs as written above.
inline double enclosed_area(const SphericalPolygon& poly, std::optional<Vec3> reference = std::nullopt) {
    const std::size_t n = poly.size();
    require(n >= 3, ErrorKind::InvalidArgument, "spherical polygon needs at least 3 vertices");
    for (std::size_t i = 0; i < n; ++i)
        require(dot(poly[i], poly[(i + 1) % n]) > -1.0 + 1e-12, ErrorKind::Degenerate,
                "antipodal consecutive indicatrix vertices; geodesic is ambiguous");
    const Vec3 p = reference ? normalized(*reference) : choose_reference(poly);
    double area = 0.0;
    for (std::size_t i = 0; i < n; ++i) area -= detail::signed_triangle_area(p, poly[i], poly[(i + 1) % n]);
    return area;
}

/// Signed area of an open arc closed off by the geodesic from its last point
/// back to its first.
inline double arc_area(const SphericalPolygon& arc, std::optional<Vec3> reference = std::nullopt) {
    return enclosed_area(arc, reference);
}

/// Representative of `a` modulo 4pi in (-2pi, 2pi].
inline double reduce_area(double a) {
    const double period = 4.0 * M_PI;
    double r = std::fmod(a, period);
    if (r > 2.0 * M_PI) r -= period;
    if (r <= -2.0 * M_PI) r += period;
    return r;
}

/// Distance from x to the nearest even integer, in [0, 1].
inline double distance_to_even(double x) { return std::abs(x - 2.0 * std::round(0.5 * x)); }

struct IndicatrixReport {
    std::size_t samples = 0;
    double writhe = 0.0;
    double area = 0.0;      // reduced to (-2pi, 2pi]
    double raw_area = 0.0;  // fan sum, unreduced
    double fuller_lhs = 0.0;
    double fuller_rhs = 0.0;
    double residual_mod2 = 0.0;
};

inline std::string csv_header_fuller() { return "N,writhe,area,fuller_lhs,fuller_rhs,residual_mod2"; }

inline std::string csv_row(const IndicatrixReport& r) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%zu,%.12g,%.12g,%.12g,%.12g,%.12g", r.samples, r.writhe, r.area, r.fuller_lhs,
                  r.fuller_rhs, r.residual_mod2);
    return buf;
}

inline IndicatrixReport fuller_report(std::size_t samples, double writhe, double raw_area) {
    IndicatrixReport rep;
    rep.samples = samples;
    rep.writhe = writhe;
    rep.raw_area = raw_area;
    rep.area = reduce_area(raw_area);
    rep.fuller_lhs = 1.0 + writhe;
    rep.fuller_rhs = rep.area / (2.0 * M_PI);
    rep.residual_mod2 = distance_to_even(rep.fuller_lhs - rep.fuller_rhs);
    return rep;
}

/// Checks 1 + Wr = A / 2pi (mod 2). The writhe comes from the polygonal
/// route by default; pass Quadrature to pair the indicatrix with the Gauss sum.
inline IndicatrixReport fuller_check(const ClosedCurve& c, WritheMethod method = WritheMethod::PolygonalExact,
                                     std::size_t band = kDefaultBand, std::size_t workers = 0) {
    const double wr = method == WritheMethod::PolygonalExact ? writhe_polygonal(c, workers).value
                                                             : writhe_quadrature(c, band, workers).value;
    return fuller_report(c.size(), wr, enclosed_area(tangent_indicatrix(c)));
}

}  // namespace writhekit
