#pragma once

// Writhe of a closed curve by two independent routes:
//   - a discrete Gauss double integral over sample pairs, excluding a band
//     around the diagonal, and
//   - the exact writhe of the inscribed polygon, summing the signed solid
//     angle each pair of non-adjacent edges subtends.
//
// Sign convention: the integrand is (g'(s) x g'(t)) . (g(t) - g(s)) / |g(t) - g(s)|^3,
// so a right-handed coil contributes negatively. Both routes share it.

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>

#include "curve.hpp"
#include "parallel.hpp"

namespace writhekit {

enum class WritheMethod { Quadrature, PolygonalExact };

inline const char* to_string(WritheMethod m) {
    return m == WritheMethod::Quadrature ? "quadrature" : "polygonal_exact";
}

struct WritheReport {
    double value = 0.0;
    WritheMethod method = WritheMethod::Quadrature;
    std::size_t samples = 0;
    std::size_t band = 0;  // quadrature only
    std::optional<double> oracle_delta;
    std::optional<double> oracle_value;
};

inline constexpr std::size_t kDefaultBand = 2;
inline constexpr std::size_t kAdjacencyGuard = 2;

inline std::string csv_header_writhe() { return "method,N,band,value,oracle_delta"; }

inline std::string csv_row(const WritheReport& r) {
    char buf[160];
    if (r.oracle_delta)
        std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%.12g,%.12g", to_string(r.method), r.samples, r.band, r.value,
                      *r.oracle_delta);
    else
        std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%.12g,", to_string(r.method), r.samples, r.band, r.value);
    return buf;
}

/// Discrete Gauss integral. Pairs with circular index gap <= band are skipped.
inline WritheReport writhe_quadrature(const ClosedCurve& c, std::size_t band = kDefaultBand, std::size_t workers = 0) {
    require(band >= 1, ErrorKind::InvalidArgument, "quadrature band must be >= 1");
    const std::size_t n = c.size();
    require(n > 2 * band + 2, ErrorKind::InvalidArgument, "too few samples for the requested band");
    require(min_self_distance(c, kAdjacencyGuard, workers) > 0.0, ErrorKind::NotEmbedded,
            "curve is not embedded; the Gauss integrand is singular");

    const auto& p = c.points();
    std::vector<Vec3> d(n);  // g'(s_i) * ds
    for (std::size_t i = 0; i < n; ++i) d[i] = 0.5 * (c[i + 1] - c[i + n - 1]);

    const double sum = tiled_sum(
        n,
        [&](std::size_t i) {
            double s = 0.0;
            if (norm2(d[i]) == 0.0) return s;
            const std::size_t end = std::min(n, i + n - band);
            for (std::size_t j = i + band + 1; j < end; ++j) {
                const Vec3 r = p[j] - p[i];
                const double r2 = norm2(r);
                if (r2 == 0.0) continue;  // both inside one constant run
                s += triple(r, d[i], d[j]) / (r2 * std::sqrt(r2));
            }
            return s;
        },
        workers);

    WritheReport rep;
    rep.value = 2.0 * sum / (4.0 * M_PI);
    rep.method = WritheMethod::Quadrature;
    rep.samples = n;
    rep.band = band;
    return rep;
}

namespace detail {

inline double clamp_asin(double x) { return std::asin(std::clamp(x, -1.0, 1.0)); }

/// Signed solid angle swept by the unit vector from a point on edge (a,b) to
/// a point on edge (c,e), i.e. the Gauss integral over that edge pair times 4pi.
/// The magnitude is the area of the spherical quadrilateral with vertices at
/// the directions a->c, a->e, b->e, b->c, obtained from its corner angles.
inline double edge_pair_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& e) {
    const Vec3 r13 = c - a, r14 = e - a, r23 = c - b, r24 = e - b;
    Vec3 n1 = cross(r13, r14), n2 = cross(r14, r24), n3 = cross(r24, r23), n4 = cross(r23, r13);
    const double l1 = norm(n1), l2 = norm(n2), l3 = norm(n3), l4 = norm(n4);
    if (l1 == 0.0 || l2 == 0.0 || l3 == 0.0 || l4 == 0.0) return 0.0;  // coplanar-collinear pair
    n1 = n1 / l1; n2 = n2 / l2; n3 = n3 / l3; n4 = n4 / l4;
    const double omega = clamp_asin(dot(n1, n2)) + clamp_asin(dot(n2, n3)) + clamp_asin(dot(n3, n4)) +
                         clamp_asin(dot(n4, n1));
    const double orient = dot(cross(e - c, b - a), r13);
    if (std::abs(orient) <= 1e-12 * norm(e - c) * norm(b - a) * norm(r13)) return 0.0;
    return orient > 0.0 ? -omega : omega;
}

}  // namespace detail

/// Exact writhe of the polygon through the samples. Repeated consecutive
/// samples are merged, so constant intervals are allowed.
inline WritheReport writhe_polygonal(const ClosedCurve& c, std::size_t workers = 0) {
    const std::vector<Vec3> v = detail::compress(c.points());
    const std::size_t m = v.size();
    require(m >= 4, ErrorKind::InvalidArgument, "polygon needs at least 4 distinct vertices");
    {
        const ClosedCurve poly(v);
        require(min_self_distance(poly, 1, workers) > 0.0, ErrorKind::NotEmbedded,
                "polygon has coincident non-adjacent vertices");
    }
    const double sum = tiled_sum(
        m,
        [&](std::size_t i) {
            double s = 0.0;
            const Vec3& a = v[i];
            const Vec3& b = v[(i + 1) % m];
            // j ranges over edges not sharing a vertex with edge i, j > i.
            const std::size_t end = (i == 0) ? m - 1 : m;
            for (std::size_t j = i + 2; j < end; ++j)
                s += detail::edge_pair_solid_angle(a, b, v[j], v[(j + 1) % m]);
            return s;
        },
        workers);

    WritheReport rep;
    rep.value = 2.0 * sum / (4.0 * M_PI);
    rep.method = WritheMethod::PolygonalExact;
    rep.samples = c.size();
    rep.band = 0;
    return rep;
}

/// Quadrature report with the polygonal value attached as its oracle.
inline WritheReport cross_validate(const ClosedCurve& c, std::size_t band = kDefaultBand, std::size_t workers = 0) {
    WritheReport q = writhe_quadrature(c, band, workers);
    const WritheReport p = writhe_polygonal(c, workers);
    q.oracle_value = p.value;
    q.oracle_delta = std::abs(q.value - p.value);
    return q;
}

}  // namespace writhekit
