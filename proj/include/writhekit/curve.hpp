#pragma once

// Closed space curves held as uniform parameter samplings of S^1 = [0,1)/0~1.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "parallel.hpp"
#include "vec3.hpp"

namespace writhekit {

/// Parameter interval [s1, s2] (with s1 < s0 < s2) on which a curve is constant.
struct ConstantInterval {
    double s0 = 0.5;
    double s1 = 0.375;
    double s2 = 0.625;

    bool contains(double s, double tol = 1e-12) const { return s >= s1 - tol && s <= s2 + tol; }
};

/// A closed curve sampled at parameters i/N, i = 0..N-1. Indexing wraps.
///
/// Tangents are unit central differences. A zero tangent is allowed only on a
/// declared constant interval; anywhere else the curve is rejected because the
/// map would not be an immersion there.
class ClosedCurve {
public:
    ClosedCurve() = default;

    explicit ClosedCurve(std::vector<Vec3> points, std::string meta = "samples",
                         std::optional<ConstantInterval> constant = std::nullopt)
        : points_(std::move(points)), meta_(std::move(meta)), constant_(constant) {
        require(points_.size() >= 4, ErrorKind::InvalidArgument, "closed curve needs at least 4 samples");
        for (const auto& p : points_)
            require(std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z), ErrorKind::InvalidArgument,
                    "non-finite sample");
        const std::size_t n = points_.size();
        tangents_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3 d = points_[(i + 1) % n] - points_[(i + n - 1) % n];
            if (norm2(d) > 0.0) {
                tangents_[i] = normalized(d);
            } else {
                require(constant_ && constant_->contains(parameter(i)), ErrorKind::Degenerate,
                        "zero tangent at sample " + std::to_string(i) + " outside a constant interval");
            }
        }
    }

    std::size_t size() const noexcept { return points_.size(); }
    const std::vector<Vec3>& points() const noexcept { return points_; }
    const std::vector<Vec3>& tangents() const noexcept { return tangents_; }
    const std::string& meta() const noexcept { return meta_; }
    const std::optional<ConstantInterval>& constant_interval() const noexcept { return constant_; }

    const Vec3& operator[](std::size_t i) const { return points_[i % points_.size()]; }
    double parameter(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(points_.size()); }

    /// d gamma / ds at sample i by central difference (s in [0,1)).
    Vec3 derivative(std::size_t i) const {
        const std::size_t n = size();
        return (points_[(i + 1) % n] - points_[(i + n - 1) % n]) * (0.5 * static_cast<double>(n));
    }

    double max_spacing() const {
        double h = 0.0;
        for (std::size_t i = 0; i < size(); ++i) h = std::max(h, distance(points_[i], (*this)[i + 1]));
        return h;
    }

    ClosedCurve with_meta(std::string meta) const {
        ClosedCurve c = *this;
        c.meta_ = std::move(meta);
        return c;
    }

private:
    std::vector<Vec3> points_;
    std::vector<Vec3> tangents_;
    std::string meta_ = "samples";
    std::optional<ConstantInterval> constant_;
};

namespace detail {

inline std::string fmt_param(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline double wrap01(double s) {
    s -= std::floor(s);
    return s >= 1.0 ? 0.0 : s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Analytic generators

inline ClosedCurve make_circle(double radius, std::size_t samples) {
    require(samples >= 16, ErrorKind::InvalidArgument, "circle needs N >= 16");
    require(radius > 0.0, ErrorKind::InvalidArgument, "circle radius must be positive");
    std::vector<Vec3> pts(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double phi = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(samples);
        pts[i] = {radius * std::cos(phi), radius * std::sin(phi), 0.0};
    }
    return ClosedCurve(std::move(pts), "circle(radius=" + detail::fmt_param(radius) + ")");
}

/// (p,q) torus knot: winds p times about the z axis and q times about the core
/// circle of radius R, on a tube of radius r.
inline ClosedCurve make_torus_knot(int p, int q, double R, double r, std::size_t samples) {
    require(p != 0 && q != 0, ErrorKind::InvalidArgument, "torus knot needs nonzero p and q");
    require(std::gcd(std::abs(p), std::abs(q)) == 1, ErrorKind::InvalidArgument, "gcd(p,q) must be 1");
    require(r > 0.0 && R > r, ErrorKind::InvalidArgument, "torus knot needs R > r > 0");
    require(samples >= 32u * static_cast<std::size_t>(std::max(std::abs(p), std::abs(q))),
            ErrorKind::InvalidArgument, "torus knot needs N >= 32*max(p,q)");
    std::vector<Vec3> pts(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double phi = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(samples);
        const double rho = R + r * std::cos(q * phi);
        pts[i] = {rho * std::cos(p * phi), rho * std::sin(p * phi), r * std::sin(q * phi)};
    }
    return ClosedCurve(std::move(pts), "torus_knot(p=" + std::to_string(p) + ",q=" + std::to_string(q) +
                                           ",R=" + detail::fmt_param(R) + ",r=" + detail::fmt_param(r) + ")");
}

/// Unit circle with seeded Fourier perturbations of its radius and height.
/// The xy projection stays star-shaped, which keeps the curve embedded.
inline ClosedCurve make_perturbed_circle(std::uint64_t seed, double radial_amplitude, double height_amplitude,
                                         int modes, std::size_t samples) {
    require(samples >= 16, ErrorKind::InvalidArgument, "perturbed circle needs N >= 16");
    require(radial_amplitude >= 0.0 && radial_amplitude < 0.5, ErrorKind::InvalidArgument,
            "radial amplitude must lie in [0, 0.5)");
    require(modes >= 1, ErrorKind::InvalidArgument, "need at least one mode");
    std::mt19937_64 rng(seed);
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    std::vector<double> ra(modes), rb(modes), za(modes), zb(modes);
    for (int k = 0; k < modes; ++k) {
        ra[k] = uniform(); rb[k] = uniform(); za[k] = uniform(); zb[k] = uniform();
    }
    std::vector<Vec3> pts(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double phi = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(samples);
        double rho = 1.0, z = 0.0;
        for (int k = 0; k < modes; ++k) {
            const double m = static_cast<double>(k + 2);
            const double w = 1.0 / static_cast<double>(modes);
            rho += radial_amplitude * w * (ra[k] * std::cos(m * phi) + rb[k] * std::sin(m * phi));
            z += height_amplitude * w * (za[k] * std::cos(m * phi) + zb[k] * std::sin(m * phi));
        }
        pts[i] = {rho * std::cos(phi), rho * std::sin(phi), z};
    }
    return ClosedCurve(std::move(pts), "perturbed_circle(seed=" + std::to_string(seed) + ",radial=" +
                                           detail::fmt_param(radial_amplitude) + ",height=" +
                                           detail::fmt_param(height_amplitude) + ",modes=" +
                                           std::to_string(modes) + ")");
}

// ---------------------------------------------------------------------------
// Evaluation between samples (periodic uniform Catmull-Rom)

namespace detail {

struct Segment {
    std::size_t k;
    double u;
};

inline Segment locate(const ClosedCurve& c, double s) {
    const double x = wrap01(s) * static_cast<double>(c.size());
    auto k = static_cast<std::size_t>(std::floor(x));
    double u = x - static_cast<double>(k);
    if (k >= c.size()) { k = 0; u = 0.0; }
    return {k, u};
}

}  // namespace detail

inline Vec3 evaluate(const ClosedCurve& c, double s) {
    const auto [k, u] = detail::locate(c, s);
    const std::size_t n = c.size();
    const Vec3& p0 = c[k + n - 1];
    const Vec3& p1 = c[k];
    const Vec3& p2 = c[k + 1];
    const Vec3& p3 = c[k + 2];
    if (u == 0.0) return p1;
    const double u2 = u * u, u3 = u2 * u;
    return 0.5 * ((2.0 * p1) + (p2 - p0) * u + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * u2 +
                  (3.0 * p1 - p0 - 3.0 * p2 + p3) * u3);
}

inline Vec3 evaluate_derivative(const ClosedCurve& c, double s) {
    const auto [k, u] = detail::locate(c, s);
    const std::size_t n = c.size();
    const Vec3& p0 = c[k + n - 1];
    const Vec3& p1 = c[k];
    const Vec3& p2 = c[k + 1];
    const Vec3& p3 = c[k + 2];
    const Vec3 d = 0.5 * ((p2 - p0) + 2.0 * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * u +
                          3.0 * (3.0 * p1 - p0 - 3.0 * p2 + p3) * u * u);
    return d * static_cast<double>(n);
}

inline ClosedCurve resample(const ClosedCurve& c, std::size_t samples) {
    require(samples >= 4, ErrorKind::InvalidArgument, "resample needs N >= 4");
    std::vector<Vec3> pts(samples);
    for (std::size_t i = 0; i < samples; ++i)
        pts[i] = evaluate(c, static_cast<double>(i) / static_cast<double>(samples));
    return ClosedCurve(std::move(pts), c.meta() + "|resample(N=" + std::to_string(samples) + ")");
}

// ---------------------------------------------------------------------------
// Rigid motions and scaling

inline ClosedCurve transformed(const ClosedCurve& c, const Mat3& rot, const Vec3& shift, double scale = 1.0) {
    std::vector<Vec3> pts(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) pts[i] = scale * (rot * c[i]) + shift;
    return ClosedCurve(std::move(pts), c.meta() + "|transformed", c.constant_interval());
}

/// Reflection through the plane with unit normal `normal` passing through the origin.
inline ClosedCurve mirrored(const ClosedCurve& c, const Vec3& normal = {0, 0, 1}) {
    const Vec3 n = normalized(normal);
    std::vector<Vec3> pts(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) pts[i] = c[i] - 2.0 * dot(c[i], n) * n;
    return ClosedCurve(std::move(pts), c.meta() + "|mirrored", c.constant_interval());
}

// ---------------------------------------------------------------------------
// Reparameterization with a constant interval

/// Returns a curve with the same image that sits at gamma(s0) for every
/// parameter in [s0 - width/2, s0 + width/2] and runs once around the original
/// curve, at uniformly rescaled speed, on the complementary arc.
inline std::pair<ClosedCurve, ConstantInterval> reparameterize_constant(const ClosedCurve& c, double s0 = 0.5,
                                                                        double width = 0.25) {
    require(s0 > 0.0 && s0 < 1.0, ErrorKind::InvalidArgument, "s0 must not be the wrap point");
    require(width > 0.0 && width <= 0.25, ErrorKind::InvalidArgument, "constant width must lie in (0, 1/4]");
    const ConstantInterval iv{s0, s0 - 0.5 * width, s0 + 0.5 * width};
    require(iv.s1 > 0.0 && iv.s2 < 1.0, ErrorKind::InvalidArgument, "constant interval must not contain the wrap point");

    const std::size_t n = c.size();
    const Vec3 center = evaluate(c, s0);
    std::vector<Vec3> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        double u = c.parameter(i);
        if (iv.contains(u)) {
            pts[i] = center;
            continue;
        }
        if (u < iv.s1) u += 1.0;
        pts[i] = evaluate(c, s0 + (u - iv.s2) / (1.0 - width));
    }
    return {ClosedCurve(std::move(pts), c.meta() + "|constant(s0=" + detail::fmt_param(s0) + ",width=" +
                                            detail::fmt_param(width) + ")",
                        iv),
            iv};
}

// ---------------------------------------------------------------------------
// Embeddedness

namespace detail {

/// Drops samples equal to their predecessor so constant runs count once.
inline std::vector<Vec3> compress(const std::vector<Vec3>& pts) {
    std::vector<Vec3> out;
    out.reserve(pts.size());
    for (const auto& p : pts)
        if (out.empty() || !(out.back() == p)) out.push_back(p);
    while (out.size() > 1 && out.back() == out.front()) out.pop_back();
    return out;
}

}  // namespace detail

/// Minimum distance between samples whose circular index gap exceeds `guard`.
/// Consecutive repeated samples (a constant interval) are merged first.
inline double min_self_distance(const ClosedCurve& c, std::size_t guard = 2, std::size_t workers = 0) {
    const std::vector<Vec3> pts = detail::compress(c.points());
    const std::size_t n = pts.size();
    require(n > 2 * guard + 1, ErrorKind::InvalidArgument, "min_self_distance needs N > 2*guard + 1");
    const double d2 = tiled_min(
        n,
        [&](std::size_t i) {
            double m = std::numeric_limits<double>::infinity();
            const std::size_t end = i + n - guard;  // exclusive; gap n-(j-i) > guard
            for (std::size_t j = i + guard + 1; j < std::min(end, n); ++j) m = std::min(m, norm2(pts[i] - pts[j]));
            return m;
        },
        std::numeric_limits<double>::infinity(), workers);
    return std::sqrt(d2);
}

/// Symmetric Hausdorff distance between two sample sets (brute force).
inline double hausdorff_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    auto one_sided = [](const std::vector<Vec3>& x, const std::vector<Vec3>& y) {
        double worst = 0.0;
        for (const auto& p : x) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : y) best = std::min(best, norm2(p - q));
            worst = std::max(worst, best);
        }
        return std::sqrt(worst);
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace writhekit
