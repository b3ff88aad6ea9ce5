#pragma once

// Local surgery that sets the writhe of a closed curve to a prescribed value.
//
// Pipeline, all inside a small ball B_eps around gamma(s0):
//   1. reparameterize so the curve sits still on [s1, s2];
//   2. push the contents of B_eps radially outward, opening an empty ball of
//      radius S*eps/2 around the centre;
//   3. bridge the gap with a straight segment along T(s0)          -> gamma~;
//   4. replace that segment by: a connector from the south pole to an
//      n-turn helix, the helix, and the mirror-image connector to the north
//      pole, all rotated so the pole axis is T(s0)                  -> gamma-.
//
// The helix tangents sweep n times around a spherical cap of area
// 2pi(1 - sin psi) with sin psi = 1 - |w|/n, so the indicatrix area grows by
// 2pi*w and the writhe by w. The two connectors trace the same indicatrix path
// in opposite directions and add nothing.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "curve.hpp"
#include "error.hpp"
#include "indicatrix.hpp"
#include "vec3.hpp"
#include "writhe.hpp"

namespace writhekit {

inline constexpr Vec3 kAxis{0.0, 0.0, 1.0};

// ---------------------------------------------------------------------------
// Splice geometry

struct SpliceContext {
    double s0 = 0.5, s1 = 0.375, s2 = 0.625, s3 = 0.4375, s4 = 0.5625;
    double width = 0.25;
    double epsilon = 0.0;
    Vec3 center;          // gamma(s0); the chart is z = p - center
    Vec3 tangent{0, 0, 1};  // T(s0)
    Mat3 rotation;        // theta, takes (0,0,1) to T(s0)

    Vec3 to_chart(const Vec3& p) const { return p - center; }
    Vec3 from_chart(const Vec3& z) const { return z + center; }
    ConstantInterval interval() const { return {s0, s1, s2}; }
    bool in_splice(double s) const { return interval().contains(s); }
};

namespace detail {

/// Radius below which B_eps meets only the local strand: a quarter of the
/// distance from the centre to any sample off the radially monotone arc
/// through s0, capped by the extent of that arc.
inline double select_epsilon(const ClosedCurve& c, double s0, const Vec3& center) {
    const std::size_t n = c.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = distance(c[i], center);
    const auto k0 = static_cast<std::size_t>(std::llround(s0 * static_cast<double>(n))) % n;

    std::vector<char> local(n, 0);
    local[k0] = 1;
    std::size_t covered = 1;
    double reach_fwd = d[k0], reach_bwd = d[k0];
    for (std::size_t k = k0; covered < n;) {
        const std::size_t next = (k + 1) % n;
        if (local[next] || d[next] <= d[k]) break;
        local[next] = 1; ++covered; k = next; reach_fwd = d[k];
    }
    for (std::size_t k = k0; covered < n;) {
        const std::size_t prev = (k + n - 1) % n;
        if (local[prev] || d[prev] <= d[k]) break;
        local[prev] = 1; ++covered; k = prev; reach_bwd = d[k];
    }
    double far = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        if (!local[i]) far = std::min(far, d[i]);
    return 0.25 * std::min({far, reach_fwd, reach_bwd});
}

}  // namespace detail

/// Splice context for `curve` (the curve before reparameterization).
/// `epsilon` overrides the automatic radius when given.
inline SpliceContext make_splice_context(const ClosedCurve& curve, double s0 = 0.5, double width = 0.25,
                                         std::optional<double> epsilon = std::nullopt) {
    require(s0 > 0.0 && s0 < 1.0, ErrorKind::InvalidArgument, "s0 must not be the wrap point");
    require(width > 0.0 && width <= 0.25, ErrorKind::InvalidArgument, "constant width must lie in (0, 1/4]");
    SpliceContext ctx;
    ctx.s0 = s0;
    ctx.width = width;
    ctx.s1 = s0 - 0.5 * width;
    ctx.s2 = s0 + 0.5 * width;
    require(ctx.s1 > 0.0 && ctx.s2 < 1.0, ErrorKind::InvalidArgument, "splice interval must not contain the wrap point");
    ctx.s3 = ctx.s1 + 0.25 * (ctx.s2 - ctx.s1);
    ctx.s4 = ctx.s2 - 0.25 * (ctx.s2 - ctx.s1);
    ctx.center = evaluate(curve, s0);
    ctx.tangent = normalized(evaluate_derivative(curve, s0));
    require(norm2(ctx.tangent) > 0.0, ErrorKind::Degenerate, "zero tangent at s0");
    ctx.rotation = rotation_between(kAxis, ctx.tangent);
    ctx.epsilon = epsilon ? *epsilon : detail::select_epsilon(curve, s0, ctx.center);
    require(ctx.epsilon > 0.0, ErrorKind::Degenerate, "splice radius is zero");
    require(curve.max_spacing() < 2.0 * ctx.epsilon, ErrorKind::InvalidArgument,
            "curve is under-resolved near s0: sample spacing exceeds 2*epsilon");
    return ctx;
}

/// Scale function: 3|x| near the basepoint, 1 from |x| = 1/3 on.
inline double scale_from_distance(double dist) { return std::clamp(3.0 * dist, 0.0, 1.0); }

/// Radial push sigma_x inside B_eps. `dist` is the family distance |x| from the
/// basepoint (1 for a lone curve); the vacated ball has radius S(dist)*eps/2.
inline ClosedCurve radial_push(const ClosedCurve& c, const SpliceContext& ctx, double dist) {
    require(dist >= 0.0 && dist <= 1.0, ErrorKind::InvalidArgument, "family distance must lie in [0,1]");
    const double m = std::min(dist, 1.0 / 3.0);
    const double slope = 1.0 - 1.5 * m;
    const double offset = 1.5 * m * ctx.epsilon;
    std::vector<Vec3> pts = c.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (ctx.in_splice(c.parameter(i))) continue;
        const Vec3 z = ctx.to_chart(pts[i]);
        const double r = norm(z);
        if (r >= ctx.epsilon) continue;
        require(r > 0.0, ErrorKind::Degenerate, "sample at the splice centre outside the constant interval");
        if (m == 0.0) continue;
        pts[i] = ctx.from_chart(z * ((slope * r + offset) / r));
    }
    return ClosedCurve(std::move(pts), c.meta() + "|push", c.constant_interval());
}

/// Bridges the pushed gap with the straight segment through the centre along
/// T(s0); the segment spans the vacated ball of radius S*eps/2.
inline ClosedCurve insert_segment(const ClosedCurve& pushed, const SpliceContext& ctx, double scale) {
    const double mid = 0.5 * (ctx.s1 + ctx.s2);
    const double speed = scale * ctx.epsilon / (ctx.s2 - ctx.s1);
    std::vector<Vec3> pts = pushed.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double s = pushed.parameter(i);
        if (ctx.in_splice(s)) pts[i] = ctx.from_chart((speed * (s - mid)) * ctx.tangent);
    }
    std::optional<ConstantInterval> iv;
    if (speed == 0.0) iv = ctx.interval();
    return ClosedCurve(std::move(pts), pushed.meta() + "|segment", iv);
}

// ---------------------------------------------------------------------------
// Helix

struct HelixSpec {
    int n = 1;
    double w = 0.0;
    double scale = 1.0;  // S
    double epsilon = 0.0;
    double s3 = 0.4375, s4 = 0.5625;
    double C = 0.0;  // angular rate
    double r = 0.0;  // radius
    double p = 0.0;  // rise per turn

    double height() const { return p * n; }
    /// tan psi = p / (2 pi r)
    double pitch_angle() const { return std::atan2(p, 2.0 * M_PI * r); }

    Vec3 position(double s, double radius_factor = 1.0) const {
        const double rr = radius_factor * r;
        return {rr * std::cos(C * s), rr * std::sin(C * s), height() / (s4 - s3) * (s - 0.5 * (s3 + s4))};
    }
    Vec3 velocity(double s, double radius_factor = 1.0) const {
        const double rr = radius_factor * r;
        return {-rr * C * std::sin(C * s), rr * C * std::cos(C * s), height() / (s4 - s3)};
    }
};

inline HelixSpec helix_params(double w, int n, double epsilon, double scale, double s3 = 0.4375, double s4 = 0.5625) {
    require(n >= 1, ErrorKind::InvalidArgument, "helix needs n >= 1");
    require(std::abs(w) < n, ErrorKind::InvalidArgument, "writhe deficit must satisfy |w| < n");
    require(epsilon >= 0.0, ErrorKind::InvalidArgument, "epsilon must be non-negative");
    require(scale >= 0.0 && scale <= 1.0, ErrorKind::InvalidArgument, "scale must lie in [0,1]");
    require(s3 < s4, ErrorKind::InvalidArgument, "helix interval is empty");
    const double nn = static_cast<double>(n);
    const double a = std::abs(w) / nn;
    const double sgn = (w > 0.0) - (w < 0.0);
    HelixSpec h;
    h.n = n;
    h.w = w;
    h.scale = scale;
    h.epsilon = epsilon;
    h.s3 = s3;
    h.s4 = s4;
    h.C = -sgn * 2.0 * M_PI * nn / (s4 - s3);
    h.r = scale * epsilon / (4.0 * M_PI * nn) * std::sqrt(std::max(0.0, 2.0 * a - a * a));
    h.p = scale * epsilon / (2.0 * nn) * (1.0 - a);
    return h;
}

/// Smallest n with |w| < n, at least 1.
inline int turns_for(double w) { return std::max(1, static_cast<int>(std::floor(std::abs(w))) + 1); }

// ---------------------------------------------------------------------------
// Connectors
//
// iota runs from the south pole (0,0,-S eps/2) to tau(s3), leaving the pole
// along +z and arriving along v2 = tau'(s3)/|tau'(s3)|. With u the radial
// direction of tau(s3) and t = z x u its horizontal tangent direction, iota
// has three phases:
//   A  tangent tilts towards u and back (the radial offset r is made here),
//   -  a short straight run along +z,
//   C  an S-bend in the (t, z) plane ending on v2 with no net t offset.
// Every tangent lies on the great circle through z and u (phase A) or through
// z and v2 (phase C), and the indicatrix of phase A goes out and back along
// one geodesic.
//
// xi is iota reversed and rotated by pi about u. That rotation maps the helix
// onto itself with reversed orientation, swaps the poles, and its negative
// fixes the (t, z) plane pointwise, so the indicatrix of xi retraces that of
// iota backwards, apart from a mirrored out-and-back spur.

class Connectors {
public:
    static constexpr double kPhaseA = 0.45;
    static constexpr double kPhaseC0 = 0.55;
    static constexpr std::size_t kTable = 4096;

    Connectors() = default;

    Connectors(const HelixSpec& h, double s1, double s2, double radius_factor = 1.0)
        : s1_(s1), s2_(s2), s3_(h.s3), s4_(h.s4) {
        const double half = 0.5 * h.scale * h.epsilon;
        south_ = {0.0, 0.0, -half};
        const double phase = h.C * h.s3;
        u_ = {std::cos(phase), std::sin(phase), 0.0};
        t_ = cross(kAxis, u_);
        if (half == 0.0) {
            degenerate_ = true;
            return;
        }
        const Vec3 start = h.position(h.s3, radius_factor);
        const Vec3 v2 = normalized(h.velocity(h.s3, radius_factor));
        const double offset = dot(start, u_);            // radial offset to make up, = r
        const double rise = start.z - south_.z;          // > 0
        require(rise > 0.0, ErrorKind::InvariantViolated, "helix start is not above the south pole");
        beta_end_ = std::atan2(dot(v2, t_), v2.z);
        bend_ = solve_bend(beta_end_);
        tilt_ = solve_tilt(offset / rise, bend_, beta_end_);
        const double zsum = integrate([&](double s) { return tangent(s).z; });
        speed_ = rise / zsum;
        build_table();
    }

    /// iota at parameter s in [s1, s3].
    Vec3 iota(double s) const {
        if (degenerate_) return {};
        const double sigma = std::clamp((s - s1_) / (s3_ - s1_), 0.0, 1.0);
        const double x = sigma * static_cast<double>(kTable);
        auto k = static_cast<std::size_t>(std::floor(x));
        if (k >= kTable) k = kTable - 1;
        const double hstep = 1.0 / static_cast<double>(kTable);
        const double u = x - static_cast<double>(k);
        // cubic Hermite on the integrated table, exact tangents as slopes
        const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
        const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
        return h00 * pos_[k] + (h10 * hstep * speed_) * tan_[k] + h01 * pos_[k + 1] +
               (h11 * hstep * speed_) * tan_[k + 1];
    }

    /// xi at parameter s in [s4, s2].
    Vec3 xi(double s) const { return rotate_about_u(iota(s3_ - (s - s4_))); }

    Vec3 rotate_about_u(const Vec3& v) const { return 2.0 * dot(v, u_) * u_ - v; }

    /// Unit tangent of iota at normalized parameter sigma in [0,1].
    Vec3 tangent(double sigma) const {
        if (sigma < kPhaseA) {
            const double a = tilt_profile(tilt_, sigma);
            return std::cos(a) * kAxis + std::sin(a) * u_;
        }
        if (sigma < kPhaseC0) return kAxis;
        const double b = bend_profile(bend_, beta_end_, (sigma - kPhaseC0) / (1.0 - kPhaseC0));
        return std::cos(b) * kAxis + std::sin(b) * t_;
    }

    double tilt() const { return tilt_; }
    double bend() const { return bend_; }
    double max_bend_angle() const {
        double m = 0.0;
        for (int i = 0; i <= 1000; ++i) m = std::max(m, std::abs(bend_profile(bend_, beta_end_, i / 1000.0)));
        return m;
    }
    const Vec3& radial() const { return u_; }
    bool degenerate() const { return degenerate_; }

private:
    static double tilt_profile(double a0, double sigma) {
        const double x = std::sin(M_PI * sigma / kPhaseA);
        return a0 * x * x;
    }
    static double bend_profile(double c, double beta_end, double rho) {
        return beta_end * rho * rho * (3.0 - 2.0 * rho) + c * std::sin(M_PI * rho);
    }

    /// Composite Simpson over [0,1] for f(sigma), with phase boundaries on nodes.
    template <class F>
    static double integrate(F&& f, std::size_t panels = 2000) {
        double total = 0.0;
        const std::array<double, 4> edges{0.0, kPhaseA, kPhaseC0, 1.0};
        for (std::size_t seg = 0; seg < 3; ++seg) {
            const double a = edges[seg], b = edges[seg + 1];
            const double h = (b - a) / static_cast<double>(panels);
            double s = 0.0;
            for (std::size_t i = 0; i < panels; ++i) {
                const double x0 = a + h * static_cast<double>(i);
                s += f(x0) + 4.0 * f(x0 + 0.5 * h) + f(x0 + h);
            }
            total += s * h / 6.0;
        }
        return total;
    }

    template <class F>
    static double bisect(F&& f, double lo, double hi) {
        double flo = f(lo);
        for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(hi)); ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = f(mid);
            if ((fm > 0.0) == (flo > 0.0)) { lo = mid; flo = fm; } else { hi = mid; }
        }
        return 0.5 * (lo + hi);
    }

    static double bend_balance(double c, double beta_end) {
        const std::size_t panels = 2000;
        const double h = 1.0 / static_cast<double>(panels);
        double s = 0.0;
        for (std::size_t i = 0; i < panels; ++i) {
            const double x0 = h * static_cast<double>(i);
            s += std::sin(bend_profile(c, beta_end, x0)) + 4.0 * std::sin(bend_profile(c, beta_end, x0 + 0.5 * h)) +
                 std::sin(bend_profile(c, beta_end, x0 + h));
        }
        return s * h / 6.0;
    }

    static double solve_bend(double beta_end) {
        if (beta_end == 0.0) return 0.0;
        const double sgn = beta_end > 0.0 ? 1.0 : -1.0;
        const double c = bisect([&](double x) { return bend_balance(-sgn * x, beta_end) * sgn; }, 0.0, M_PI);
        const double bend = -sgn * c;
        double worst = 0.0;
        for (int i = 0; i <= 1000; ++i) worst = std::max(worst, std::abs(bend_profile(bend, beta_end, i / 1000.0)));
        require(worst < 0.5 * M_PI, ErrorKind::InvariantViolated, "connector bend turns past horizontal");
        return bend;
    }

    double solve_tilt(double ratio, double bend, double beta_end) const {
        if (ratio == 0.0) return 0.0;
        auto excess = [&](double a0) {
            const double along_u = integrate([&](double s) { return s < kPhaseA ? std::sin(tilt_profile(a0, s)) : 0.0; });
            const double along_z = integrate([&](double s) {
                if (s < kPhaseA) return std::cos(tilt_profile(a0, s));
                if (s < kPhaseC0) return 1.0;
                return std::cos(bend_profile(bend, beta_end, (s - kPhaseC0) / (1.0 - kPhaseC0)));
            });
            return along_u / along_z - ratio;
        };
        constexpr double kMaxTilt = 1.45;
        require(excess(kMaxTilt) > 0.0, ErrorKind::InvariantViolated, "connector cannot reach the helix radius");
        return bisect(excess, 0.0, kMaxTilt);
    }

    void build_table() {
        pos_.resize(kTable + 1);
        tan_.resize(kTable + 1);
        const double h = 1.0 / static_cast<double>(kTable);
        pos_[0] = south_;
        tan_[0] = tangent(0.0);
        for (std::size_t k = 0; k < kTable; ++k) {
            const double x0 = h * static_cast<double>(k);
            const Vec3 tm = tangent(x0 + 0.5 * h);
            tan_[k + 1] = tangent(x0 + h);
            pos_[k + 1] = pos_[k] + (speed_ * h / 6.0) * (tan_[k] + 4.0 * tm + tan_[k + 1]);
        }
    }

    double s1_ = 0, s2_ = 0, s3_ = 0, s4_ = 0;
    Vec3 south_, u_{1, 0, 0}, t_{0, 1, 0};
    double beta_end_ = 0.0, bend_ = 0.0, tilt_ = 0.0, speed_ = 0.0;
    bool degenerate_ = false;
    std::vector<Vec3> pos_, tan_;
};

inline Connectors build_connectors(const HelixSpec& h, const SpliceContext& ctx, double radius_factor = 1.0) {
    return Connectors(h, ctx.s1, ctx.s2, radius_factor);
}

// ---------------------------------------------------------------------------
// Assembly

namespace detail {

/// Reparameterization of [s1, s2] under which the zero-radius assembly (a
/// vertical diameter traversed piecewise linearly) becomes the uniformly
/// parameterized segment of gamma~.
inline double straightening_parameter(double s, const HelixSpec& h, const SpliceContext& ctx) {
    const double half = 0.5 * h.scale * h.epsilon;
    const double hh = 0.5 * h.height();
    const double z = half * (2.0 * s - ctx.s1 - ctx.s2) / (ctx.s2 - ctx.s1);
    const double rise = half - hh;
    if (z <= -hh) return ctx.s1 + (z + half) / rise * (ctx.s3 - ctx.s1);
    if (z >= hh) return ctx.s2 - (half - z) / rise * (ctx.s2 - ctx.s4);
    return 0.5 * (ctx.s3 + ctx.s4) + z / h.height() * (ctx.s4 - ctx.s3);
}

}  // namespace detail

/// eta(s) in the chart frame (pole axis along z). With `straighten` in (0,1]
/// the parameter is blended towards the straightening map.
inline Vec3 eta(double s, const HelixSpec& h, const Connectors& conn, const SpliceContext& ctx,
                double radius_factor = 1.0, double straighten = 0.0) {
    if (h.scale * h.epsilon == 0.0) return {};
    double x = s;
    if (straighten != 0.0) x = (1.0 - straighten) * s + straighten * detail::straightening_parameter(s, h, ctx);
    if (x < ctx.s3) return conn.iota(x);
    if (x <= ctx.s4) return h.position(x, radius_factor);
    return conn.xi(x);
}

/// gamma- : `tilde` with [s1, s2] replaced by the rotated, translated assembly.
inline ClosedCurve splice_helix(const ClosedCurve& tilde, const SpliceContext& ctx, const HelixSpec& h,
                                double radius_factor = 1.0, double straighten = 0.0) {
    const Connectors conn = build_connectors(h, ctx, radius_factor);
    std::vector<Vec3> pts = tilde.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double s = tilde.parameter(i);
        if (ctx.in_splice(s)) pts[i] = ctx.from_chart(ctx.rotation * eta(s, h, conn, ctx, radius_factor, straighten));
    }
    std::optional<ConstantInterval> iv;
    if (h.scale * h.epsilon == 0.0) iv = ctx.interval();
    return ClosedCurve(std::move(pts), tilde.meta() + "|helix(n=" + std::to_string(h.n) + ")", iv);
}

// ---------------------------------------------------------------------------
// Certificates

/// Net signed indicatrix area of the two connector arcs, joined into one loop
/// (iota directions followed by xi directions), reduced modulo 4pi.
inline double connector_area(const ClosedCurve& bar, const SpliceContext& ctx) {
    SphericalPolygon loop;
    auto append = [&](double from, double to) {
        for (std::size_t i = 0; i < bar.size(); ++i) {
            const double s = bar.parameter(i);
            if (s < from - 1e-12 || s >= to - 1e-12) continue;
            const Vec3 e = bar[i + 1] - bar[i];
            if (norm2(e) > 0.0) loop.push_back(normalized(e));
        }
    };
    append(ctx.s1, ctx.s3);
    append(ctx.s4, ctx.s2);
    if (loop.size() < 3) return 0.0;
    return reduce_area(enclosed_area(loop));
}

/// True when every sample at distance >= eps from the centre is bit-identical.
inline bool locality_holds(const ClosedCurve& before, const ClosedCurve& after, const SpliceContext& ctx) {
    if (before.size() != after.size()) return false;
    for (std::size_t i = 0; i < before.size(); ++i)
        if (distance(before[i], ctx.center) >= ctx.epsilon && !(before[i] == after[i])) return false;
    return true;
}

/// Largest distance from the centre over the splice samples.
inline double splice_radius(const ClosedCurve& c, const SpliceContext& ctx) {
    double m = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (ctx.in_splice(c.parameter(i))) m = std::max(m, distance(c[i], ctx.center));
    return m;
}

// ---------------------------------------------------------------------------
// Pipeline

struct DeformOptions {
    double s0 = 0.5;
    double width = 0.25;
    double dist = 1.0;  // family distance |x|; 1 for a lone curve
    std::optional<double> epsilon;
    double tol_writhe = 1e-2;
    std::size_t workers = 0;
};

/// Steps 1-3 plus the writhe measurements the correction needs.
struct PreparedSplice {
    ClosedCurve input;
    ClosedCurve reparam;
    SpliceContext ctx;
    double dist = 1.0;
    double scale = 1.0;
    ClosedCurve tilde;
    double wr_input = 0.0;
    double wr_tilde = 0.0;
    bool embedded_before = false;
};

inline ClosedCurve build_tilde(const ClosedCurve& reparam, const SpliceContext& ctx, double dist) {
    return insert_segment(radial_push(reparam, ctx, dist), ctx, scale_from_distance(dist));
}

inline PreparedSplice prepare_splice(const ClosedCurve& curve, const SpliceContext& ctx, double dist,
                                     bool measure_input = true, std::size_t workers = 0) {
    PreparedSplice p;
    p.input = curve;
    p.ctx = ctx;
    p.dist = dist;
    p.scale = scale_from_distance(dist);
    p.embedded_before = min_self_distance(curve, kAdjacencyGuard, workers) > 0.0;
    require(p.embedded_before, ErrorKind::NotEmbedded, "input curve is not embedded");
    p.reparam = reparameterize_constant(curve, ctx.s0, ctx.width).first;
    p.tilde = build_tilde(p.reparam, ctx, dist);
    require(min_self_distance(p.tilde, kAdjacencyGuard, workers) > 0.0, ErrorKind::NotEmbedded,
            "segment insertion broke embeddedness; epsilon too large");
    p.wr_input = measure_input ? writhe_polygonal(curve, workers).value : std::nan("");
    p.wr_tilde = writhe_polygonal(p.tilde, workers).value;
    return p;
}

inline PreparedSplice prepare_splice(const ClosedCurve& curve, const DeformOptions& opt = {}) {
    return prepare_splice(curve, make_splice_context(curve, opt.s0, opt.width, opt.epsilon), opt.dist, true,
                          opt.workers);
}

struct DeformTrace {
    double target = 0.0;
    double wr_input = 0.0;
    double wr_tilde = 0.0;
    double w_applied = 0.0;
    double wr_output = 0.0;
    bool embedded_before = false;
    bool embedded_after = false;
    double min_distance_after = 0.0;
    double connector_area = 0.0;
    double splice_radius = 0.0;
    bool locality = false;
    double dist = 1.0;
    HelixSpec helix;
    SpliceContext ctx;

    double error() const { return std::abs(wr_output - target); }
};

/// Step 4 for a prepared curve: insert the helix that supplies w = target -
/// Wr(gamma~) using n turns (n = turns_for(w) when not given).
inline std::pair<ClosedCurve, DeformTrace> apply_correction(const PreparedSplice& prep, double target,
                                                            std::optional<int> turns = std::nullopt,
                                                            std::size_t workers = 0) {
    const double w = target - prep.wr_tilde;
    const int n = turns ? *turns : turns_for(w);
    require(std::abs(w) < n, ErrorKind::InvariantViolated,
            "writhe deficit " + std::to_string(w) + " needs more than " + std::to_string(n) + " turns");
    const HelixSpec h = helix_params(w, n, prep.ctx.epsilon, prep.scale, prep.ctx.s3, prep.ctx.s4);
    ClosedCurve bar = splice_helix(prep.tilde, prep.ctx, h);

    DeformTrace tr;
    tr.target = target;
    tr.wr_input = prep.wr_input;
    tr.wr_tilde = prep.wr_tilde;
    tr.w_applied = w;
    tr.embedded_before = prep.embedded_before;
    tr.dist = prep.dist;
    tr.helix = h;
    tr.ctx = prep.ctx;
    tr.splice_radius = splice_radius(bar, prep.ctx);
    require(tr.splice_radius <= 0.5 * prep.scale * prep.ctx.epsilon * (1.0 + 1e-9), ErrorKind::InvariantViolated,
            "inserted assembly leaves its ball");
    tr.min_distance_after = min_self_distance(bar, kAdjacencyGuard, workers);
    tr.embedded_after = tr.min_distance_after > 0.0;
    require(tr.embedded_after, ErrorKind::NotEmbedded, "helix insertion broke embeddedness");
    tr.locality = locality_holds(prep.reparam, bar, prep.ctx);
    tr.connector_area = prep.scale > 0.0 ? connector_area(bar, prep.ctx) : 0.0;
    tr.wr_output = writhe_polygonal(bar, workers).value;
    return {std::move(bar), tr};
}

/// Full pipeline on a lone curve.
inline std::pair<ClosedCurve, DeformTrace> correct_writhe(const ClosedCurve& curve, double target,
                                                          const DeformOptions& opt = {}) {
    const PreparedSplice prep = prepare_splice(curve, opt);
    return apply_correction(prep, target, std::nullopt, opt.workers);
}

}  // namespace writhekit
