#include <gtest/gtest.h>

#include <algorithm>

#include <array>
#include <map>
#include <random>

#include "writhekit/curve.hpp"
#include "writhekit/family.hpp"
#include "writhekit/writhe.hpp"

using namespace writhekit;

namespace {

// 20-point Gauss-Legendre rule on [0,1], composed over `panels` sub-intervals.
struct GaussLegendre {
    std::vector<double> x, w;
    explicit GaussLegendre(int panels) {
        static const std::array<double, 10> xi{0.0765265211334973, 0.2277858511416451, 0.3737060887154195,
                                               0.5108670019508271, 0.6360536807265150, 0.7463319064601508,
                                               0.8391169718222188, 0.9122344282513259, 0.9639719272779138,
                                               0.9931285991850949};
        static const std::array<double, 10> wi{0.1527533871307258, 0.1491729864726037, 0.1420961093183820,
                                               0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
                                               0.0832767415767048, 0.0626720483341091, 0.0406014298003869,
                                               0.0176140071391521};
        for (int p = 0; p < panels; ++p) {
            const double a = static_cast<double>(p) / panels, h = 1.0 / panels;
            for (int k = 0; k < 10; ++k)
                for (double s : {-1.0, 1.0}) {
                    x.push_back(a + 0.5 * h * (1.0 + s * xi[k]));
                    w.push_back(0.5 * h * wi[k]);
                }
        }
    }
};

/// Gauss integral over one edge pair by brute-force tensor quadrature.
double edge_pair_integral(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& e, int panels = 8) {
    static std::map<int, GaussLegendre> rules;
    auto it = rules.find(panels);
    if (it == rules.end()) it = rules.emplace(panels, GaussLegendre(panels)).first;
    const auto& g = it->second;
    const Vec3 t1 = b - a, t2 = e - c;
    const Vec3 tt = cross(t1, t2);
    double s = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i)
        for (std::size_t j = 0; j < g.x.size(); ++j) {
            const Vec3 r = (c + g.x[j] * t2) - (a + g.x[i] * t1);
            s += g.w[i] * g.w[j] * dot(tt, r) / std::pow(norm(r), 3);
        }
    return s;
}

// Continuum writhe of the analytic curves, from an independent periodic
// trapezoid evaluation of the Gauss integral at 2000 and 4000 nodes.
constexpr double kTrefoil = 3.5182392;
constexpr double kTorus32 = 3.9671797;
constexpr double kTorus25 = 6.3146103;
constexpr double kCoil4 = 0.5529290;

std::vector<Vec3> shifted(const std::vector<Vec3>& v, std::size_t k) {
    std::vector<Vec3> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[(i + k) % v.size()];
    return out;
}

}  // namespace

TEST(EdgePair, MatchesTensorQuadrature) {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const Vec3 a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
        const Vec3 shift{2.0 + u(rng), u(rng), u(rng)};
        const Vec3 c = Vec3{u(rng), u(rng), u(rng)} + shift, e = Vec3{u(rng), u(rng), u(rng)} + shift;
        EXPECT_NEAR(detail::edge_pair_solid_angle(a, b, c, e), edge_pair_integral(a, b, c, e), 1e-9) << k;
    }
}

TEST(EdgePair, ParallelAndCoplanarPairsVanish) {
    EXPECT_EQ(detail::edge_pair_solid_angle({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}), 0.0);
    EXPECT_EQ(detail::edge_pair_solid_angle({0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}), 0.0);
}

TEST(EdgePair, RoundedCollinearPairsVanish) {
    // points on a line through an off-axis base, collinear only up to rounding
    const Vec3 base{0.3, -1.7, 0.9}, dir = normalized(Vec3{-0.35, 0.88, -0.35});
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-0.25, 0.25);
    for (int k = 0; k < 1000; ++k) {
        double t[4] = {u(rng), u(rng), u(rng), u(rng)};
        std::sort(t, t + 4);
        const double om = detail::edge_pair_solid_angle(base + t[0] * dir, base + t[1] * dir, base + t[2] * dir,
                                                        base + t[3] * dir);
        EXPECT_LT(std::abs(om), 1e-6) << k;
    }
}

TEST(Polygonal, MatchesPairwiseQuadratureOnCoarsePolygon) {
    const auto c = make_torus_knot(2, 3, 2.0, 1.0, 96);
    const auto& v = c.points();
    const std::size_t m = v.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 2; j < (i == 0 ? m - 1 : m); ++j)
            sum += edge_pair_integral(v[i], v[(i + 1) % m], v[j], v[(j + 1) % m], 6);
    EXPECT_NEAR(writhe_polygonal(c).value, 2.0 * sum / (4.0 * M_PI), 1e-8);
}

TEST(Polygonal, FrozenContinuumValues) {
    EXPECT_NEAR(writhe_polygonal(make_torus_knot(2, 3, 2.0, 1.0, 4096)).value, kTrefoil, 1e-4);
    EXPECT_NEAR(writhe_polygonal(make_torus_knot(3, 2, 2.0, 0.5, 2048)).value, kTorus32, 2e-4);
    EXPECT_NEAR(writhe_polygonal(make_torus_knot(2, 5, 2.0, 0.75, 4096)).value, kTorus25, 2e-4);
    EXPECT_NEAR(writhe_polygonal(make_coil(4, 2.0, 0.3, 1.0, 2048)).value, kCoil4, 1e-4);
}

TEST(Quadrature, FrozenContinuumValues) {
    EXPECT_NEAR(writhe_quadrature(make_torus_knot(2, 3, 2.0, 1.0, 4096)).value, kTrefoil, 1e-4);
    EXPECT_NEAR(writhe_quadrature(make_torus_knot(2, 5, 2.0, 0.75, 4096)).value, kTorus25, 2e-4);
}

TEST(Writhe, PlanarCurvesVanish) {
    EXPECT_EQ(writhe_polygonal(make_circle(1.0, 256)).value, 0.0);
    EXPECT_EQ(writhe_quadrature(make_circle(1.0, 256)).value, 0.0);
    EXPECT_NEAR(writhe_polygonal(make_coil(5, 2.0, 0.5, 0.0, 512)).value, 0.0, 1e-14);
}

TEST(Writhe, RigidMotionAndScaleInvariance) {
    std::mt19937 rng(23);
    std::normal_distribution<double> g;
    const auto c = make_perturbed_circle(4, 0.3, 0.6, 5, 512);
    const double w0 = writhe_polygonal(c).value;
    const double q0 = writhe_quadrature(c).value;
    for (int k = 0; k < 5; ++k) {
        const auto m = transformed(c, axis_angle({g(rng), g(rng), g(rng)}, g(rng)), {g(rng), g(rng), g(rng)},
                                   0.1 + std::abs(g(rng)));
        EXPECT_NEAR(writhe_polygonal(m).value, w0, 1e-11);
        EXPECT_NEAR(writhe_quadrature(m).value, q0, 1e-11);
    }
}

TEST(Writhe, MirrorFlipsSign) {
    const auto c = make_torus_knot(2, 3, 2.0, 1.0, 512);
    EXPECT_NEAR(writhe_polygonal(mirrored(c)).value, -writhe_polygonal(c).value, 1e-12);
    EXPECT_NEAR(writhe_polygonal(mirrored(c, {1, 2, 3})).value, -writhe_polygonal(c).value, 1e-10);
    EXPECT_NEAR(writhe_quadrature(mirrored(c)).value, -writhe_quadrature(c).value, 1e-12);
}

TEST(Writhe, ParameterizationInvariance) {
    const auto c = make_torus_knot(3, 2, 2.0, 0.5, 512);
    const double w0 = writhe_polygonal(c).value;
    EXPECT_NEAR(writhe_polygonal(ClosedCurve(shifted(c.points(), 137))).value, w0, 1e-12);
    auto rev = c.points();
    std::reverse(rev.begin(), rev.end());
    EXPECT_NEAR(writhe_polygonal(ClosedCurve(rev)).value, w0, 1e-12);
    EXPECT_NEAR(writhe_quadrature(ClosedCurve(rev)).value, writhe_quadrature(c).value, 1e-12);
}

TEST(Writhe, ConstantIntervalDoesNotChangePolygon) {
    const auto c = make_torus_knot(2, 3, 2.0, 1.0, 1024);
    const auto r = reparameterize_constant(c).first;
    EXPECT_NEAR(writhe_polygonal(r).value, writhe_polygonal(c).value, 2e-4);
    EXPECT_NEAR(writhe_quadrature(r).value, writhe_polygonal(r).value, 5e-3);
}

TEST(Writhe, DeterministicAcrossWorkers) {
    const auto c = make_perturbed_circle(2, 0.2, 0.3, 4, 700);
    const double p1 = writhe_polygonal(c, 1).value, q1 = writhe_quadrature(c, 2, 1).value;
    for (std::size_t w : {2, 5, 16}) {
        EXPECT_EQ(writhe_polygonal(c, w).value, p1);
        EXPECT_EQ(writhe_quadrature(c, 2, w).value, q1);
    }
}

TEST(Writhe, CrossValidateAndCsv) {
    const auto r = cross_validate(make_torus_knot(2, 3, 2.0, 1.0, 1024));
    ASSERT_TRUE(r.oracle_delta && r.oracle_value);
    EXPECT_LT(*r.oracle_delta, 1e-3);
    EXPECT_EQ(csv_header_writhe(), "method,N,band,value,oracle_delta");
    EXPECT_EQ(csv_row(r).rfind("quadrature,1024,2,3.51", 0), 0u);
}

TEST(Writhe, RejectsSelfIntersection) {
    std::vector<Vec3> pts;
    for (int i = 0; i < 64; ++i) {
        const double t = 2.0 * M_PI * i / 64;
        pts.push_back({std::sin(t), std::sin(t) * std::cos(t), 0.0});
    }
    pts[32] = {0, 0, 0};
    const ClosedCurve eight(pts);
    try {
        writhe_quadrature(eight);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotEmbedded);
    }
    EXPECT_THROW(writhe_polygonal(eight), Error);
    EXPECT_THROW(writhe_quadrature(make_circle(1.0, 64), 0), Error);
}
