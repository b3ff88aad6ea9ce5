#include <gtest/gtest.h>

#include <random>

#include "writhekit/curve.hpp"
#include "writhekit/indicatrix.hpp"

using namespace writhekit;

namespace {

/// Area to the left of a closed spherical polygon, from Gauss-Bonnet:
/// 2pi minus the total geodesic turning. Determined modulo 2pi in general and
/// modulo 4pi for simple loops.
double gauss_bonnet_left_area(const SphericalPolygon& v) {
    const std::size_t n = v.size();
    double turning = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& a = v[(i + n - 1) % n];
        const Vec3& b = v[i];
        const Vec3& c = v[(i + 1) % n];
        const Vec3 t_in = cross(cross(a, b), b);
        const Vec3 t_out = cross(cross(b, c), b);
        turning += std::atan2(dot(b, cross(t_in, t_out)), dot(t_in, t_out));
    }
    return 2.0 * M_PI - turning;
}

double mod4pi_gap(double a, double b) { return std::abs(std::remainder(a - b, 4.0 * M_PI)); }

double mod2pi_gap(double a, double b) { return std::abs(std::remainder(a - b, 2.0 * M_PI)); }

}  // namespace

TEST(Sphere, OctantTriangle) {
    const Vec3 x{1, 0, 0}, y{0, 1, 0}, z{0, 0, 1};
    EXPECT_NEAR(detail::signed_triangle_area(x, y, z), M_PI / 2, 1e-15);
    EXPECT_NEAR(detail::signed_triangle_area(x, z, y), -M_PI / 2, 1e-15);
    // counterclockwise seen from outside counts negative
    EXPECT_NEAR(enclosed_area({x, y, z}), -M_PI / 2, 1e-14);
    EXPECT_NEAR(enclosed_area({x, z, y}), M_PI / 2, 1e-14);
}

TEST(Sphere, LatitudeCircle) {
    for (double lat : {-1.0, -0.3, 0.0, 0.4, 1.2}) {
        SphericalPolygon p;
        const int n = 4000;
        for (int i = 0; i < n; ++i) {
            const double a = 2.0 * M_PI * i / n;
            p.push_back({std::cos(lat) * std::cos(a), std::cos(lat) * std::sin(a), std::sin(lat)});
        }
        // counterclockwise about +z: the cap above is on the left
        const double cap = 2.0 * M_PI * (1.0 - std::sin(lat));
        EXPECT_LT(mod4pi_gap(enclosed_area(p), -cap), 1e-5) << lat;
    }
}

TEST(Sphere, GaussBonnetOnRandomPolygons) {
    std::mt19937 rng(29);
    std::normal_distribution<double> g;
    for (int k = 0; k < 200; ++k) {
        SphericalPolygon p;
        const int n = 3 + k % 20;
        while (static_cast<int>(p.size()) < n) {
            const Vec3 v = normalized(Vec3{g(rng), g(rng), g(rng)});
            if (p.empty() || dot(v, p.back()) > -0.9) p.push_back(v);
        }
        if (dot(p.front(), p.back()) <= -0.9) continue;
        EXPECT_LT(mod2pi_gap(enclosed_area(p), -gauss_bonnet_left_area(p)), 1e-9) << k;
    }
}

TEST(Sphere, GaussBonnetOnSimpleLoops) {
    std::mt19937 rng(31);
    std::normal_distribution<double> g;
    for (int k = 0; k < 50; ++k) {
        // star-shaped loop around a random pole
        const Vec3 pole = normalized(Vec3{g(rng), g(rng), g(rng)});
        const Vec3 e1 = normalized(cross(pole, Vec3{0.3, 0.5, 0.8}));
        const Vec3 e2 = cross(pole, e1);
        SphericalPolygon p;
        const int n = 5 + k;
        const double phase = g(rng), amp = 0.2 + 0.3 * std::abs(std::tanh(g(rng)));
        for (int i = 0; i < n; ++i) {
            const double a = 2.0 * M_PI * i / n;
            const double colat = 0.9 + amp * std::sin(3.0 * a + phase);
            p.push_back(std::cos(colat) * pole + std::sin(colat) * (std::cos(a) * e1 + std::sin(a) * e2));
        }
        EXPECT_LT(mod4pi_gap(enclosed_area(p), -gauss_bonnet_left_area(p)), 1e-9) << k;
    }
}

TEST(Sphere, ReferenceDirectionOnlyShiftsBy4Pi) {
    const auto ind = tangent_indicatrix(make_torus_knot(2, 3, 2.0, 1.0, 1024));
    const double a0 = enclosed_area(ind);
    for (const Vec3 r : {Vec3{1, 0, 0}, Vec3{0.3, -0.2, 0.9}, Vec3{-1, 1, 1}})
        EXPECT_LT(mod4pi_gap(enclosed_area(ind, r), a0), 1e-9);
}

TEST(Sphere, Reductions) {
    EXPECT_DOUBLE_EQ(reduce_area(2.0 * M_PI), 2.0 * M_PI);
    EXPECT_NEAR(reduce_area(-2.0 * M_PI), 2.0 * M_PI, 1e-15);
    EXPECT_NEAR(reduce_area(5.0 * M_PI), M_PI, 1e-14);
    EXPECT_DOUBLE_EQ(distance_to_even(2.9), 0.9);
    EXPECT_NEAR(distance_to_even(-3.1), 0.9, 1e-15);
    EXPECT_DOUBLE_EQ(distance_to_even(4.0), 0.0);
}

TEST(Fuller, HoldsOnCorpus) {
    const std::vector<ClosedCurve> curves{
        make_circle(1.0, 512),
        make_torus_knot(2, 3, 2.0, 1.0, 1024),
        make_torus_knot(3, 2, 2.0, 0.5, 1024),
        make_torus_knot(2, 5, 2.0, 0.75, 1024),
        mirrored(make_torus_knot(2, 5, 2.0, 0.75, 1024)),
        make_perturbed_circle(1, 0.2, 0.3, 4, 1024),
        make_perturbed_circle(2, 0.2, 0.3, 4, 1024),
    };
    for (const auto& c : curves) {
        const auto r = fuller_check(c);
        EXPECT_LT(r.residual_mod2, 1e-6) << c.meta();
        EXPECT_DOUBLE_EQ(r.fuller_lhs, 1.0 + r.writhe);
    }
}

TEST(Fuller, CircleAreaIsHemisphere) {
    const auto r = fuller_check(make_circle(1.0, 256));
    EXPECT_NEAR(std::abs(r.area), 2.0 * M_PI, 1e-12);
    EXPECT_NEAR(r.writhe, 0.0, 1e-15);
}

TEST(Fuller, QuadratureRouteWithinTolerance) {
    const auto r = fuller_check(make_torus_knot(2, 3, 2.0, 1.0, 2048), WritheMethod::Quadrature);
    EXPECT_LT(r.residual_mod2, 1e-3);
}

TEST(Fuller, ConstantIntervalEdgesAreSkipped) {
    const auto r = reparameterize_constant(make_torus_knot(2, 3, 2.0, 1.0, 1024)).first;
    EXPECT_LT(fuller_check(r).residual_mod2, 1e-6);
    EXPECT_LT(tangent_indicatrix(r).size(), r.size());
}

TEST(Fuller, CsvRow) {
    EXPECT_EQ(csv_header_fuller(), "N,writhe,area,fuller_lhs,fuller_rhs,residual_mod2");
    const auto row = csv_row(fuller_check(make_circle(1.0, 64)));
    EXPECT_EQ(row.rfind("64,0,", 0), 0u);
}
