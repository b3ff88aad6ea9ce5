#include <gtest/gtest.h>

#include "writhekit/family.hpp"

using namespace writhekit;

namespace {

struct Fixture {
    CurveFamily raw;
    CurveFamily corrected;
};

// Small S^1 coil family: writhe +-0.55 at the quarter points, 0 at the basepoint.
const Fixture& circle_family() {
    static const Fixture f = [] {
        Fixture x;
        x.raw = make_coil_family(ParamSpace::sphere(1, 8), 4, 2.0, 0.3, 1024);
        x.corrected = correct_family(x.raw);
        return x;
    }();
    return f;
}

}  // namespace

TEST(ParamSpace, Spheres) {
    const auto s0 = ParamSpace::sphere(0);
    EXPECT_EQ(s0.size(), 2u);
    EXPECT_EQ(s0.nodes[1].dist, 1.0);
    const auto s1 = ParamSpace::sphere(1);
    EXPECT_EQ(s1.size(), 64u);
    EXPECT_EQ(s1.edges.size(), 64u);
    EXPECT_EQ(s1.nodes[0].dist, 0.0);
    EXPECT_NEAR(s1.nodes[32].dist, 1.0, 1e-15);
    EXPECT_NEAR(s1.nodes[16].dist, 0.5, 1e-15);
    EXPECT_NEAR(s1.nodes[48].dist, 0.5, 1e-15);
    const auto s2 = ParamSpace::sphere(2);
    EXPECT_EQ(s2.size(), 162u);
    EXPECT_EQ(s2.edges.size(), 480u);
    double far = 0.0;
    for (const auto& n : s2.nodes) {
        EXPECT_GE(n.dist, 0.0);
        EXPECT_LE(n.dist, 1.0);
        far = std::max(far, n.dist);
    }
    EXPECT_NEAR(far, 1.0, 1e-12);
    EXPECT_THROW(ParamSpace::sphere(3), Error);
}

TEST(ParamSpace, SphereCrossInterval) {
    const auto s = ParamSpace::sphere_cross_interval(1, 8, 4);
    EXPECT_EQ(s.size(), 40u);
    EXPECT_EQ(s.edges.size(), 8u * 4 + 8u * 5);
    EXPECT_EQ(s.nodes[0].dist, 0.0);
    EXPECT_TRUE(s.on_end(0));
    EXPECT_TRUE(s.on_end(4));
    EXPECT_FALSE(s.on_end(2));
    for (const auto& n : s.nodes) EXPECT_LE(n.dist, 1.0 + 1e-15);
    EXPECT_NEAR(s.nodes[4 * 5 + 4].dist, 1.0, 1e-15);  // antipode at t = 1
}

TEST(Family, CoilGeneratorIsContinuous) {
    const auto& f = circle_family();
    EXPECT_LT(max_adjacent_distance(f.raw), 0.3);
    EXPECT_NEAR(writhe_polygonal(f.raw.curves[0]).value, 0.0, 1e-14);
    EXPECT_NEAR(writhe_polygonal(f.raw.curves[2]).value, -writhe_polygonal(f.raw.curves[6]).value, 1e-12);
}

TEST(Family, CorrectionIsConstant) {
    const auto& f = circle_family();
    const auto& c = f.corrected;
    EXPECT_EQ(c.omega, c.traces[0].wr_tilde);
    EXPECT_LT(max_deviation(c), 1e-2);
    const int n = c.traces[0].helix.n;
    EXPECT_EQ(n, 2);
    for (const auto& t : c.traces) {
        EXPECT_EQ(t.helix.n, n);
        EXPECT_LT(std::abs(t.w_applied), n);
        EXPECT_TRUE(t.locality);
        EXPECT_TRUE(t.embedded_after);
        EXPECT_LT(std::abs(t.connector_area), 1e-6);
        EXPECT_EQ(t.ctx.epsilon, c.traces[0].ctx.epsilon);
        EXPECT_DOUBLE_EQ(t.helix.scale, scale_from_distance(t.dist));
    }
    // basepoint untouched apart from the zero-scale splice
    EXPECT_EQ(c.traces[0].helix.scale, 0.0);
    EXPECT_EQ(c.curves[0].points(), reparameterize_constant(f.raw.curves[0]).first.points());
}

TEST(Family, ConstantFamilyNeedsNoCorrection) {
    const auto space = ParamSpace::sphere(0);
    const auto raw = make_family(space, [](const ParamNode&) { return make_torus_knot(2, 3, 2.0, 1.0, 1024); });
    const auto c = correct_family(raw);
    EXPECT_LT(max_deviation(c), 1e-2);
    // the antipode still gets the push of a full-scale splice
    EXPECT_LT(std::abs(c.traces[1].w_applied), 1e-2);
}

TEST(Family, IntervalEndsKeepTheirWrithe) {
    const auto raw = make_coil_family(ParamSpace::sphere_cross_interval(1, 4, 2), 4, 2.0, 0.3, 768);
    const auto c = correct_family(raw);
    EXPECT_LT(max_deviation(c), 1e-2);
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c.space.on_end(i)) {
            EXPECT_NEAR(c.traces[i].wr_input, c.omega, 1e-12);
            EXPECT_NEAR(c.traces[i].wr_output, c.omega, 1e-2);
        }
}

TEST(Homotopy, Endpoints) {
    const auto& f = circle_family();
    const auto one = omega_homotopy(f.raw, f.corrected, 1.0);
    const auto half = omega_homotopy(f.raw, f.corrected, 0.5);
    const auto zero = omega_homotopy(f.raw, f.corrected, 0.0);
    const auto tilde = tilde_family(f.raw, f.corrected);
    for (std::size_t i = 0; i < f.raw.size(); ++i) {
        EXPECT_EQ(one.curves[i].points(), f.corrected.curves[i].points());
        for (std::size_t j = 0; j < half.curves[i].size(); ++j)
            EXPECT_LT(distance(half.curves[i][j], tilde.curves[i][j]), 1e-9);
        const auto reparam = reparameterize_constant(f.raw.curves[i]).first;
        EXPECT_EQ(zero.curves[i].points(), reparam.points());
    }
    EXPECT_THROW(omega_homotopy(f.raw, f.corrected, 1.5), Error);
    EXPECT_THROW(phi_homotopy(f.raw, f.corrected, 0.5), Error);
}

TEST(Homotopy, HelixRadiusScales) {
    const auto& f = circle_family();
    const std::size_t node = 2;
    const auto& tr = f.corrected.traces[node];
    const auto c = homotopy_curve(f.raw.curves[node], tr, 0.75);
    // unstraightened helix samples sit at half the radius from the pole axis
    const auto& ctx = tr.ctx;
    double widest = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double s = c.parameter(i);
        if (s < ctx.s1 || s > ctx.s2) continue;
        const Vec3 z = ctx.rotation.transposed() * (c[i] - ctx.center);
        widest = std::max(widest, std::hypot(z.x, z.y));
    }
    EXPECT_GE(widest, 0.5 * tr.helix.r * (1 - 1e-9));
    EXPECT_LE(widest, 0.5 * ctx.epsilon);
}

TEST(Homotopy, SweepIsContinuous) {
    const auto& f = circle_family();
    const std::size_t node = 2;
    double prev = 0.0, jump = 0.0;
    for (int k = 0; k <= 20; ++k) {
        const double wr = writhe_polygonal(homotopy_curve(f.raw.curves[node], f.corrected.traces[node], 0.05 * k)).value;
        if (k > 0) jump = std::max(jump, std::abs(wr - prev));
        prev = wr;
    }
    EXPECT_LT(jump, 0.2);
    EXPECT_NEAR(prev, f.corrected.omega, 1e-2);
}

TEST(Homotopy, PhiOnProductFamily) {
    const auto raw = make_coil_family(ParamSpace::sphere_cross_interval(1, 4, 2), 4, 2.0, 0.3, 512);
    const auto c = correct_family(raw);
    const auto one = phi_homotopy(raw, c, 1.0);
    for (std::size_t i = 0; i < raw.size(); ++i) EXPECT_EQ(one.curves[i].points(), c.curves[i].points());
}

TEST(Family, CsvRow) {
    const auto& f = circle_family();
    EXPECT_EQ(csv_header_family(), "node_id,dist,wr_raw,wr_tilde,w,wr_final");
    EXPECT_EQ(csv_row(0, f.corrected.space.nodes[0], f.corrected.traces[0]).rfind("0,0,0,", 0), 0u);
}
