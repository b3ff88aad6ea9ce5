#include <gtest/gtest.h>

#include <random>

#include "writhekit/error.hpp"
#include "writhekit/parallel.hpp"
#include "writhekit/vec3.hpp"

using namespace writhekit;

TEST(Vec3, CrossAndTriple) {
    const Vec3 x{1, 0, 0}, y{0, 1, 0}, z{0, 0, 1};
    EXPECT_EQ(cross(x, y), z);
    EXPECT_EQ(cross(y, x), -z);
    EXPECT_DOUBLE_EQ(triple(x, y, z), 1.0);
    EXPECT_DOUBLE_EQ(norm(Vec3{3, 4, 12}), 13.0);
    EXPECT_EQ(normalized(Vec3{}), Vec3{});
}

TEST(Vec3, AxisAngleIsOrthogonal) {
    std::mt19937 rng(11);
    std::normal_distribution<double> g;
    for (int k = 0; k < 50; ++k) {
        const Mat3 r = axis_angle({g(rng), g(rng), g(rng)}, g(rng));
        const Mat3 p = r * r.transposed();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) EXPECT_NEAR(p(i, j), i == j ? 1.0 : 0.0, 1e-14);
        EXPECT_NEAR(r.determinant(), 1.0, 1e-14);
    }
}

TEST(Vec3, RotationBetweenHitsTarget) {
    std::mt19937 rng(5);
    std::normal_distribution<double> g;
    const Vec3 z{0, 0, 1};
    for (int k = 0; k < 100; ++k) {
        const Vec3 t = normalized(Vec3{g(rng), g(rng), g(rng)});
        EXPECT_LT(distance(rotation_between(z, t) * z, t), 1e-14);
    }
    EXPECT_LT(distance(rotation_between(z, -z) * z, -z), 1e-15);
    EXPECT_LT(distance(rotation_between(z, -z) * Vec3{1, 0, 0}, Vec3{1, 0, 0}), 1e-15);
    EXPECT_LT(distance(rotation_between(z, z) * Vec3{1, 2, 3}, Vec3{1, 2, 3}), 0.0 + 1e-300);
}

TEST(Parallel, SumIsIndependentOfWorkerCount) {
    auto row = [](std::size_t i) { return 1.0 / (1.0 + static_cast<double>(i)) * (i % 3 == 0 ? -1.0 : 1.0); };
    const double one = tiled_sum(10007, row, 1);
    for (std::size_t w : {2, 3, 8}) EXPECT_EQ(tiled_sum(10007, row, w), one);
    EXPECT_EQ(tiled_sum(0, row, 4), 0.0);
}

TEST(Parallel, MinAndExceptions) {
    auto row = [](std::size_t i) { return std::abs(static_cast<double>(i) - 500.25); };
    EXPECT_EQ(tiled_min(1000, row, 1e300, 4), 0.25);
    EXPECT_THROW(for_each_tile(1000, 64, 4,
                               [](std::size_t t, std::size_t, std::size_t) {
                                   if (t == 7) fail(ErrorKind::InvariantViolated, "boom");
                               }),
                 Error);
}

TEST(Error, CarriesKind) {
    try {
        require(false, ErrorKind::NotEmbedded, "crossing");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotEmbedded);
        EXPECT_STREQ(e.what(), "crossing");
    }
    EXPECT_STREQ(to_string(ErrorKind::InvalidArgument), "invalid_argument");
}
