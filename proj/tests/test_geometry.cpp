#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "droplet/errors.hpp"
#include "droplet/geometry.hpp"

using namespace droplet;

namespace {

constexpr double kPi = std::numbers::pi;

// Turning test written independently of the library: every consecutive triple
// turns left (or goes straight within tol).
bool brute_force_convex(const std::vector<Point2>& p, double tol) {
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = p[(i + n - 1) % n];
        const Point2 b = p[i];
        const Point2 c = p[(i + 1) % n];
        const double turn = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
        if (turn < -tol) return false;
    }
    return true;
}

}  // namespace

TEST(CirclePoints, FourPointsOnAxes) {
    const auto p = circle_points(1.0, 4);
    ASSERT_EQ(p.size(), 4u);
    const Point2 expected[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(p[i].x, expected[i].x, 1e-15);
        EXPECT_NEAR(p[i].y, expected[i].y, 1e-15);
    }
}

TEST(MakeDisk, AreaMatchesInscribedPolygon) {
    const ClosedCurve disk = make_disk(1.0, 512);
    const double inscribed = 512.0 / 2.0 * std::sin(2.0 * kPi / 512.0);
    EXPECT_NEAR(disk.signed_area(), inscribed, 1e-13);
    EXPECT_LE(std::abs(disk.signed_area() - kPi), 1e-4);
}

TEST(MakeDisk, RejectsBadArguments) {
    EXPECT_THROW(make_disk(0.0, 64), InvalidArgument);
    EXPECT_THROW(make_disk(-1.0, 64), InvalidArgument);
    EXPECT_THROW(make_disk(1.0, 7), InvalidArgument);
}

TEST(MakeDisk, IsConvex) {
    EXPECT_TRUE(is_convex(make_disk(2.0, 256)));
    EXPECT_TRUE(is_convex(make_disk(1.0, 256), 1e-6));
}

TEST(ClosedCurve, RejectsClockwiseAndSelfIntersecting) {
    auto p = circle_points(1.0, 16);
    std::vector<Point2> cw(p.rbegin(), p.rend());
    EXPECT_THROW(ClosedCurve{cw}, InvalidArgument);

    // Figure eight: swap two far-apart markers.
    auto bad = p;
    std::swap(bad[2], bad[9]);
    EXPECT_FALSE(is_simple_polygon(bad));
    EXPECT_THROW(ClosedCurve{bad}, NumericalError);
}

TEST(ClosedCurve, RejectsRepeatedAndNonFiniteMarkers) {
    auto p = circle_points(1.0, 16);
    auto dup = p;
    dup[5] = dup[4];
    EXPECT_THROW(ClosedCurve{dup}, InvalidArgument);
    auto nan = p;
    nan[3].x = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(ClosedCurve{nan}, InvalidArgument);
}

TEST(ClosedCurve, ContainsAndDistance) {
    const ClosedCurve disk = make_disk(1.0, 512);
    EXPECT_TRUE(disk.contains({0.0, 0.0}));
    EXPECT_TRUE(disk.contains({0.5, 0.5}));
    EXPECT_FALSE(disk.contains({1.1, 0.0}));
    EXPECT_NEAR(disk.distance_to_boundary({0.0, 0.0}), 1.0, 1e-4);
}

TEST(RoundedTriangle, SharpTriangleMarkersOnEdges) {
    const ClosedCurve tri = make_rounded_triangle({1.0, 0.0, 300});
    const double s3 = std::sqrt(3.0);
    for (const Point2& p : tri.markers()) {
        const double d_bottom = std::abs(p.y);
        const double d_right = std::abs(s3 * p.x + p.y - s3) / 2.0;
        const double d_left = std::abs(-s3 * p.x + p.y - s3) / 2.0;
        EXPECT_LE(std::min({d_bottom, d_right, d_left}), 1e-12);
    }
    EXPECT_NEAR(tri.signed_area(), s3, 1e-12);
}

TEST(RoundedTriangle, FlatBottomEndpoints) {
    const RoundedTriangleSpec spec{1.0, 0.05, 600};
    EXPECT_NEAR(flat_bottom_half_width(spec), 1.0 - std::sqrt(3.0) * 0.05, 1e-15);
    EXPECT_NEAR(flat_bottom_half_width(spec), 0.9134, 1e-4);
    const ClosedCurve c = make_rounded_triangle(spec);
    const double xf = flat_bottom_half_width(spec);
    // Tangent points are markers; nothing on y = 0 lies beyond them.
    bool found_right = false;
    for (const Point2& p : c.markers()) {
        if (std::abs(p.y) < 1e-14) {
            EXPECT_LE(std::abs(p.x), xf + 1e-12);
            found_right = found_right || std::abs(p.x - xf) < 1e-12;
        }
    }
    EXPECT_TRUE(found_right);
}

TEST(RoundedTriangle, InsideTriangleAndConvex) {
    const ClosedCurve c = make_rounded_triangle({1.0, 0.1, 600});
    const double s3 = std::sqrt(3.0);
    for (const Point2& p : c.markers()) {
        EXPECT_GE(p.y, -1e-14);
        EXPECT_LE(s3 * std::abs(p.x) + p.y, s3 + 1e-12);
    }
    EXPECT_TRUE(is_convex(c, 1e-6));
}

TEST(RoundedTriangle, FilletMarkersOnCircle) {
    const double a = 1.0;
    const double r = 0.1;
    const ClosedCurve c = make_rounded_triangle({a, r, 600});
    const Point2 center{a - std::sqrt(3.0) * r, r};
    const double t = std::sqrt(3.0) * r;
    for (const Point2& p : c.markers()) {
        // Between the tangent points (a - t, 0) and (a - t + r sqrt3/2, 3r/2).
        if (p.x > a - t && p.y < 1.5 * r - 1e-12) EXPECT_NEAR(distance(p, center), r, 1e-12);
    }
}

TEST(RoundedTriangle, MirrorSymmetricMarkers) {
    const ClosedCurve c = make_rounded_triangle({1.0, 0.03, 601});
    for (const Point2& p : c.markers()) {
        double best = 1e9;
        for (const Point2& q : c.markers()) best = std::min(best, distance({-p.x, p.y}, q));
        EXPECT_LE(best, 1e-12);
    }
}

TEST(RoundedTriangle, AreaIncreasesAsFilletShrinks) {
    double prev = 0.0;
    for (double r : {0.2, 0.1, 0.05, 0.02, 0.01, 0.0}) {
        const double area = make_rounded_triangle({1.0, r, 1200}).signed_area();
        EXPECT_GT(area, prev);
        prev = area;
    }
    EXPECT_NEAR(prev, std::sqrt(3.0), 1e-12);
}

TEST(RoundedTriangle, RejectsOversizedFillet) {
    EXPECT_THROW(make_rounded_triangle({1.0, 0.6, 600}), InvalidArgument);
    EXPECT_THROW(make_rounded_triangle({1.0, -0.1, 600}), InvalidArgument);
    EXPECT_THROW(make_rounded_triangle({1.0, 0.1, 12}), InvalidArgument);
}

TEST(Curvature, DiskCurvatureAndNormals) {
    const ClosedCurve disk = make_disk(2.0, 512);
    const auto k = signed_curvatures(disk);
    const auto n = outward_normals(disk);
    for (std::size_t i = 0; i < disk.size(); ++i) {
        EXPECT_NEAR(k[i], 0.5, 0.5e-3);
        const Point2 p = disk[static_cast<std::ptrdiff_t>(i)];
        EXPECT_NEAR(n[i].x, p.x / norm(p), 1e-3);
        EXPECT_NEAR(n[i].y, p.y / norm(p), 1e-3);
    }
}

TEST(Curvature, CollinearTripleGivesZero) {
    const ClosedCurve tri = make_rounded_triangle({1.0, 0.0, 300});
    const auto k = signed_curvatures(tri);
    EXPECT_EQ(k[0], 0.0);  // bottom midpoint
}

TEST(Convexity, ReflexVertexDetected) {
    // Square with a notch pushed in from the top edge.
    const std::vector<Point2> p = {{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2}, {1, 2}, {0.9, 1.0}, {0, 2}, {0, 1}};
    const ClosedCurve c(p);
    EXPECT_FALSE(is_convex(c));
}

TEST(Convexity, InwardDisplacedMarker) {
    auto p = circle_points(1.0, 128);
    const double perimeter = 2.0 * kPi;
    p[17] = (1.0 - 0.01 * perimeter) * p[17];
    const ClosedCurve c(p);
    EXPECT_FALSE(is_convex(c, 1e-6));
    EXPECT_FALSE(brute_force_convex(p, 0.0));
}

TEST(Convexity, RandomPolygonsAgreeWithBruteForce) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> jitter(-0.08, 0.08);
    int nonconvex = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto p = circle_points(1.0, 24);
        for (auto& q : p) q = (1.0 + jitter(rng)) * q;
        if (!is_simple_polygon(p)) continue;
        const ClosedCurve c(p);
        // Compare away from the tolerance band.
        bool clear = true;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const Point2 a = p[(i + p.size() - 1) % p.size()];
            const Point2 b = p[i];
            const Point2 d = p[(i + 1) % p.size()];
            if (std::abs(orient(a, b, d)) < 1e-4) clear = false;
        }
        if (!clear) continue;
        const bool expected = brute_force_convex(p, 0.0);
        nonconvex += !expected;
        EXPECT_EQ(is_convex(c, 1e-9), expected) << "trial " << trial;
    }
    EXPECT_GT(nonconvex, 10);
}

TEST(Resample, IdempotentAndPerimeterPreserving) {
    const ClosedCurve c = make_rounded_triangle({1.0, 0.05, 512});
    const ClosedCurve once = resample_uniform(c, 512);
    const ClosedCurve twice = resample_uniform(once, 512);
    double moved = 0.0;
    for (std::size_t i = 0; i < once.size(); ++i) {
        const auto k = static_cast<std::ptrdiff_t>(i);
        moved = std::max(moved, distance(once[k], twice[k]));
    }
    EXPECT_LE(moved, 1e-9 * once.perimeter());
    EXPECT_LE(std::abs(once.perimeter() - c.perimeter()), 1e-3 * c.perimeter());  // chords cut the fillets
    EXPECT_LE(once.max_spacing() / once.min_spacing(), 1.0 + 1e-6);
    EXPECT_THROW(resample_uniform(c, 7), InvalidArgument);
}

TEST(GraphHeight, Examples) {
    const ClosedCurve tri = make_rounded_triangle({1.0, 0.05, 600});
    EXPECT_EQ(extract_graph_height(tri, 0.0), 0.0);
    const ClosedCurve disk = make_disk(1.0, 4096);
    EXPECT_NEAR(extract_graph_height(disk, 0.0), -1.0, 1e-6);
    EXPECT_NEAR(extract_graph_height(disk, 0.6), -0.8, 1e-6);
    EXPECT_THROW(extract_graph_height(disk, 1.5), OutOfDomain);
}

TEST(ConvexHull, SquareWithInteriorPoints) {
    const auto hull = convex_hull({{0, 0}, {1, 0}, {0.5, 0.5}, {1, 1}, {0, 1}, {0.2, 0.7}});
    EXPECT_EQ(hull.size(), 4u);
    EXPECT_NEAR(polygon_signed_area(hull), 1.0, 1e-15);
}

TEST(Interpolation, ReproducesMarkersAndCircle) {
    const ClosedCurve disk = make_disk(1.0, 256);
    for (std::ptrdiff_t i = 0; i < 256; i += 17) {
        const Point2 p0 = interpolate_on_curve(disk, i, 0.0);
        EXPECT_NEAR(distance(p0, disk[i]), 0.0, 1e-15);
        EXPECT_NEAR(norm(interpolate_on_curve(disk, i, 0.5)), 1.0, 1e-8);
    }
}
