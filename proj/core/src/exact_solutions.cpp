#include "droplet/exact_solutions.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "droplet/errors.hpp"

namespace droplet {

namespace {
const double kSqrt3 = std::sqrt(3.0);
}

TriangleOracle::TriangleOracle(double a) : a_(a) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw InvalidArgument("triangle half side a must be positive, got " + std::to_string(a));
    }
    c_ = 5.0 / (3.0 * std::pow(a, 5));
    lambda0_ = 4.0 * a * c_ * kSqrt3;
}

std::array<Point2, 3> TriangleOracle::vertices() const {
    return {Point2{-a_, 0.0}, Point2{a_, 0.0}, Point2{0.0, a_ * kSqrt3}};
}

bool TriangleOracle::contains(Point2 p) const {
    return p.y >= 0.0 && kSqrt3 * std::abs(p.x) <= a_ * kSqrt3 - p.y;
}

double TriangleOracle::value(Point2 p) const {
    const double s = p.y - a_ * kSqrt3;
    return c_ * p.y * (s * s - 3.0 * p.x * p.x);
}

Vec2 TriangleOracle::gradient(Point2 p) const {
    const double s = p.y - a_ * kSqrt3;
    return {-6.0 * c_ * p.x * p.y, c_ * (s * s - 3.0 * p.x * p.x) + 2.0 * c_ * p.y * s};
}

double TriangleOracle::laplacian_residual(Point2 p, double h) const {
    const double centre = value(p);
    const double lap = (value({p.x + h, p.y}) + value({p.x - h, p.y}) + value({p.x, p.y + h}) +
                        value({p.x, p.y - h}) - 4.0 * centre) /
                       (h * h);
    return std::abs(lap + lambda0_);
}

DiskOracle::DiskOracle(double r) : radius(r) {
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw InvalidArgument("disk radius must be positive, got " + std::to_string(r));
    }
}

double DiskOracle::mass() const { return std::numbers::pi * std::pow(radius, 4) / 8.0; }

double DiskOracle::normalized_gradient() const { return 4.0 / (std::numbers::pi * std::pow(radius, 3)); }

EdgeVelocityProfile::EdgeVelocityProfile(TriangleOracle oracle, MobilityLaw law)
    : oracle_(oracle), law_(std::move(law)) {}

void EdgeVelocityProfile::check_domain(double x) const {
    if (!(std::abs(x) < oracle_.a())) {
        throw OutOfDomain("edge velocity needs |x| < a, got x = " + std::to_string(x));
    }
}

double EdgeVelocityProfile::velocity(double x) const {
    check_domain(x);
    return law_.eval(oracle_.edge_gradient(x)).value;
}

double EdgeVelocityProfile::velocity_second_derivative(double x) const {
    check_domain(x);
    const double c = oracle_.c();
    const LawValues f = law_.eval(oracle_.edge_gradient(x));
    return 36.0 * c * c * x * x * f.second - 6.0 * c * f.first;
}

double midpoint_gap(const EdgeVelocityProfile& profile, double x0, double x1) {
    return 0.5 * (profile.velocity(x0) + profile.velocity(x1)) - profile.velocity(0.5 * (x0 + x1));
}

namespace {

// Bisection for the sign change of V'' between lo and hi.
double refine_root(const EdgeVelocityProfile& profile, double lo, double hi) {
    const bool lo_positive = profile.velocity_second_derivative(lo) > 0.0;
    for (int it = 0; it < 100 && hi - lo > 1e-15 * profile.oracle().a(); ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((profile.velocity_second_derivative(mid) > 0.0) == lo_positive) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

NonconvexPair find_nonconvex_pair(const EdgeVelocityProfile& profile, const PairSearchOptions& options) {
    const double a = profile.oracle().a();
    if (options.grid_points < 2) {
        throw InvalidArgument("pair search needs at least two grid points");
    }
    if (!(0.0 < options.lo_fraction && options.lo_fraction < options.hi_fraction && options.hi_fraction < 1.0)) {
        throw InvalidArgument("pair search window must satisfy 0 < lo < hi < 1 (fractions of a)");
    }

    NonconvexPair result;

    // V'' > 0 interval nearest the corner, from a fine scan of (0, a).
    constexpr int kScan = 4000;
    const double step = a / kScan;
    int top = -1;
    for (int k = kScan - 1; k >= 1; --k) {
        if (profile.velocity_second_derivative(k * step) > 0.0) {
            top = k;
            break;
        }
    }
    if (top >= 1) {
        int bottom = top;
        while (bottom > 1 && profile.velocity_second_derivative((bottom - 1) * step) > 0.0) --bottom;
        result.convex_lo = bottom > 1 ? refine_root(profile, (bottom - 1) * step, bottom * step) : 0.0;
        result.convex_hi = top < kScan - 1 ? refine_root(profile, top * step, (top + 1) * step) : a;
    }

    // Values on the half grid, so every pair midpoint is a cached node.
    const std::size_t n = options.grid_points;
    const std::size_t fine = 2 * n - 1;
    const double lo = options.lo_fraction * a;
    const double hi = options.hi_fraction * a;
    std::vector<double> xs(fine);
    std::vector<double> v(fine);
    std::vector<bool> convex(fine);
    for (std::size_t k = 0; k < fine; ++k) {
        xs[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(fine - 1);
        v[k] = profile.velocity(xs[k]);
        convex[k] = profile.velocity_second_derivative(xs[k]) > 0.0;
    }

    bool found = false;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::size_t fi = 2 * i;
            const std::size_t fj = 2 * j;
            const std::size_t fm = i + j;
            if (options.require_positive_curvature && !(convex[fi] && convex[fj] && convex[fm])) continue;
            const double gap = 0.5 * (v[fi] + v[fj]) - v[fm];
            if (gap > 0.0 && (!found || gap > result.gap)) {
                found = true;
                result.x0 = xs[fi];
                result.x1 = xs[fj];
                result.gap = gap;
            }
        }
    }
    if (!found) {
        throw SearchFailure("no pair with a positive midpoint gap for law " + profile.law().name() +
                            " on the scan window");
    }
    return result;
}

double choose_a(double gamma) {
    if (!(gamma > 0.0)) {
        throw InvalidArgument("choose_a needs gamma > 0");
    }
    return std::cbrt(5.0 * gamma / 4.0);
}

}  // namespace droplet
