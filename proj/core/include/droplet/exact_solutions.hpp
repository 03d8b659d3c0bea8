#pragma once

#include <array>
#include <cstddef>

#include "droplet/geometry.hpp"
#include "droplet/mobility.hpp"

namespace droplet {

/// Closed-form torsion function on the equilateral triangle D with vertices
/// (-a,0), (a,0), (0,a√3):
///
///     v(x,y) = c·y·((y - a√3)² - 3x²),  c = 5/(3a⁵),
///
/// with -Δv = λ₀ = 4ac√3, v = 0 on ∂D and ∫_D v = 1.
class TriangleOracle {
public:
    explicit TriangleOracle(double a);

    double a() const { return a_; }
    double c() const { return c_; }
    double lambda0() const { return lambda0_; }
    std::array<Point2, 3> vertices() const;
    bool contains(Point2 p) const;

    double value(Point2 p) const;
    Vec2 gradient(Point2 p) const;
    // |Δ_h v(p) + λ₀| with the five-point stencil at spacing h.
    double laplacian_residual(Point2 p, double h = 1e-4) const;
    // ∫_D v in closed form, c·3a⁵/5.
    double integral() const { return c_ * 3.0 * a_ * a_ * a_ * a_ * a_ / 5.0; }
    // v_y on the bottom edge, 3c(a² - x²).
    double edge_gradient(double x) const { return 3.0 * c_ * (a_ * a_ - x * x); }

private:
    double a_;
    double c_;
    double lambda0_;
};

// Radial torsion function of the disk of radius R: w = (R² - r²)/4, -Δw = 1.
struct DiskOracle {
    double radius = 1.0;

    explicit DiskOracle(double r);

    double torsion(double r) const { return (radius * radius - r * r) / 4.0; }
    double mass() const;                          // πR⁴/8
    double boundary_flux() const { return radius / 2.0; }
    double normalized_lambda() const { return 1.0 / mass(); }
    double normalized_gradient() const;           // 4/(πR³)
};

// V(x) = F(3c(a² - x²)) along the bottom edge, for |x| < a.
class EdgeVelocityProfile {
public:
    EdgeVelocityProfile(TriangleOracle oracle, MobilityLaw law);

    const TriangleOracle& oracle() const { return oracle_; }
    const MobilityLaw& law() const { return law_; }

    double velocity(double x) const;
    // 36c²x²F''(g) - 6cF'(g) with g = 3c(a² - x²).
    double velocity_second_derivative(double x) const;

private:
    void check_domain(double x) const;

    TriangleOracle oracle_;
    MobilityLaw law_;
};

struct PairSearchOptions {
    std::size_t grid_points = 400;
    double lo_fraction = 0.02;  // scan window (lo, hi) as fractions of a
    double hi_fraction = 0.98;
    // Pairs must have V'' > 0 at x0, x1 and their midpoint.
    bool require_positive_curvature = true;
};

struct NonconvexPair {
    double x0 = 0.0;
    double x1 = 0.0;
    double gap = 0.0;  // (V(x0) + V(x1))/2 - V((x0 + x1)/2)
    // Sub-interval of (0, a) where V'' > 0, the one nearest the corner.
    double convex_lo = 0.0;
    double convex_hi = 0.0;
};

/// Grid scan over all ordered pairs x0 < x1 of a uniform grid on
/// (lo_fraction·a, hi_fraction·a) for the largest midpoint gap. Throws
/// SearchFailure when no pair has a positive gap.
NonconvexPair find_nonconvex_pair(const EdgeVelocityProfile& profile, const PairSearchOptions& options = {});

// Midpoint gap of an arbitrary pair.
double midpoint_gap(const EdgeVelocityProfile& profile, double x0, double x1);

// Half side length for which 36c²x² >= 12c/γ holds for |x| >= a/2:
// a = (5γ/4)^(1/3).
double choose_a(double gamma);

}  // namespace droplet
