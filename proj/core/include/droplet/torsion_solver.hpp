#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "droplet/geometry.hpp"

namespace droplet {

enum class MassMethod {
    boundary,  // Green's identity, reduces ∫w to a boundary quadrature
    grid,      // midpoint rule over an axis-aligned grid clipped to the domain
};

std::string to_string(MassMethod m);
MassMethod mass_method_from_string(const std::string& s);

struct SolverConfig {
    int sources_per_marker = 1;
    double offset_factor = 1.5;    // source distance in units of local spacing
    double svd_cutoff = 1e-12;     // relative singular value truncation
    double mass_grid_factor = 1.0; // grid cell size / min marker spacing
    MassMethod mass_method = MassMethod::boundary;
    // Accepted off-collocation boundary residual, relative to the scale of the
    // boundary data max|x - c|²/4.
    double residual_tol = 1e-3;
};

void validate(const SolverConfig& config);

struct SolverDiagnostics {
    double boundary_residual = 0.0;           // max |w| at off-collocation boundary points
    double relative_boundary_residual = 0.0;
    double interior_residual = 0.0;           // max |-Δ_h w - 1| at interior probes
    double condition_estimate = 0.0;
    std::size_t unknowns = 0;
    std::size_t rank = 0;
    bool used_svd = false;
    std::size_t floored_fluxes = 0;
    double spacing_ratio = 1.0;               // max / min marker spacing
};

/// Torsion function w (-Δw = 1 in Ω, w = 0 on ∂Ω) of a marker curve.
///
/// Represented as w(p) = -|p - c|²/4 + k + Σ q_j log|p - s_j| with c the
/// area centroid and the sources s_j outside the curve. Immutable.
class TorsionSolution {
public:
    const ClosedCurve& curve() const { return curve_; }
    // |∂w/∂n| at each marker.
    std::span<const double> boundary_flux() const { return flux_; }
    double mass() const { return mass_; }
    const SolverDiagnostics& diagnostics() const { return diagnostics_; }
    std::span<const Point2> sources() const { return sources_; }

    // Throws OutOfDomain unless p lies strictly inside the curve.
    double value(Point2 p) const;
    double value_unchecked(Point2 p) const;
    Vec2 gradient_unchecked(Point2 p) const;

    // ∫w by each quadrature route, for cross-checks.
    double boundary_mass() const;
    double grid_mass(double grid_factor) const;

private:
    friend TorsionSolution solve_torsion(const ClosedCurve& curve, const SolverConfig& config);

    explicit TorsionSolution(ClosedCurve curve) : curve_(std::move(curve)) {}

    ClosedCurve curve_;
    Point2 center_;
    std::vector<Point2> sources_;  // relative to center_
    std::vector<double> strengths_;
    double constant_ = 0.0;
    std::vector<double> flux_;
    double mass_ = 0.0;
    SolverDiagnostics diagnostics_;
};

/// Boundary collocation with exterior fundamental-solution sources.
///
/// Throws InvalidDomain for a self-intersecting curve and IllConditionedSolve
/// when the regularized system still misses the boundary condition by more
/// than residual_tol between collocation points.
TorsionSolution solve_torsion(const ClosedCurve& curve, const SolverConfig& config = {});

// u = w/M solves -Δu = λ with ∫u = 1, λ = 1/M and |Du| = flux/M.
struct NormalizedField {
    double lambda = 0.0;
    std::vector<double> boundary_gradient;
};

NormalizedField normalize(const TorsionSolution& solution);
NormalizedField normalize(std::span<const double> flux, double mass);

// Arclength position of every marker along the polygon, marker 0 at s = 0.
std::vector<double> marker_arclength(const ClosedCurve& curve);

}  // namespace droplet
