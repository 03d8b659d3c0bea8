#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "droplet/evolution.hpp"
#include "droplet/exact_solutions.hpp"
#include "droplet/geometry.hpp"
#include "droplet/mobility.hpp"

namespace droplet {

struct PlanOptions {
    std::size_t grid_points = 400;
    // The pair is searched on [x_lo, hi_fraction·a] where x_lo sits
    // inner_fraction of the way from the start of the V'' > 0 interval to the
    // upper end. Pairs reaching back toward the inflection point of V have
    // their gap overtaken by the global rounding of the domain early on.
    double hi_fraction = 0.92;
    double inner_fraction = 0.4;
};

struct Plan {
    std::string law;
    double gamma = 0.0;  // certified lower bound of F''/F' near 0
    RoundedTriangleSpec shape;
    NonconvexPair pair;  // pair.gap is the exact gap rate Δ
};

/// Picks the pair, checks it lies on the straight part of the bottom edge and
/// builds the rounded triangle. Throws InvalidLaw when the small-r assumption
/// cannot be certified, SearchFailure when no pair exists and FilletTooLarge
/// when a - √3 r <= x1.
Plan plan(const MobilityLaw& law, double a, double fillet, std::size_t marker_count, const PlanOptions& options = {});

// Checks that the curve lies in {y >= 0}, touches y = 0 and that the markers
// over [x0, x1] sit on the x axis. Throws InvalidArgument naming the failure.
void validate_initial_curve(const ClosedCurve& curve, double x0, double x1);

struct GapSample {
    double t = 0.0;
    double g0 = 0.0;   // g(x0, t)
    double gm = 0.0;   // g((x0 + x1)/2, t)
    double g1 = 0.0;   // g(x1, t)
    double G = 0.0;    // gm - (g0 + g1)/2
    double min_curvature = 0.0;
    bool convex = true;
    bool chord_outside = false;  // midpoint of the chord lies strictly outside the domain
};

struct GapSeries {
    std::vector<GapSample> samples;
    bool truncated = false;
    std::string reason;
};

// G(t) along the trajectory. Stops at the first snapshot where a vertical
// line misses the curve and records why.
GapSeries gap_series(const Trajectory& trajectory, double x0, double x1);

enum class Verdict { broken, inconclusive, not_broken };
std::string to_string(Verdict v);

struct BreakingReport {
    double a = 0.0;
    double fillet = 0.0;
    std::string law;
    double x0 = 0.0;
    double x1 = 0.0;
    double gap_rate = 0.0;  // Δ
    GapSeries series;

    // Filled by certify.
    double noise_floor = 0.0;
    double tolerance = 0.0;  // 10 × noise_floor
    double fitted_slope = 0.0;
    Verdict verdict = Verdict::not_broken;
    bool gap_certificate = false;
    bool curvature_certificate = false;
    bool chord_certificate = false;
    std::optional<double> t_star;
    // G > tolerance at every sampled t > 0.
    bool gap_positive_throughout = false;
};

/// Evaluates the three certificates over the terminal range of samples where
/// G exceeds the tolerance. The verdict is broken when that range is
/// non-empty and every sample in it is also non-convex by the curvature test
/// and has its chord midpoint outside the domain; inconclusive when only some
/// certificates hold; not_broken when none do.
void certify(BreakingReport& report);

// Slope at t = 0 of G: intercept of a least-squares quadratic fit of G(t)/t
// over the earliest quarter (at least four) of the samples with t > 0. Falls
// back to lower degree for short series.
double fit_initial_slope(const std::vector<GapSample>& samples);

struct CounterexampleConfig {
    double a = 1.0;
    double fillet = 0.02;
    StepperConfig stepper;
    PlanOptions plan;
};

// plan, evolve, gap_series and certify. A topology change truncates the
// series; the report is still certified on what was recorded.
BreakingReport run_counterexample(const MobilityLaw& law, const CounterexampleConfig& config,
                                  Trajectory* trajectory_out = nullptr,
                                  const SnapshotCallback& on_snapshot = {});

}  // namespace droplet
