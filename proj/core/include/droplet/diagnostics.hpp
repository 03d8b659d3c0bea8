#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "droplet/counterexample.hpp"
#include "droplet/evolution.hpp"
#include "droplet/exact_solutions.hpp"
#include "droplet/geometry.hpp"

namespace droplet {

struct TimeSeriesRow {
    double t = 0.0;
    double area = 0.0;
    double lambda = 0.0;
    double min_flux = 0.0;  // normalized |Du| extrema over the markers
    double max_flux = 0.0;
    double min_curvature = 0.0;
    bool convex = true;
    std::optional<double> G;

    friend bool operator==(const TimeSeriesRow&, const TimeSeriesRow&) = default;
};

TimeSeriesRow measure(const EvolutionState& state, std::optional<double> G = std::nullopt);

inline constexpr const char* kSeriesHeader = "t,area,lambda,min_flux,max_flux,min_curv,convex,G";

// All writers use %.12e, refuse NaN/Inf and throw std::runtime_error naming
// the path on I/O failure.
void write_series_csv(const std::filesystem::path& path, const std::vector<TimeSeriesRow>& rows);
std::vector<TimeSeriesRow> read_series_csv(const std::filesystem::path& path);

// x,y per marker.
void write_curve_csv(const std::filesystem::path& path, const ClosedCurve& curve);
// s,x,y,flux,normalized_gradient per marker.
void write_flux_csv(const std::filesystem::path& path, const TorsionSolution& solution);
// t,G,min_curvature,convex_flag per sample.
void write_gap_csv(const std::filesystem::path& path, const GapSeries& series);
// x,V,Vpp on n points of (-a, a).
void write_edge_profile_csv(const std::filesystem::path& path, const EdgeVelocityProfile& profile, std::size_t n);

struct SvgOptions {
    std::vector<const ClosedCurve*> extra_curves;  // drawn thin and grey, e.g. the initial curve
    bool hull_when_nonconvex = true;
    std::optional<std::pair<Point2, Point2>> chord;
    std::string title;
};

void write_svg(const std::filesystem::path& path, const ClosedCurve& curve, const SvgOptions& options = {});

std::string report_json(const BreakingReport& report);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace droplet
