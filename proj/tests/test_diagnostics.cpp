#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "droplet/diagnostics.hpp"
#include "droplet/errors.hpp"

using namespace droplet;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "droplet_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Measure, DiskRow) {
    const EvolutionState s = make_state(make_disk(1.0, 1024), MobilityLaw::from_spec("p2"), {});
    const TimeSeriesRow row = measure(s);
    EXPECT_NEAR(row.area, std::numbers::pi, 1e-3);
    EXPECT_NEAR(row.lambda, 8.0 / std::numbers::pi, 1e-3);
    EXPECT_TRUE(row.convex);
    EXPECT_FALSE(row.G.has_value());
    EXPECT_NEAR(row.min_flux, row.max_flux, 1e-6);
}

TEST(Measure, RoundedTriangleIsConvexInitially) {
    const EvolutionState s = make_state(make_rounded_triangle({1.0, 0.05, 600}), MobilityLaw::from_spec("p2"), {});
    const TimeSeriesRow row = measure(s, 0.0);
    EXPECT_TRUE(row.convex);
    EXPECT_GE(row.min_curvature, -1e-6);
    EXPECT_GT(row.area, 0.0);
    EXPECT_GT(row.lambda, 0.0);
}

TEST(SeriesCsv, EmptyIsHeaderOnly) {
    const fs::path p = scratch("empty.csv");
    write_series_csv(p, {});
    EXPECT_EQ(slurp(p), std::string(kSeriesHeader) + "\n");
    EXPECT_TRUE(read_series_csv(p).empty());
}

TEST(SeriesCsv, RoundTripIsExactAtPrintedPrecision) {
    std::vector<TimeSeriesRow> rows(2);
    rows[0] = {0.0, 1.7312036191161, 11.546818274312, 0.18705653145, 5.0002893752, -3.787e-12, true, 0.0};
    rows[1] = {1e-3, 1.7998633945634, 10.317662312851, 0.15286694491, 4.5519855372, -0.15772108308, false,
               std::nullopt};
    const fs::path p = scratch("series.csv");
    write_series_csv(p, rows);
    const auto back = read_series_csv(p);
    ASSERT_EQ(back.size(), 2u);
    // Rows already at %.12e precision survive bit-exactly; a second write is byte-identical.
    const fs::path q = scratch("series2.csv");
    write_series_csv(q, back);
    EXPECT_EQ(slurp(p), slurp(q));
    const auto again = read_series_csv(q);
    EXPECT_EQ(again, back);
    EXPECT_FALSE(back[1].G.has_value());
    EXPECT_TRUE(back[0].convex);
    EXPECT_FALSE(back[1].convex);
    EXPECT_LT(back[0].t, back[1].t);
}

TEST(SeriesCsv, RefusesNonFiniteAndUnorderedRows) {
    std::vector<TimeSeriesRow> rows(1);
    rows[0].area = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(write_series_csv(scratch("nan.csv"), rows), NumericalError);
    rows[0].area = std::numeric_limits<double>::infinity();
    EXPECT_THROW(write_series_csv(scratch("inf.csv"), rows), NumericalError);
    std::vector<TimeSeriesRow> unordered(2);
    unordered[0].t = 1.0;
    unordered[1].t = 0.5;
    EXPECT_THROW(write_series_csv(scratch("order.csv"), unordered), InvalidArgument);
}

TEST(SeriesCsv, ReadRejectsBadInput) {
    const fs::path p = scratch("bad.csv");
    {
        std::ofstream out(p);
        out << "t,area\n1,2\n";
    }
    EXPECT_THROW(read_series_csv(p), std::runtime_error);
    {
        std::ofstream out(p);
        out << kSeriesHeader << "\n1,2,3,4,5,6,yes,\n";
    }
    EXPECT_THROW(read_series_csv(p), std::runtime_error);
}

TEST(Writers, FixedHeaders) {
    const ClosedCurve disk = make_disk(1.0, 64);
    write_curve_csv(scratch("curve.csv"), disk);
    EXPECT_EQ(slurp(scratch("curve.csv")).substr(0, 4), "x,y\n");

    write_flux_csv(scratch("flux.csv"), solve_torsion(disk));
    EXPECT_EQ(slurp(scratch("flux.csv")).rfind("s,x,y,flux,normalized_gradient\n", 0), 0u);

    GapSeries g;
    g.samples.push_back({});
    write_gap_csv(scratch("gap.csv"), g);
    EXPECT_EQ(slurp(scratch("gap.csv")),
              "t,G,min_curvature,convex_flag\n0.000000000000e+00,0.000000000000e+00,0.000000000000e+00,1\n");

    write_edge_profile_csv(scratch("edge.csv"), EdgeVelocityProfile(TriangleOracle(1.0), MobilityLaw::from_spec("p2")),
                           11);
    const std::string edge = slurp(scratch("edge.csv"));
    EXPECT_EQ(edge.rfind("x,V,Vpp\n", 0), 0u);
    EXPECT_EQ(std::count(edge.begin(), edge.end(), '\n'), 12);
}

TEST(Writers, ReportIsErrorOnUnwritablePath) {
    EXPECT_THROW(write_text("/proc/definitely/not/here.txt", "x"), std::runtime_error);
}

TEST(Svg, HullDrawnOnlyWhenNonconvex) {
    const ClosedCurve disk = make_disk(1.0, 64);
    write_svg(scratch("disk.svg"), disk);
    EXPECT_EQ(slurp(scratch("disk.svg")).find("stroke-dasharray"), std::string::npos);

    const ClosedCurve notch({{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2}, {1, 2}, {0.9, 1.0}, {0, 2}, {0, 1}});
    SvgOptions o;
    o.chord = {{{0.0, 0.0}, {2.0, 0.0}}};
    write_svg(scratch("notch.svg"), notch, o);
    const std::string svg = slurp(scratch("notch.svg"));
    EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);
    EXPECT_NE(svg.find("<line"), std::string::npos);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
}

TEST(ReportJson, ContainsVerdictAndPair) {
    BreakingReport r;
    r.a = 1.0;
    r.fillet = 0.02;
    r.law = "r^2-1";
    r.x0 = 0.7;
    r.x1 = 0.9;
    r.gap_rate = 0.4625;
    r.verdict = Verdict::broken;
    r.t_star = 0.001;
    const std::string j = report_json(r);
    EXPECT_NE(j.find("\"verdict\": \"broken\""), std::string::npos);
    EXPECT_NE(j.find("\"t_star\": 0.001"), std::string::npos);
    EXPECT_NE(j.find("\"gap_rate\": 0.4625"), std::string::npos);
}

TEST(AreaSeries, TransportBound) {
    StepperConfig cfg;
    cfg.marker_count = 300;
    cfg.dt_max = 2e-4;
    cfg.t_end = 2e-3;
    cfg.output_every = 0.0;
    const MobilityLaw law = MobilityLaw::from_spec("p2");
    EvolutionState s = make_state(make_rounded_triangle({1.0, 0.05, 300}), law, cfg.solver);
    for (int i = 0; i < 10; ++i) {
        double vmax = 0.0;
        for (double v : s.velocity) vmax = std::max(vmax, std::abs(v));
        const EvolutionState next = step(s, law, cfg);
        const double dt = next.t - s.t;
        EXPECT_LE(std::abs(next.curve().signed_area() - s.curve().signed_area()),
                  s.curve().perimeter() * vmax * dt * (1 + 1e-2));
        s = next;
    }
}
