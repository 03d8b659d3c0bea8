#include <gtest/gtest.h>

#include <cmath>

#include "droplet/counterexample.hpp"
#include "droplet/errors.hpp"

using namespace droplet;

namespace {

GapSample sample(double t, double G, bool convex, bool chord) {
    GapSample s;
    s.t = t;
    s.G = G;
    s.convex = convex;
    s.chord_outside = chord;
    return s;
}

BreakingReport synthetic(std::vector<GapSample> samples) {
    BreakingReport r;
    r.a = 1.0;
    r.series.samples = std::move(samples);
    return r;
}

}  // namespace

TEST(Plan, QuadraticLawPairOnFlatEdge) {
    const Plan p = plan(MobilityLaw::from_spec("p2"), 1.0, 0.02, 800);
    EXPECT_NEAR(p.pair.x0, 0.7, 0.05);
    EXPECT_NEAR(p.pair.x1, 0.9, 0.05);
    EXPECT_GE(p.pair.gap, 0.46);
    const double flat = flat_bottom_half_width(p.shape);
    EXPECT_NEAR(flat, 0.9654, 1e-4);
    EXPECT_GT(flat, p.pair.x1);
    EXPECT_GT(p.gamma, 0.0);
    EXPECT_EQ(p.shape.marker_count, 800u);
}

TEST(Plan, PairSitsInConvexPartOfProfile) {
    for (const char* law : {"p2", "p3"}) {
        const Plan p = plan(MobilityLaw::from_spec(law), 1.0, 0.02, 800);
        const EdgeVelocityProfile prof(TriangleOracle(1.0), MobilityLaw::from_spec(law));
        EXPECT_GT(p.pair.x0, p.pair.convex_lo) << law;
        EXPECT_GT(prof.velocity_second_derivative(p.pair.x0), 0.0) << law;
        EXPECT_NEAR(p.pair.gap, midpoint_gap(prof, p.pair.x0, p.pair.x1), 1e-12) << law;
    }
}

TEST(Plan, FilletTooLarge) {
    EXPECT_LT(1.0 - std::sqrt(3.0) * 0.2, 0.9);
    EXPECT_THROW(plan(MobilityLaw::from_spec("p2"), 1.0, 0.2, 800), FilletTooLarge);
}

TEST(Plan, RefusesLawWithoutAssumption) {
    EXPECT_THROW(plan(MobilityLaw::linear(), 1.0, 0.02, 800), InvalidLaw);
}

TEST(Plan, InitialCurveChecks) {
    const ClosedCurve c = make_rounded_triangle({1.0, 0.02, 800});
    double min_y = 1.0;
    for (const Point2& p : c.markers()) min_y = std::min(min_y, p.y);
    EXPECT_EQ(min_y, 0.0);
    EXPECT_NO_THROW(validate_initial_curve(c, 0.7, 0.9));
    EXPECT_THROW(validate_initial_curve(make_disk(1.0, 64), -0.5, 0.5), InvalidArgument);
}

TEST(GapSeries, FlatInitialEdgeGivesZero) {
    const MobilityLaw law = MobilityLaw::from_spec("p2");
    Trajectory traj;
    traj.push_back(make_state(make_rounded_triangle({1.0, 0.02, 800}), law, {}));
    const GapSeries g = gap_series(traj, 0.7, 0.9);
    ASSERT_EQ(g.samples.size(), 1u);
    EXPECT_NEAR(g.samples[0].G, 0.0, 1e-8);
    EXPECT_TRUE(g.samples[0].convex);
    EXPECT_FALSE(g.samples[0].chord_outside);
    EXPECT_FALSE(g.truncated);
    EXPECT_THROW(gap_series(traj, 0.9, 0.7), InvalidArgument);
}

TEST(GapSeries, TruncatesWhenLineMisses) {
    const MobilityLaw law = MobilityLaw::from_spec("p2");
    Trajectory traj;
    traj.push_back(make_state(make_disk(1.0, 64), law, {}));
    const GapSeries g = gap_series(traj, 0.5, 1.5);
    EXPECT_TRUE(g.samples.empty());
    EXPECT_TRUE(g.truncated);
    EXPECT_FALSE(g.reason.empty());
}

TEST(FitInitialSlope, RecoversPolynomialSlope) {
    std::vector<GapSample> s = {sample(0.0, 0.0, true, false)};
    for (int k = 1; k <= 20; ++k) {
        const double t = 1e-3 * k;
        s.push_back(sample(t, 2.0 * t - 30.0 * t * t + 100.0 * t * t * t, false, true));
    }
    EXPECT_NEAR(fit_initial_slope(s), 2.0, 1e-10);
    EXPECT_EQ(fit_initial_slope({sample(0.0, 0.0, true, false)}), 0.0);
    EXPECT_NEAR(fit_initial_slope({sample(0.0, 0.0, true, false), sample(0.1, 0.3, false, true)}), 3.0, 1e-14);
}

TEST(Certify, AllCertificatesAgree) {
    BreakingReport r = synthetic({sample(0.0, 0.0, true, false), sample(0.001, 1e-4, false, true),
                                  sample(0.002, 2e-4, false, true)});
    certify(r);
    EXPECT_EQ(r.verdict, Verdict::broken);
    ASSERT_TRUE(r.t_star.has_value());
    EXPECT_EQ(*r.t_star, 0.001);
    EXPECT_TRUE(r.gap_positive_throughout);
    EXPECT_GT(r.tolerance, 0.0);
    EXPECT_EQ(r.tolerance, 10.0 * r.noise_floor);
}

TEST(Certify, TerminalRangeDefinesTStar) {
    BreakingReport r = synthetic({sample(0.0, 0.0, true, false), sample(0.001, -1e-4, true, false),
                                  sample(0.002, 1e-4, false, true), sample(0.003, 3e-4, false, true)});
    certify(r);
    EXPECT_EQ(r.verdict, Verdict::broken);
    EXPECT_EQ(*r.t_star, 0.002);
    EXPECT_FALSE(r.gap_positive_throughout);
}

TEST(Certify, DisagreementIsInconclusive) {
    BreakingReport r = synthetic({sample(0.0, 0.0, true, false), sample(0.001, 1e-4, true, true)});
    certify(r);
    EXPECT_EQ(r.verdict, Verdict::inconclusive);
    EXPECT_TRUE(r.gap_certificate);
    EXPECT_FALSE(r.curvature_certificate);
    EXPECT_TRUE(r.chord_certificate);
    EXPECT_FALSE(r.t_star.has_value());
}

TEST(Certify, NoneHoldIsNotBroken) {
    BreakingReport r = synthetic({sample(0.0, 0.0, true, false), sample(0.001, 0.0, true, false)});
    certify(r);
    EXPECT_EQ(r.verdict, Verdict::not_broken);
    EXPECT_EQ(to_string(r.verdict), "not-broken");
}

TEST(Certify, NoiseFloorFromInitialSample) {
    BreakingReport r = synthetic({sample(0.0, 1e-9, true, false), sample(0.001, 5e-9, false, true)});
    certify(r);
    EXPECT_DOUBLE_EQ(r.noise_floor, 1e-9);
    EXPECT_FALSE(r.gap_certificate);  // 5e-9 < 10 × 1e-9
    EXPECT_EQ(r.verdict, Verdict::inconclusive);
}

TEST(RunCounterexample, ShortRunBreaksConvexity) {
    CounterexampleConfig cfg;
    cfg.fillet = 0.04;
    cfg.stepper.marker_count = 400;
    cfg.stepper.dt_max = 2e-4;
    cfg.stepper.t_end = 2e-3;
    cfg.stepper.output_every = 5e-4;
    Trajectory traj;
    const BreakingReport r = run_counterexample(MobilityLaw::from_spec("p2"), cfg, &traj);
    EXPECT_EQ(r.verdict, Verdict::broken);
    EXPECT_EQ(traj.size(), r.series.samples.size());
    EXPECT_TRUE(r.series.samples.front().convex);
    EXPECT_NEAR(r.fitted_slope, r.gap_rate, 0.2 * r.gap_rate);
}
