#include "droplet/counterexample.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "droplet/errors.hpp"
#include "droplet/log.hpp"

namespace droplet {

Plan plan(const MobilityLaw& law, double a, double fillet, std::size_t marker_count, const PlanOptions& options) {
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("a must be positive");
    if (!(options.hi_fraction > 0.0 && options.hi_fraction < 1.0)) {
        throw InvalidArgument("plan hi_fraction must be in (0, 1)");
    }
    if (!(options.inner_fraction >= 0.0 && options.inner_fraction < 1.0)) {
        throw InvalidArgument("plan inner_fraction must be in [0, 1)");
    }

    const std::optional<double> gamma = certified_gamma(law);
    if (!gamma) {
        throw InvalidLaw("law " + law.name() + " does not satisfy lim F''/F' > 0 as r -> 0");
    }

    const EdgeVelocityProfile profile(TriangleOracle(a), law);
    PairSearchOptions search;
    search.grid_points = options.grid_points;
    search.hi_fraction = options.hi_fraction;
    // First pass locates the V'' > 0 interval and fails early if there is no pair at all.
    const NonconvexPair wide = find_nonconvex_pair(profile, search);
    const double hi = options.hi_fraction * a;
    const double lo = wide.convex_lo + options.inner_fraction * (std::min(wide.convex_hi, hi) - wide.convex_lo);
    search.lo_fraction = std::max(lo / a, search.lo_fraction);
    if (!(search.lo_fraction < search.hi_fraction)) {
        throw SearchFailure("no room for a pair between V'' > 0 onset and the search window end");
    }
    NonconvexPair pair = find_nonconvex_pair(profile, search);
    pair.convex_lo = wide.convex_lo;
    pair.convex_hi = wide.convex_hi;

    RoundedTriangleSpec shape{a, fillet, marker_count};
    validate(shape);
    const double flat = flat_bottom_half_width(shape);
    if (!(flat > pair.x1)) {
        std::ostringstream os;
        os << "fillet " << fillet << " too large: straight bottom edge ends at |x| = " << flat
           << " but the pair needs x1 = " << pair.x1;
        throw FilletTooLarge(os.str());
    }
    validate_initial_curve(make_rounded_triangle(shape), pair.x0, pair.x1);

    return {law.name(), *gamma, shape, pair};
}

void validate_initial_curve(const ClosedCurve& curve, double x0, double x1) {
    double min_y = std::numeric_limits<double>::infinity();
    for (const Point2& p : curve.markers()) min_y = std::min(min_y, p.y);
    const double scale = curve.bounds().width();
    if (std::abs(min_y) > 1e-12 * scale) {
        throw InvalidArgument("initial curve must touch y = 0 from above; min y = " + std::to_string(min_y));
    }
    constexpr int kProbes = 33;
    for (int k = 0; k < kProbes; ++k) {
        const double x = x0 + (x1 - x0) * k / (kProbes - 1);
        if (std::abs(extract_graph_height(curve, x)) > 1e-12 * scale) {
            throw InvalidArgument("bottom edge is not straight over [x0, x1]: g(" + std::to_string(x) +
                                  ") = " + std::to_string(extract_graph_height(curve, x)));
        }
    }
}

GapSeries gap_series(const Trajectory& trajectory, double x0, double x1) {
    if (!(x0 < x1)) throw InvalidArgument("gap series needs x0 < x1");
    GapSeries series;
    const double xm = 0.5 * (x0 + x1);
    for (const EvolutionState& state : trajectory) {
        const ClosedCurve& curve = state.curve();
        GapSample s;
        s.t = state.t;
        try {
            s.g0 = extract_graph_height(curve, x0);
            s.gm = extract_graph_height(curve, xm);
            s.g1 = extract_graph_height(curve, x1);
        } catch (const OutOfDomain& e) {
            series.truncated = true;
            series.reason = "graph extraction failed at t = " + std::to_string(state.t) + ": " + e.what();
            log_warn(series.reason);
            break;
        }
        s.G = s.gm - 0.5 * (s.g0 + s.g1);
        const std::vector<double> k = signed_curvatures(curve);
        s.min_curvature = *std::min_element(k.begin(), k.end());
        s.convex = is_convex(curve);
        s.chord_outside = !curve.contains({xm, 0.5 * (s.g0 + s.g1)});
        series.samples.push_back(s);
    }
    return series;
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::broken: return "broken";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::not_broken: return "not-broken";
    }
    return "unknown";
}

double fit_initial_slope(const std::vector<GapSample>& samples) {
    std::vector<double> ts;
    std::vector<double> ys;
    for (const GapSample& s : samples) {
        if (s.t > 0.0) {
            ts.push_back(s.t);
            ys.push_back(s.G / s.t);
        }
    }
    if (ts.empty()) return 0.0;
    // Early window only: G/t bends away from the initial rate as the whole domain rounds out.
    const std::size_t window = std::min(ts.size(), std::max<std::size_t>(4, (ts.size() + 3) / 4));
    ts.resize(window);
    ys.resize(window);
    const Eigen::Index m = static_cast<Eigen::Index>(ts.size());
    const Eigen::Index degree = std::min<Eigen::Index>(2, m - 1);
    const double scale = *std::max_element(ts.begin(), ts.end());
    Eigen::MatrixXd A(m, degree + 1);
    Eigen::VectorXd b(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double tau = ts[static_cast<std::size_t>(i)] / scale;
        double p = 1.0;
        for (Eigen::Index j = 0; j <= degree; ++j) {
            A(i, j) = p;
            p *= tau;
        }
        b(i) = ys[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(b);
    return coef(0);
}

void certify(BreakingReport& report) {
    const std::vector<GapSample>& samples = report.series.samples;
    report.t_star.reset();
    report.gap_certificate = report.curvature_certificate = report.chord_certificate = false;
    report.gap_positive_throughout = false;

    // Extraction noise on the flat initial edge, floored at a few ulps of a.
    double noise = 64.0 * std::numeric_limits<double>::epsilon() * report.a;
    if (!samples.empty() && samples.front().t == 0.0) {
        const GapSample& s0 = samples.front();
        noise = std::max({noise, std::abs(s0.g0), std::abs(s0.gm), std::abs(s0.g1), std::abs(s0.G)});
    }
    report.noise_floor = noise;
    report.tolerance = 10.0 * noise;
    report.fitted_slope = fit_initial_slope(samples);

    std::size_t first = samples.size();
    while (first > 0 && samples[first - 1].t > 0.0 && samples[first - 1].G > report.tolerance) --first;

    bool any_positive_t = false;
    bool all_above = true;
    for (const GapSample& s : samples) {
        if (s.t <= 0.0) continue;
        any_positive_t = true;
        all_above = all_above && s.G > report.tolerance;
    }
    report.gap_positive_throughout = any_positive_t && all_above;

    if (first < samples.size()) {
        report.gap_certificate = true;
        report.curvature_certificate = true;
        report.chord_certificate = true;
        for (std::size_t i = first; i < samples.size(); ++i) {
            report.curvature_certificate = report.curvature_certificate && !samples[i].convex;
            report.chord_certificate = report.chord_certificate && samples[i].chord_outside;
        }
    } else if (!samples.empty() && samples.back().t > 0.0) {
        report.curvature_certificate = !samples.back().convex;
        report.chord_certificate = samples.back().chord_outside;
    }

    const int held = int(report.gap_certificate) + int(report.curvature_certificate) + int(report.chord_certificate);
    if (held == 3) {
        report.verdict = Verdict::broken;
        report.t_star = samples[first].t;
    } else if (held == 0) {
        report.verdict = Verdict::not_broken;
    } else {
        report.verdict = Verdict::inconclusive;
    }
}

BreakingReport run_counterexample(const MobilityLaw& law, const CounterexampleConfig& config,
                                  Trajectory* trajectory_out, const SnapshotCallback& on_snapshot) {
    const Plan p = plan(law, config.a, config.fillet, config.stepper.marker_count, config.plan);
    log_info("counterexample: pair (" + std::to_string(p.pair.x0) + ", " + std::to_string(p.pair.x1) +
             "), gap rate " + std::to_string(p.pair.gap));

    BreakingReport report;
    report.a = config.a;
    report.fillet = config.fillet;
    report.law = law.name();
    report.x0 = p.pair.x0;
    report.x1 = p.pair.x1;
    report.gap_rate = p.pair.gap;

    Trajectory trajectory;
    try {
        trajectory = run(make_rounded_triangle(p.shape), law, config.stepper, on_snapshot);
    } catch (const TopologyChange& e) {
        trajectory = e.recorded();
        report.series = gap_series(trajectory, p.pair.x0, p.pair.x1);
        report.series.truncated = true;
        report.series.reason = e.what();
        log_warn(e.what());
        certify(report);
        if (trajectory_out) *trajectory_out = std::move(trajectory);
        return report;
    }
    report.series = gap_series(trajectory, p.pair.x0, p.pair.x1);
    certify(report);
    if (trajectory_out) *trajectory_out = std::move(trajectory);
    return report;
}

}  // namespace droplet
