#include "droplet_cli/commands.hpp"

#include <CLI11.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>

#include "droplet/counterexample.hpp"
#include "droplet/diagnostics.hpp"
#include "droplet/errors.hpp"
#include "droplet/evolution.hpp"
#include "droplet/exact_solutions.hpp"
#include "droplet/log.hpp"
#include "droplet/mobility.hpp"
#include "droplet/torsion_solver.hpp"
#include "droplet_cli/config.hpp"

namespace droplet::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::array<double, 5> kGaussNodes = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                               0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                                 0.4786286704993665, 0.2369268850561891};

// Five-point Gauss product rule over horizontal slices; exact for v, which has degree 3.
double triangle_quadrature(const TriangleOracle& o) {
    const double a = o.a();
    const double h = a * std::sqrt(3.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
        const double y = 0.5 * h * (kGaussNodes[i] + 1.0);
        const double half = a * (1.0 - y / h);
        double row = 0.0;
        for (std::size_t j = 0; j < 5; ++j) row += kGaussWeights[j] * o.value({half * kGaussNodes[j], y});
        sum += kGaussWeights[i] * half * row;
    }
    return 0.5 * h * sum;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

struct FlagSet {
    RunConfig flags;
    std::string config_path;
    std::string shape_kind;
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> apply;
};

template <class T, class Get>
void bind(CLI::App* app, FlagSet& fs, const std::string& name, Get get, const std::string& desc) {
    CLI::Option* opt = app->add_option(name, get(fs.flags), desc)->capture_default_str();
    fs.apply.emplace_back(opt, [&fs, get](RunConfig& c) { get(c) = static_cast<T>(get(fs.flags)); });
}

// Config file (or defaults) first, then every flag given on the command line.
RunConfig resolve(const FlagSet& fs, const RunConfig& defaults) {
    RunConfig c = fs.config_path.empty() ? defaults : load_run_config(fs.config_path);
    for (const auto& [opt, apply] : fs.apply) {
        if (opt->count() > 0) apply(c);
    }
    validate(c);
    return c;
}

void add_config_flag(CLI::App* app, FlagSet& fs) {
    app->add_option("--config", fs.config_path, "JSON run config; flags given here override its values")
        ->check(CLI::ExistingFile);
}

void add_shape_flags(CLI::App* app, FlagSet& fs) {
    fs.shape_kind = to_string(fs.flags.shape.kind);
    CLI::Option* kind = app->add_option("--shape", fs.shape_kind, "disk | triangle | rounded-triangle")
                            ->capture_default_str()
                            ->check(CLI::IsMember({"disk", "triangle", "rounded-triangle"}));
    fs.apply.emplace_back(kind, [&fs](RunConfig& c) {
        c.shape.kind = shape_kind_from_string(fs.shape_kind);
        if (c.shape.kind == ShapeKind::triangle) c.shape.fillet = 0.0;
    });
    bind<double>(app, fs, "--radius", [](RunConfig& c) -> double& { return c.shape.radius; }, "disk radius");
    bind<double>(app, fs, "--a", [](RunConfig& c) -> double& { return c.shape.a; }, "triangle half side length");
    bind<double>(app, fs, "--fillet", [](RunConfig& c) -> double& { return c.shape.fillet; },
                 "corner rounding radius");
}

void add_stepper_flags(CLI::App* app, FlagSet& fs) {
    bind<std::string>(app, fs, "--law", [](RunConfig& c) -> std::string& { return c.law; },
                      "mobility law: p2 | p3 | p:<value> | linear");
    bind<double>(app, fs, "--dt-max", [](RunConfig& c) -> double& { return c.stepper.dt_max; }, "largest time step");
    bind<double>(app, fs, "--cfl", [](RunConfig& c) -> double& { return c.stepper.cfl; }, "CFL number");
    bind<double>(app, fs, "--t-end", [](RunConfig& c) -> double& { return c.stepper.t_end; }, "final time");
    bind<double>(app, fs, "--output-every", [](RunConfig& c) -> double& { return c.stepper.output_every; },
                 "snapshot spacing");
    bind<int>(app, fs, "--resample-every", [](RunConfig& c) -> int& { return c.stepper.resample_every; },
              "steps between resamplings, 0 disables");
    bind<std::size_t>(app, fs, "--svg-count", [](RunConfig& c) -> std::size_t& { return c.svg_count; },
                      "snapshots rendered as SVG");
}

void add_common_flags(CLI::App* app, FlagSet& fs) {
    bind<std::size_t>(app, fs, "--N", [](RunConfig& c) -> std::size_t& { return c.stepper.marker_count; },
                      "marker count");
    bind<std::string>(app, fs, "--out", [](RunConfig& c) -> std::string& { return c.out; }, "output directory");
}

// Indices of up to count snapshots spread evenly, always including the last.
std::vector<std::size_t> pick(std::size_t size, std::size_t count) {
    std::vector<std::size_t> idx;
    if (size == 0 || count == 0) return idx;
    if (count >= size) {
        for (std::size_t i = 0; i < size; ++i) idx.push_back(i);
        return idx;
    }
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t i = count == 1 ? size - 1 : k * (size - 1) / (count - 1);
        if (idx.empty() || idx.back() != i) idx.push_back(i);
    }
    return idx;
}

std::string indexed(const std::string& stem, std::size_t i, const std::string& ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%05zu.%s", stem.c_str(), i, ext.c_str());
    return buf;
}

RunConfig counterexample_defaults() {
    RunConfig c;
    c.shape = {ShapeKind::rounded_triangle, 1.0, 1.0, 0.02};
    c.law = "p2";
    c.stepper.marker_count = 800;
    c.stepper.dt_max = 2e-4;
    c.stepper.t_end = 0.02;
    c.stepper.output_every = 1e-3;
    c.out = "counterexample";
    return c;
}

int cmd_exact_check(double a, const std::string& law, const std::string& profile_csv, std::size_t points,
                    std::ostream& out) {
    const std::vector<OracleCheck> checks = oracle_checks(a, law);
    bool ok = true;
    out << "identity                                    value        tolerance    result\n";
    for (const OracleCheck& c : checks) {
        out << std::left << std::setw(44) << c.name << std::setw(13) << sci(c.value) << std::setw(13)
            << sci(c.tolerance) << (c.pass ? "PASS" : "FAIL") << '\n';
        ok = ok && c.pass;
    }
    if (!profile_csv.empty()) {
        write_edge_profile_csv(profile_csv, EdgeVelocityProfile(TriangleOracle(a), MobilityLaw::from_spec(law)),
                               points);
        out << "edge profile written to " << profile_csv << '\n';
    }
    if (!ok) throw NumericalError("oracle identity check failed");
    return kOk;
}

int cmd_solve(const RunConfig& c, std::ostream& out, std::string& stage) {
    stage = "build shape";
    const ClosedCurve curve = build_shape(c.shape, c.stepper.marker_count);
    stage = "solve";
    const TorsionSolution sol = solve_torsion(curve, c.stepper.solver);
    const NormalizedField field = normalize(sol);
    stage = "output";
    const fs::path dir(c.out);
    write_flux_csv(dir / "flux.csv", sol);
    write_curve_csv(dir / "curve.csv", curve);
    const SolverDiagnostics& d = sol.diagnostics();
    double lo = field.boundary_gradient.front();
    double hi = lo;
    for (double g : field.boundary_gradient) {
        lo = std::min(lo, g);
        hi = std::max(hi, g);
    }
    out << std::setprecision(12);
    out << "shape            " << to_string(c.shape.kind) << '\n'
        << "markers          " << curve.size() << '\n'
        << "area             " << curve.signed_area() << '\n'
        << "mass             " << sol.mass() << '\n'
        << "lambda           " << field.lambda << '\n'
        << "|Du| range       " << lo << " .. " << hi << '\n'
        << "boundary resid   " << d.relative_boundary_residual << '\n'
        << "interior resid   " << d.interior_residual << '\n'
        << "condition        " << d.condition_estimate << (d.used_svd ? " (svd)" : " (lu)") << '\n'
        << "written          " << (dir / "flux.csv").string() << ", " << (dir / "curve.csv").string() << '\n';
    return kOk;
}

void write_snapshots(const Trajectory& traj, const fs::path& dir, std::size_t svg_count,
                     const std::function<std::optional<double>(std::size_t)>& gap,
                     const std::function<SvgOptions(std::size_t)>& svg_options) {
    std::vector<TimeSeriesRow> rows;
    rows.reserve(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        rows.push_back(measure(traj[i], gap(i)));
        write_curve_csv(dir / "curves" / indexed("curve", i, "csv"), traj[i].curve());
    }
    write_series_csv(dir / "series.csv", rows);
    for (std::size_t i : pick(traj.size(), svg_count)) {
        write_svg(dir / "svg" / indexed("snapshot", i, "svg"), traj[i].curve(), svg_options(i));
    }
}

int cmd_evolve(const RunConfig& c, std::ostream& out, std::string& stage) {
    stage = "build shape";
    const MobilityLaw law = MobilityLaw::from_spec(c.law);
    const ClosedCurve initial = build_shape(c.shape, c.stepper.marker_count);
    const fs::path dir(c.out);
    auto no_gap = [](std::size_t) { return std::optional<double>(); };
    auto options = [&](std::size_t) {
        SvgOptions o;
        o.extra_curves = {&initial};
        return o;
    };
    stage = "evolve";
    Trajectory traj;
    try {
        traj = run(initial, law, c.stepper);
    } catch (const TopologyChange& e) {
        stage = "output";
        write_snapshots(e.recorded(), dir, c.svg_count, no_gap, options);
        stage = "evolve";
        throw;
    }
    stage = "output";
    write_snapshots(traj, dir, c.svg_count, no_gap, options);
    out << std::setprecision(12) << "snapshots " << traj.size() << ", steps " << traj.back().steps << ", t "
        << traj.back().t << ", area " << traj.back().curve().signed_area() << ", convex "
        << (is_convex(traj.back().curve()) ? "yes" : "no") << '\n'
        << "written to " << dir.string() << '\n';
    return kOk;
}

int cmd_counterexample(const RunConfig& c, std::ostream& out, std::string& stage) {
    if (c.shape.kind != ShapeKind::rounded_triangle && c.shape.kind != ShapeKind::triangle) {
        throw ConfigError("shape.kind: counterexample needs a (rounded) triangle");
    }
    const MobilityLaw law = MobilityLaw::from_spec(c.law);
    CounterexampleConfig cc;
    cc.a = c.shape.a;
    cc.fillet = c.shape.fillet;
    cc.stepper = c.stepper;
    stage = "plan";
    (void)plan(law, cc.a, cc.fillet, cc.stepper.marker_count, cc.plan);

    stage = "evolve";
    Trajectory traj;
    const BreakingReport report = run_counterexample(law, cc, &traj);

    stage = "output";
    const fs::path dir(c.out);
    write_text(dir / "report.json", report_json(report));
    write_gap_csv(dir / "gap.csv", report.series);
    const ClosedCurve& initial = traj.front().curve();
    const std::vector<GapSample>& samples = report.series.samples;
    write_snapshots(
        traj, dir, c.svg_count,
        [&](std::size_t i) { return i < samples.size() ? std::optional<double>(samples[i].G) : std::nullopt; },
        [&](std::size_t i) {
            SvgOptions o;
            o.extra_curves = {&initial};
            if (i < samples.size()) o.chord = {{{report.x0, samples[i].g0}, {report.x1, samples[i].g1}}};
            char title[64];
            std::snprintf(title, sizeof title, "t = %.6g", traj[i].t);
            o.title = title;
            return o;
        });

    out << std::setprecision(6) << "law " << report.law << ", a " << report.a << ", fillet " << report.fillet
        << '\n'
        << "pair (" << report.x0 << ", " << report.x1 << "), gap rate " << report.gap_rate << ", fitted slope "
        << report.fitted_slope << '\n'
        << "certificates: gap " << report.gap_certificate << ", curvature " << report.curvature_certificate
        << ", chord " << report.chord_certificate << '\n'
        << "verdict " << to_string(report.verdict);
    if (report.t_star) out << ", t* = " << *report.t_star;
    out << '\n';
    if (report.series.truncated) out << "series truncated: " << report.series.reason << '\n';
    out << "written to " << dir.string() << '\n';
    return kOk;
}

}  // namespace

std::vector<OracleCheck> oracle_checks(double a, const std::string& law_spec) {
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("--a must be positive");
    const TriangleOracle o(a);
    const MobilityLaw law = MobilityLaw::from_spec(law_spec);
    std::vector<OracleCheck> checks;
    auto add = [&](std::string name, double value, double tol) {
        checks.push_back({std::move(name), value, tol, std::isfinite(value) && value <= tol});
    };

    add("|quadrature of v - 1|", std::abs(triangle_quadrature(o) - 1.0), 1e-8);

    const auto v = o.vertices();
    const double vmax = o.value({0.0, a / std::sqrt(3.0)});
    double boundary = 0.0;
    constexpr int kPerEdge = 334;
    for (int e = 0; e < 3; ++e) {
        const Point2 p = v[static_cast<std::size_t>(e)];
        const Point2 q = v[static_cast<std::size_t>((e + 1) % 3)];
        for (int k = 0; k < kPerEdge; ++k) {
            const double s = static_cast<double>(k) / kPerEdge;
            boundary = std::max(boundary, std::abs(o.value(p + s * (q - p))));
        }
    }
    add("max |v| on boundary / max v", boundary / vmax, 1e-12);

    double lap = 0.0;
    for (const Point2 p : {Point2{0.0, a / std::sqrt(3.0)}, Point2{0.3 * a, 0.2 * a}, Point2{-0.4 * a, 0.3 * a},
                           Point2{0.1 * a, 1.2 * a}}) {
        lap = std::max(lap, o.laplacian_residual(p, 1e-3 * a) / o.lambda0());
    }
    add("rel. error of -laplacian v vs 4ac*sqrt(3)", lap, 1e-5);

    double edge = 0.0;
    for (int k = 1; k < 20; ++k) {
        const double x = -a + 2.0 * a * k / 20.0;
        edge = std::max(edge, std::abs(o.gradient({x, 0.0}).y - o.edge_gradient(x)) / o.edge_gradient(0.0));
    }
    add("rel. error of v_y(x,0) vs 3c(a^2 - x^2)", edge, 1e-12);

    const EdgeVelocityProfile profile(o, law);
    double vpp = 0.0;
    const double h = 1e-4 * a;
    for (double f : {0.2, 0.5, 0.8}) {
        const double x = f * a;
        const double fd =
            (profile.velocity(x + h) - 2.0 * profile.velocity(x) + profile.velocity(x - h)) / (h * h);
        const double exact = profile.velocity_second_derivative(x);
        vpp = std::max(vpp, std::abs(fd - exact) / std::max(1.0, std::abs(exact)));
    }
    add("rel. error of V'' formula vs differences", vpp, 1e-5);

    const DiskOracle disk(a);
    add("|disk mass - pi R^4/8| (R = a)", std::abs(disk.mass() - std::numbers::pi * std::pow(a, 4) / 8.0), 1e-12 * disk.mass());
    return checks;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quasi-static droplet free-boundary simulator", "droplet"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "help for every subcommand");

    double check_a = 1.0;
    std::string check_law = "p2";
    std::string check_csv;
    std::size_t check_points = 201;
    CLI::App* exact = app.add_subcommand("exact-check", "Check the closed-form oracle identities");
    exact->add_option("--a", check_a, "triangle half side length")->capture_default_str();
    exact->add_option("--law", check_law, "mobility law for the edge profile")->capture_default_str();
    exact->add_option("--profile-csv", check_csv, "write x,V,Vpp along the bottom edge to this file");
    exact->add_option("--profile-points", check_points, "points in the edge profile")->capture_default_str();

    FlagSet solve_flags;
    CLI::App* solve = app.add_subcommand("solve", "Solve the torsion problem on one shape");
    add_config_flag(solve, solve_flags);
    add_shape_flags(solve, solve_flags);
    add_common_flags(solve, solve_flags);

    FlagSet evolve_flags;
    CLI::App* evolve = app.add_subcommand("evolve", "Evolve a shape under a mobility law");
    add_config_flag(evolve, evolve_flags);
    add_shape_flags(evolve, evolve_flags);
    add_stepper_flags(evolve, evolve_flags);
    add_common_flags(evolve, evolve_flags);

    FlagSet ce_flags;
    ce_flags.flags = counterexample_defaults();
    CLI::App* ce = app.add_subcommand("counterexample", "Evolve a rounded triangle and certify loss of convexity");
    add_config_flag(ce, ce_flags);
    add_shape_flags(ce, ce_flags);
    add_stepper_flags(ce, ce_flags);
    add_common_flags(ce, ce_flags);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o;
        std::ostringstream e2;
        const int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code == 0 ? kOk : kValidationError;
    }

    std::string stage = "config";
    try {
        if (exact->parsed()) {
            stage = "exact-check";
            return cmd_exact_check(check_a, check_law, check_csv, check_points, out);
        }
        if (solve->parsed()) return cmd_solve(resolve(solve_flags, RunConfig{}), out, stage);
        if (evolve->parsed()) return cmd_evolve(resolve(evolve_flags, RunConfig{}), out, stage);
        if (ce->parsed()) return cmd_counterexample(resolve(ce_flags, counterexample_defaults()), out, stage);
    } catch (const InvalidArgument& e) {
        err << "error (" << stage << "): " << e.what() << '\n';
        return kValidationError;
    } catch (const NumericalError& e) {
        err << "numerical failure in stage '" << stage << "': " << e.what() << '\n';
        return kNumericalError;
    } catch (const OutOfDomain& e) {
        err << "numerical failure in stage '" << stage << "': " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::exception& e) {
        err << "failure in stage '" << stage << "': " << e.what() << '\n';
        return kNumericalError;
    }
    return kValidationError;
}

}  // namespace droplet::cli
