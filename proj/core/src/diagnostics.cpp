#include "droplet/diagnostics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "droplet/errors.hpp"

namespace droplet {

namespace {

std::string fmt(double v) {
    if (!std::isfinite(v)) throw NumericalError("refusing to write non-finite value " + std::to_string(v));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

double parse_double(const std::string& field, const std::filesystem::path& path, std::size_t line) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE) {
        throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": bad number '" + field + "'");
    }
    return v;
}

}  // namespace

TimeSeriesRow measure(const EvolutionState& state, std::optional<double> G) {
    const ClosedCurve& curve = state.curve();
    TimeSeriesRow row;
    row.t = state.t;
    row.area = curve.signed_area();
    row.lambda = state.field.lambda;
    const auto [lo, hi] = std::minmax_element(state.field.boundary_gradient.begin(), state.field.boundary_gradient.end());
    row.min_flux = *lo;
    row.max_flux = *hi;
    const std::vector<double> k = signed_curvatures(curve);
    row.min_curvature = *std::min_element(k.begin(), k.end());
    row.convex = is_convex(curve);
    row.G = G;
    return row;
}

void write_series_csv(const std::filesystem::path& path, const std::vector<TimeSeriesRow>& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (!(rows[i].t > rows[i - 1].t)) throw InvalidArgument("series rows must be strictly increasing in t");
    }
    std::ostringstream os;
    os << kSeriesHeader << '\n';
    for (const TimeSeriesRow& r : rows) {
        os << fmt(r.t) << ',' << fmt(r.area) << ',' << fmt(r.lambda) << ',' << fmt(r.min_flux) << ','
           << fmt(r.max_flux) << ',' << fmt(r.min_curvature) << ',' << (r.convex ? 1 : 0) << ','
           << (r.G ? fmt(*r.G) : std::string()) << '\n';
    }
    write_text(path, os.str());
}

std::vector<TimeSeriesRow> read_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kSeriesHeader) {
        throw std::runtime_error(path.string() + ": missing or unexpected header");
    }
    std::vector<TimeSeriesRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 8) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected 8 fields");
        }
        TimeSeriesRow r;
        r.t = parse_double(f[0], path, lineno);
        r.area = parse_double(f[1], path, lineno);
        r.lambda = parse_double(f[2], path, lineno);
        r.min_flux = parse_double(f[3], path, lineno);
        r.max_flux = parse_double(f[4], path, lineno);
        r.min_curvature = parse_double(f[5], path, lineno);
        if (f[6] != "0" && f[6] != "1") {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": convex must be 0 or 1");
        }
        r.convex = f[6] == "1";
        if (!f[7].empty()) r.G = parse_double(f[7], path, lineno);
        rows.push_back(r);
    }
    return rows;
}

void write_curve_csv(const std::filesystem::path& path, const ClosedCurve& curve) {
    std::ostringstream os;
    os << "x,y\n";
    for (const Point2& p : curve.markers()) os << fmt(p.x) << ',' << fmt(p.y) << '\n';
    write_text(path, os.str());
}

void write_flux_csv(const std::filesystem::path& path, const TorsionSolution& solution) {
    const ClosedCurve& curve = solution.curve();
    const std::vector<double> s = marker_arclength(curve);
    const NormalizedField field = normalize(solution);
    std::ostringstream os;
    os << "s,x,y,flux,normalized_gradient\n";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const Point2& p = curve[static_cast<std::ptrdiff_t>(i)];
        os << fmt(s[i]) << ',' << fmt(p.x) << ',' << fmt(p.y) << ',' << fmt(solution.boundary_flux()[i]) << ','
           << fmt(field.boundary_gradient[i]) << '\n';
    }
    write_text(path, os.str());
}

void write_gap_csv(const std::filesystem::path& path, const GapSeries& series) {
    std::ostringstream os;
    os << "t,G,min_curvature,convex_flag\n";
    for (const GapSample& g : series.samples) {
        os << fmt(g.t) << ',' << fmt(g.G) << ',' << fmt(g.min_curvature) << ',' << (g.convex ? 1 : 0) << '\n';
    }
    write_text(path, os.str());
}

void write_edge_profile_csv(const std::filesystem::path& path, const EdgeVelocityProfile& profile, std::size_t n) {
    if (n < 2) throw InvalidArgument("edge profile needs at least two points");
    const double a = profile.oracle().a();
    std::ostringstream os;
    os << "x,V,Vpp\n";
    for (std::size_t k = 0; k < n; ++k) {
        // Open interval: endpoints pulled in by half a cell.
        const double x = -a + 2.0 * a * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
        os << fmt(x) << ',' << fmt(profile.velocity(x)) << ',' << fmt(profile.velocity_second_derivative(x)) << '\n';
    }
    write_text(path, os.str());
}

void write_svg(const std::filesystem::path& path, const ClosedCurve& curve, const SvgOptions& options) {
    BoundingBox box = curve.bounds();
    for (const ClosedCurve* c : options.extra_curves) {
        const BoundingBox b = c->bounds();
        box.min_x = std::min(box.min_x, b.min_x);
        box.min_y = std::min(box.min_y, b.min_y);
        box.max_x = std::max(box.max_x, b.max_x);
        box.max_y = std::max(box.max_y, b.max_y);
    }
    const double pad = 0.05 * std::max(box.width(), box.height());
    const double w = box.width() + 2 * pad;
    const double h = box.height() + 2 * pad;
    const double px = 800.0;
    const double scale = px / std::max(w, h);
    // y grows upward in the model, downward in SVG.
    auto X = [&](double x) { return fmt((x - box.min_x + pad) * scale); };
    auto Y = [&](double y) { return fmt((box.max_y + pad - y) * scale); };
    auto polygon = [&](std::ostringstream& os, auto begin, auto end, const char* style) {
        os << "<polygon points=\"";
        for (auto it = begin; it != end; ++it) os << X(it->x) << ',' << Y(it->y) << ' ';
        os << "\" " << style << "/>\n";
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w * scale) << "\" height=\"" << fmt(h * scale)
       << "\">\n";
    if (!options.title.empty()) os << "<title>" << options.title << "</title>\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const ClosedCurve* c : options.extra_curves) {
        polygon(os, c->markers().begin(), c->markers().end(), "fill=\"none\" stroke=\"#999\" stroke-width=\"1\"");
    }
    if (options.hull_when_nonconvex && !is_convex(curve)) {
        const std::vector<Point2> hull = convex_hull({curve.markers().begin(), curve.markers().end()});
        polygon(os, hull.begin(), hull.end(),
                "fill=\"none\" stroke=\"#d62728\" stroke-width=\"1\" stroke-dasharray=\"6,4\"");
    }
    polygon(os, curve.markers().begin(), curve.markers().end(),
            "fill=\"#1f77b4\" fill-opacity=\"0.15\" stroke=\"#1f77b4\" stroke-width=\"2\"");
    if (options.chord) {
        const auto& [p, q] = *options.chord;
        os << "<line x1=\"" << X(p.x) << "\" y1=\"" << Y(p.y) << "\" x2=\"" << X(q.x) << "\" y2=\"" << Y(q.y)
           << "\" stroke=\"#2ca02c\" stroke-width=\"2\"/>\n";
    }
    os << "</svg>\n";
    write_text(path, os.str());
}

std::string report_json(const BreakingReport& report) {
    using json = nlohmann::ordered_json;
    json series = json::array();
    for (const GapSample& s : report.series.samples) {
        series.push_back({{"t", s.t},
                          {"G", s.G},
                          {"g_x0", s.g0},
                          {"g_mid", s.gm},
                          {"g_x1", s.g1},
                          {"min_curvature", s.min_curvature},
                          {"convex", s.convex},
                          {"chord_outside", s.chord_outside}});
    }
    json j = {
        {"a", report.a},
        {"fillet", report.fillet},
        {"law", report.law},
        {"pair", {report.x0, report.x1}},
        {"gap_rate", report.gap_rate},
        {"fitted_slope", report.fitted_slope},
        {"noise_floor", report.noise_floor},
        {"tolerance", report.tolerance},
        {"verdict", to_string(report.verdict)},
        {"certificates",
         {{"gap", report.gap_certificate},
          {"curvature", report.curvature_certificate},
          {"chord", report.chord_certificate}}},
        {"gap_positive_throughout", report.gap_positive_throughout},
        {"t_star", report.t_star ? json(*report.t_star) : json(nullptr)},
        {"truncated", report.series.truncated},
        {"truncation_reason", report.series.reason},
        {"series", series},
    };
    return j.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out = open_out(path);
    out << text;
    finish(out, path);
}

}  // namespace droplet
