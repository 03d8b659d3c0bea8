#include "droplet_cli/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "droplet/mobility.hpp"

namespace droplet::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ConfigError(where + it.key() + ": unknown key");
        }
    }
}

double number(const json& obj, const std::string& key, const std::string& field, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(field + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(field + ": must be finite");
    return d;
}

long long integer(const json& obj, const std::string& key, const std::string& field, long long fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError(field + ": expected an integer");
    return v.get<long long>();
}

std::string text(const json& obj, const std::string& key, const std::string& field, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) throw ConfigError(field + ": expected a string");
    return v.get<std::string>();
}

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ConfigError(field + ": " + what);
}

}  // namespace

std::string to_string(ShapeKind kind) {
    switch (kind) {
    case ShapeKind::disk: return "disk";
    case ShapeKind::triangle: return "triangle";
    case ShapeKind::rounded_triangle: return "rounded-triangle";
    }
    return "unknown";
}

ShapeKind shape_kind_from_string(const std::string& s) {
    if (s == "disk") return ShapeKind::disk;
    if (s == "triangle") return ShapeKind::triangle;
    if (s == "rounded-triangle") return ShapeKind::rounded_triangle;
    throw ConfigError("shape.kind: expected disk, triangle or rounded-triangle, got '" + s + "'");
}

RunConfig parse_run_config(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown(j,
                   {"shape", "law", "dt_max", "cfl", "N", "t_end", "output_every", "resample_every", "solver", "out",
                    "svg_count"},
                   "");

    RunConfig c;
    if (j.contains("shape")) {
        const json& s = j.at("shape");
        if (!s.is_object()) throw ConfigError("shape: expected an object");
        reject_unknown(s, {"kind", "radius", "a", "fillet"}, "shape.");
        c.shape.kind = shape_kind_from_string(text(s, "kind", "shape.kind", "rounded-triangle"));
        c.shape.radius = number(s, "radius", "shape.radius", c.shape.radius);
        c.shape.a = number(s, "a", "shape.a", c.shape.a);
        c.shape.fillet = number(s, "fillet", "shape.fillet", c.shape.kind == ShapeKind::triangle ? 0.0 : c.shape.fillet);
        if (c.shape.kind == ShapeKind::triangle) require(c.shape.fillet == 0.0, "shape.fillet", "must be 0 for a triangle");
    }
    c.law = text(j, "law", "law", c.law);
    c.stepper.dt_max = number(j, "dt_max", "dt_max", c.stepper.dt_max);
    c.stepper.cfl = number(j, "cfl", "cfl", c.stepper.cfl);
    const long long n = integer(j, "N", "N", static_cast<long long>(c.stepper.marker_count));
    require(n >= static_cast<long long>(ClosedCurve::kMinMarkers), "N", "must be at least 8");
    c.stepper.marker_count = static_cast<std::size_t>(n);
    c.stepper.t_end = number(j, "t_end", "t_end", c.stepper.t_end);
    c.stepper.output_every = number(j, "output_every", "output_every", c.stepper.output_every);
    const long long every = integer(j, "resample_every", "resample_every", c.stepper.resample_every);
    require(every >= 0 && every <= 1'000'000, "resample_every", "must be in [0, 1000000]");
    c.stepper.resample_every = static_cast<int>(every);
    c.out = text(j, "out", "out", c.out);
    const long long svg = integer(j, "svg_count", "svg_count", static_cast<long long>(c.svg_count));
    require(svg >= 0, "svg_count", "must be non-negative");
    c.svg_count = static_cast<std::size_t>(svg);

    if (j.contains("solver")) {
        const json& s = j.at("solver");
        if (!s.is_object()) throw ConfigError("solver: expected an object");
        reject_unknown(s,
                       {"sources_per_marker", "offset_factor", "svd_cutoff", "mass_grid_factor", "mass_method",
                        "residual_tol"},
                       "solver.");
        SolverConfig& sc = c.stepper.solver;
        const long long spm = integer(s, "sources_per_marker", "solver.sources_per_marker", sc.sources_per_marker);
        require(spm >= 1 && spm <= 8, "solver.sources_per_marker", "must be in [1, 8]");
        sc.sources_per_marker = static_cast<int>(spm);
        sc.offset_factor = number(s, "offset_factor", "solver.offset_factor", sc.offset_factor);
        sc.svd_cutoff = number(s, "svd_cutoff", "solver.svd_cutoff", sc.svd_cutoff);
        sc.mass_grid_factor = number(s, "mass_grid_factor", "solver.mass_grid_factor", sc.mass_grid_factor);
        const std::string method = text(s, "mass_method", "solver.mass_method", to_string(sc.mass_method));
        try {
            sc.mass_method = mass_method_from_string(method);
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string("solver.mass_method: ") + e.what());
        }
        sc.residual_tol = number(s, "residual_tol", "solver.residual_tol", sc.residual_tol);
    }
    validate(c);
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

void validate(const RunConfig& c) {
    switch (c.shape.kind) {
    case ShapeKind::disk:
        require(c.shape.radius > 0.0, "shape.radius", "must be positive");
        break;
    case ShapeKind::triangle:
    case ShapeKind::rounded_triangle:
        require(c.shape.a > 0.0, "shape.a", "must be positive");
        require(c.shape.fillet >= 0.0 && c.shape.fillet < c.shape.a / std::sqrt(3.0), "shape.fillet",
                "must be in [0, a/sqrt(3))");
        break;
    }
    try {
        (void)MobilityLaw::from_spec(c.law);
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    const StepperConfig& s = c.stepper;
    require(s.dt_max > 0.0, "dt_max", "must be positive");
    require(s.cfl > 0.0 && s.cfl <= 1.0, "cfl", "must be in (0, 1]");
    require(s.marker_count >= ClosedCurve::kMinMarkers, "N", "must be at least 8");
    require(s.t_end >= 0.0, "t_end", "must be non-negative");
    require(s.output_every >= 0.0, "output_every", "must be non-negative");
    require(s.resample_every >= 0, "resample_every", "must be non-negative");
    const SolverConfig& sc = s.solver;
    require(sc.sources_per_marker >= 1, "solver.sources_per_marker", "must be at least 1");
    require(sc.offset_factor > 0.0, "solver.offset_factor", "must be positive");
    require(sc.svd_cutoff > 0.0 && sc.svd_cutoff < 1.0, "solver.svd_cutoff", "must be in (0, 1)");
    require(sc.mass_grid_factor > 0.0, "solver.mass_grid_factor", "must be positive");
    require(sc.residual_tol > 0.0, "solver.residual_tol", "must be positive");
    try {
        droplet::validate(s);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

ClosedCurve build_shape(const ShapeConfig& shape, std::size_t marker_count) {
    switch (shape.kind) {
    case ShapeKind::disk: return make_disk(shape.radius, marker_count);
    case ShapeKind::triangle: return make_rounded_triangle({shape.a, 0.0, marker_count});
    case ShapeKind::rounded_triangle: return make_rounded_triangle({shape.a, shape.fillet, marker_count});
    }
    throw ConfigError("shape.kind: unsupported");
}

}  // namespace droplet::cli
