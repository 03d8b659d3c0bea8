#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "droplet/errors.hpp"
#include "droplet/evolution.hpp"
#include "droplet/geometry.hpp"

namespace droplet::cli {

// Validation failure in a run config; the message starts with the field path.
class ConfigError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

enum class ShapeKind { disk, triangle, rounded_triangle };

struct ShapeConfig {
    ShapeKind kind = ShapeKind::rounded_triangle;
    double radius = 1.0;  // disk
    double a = 1.0;       // triangle, rounded-triangle
    double fillet = 0.02; // rounded-triangle
};

struct RunConfig {
    ShapeConfig shape;
    std::string law = "p2";
    StepperConfig stepper;
    std::string out = "out";
    std::size_t svg_count = 6;  // snapshots rendered as SVG, evenly spread
};

/// Parses a run config. Every key is optional; unknown keys, wrong types and
/// out-of-range values raise ConfigError naming the field.
///
///     {"shape": {"kind": "rounded-triangle", "a": 1, "fillet": 0.02},
///      "law": "p2", "dt_max": 1e-3, "cfl": 0.4, "N": 512, "t_end": 0.05,
///      "output_every": 1e-3, "resample_every": 5, "out": "out", "svg_count": 6,
///      "solver": {"sources_per_marker": 1, "offset_factor": 1.5, "svd_cutoff": 1e-12,
///                 "mass_grid_factor": 1.0, "mass_method": "boundary", "residual_tol": 1e-3}}
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

// Re-checks a config after flag overrides; throws ConfigError.
void validate(const RunConfig& config);

ClosedCurve build_shape(const ShapeConfig& shape, std::size_t marker_count);

std::string to_string(ShapeKind kind);
ShapeKind shape_kind_from_string(const std::string& s);

}  // namespace droplet::cli
