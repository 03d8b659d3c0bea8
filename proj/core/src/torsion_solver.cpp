#include "droplet/torsion_solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "droplet/errors.hpp"
#include "droplet/log.hpp"

namespace droplet {

std::string to_string(MassMethod m) { return m == MassMethod::boundary ? "boundary" : "grid"; }

MassMethod mass_method_from_string(const std::string& s) {
    if (s == "boundary") return MassMethod::boundary;
    if (s == "grid") return MassMethod::grid;
    throw InvalidArgument("mass_method must be 'boundary' or 'grid', got '" + s + "'");
}

void validate(const SolverConfig& config) {
    if (config.sources_per_marker < 1 || config.sources_per_marker > 8) {
        throw InvalidArgument("sources_per_marker must be in [1, 8], got " + std::to_string(config.sources_per_marker));
    }
    if (!(config.offset_factor > 0.0) || !std::isfinite(config.offset_factor)) {
        throw InvalidArgument("offset_factor must be positive");
    }
    if (!(config.svd_cutoff > 0.0 && config.svd_cutoff < 1.0)) {
        throw InvalidArgument("svd_cutoff must be in (0, 1)");
    }
    if (!(config.mass_grid_factor > 0.0) || !std::isfinite(config.mass_grid_factor)) {
        throw InvalidArgument("mass_grid_factor must be positive");
    }
    if (!(config.residual_tol > 0.0)) {
        throw InvalidArgument("residual_tol must be positive");
    }
}

double TorsionSolution::value_unchecked(Point2 p) const {
    const Point2 d = p - center_;
    double w = -0.25 * dot(d, d) + constant_;
    for (std::size_t j = 0; j < sources_.size(); ++j) {
        const Point2 r = d - sources_[j];
        w += 0.5 * strengths_[j] * std::log(dot(r, r));
    }
    return w;
}

Vec2 TorsionSolution::gradient_unchecked(Point2 p) const {
    const Point2 d = p - center_;
    Vec2 g = -0.5 * d;
    for (std::size_t j = 0; j < sources_.size(); ++j) {
        const Point2 r = d - sources_[j];
        g = g + (strengths_[j] / dot(r, r)) * r;
    }
    return g;
}

double TorsionSolution::value(Point2 p) const {
    if (!curve_.contains(p) || curve_.distance_to_boundary(p) == 0.0) {
        std::ostringstream os;
        os << "interior evaluation at (" << p.x << ", " << p.y << ") outside the domain";
        throw OutOfDomain(os.str());
    }
    return value_unchecked(p);
}

double TorsionSolution::boundary_mass() const {
    // Green's second identity with ψ = -|x - c|²/4 and the divergence theorem
    // for ∫|x - c|², so only boundary terms remain:
    //   ∫w = ∮ |x - c|²/4 · (|∂w/∂n| - (x - c)·n/4) ds.
    // Three-point Gauss rule per edge on the cubic interpolant of the markers.
    static const double kNodes[3] = {0.5 - 0.5 * std::sqrt(0.6), 0.5, 0.5 + 0.5 * std::sqrt(0.6)};
    static const double kWeights[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    const auto n = static_cast<std::ptrdiff_t>(curve_.size());
    double sum = 0.0;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        for (int q = 0; q < 3; ++q) {
            const Point2 x = interpolate_on_curve(curve_, i, kNodes[q]);
            const Vec2 t = interpolate_tangent_on_curve(curve_, i, kNodes[q]);
            const double speed = norm(t);
            const Vec2 normal{t.y / speed, -t.x / speed};
            const double flux = -dot(gradient_unchecked(x), normal);
            const Point2 d = x - center_;
            sum += kWeights[q] * speed * 0.25 * dot(d, d) * (flux - 0.25 * dot(d, normal));
        }
    }
    return sum;
}

double TorsionSolution::grid_mass(double grid_factor) const {
    const double h = grid_factor * curve_.min_spacing();
    const BoundingBox box = curve_.bounds();
    const auto nx = static_cast<std::size_t>(std::ceil(box.width() / h)) + 1;
    const auto ny = static_cast<std::size_t>(std::ceil(box.height() / h)) + 1;
    const double x0 = box.min_x - 0.5 * h;
    const double y0 = box.min_y - 0.5 * h;

    // Cells touched by the polygon get 4x4 subsampling.
    std::vector<char> boundary_cell(nx * ny, 0);
    auto mark = [&](Point2 p) {
        const auto ix = static_cast<std::ptrdiff_t>(std::floor((p.x - x0) / h));
        const auto iy = static_cast<std::ptrdiff_t>(std::floor((p.y - y0) / h));
        for (std::ptrdiff_t dy = -1; dy <= 1; ++dy) {
            for (std::ptrdiff_t dx = -1; dx <= 1; ++dx) {
                const std::ptrdiff_t cx = ix + dx;
                const std::ptrdiff_t cy = iy + dy;
                if (cx < 0 || cy < 0 || cx >= static_cast<std::ptrdiff_t>(nx) || cy >= static_cast<std::ptrdiff_t>(ny)) {
                    continue;
                }
                boundary_cell[static_cast<std::size_t>(cy) * nx + static_cast<std::size_t>(cx)] = 1;
            }
        }
    };
    const auto m = static_cast<std::ptrdiff_t>(curve_.size());
    for (std::ptrdiff_t i = 0; i < m; ++i) {
        const Point2 a = curve_[i];
        const Point2 b = curve_[i + 1];
        const int steps = std::max(1, static_cast<int>(std::ceil(4.0 * distance(a, b) / h)));
        for (int k = 0; k <= steps; ++k) mark(a + (static_cast<double>(k) / steps) * (b - a));
    }

    // Row crossings give the inside test for cell centres in O(1) per cell.
    std::vector<double> crossings;
    double total = 0.0;
    for (std::size_t iy = 0; iy < ny; ++iy) {
        const double yc = y0 + (static_cast<double>(iy) + 0.5) * h;
        crossings.clear();
        for (std::ptrdiff_t i = 0; i < m; ++i) {
            const Point2 a = curve_[i];
            const Point2 b = curve_[i + 1];
            if ((a.y <= yc) != (b.y <= yc)) crossings.push_back(a.x + (yc - a.y) / (b.y - a.y) * (b.x - a.x));
        }
        std::sort(crossings.begin(), crossings.end());
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double xc = x0 + (static_cast<double>(ix) + 0.5) * h;
            if (boundary_cell[iy * nx + ix]) {
                double cell = 0.0;
                for (int sy = 0; sy < 4; ++sy) {
                    for (int sx = 0; sx < 4; ++sx) {
                        const Point2 p{xc + (sx - 1.5) * h / 4.0, yc + (sy - 1.5) * h / 4.0};
                        if (curve_.contains(p)) cell += std::max(0.0, value_unchecked(p));
                    }
                }
                total += cell * h * h / 16.0;
                continue;
            }
            const auto left = std::lower_bound(crossings.begin(), crossings.end(), xc) - crossings.begin();
            if (left % 2 == 1) total += value_unchecked({xc, yc}) * h * h;
        }
    }
    return total;
}

TorsionSolution solve_torsion(const ClosedCurve& curve, const SolverConfig& config) {
    validate(config);
    if (!is_simple_polygon(curve.markers())) {
        throw InvalidDomain("torsion solve on a self-intersecting curve");
    }

    TorsionSolution sol(curve);
    sol.center_ = curve.centroid();
    const Point2 c = sol.center_;
    const auto n = static_cast<std::ptrdiff_t>(curve.size());
    const int per = config.sources_per_marker;

    SolverDiagnostics& diag = sol.diagnostics_;
    diag.spacing_ratio = curve.max_spacing() / curve.min_spacing();
    if (diag.spacing_ratio > 3.0) {
        log_warn("torsion solve: marker spacing ratio " + std::to_string(diag.spacing_ratio) + " exceeds 3");
    }

    // Collocation points (markers plus per - 1 interpolated points per edge)
    // and their sources along the outward normal.
    std::vector<Point2> colloc;
    std::vector<Point2> sources;
    const std::vector<Vec2> marker_normals = outward_normals(curve);
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double spacing_here = 0.5 * (curve.edge_length(i - 1) + curve.edge_length(i)) / per;
        colloc.push_back(curve[i] - c);
        sources.push_back(curve[i] - c + (config.offset_factor * spacing_here) * marker_normals[static_cast<std::size_t>(i)]);
        const Vec2 edge = curve[i + 1] - curve[i];
        const Vec2 edge_normal = (1.0 / norm(edge)) * Vec2{edge.y, -edge.x};
        for (int k = 1; k < per; ++k) {
            const Point2 b = interpolate_on_curve(curve, i, static_cast<double>(k) / per) - c;
            colloc.push_back(b);
            sources.push_back(b + (config.offset_factor * norm(edge) / per) * edge_normal);
        }
    }
    // A source that landed inside (possible on concave stretches) is pulled
    // back towards its collocation point until it is outside again.
    for (std::size_t k = 0; k < sources.size(); ++k) {
        Vec2 off = sources[k] - colloc[k];
        for (int tries = 0; tries < 6 && curve.contains(sources[k] + c); ++tries) {
            off = 0.5 * off;
            sources[k] = colloc[k] + off;
        }
        if (curve.contains(sources[k] + c)) {
            throw InvalidDomain("cannot place a fundamental-solution source outside the curve");
        }
    }

    const auto k_count = static_cast<Eigen::Index>(colloc.size());
    const Eigen::Index dim = k_count + 1;
    Eigen::MatrixXd A(dim, dim);
    Eigen::VectorXd rhs(dim);
    for (Eigen::Index i = 0; i < k_count; ++i) {
        const Point2 b = colloc[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < k_count; ++j) {
            const Point2 r = b - sources[static_cast<std::size_t>(j)];
            A(i, j) = 0.5 * std::log(dot(r, r));
        }
        A(i, k_count) = 1.0;
        rhs(i) = 0.25 * dot(b, b);
    }
    // Σq = 0 closes the system with the free constant.
    A.row(k_count).setOnes();
    A(k_count, k_count) = 0.0;
    rhs(k_count) = 0.0;

    Eigen::VectorXd coeffs;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const double rcond = lu.rcond();
    diag.unknowns = static_cast<std::size_t>(dim);
    if (rcond > config.svd_cutoff && std::isfinite(rcond)) {
        coeffs = lu.solve(rhs);
        diag.condition_estimate = 1.0 / rcond;
        diag.rank = static_cast<std::size_t>(dim);
    } else {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(config.svd_cutoff);
        coeffs = svd.solve(rhs);
        const auto& s = svd.singularValues();
        diag.used_svd = true;
        diag.rank = static_cast<std::size_t>(svd.rank());
        diag.condition_estimate = diag.rank > 0 ? s(0) / s(static_cast<Eigen::Index>(diag.rank) - 1)
                                                : std::numeric_limits<double>::infinity();
        log_info("torsion solve: LU condition estimate " + std::to_string(rcond > 0 ? 1.0 / rcond : INFINITY) +
                 " above cutoff, truncated SVD kept rank " + std::to_string(diag.rank) + " of " +
                 std::to_string(dim));
    }
    if (!coeffs.allFinite()) {
        throw IllConditionedSolve("torsion solve produced non-finite coefficients", diag.condition_estimate,
                                  std::numeric_limits<double>::infinity());
    }
    sol.sources_ = std::move(sources);
    sol.strengths_.assign(coeffs.data(), coeffs.data() + k_count);
    sol.constant_ = coeffs(k_count);

    // Boundary condition between collocation points.
    double data_scale = 0.0;
    for (const Point2& b : colloc) data_scale = std::max(data_scale, 0.25 * dot(b, b));
    double residual = 0.0;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        for (int k = 0; k < per; ++k) {
            const Point2 p = interpolate_on_curve(curve, i, (k + 0.5) / per);
            residual = std::max(residual, std::abs(sol.value_unchecked(p)));
        }
    }
    diag.boundary_residual = residual;
    diag.relative_boundary_residual = residual / data_scale;
    if (!(diag.relative_boundary_residual <= config.residual_tol)) {
        std::ostringstream os;
        os << "torsion solve misses the boundary condition: relative residual " << diag.relative_boundary_residual
           << " > " << config.residual_tol << " (condition estimate " << diag.condition_estimate << ", rank "
           << diag.rank << "/" << diag.unknowns << ")";
        throw IllConditionedSolve(os.str(), diag.condition_estimate, diag.relative_boundary_residual);
    }

    // Interior PDE residual by five-point differences at a few probes.
    const double fd_h = 1e-3 * curve.inradius_estimate();
    std::vector<Point2> probes{c};
    for (std::ptrdiff_t q = 0; q < 4; ++q) probes.push_back(c + 0.5 * (curve[q * n / 4] - c));
    for (const Point2& p : probes) {
        if (!curve.contains(p) || curve.distance_to_boundary(p) < 4.0 * fd_h) continue;
        const double lap = (sol.value_unchecked({p.x + fd_h, p.y}) + sol.value_unchecked({p.x - fd_h, p.y}) +
                            sol.value_unchecked({p.x, p.y + fd_h}) + sol.value_unchecked({p.x, p.y - fd_h}) -
                            4.0 * sol.value_unchecked(p)) /
                           (fd_h * fd_h);
        diag.interior_residual = std::max(diag.interior_residual, std::abs(-lap - 1.0));
    }

    // Flux |∂w/∂n| = -∇w·n at the markers.
    sol.flux_.resize(static_cast<std::size_t>(n));
    double max_flux = 0.0;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        sol.flux_[idx] = -dot(sol.gradient_unchecked(curve[i]), marker_normals[idx]);
        max_flux = std::max(max_flux, sol.flux_[idx]);
    }
    const double floor_value = std::numeric_limits<double>::epsilon() * std::max(max_flux, 1.0);
    for (double& f : sol.flux_) {
        if (!(f > floor_value)) {
            f = floor_value;
            ++diag.floored_fluxes;
        }
    }
    if (diag.floored_fluxes > 0) {
        log_info("torsion solve: floored " + std::to_string(diag.floored_fluxes) +
                 " non-positive boundary fluxes at machine-epsilon scale");
    }

    sol.mass_ = config.mass_method == MassMethod::boundary ? sol.boundary_mass() : sol.grid_mass(config.mass_grid_factor);
    if (!(sol.mass_ > 0.0) || !std::isfinite(sol.mass_)) {
        throw NumericalError("torsion solve produced non-positive mass " + std::to_string(sol.mass_));
    }
    log_debug("torsion solve: N=" + std::to_string(n) + " cond~" + std::to_string(diag.condition_estimate) +
              " residual=" + std::to_string(diag.relative_boundary_residual) + " M=" + std::to_string(sol.mass_));
    return sol;
}

NormalizedField normalize(std::span<const double> flux, double mass) {
    if (!(mass > 0.0)) {
        throw InvalidArgument("normalization needs positive mass, got " + std::to_string(mass));
    }
    NormalizedField field;
    field.lambda = 1.0 / mass;
    field.boundary_gradient.reserve(flux.size());
    for (double f : flux) field.boundary_gradient.push_back(f / mass);
    return field;
}

NormalizedField normalize(const TorsionSolution& solution) {
    return normalize(solution.boundary_flux(), solution.mass());
}

std::vector<double> marker_arclength(const ClosedCurve& curve) {
    std::vector<double> s(curve.size(), 0.0);
    for (std::size_t i = 1; i < curve.size(); ++i) {
        s[i] = s[i - 1] + curve.edge_length(static_cast<std::ptrdiff_t>(i) - 1);
    }
    return s;
}

}  // namespace droplet
