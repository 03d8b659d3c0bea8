#include "droplet/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include "droplet/log.hpp"

namespace droplet {

void validate(const StepperConfig& config) {
    if (!(config.dt_max > 0.0) || !std::isfinite(config.dt_max)) {
        throw InvalidArgument("dt_max must be positive");
    }
    if (!(config.cfl > 0.0 && config.cfl <= 1.0)) {
        throw InvalidArgument("cfl must be in (0, 1]");
    }
    if (config.resample_every < 0) {
        throw InvalidArgument("resample_every must be non-negative");
    }
    if (config.marker_count < ClosedCurve::kMinMarkers) {
        throw InvalidArgument("N (marker_count) must be at least 8");
    }
    if (!(config.t_end >= 0.0) || !std::isfinite(config.t_end)) {
        throw InvalidArgument("t_end must be non-negative");
    }
    if (!std::isfinite(config.output_every)) {
        throw InvalidArgument("output_every must be finite");
    }
    if (!(config.velocity_floor > 0.0)) {
        throw InvalidArgument("velocity_floor must be positive");
    }
    validate(config.solver);
}

EvolutionState make_state(ClosedCurve curve, const MobilityLaw& law, const SolverConfig& solver, double t,
                          std::size_t steps) {
    TorsionSolution solution = solve_torsion(curve, solver);
    NormalizedField field = normalize(solution);
    std::vector<double> velocity;
    velocity.reserve(field.boundary_gradient.size());
    for (double g : field.boundary_gradient) velocity.push_back(law.eval(g).value);
    return {t, steps, std::move(solution), std::move(field), std::move(velocity)};
}

double stable_dt(const EvolutionState& state, const StepperConfig& config) {
    double vmax = 0.0;
    for (double v : state.velocity) vmax = std::max(vmax, std::abs(v));
    return std::min(config.dt_max, config.cfl * state.curve().min_spacing() / std::max(vmax, config.velocity_floor));
}

EvolutionState step(const EvolutionState& state, const MobilityLaw& law, const StepperConfig& config,
                    double dt_limit) {
    const double dt = std::min(stable_dt(state, config), dt_limit);
    const ClosedCurve& curve = state.curve();
    const std::vector<Vec2> normals = outward_normals(curve);

    std::vector<Point2> moved(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        moved[i] = curve[static_cast<std::ptrdiff_t>(i)] + (dt * state.velocity[i]) * normals[i];
    }

    auto fail = [&](const std::string& why) {
        std::ostringstream os;
        os << "topology change at t = " << state.t << " (step " << state.steps + 1 << "): " << why;
        return TopologyChange(os.str(), std::make_shared<const EvolutionState>(state));
    };

    std::optional<ClosedCurve> next;
    try {
        next.emplace(std::move(moved));
    } catch (const InvalidDomain& e) {
        throw fail(e.what());
    } catch (const InvalidArgument& e) {
        throw fail(e.what());
    }

    const std::size_t steps = state.steps + 1;
    if (config.resample_every > 0 && steps % static_cast<std::size_t>(config.resample_every) == 0) {
        try {
            next.emplace(resample_uniform(*next, config.marker_count));
        } catch (const InvalidDomain& e) {
            throw fail(std::string("after resampling: ") + e.what());
        }
    }
    return make_state(std::move(*next), law, config.solver, state.t + dt, steps);
}

Trajectory run(const ClosedCurve& initial, const MobilityLaw& law, const StepperConfig& config,
               const SnapshotCallback& on_snapshot) {
    validate(config);
    Trajectory trajectory;
    auto record = [&](const EvolutionState& s) {
        trajectory.push_back(s);
        if (on_snapshot) on_snapshot(s);
    };

    EvolutionState state = make_state(initial, law, config.solver);
    record(state);
    if (config.t_end <= 0.0) return trajectory;

    // Output times k * output_every below t_end, then t_end itself.
    std::vector<double> outputs;
    if (config.output_every > 0.0) {
        for (std::size_t k = 1;; ++k) {
            const double tk = static_cast<double>(k) * config.output_every;
            if (tk >= config.t_end * (1.0 - 1e-12)) break;
            outputs.push_back(tk);
        }
    }
    outputs.push_back(config.t_end);

    for (double target : outputs) {
        const double eps = 1e-12 * std::max(1.0, target);
        while (target - state.t > eps) {
            const double remaining = target - state.t;
            const double dt = stable_dt(state, config);
            // Split the last stretch evenly rather than leave a sliver step.
            const double limit = (dt < remaining && remaining < 1.5 * dt) ? 0.5 * remaining : remaining;
            try {
                state = step(state, law, config, limit);
            } catch (const TopologyChange& e) {
                throw TopologyChange(e.what(), std::make_shared<const EvolutionState>(e.last_state()), trajectory);
            }
        }
        state.t = target;
        log_info("evolve: t = " + std::to_string(state.t) + " after " + std::to_string(state.steps) + " steps");
        record(state);
    }
    return trajectory;
}

}  // namespace droplet
