#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "droplet/errors.hpp"
#include "droplet/geometry.hpp"
#include "droplet/mobility.hpp"
#include "droplet/torsion_solver.hpp"

namespace droplet {

struct StepperConfig {
    double dt_max = 1e-3;
    double cfl = 0.4;
    int resample_every = 5;        // 0 disables resampling
    std::size_t marker_count = 512;
    SolverConfig solver;
    double t_end = 0.05;
    double output_every = 1e-3;    // snapshot spacing; <= 0 keeps only t = 0 and t_end
    double velocity_floor = 1e-12; // keeps the CFL rule finite for resting curves
};

void validate(const StepperConfig& config);

// Snapshot of the free boundary and its normalized field at time t.
struct EvolutionState {
    double t = 0.0;
    std::size_t steps = 0;
    TorsionSolution solution;
    NormalizedField field;
    std::vector<double> velocity;  // V = F(|Du|) per marker

    const ClosedCurve& curve() const { return solution.curve(); }
};

EvolutionState make_state(ClosedCurve curve, const MobilityLaw& law, const SolverConfig& solver, double t = 0.0,
                          std::size_t steps = 0);

// min(dt_max, cfl · h_min / max|V|).
double stable_dt(const EvolutionState& state, const StepperConfig& config);

using Trajectory = std::vector<EvolutionState>;

// Raised when moving the markers would produce a non-simple curve. Carries
// the last valid state and whatever trajectory had been recorded.
class TopologyChange : public NumericalError {
public:
    TopologyChange(const std::string& what, std::shared_ptr<const EvolutionState> last, Trajectory recorded = {})
        : NumericalError(what), last_(std::move(last)), recorded_(std::move(recorded)) {}

    const EvolutionState& last_state() const { return *last_; }
    const Trajectory& recorded() const { return recorded_; }

private:
    std::shared_ptr<const EvolutionState> last_;
    Trajectory recorded_;
};

/// One forward Euler step of normal transport: x_i += dt · V_i · n_i with
/// dt = min(stable_dt, dt_limit), resampling to marker_count every
/// resample_every steps, then a fresh solve on the new curve.
EvolutionState step(const EvolutionState& state, const MobilityLaw& law, const StepperConfig& config,
                    double dt_limit = std::numeric_limits<double>::infinity());

using SnapshotCallback = std::function<void(const EvolutionState&)>;

/// Integrates from t = 0 to t_end and records snapshots at t = 0, every
/// multiple of output_every, and t_end; steps are shortened to land on those
/// times exactly. on_snapshot, if set, sees each snapshot as it is recorded.
Trajectory run(const ClosedCurve& initial, const MobilityLaw& law, const StepperConfig& config,
               const SnapshotCallback& on_snapshot = {});

}  // namespace droplet
