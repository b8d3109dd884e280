#pragma once

#include <iosfwd>
#include <vector>

#include "locbench/instances.hpp"

namespace locbench::evdp {

// Throttle interval that keeps the next induction within +-i_max.
struct ControlBounds {
    double lo = 0.0;
    double hi = 0.0;
};

ControlBounds control_bounds(const EvModel& model, const EvState& state);

// One discrete period of the vehicle dynamics. Throws
// InadmissibleControlError when u leaves the admissible throttle interval.
EvState step(const EvModel& model, const EvState& state, double u);

// Energy drawn from the battery during one period, as a function of the
// throttle and the induction reached at the end of the period.
double stage_energy(const EvModel& model, double u, double induction);

struct ControlTrajectory {
    std::vector<double> controls;        // u_1..u_T
    std::vector<EvState> states;         // x_0..x_T
    std::vector<double> stage_energies;  // per period
    double energy = 0.0;                 // sum of stage energies

    const EvState& final_state() const { return states.back(); }
};

// Runs the dynamics for a full control sequence, failing fast on the first
// inadmissible control.
ControlTrajectory simulate(const EvModel& model, const std::vector<double>& controls);

// Drives at the given throttle level every period, clamped into the
// admissible interval. level = 1 gives the maximum reachable position.
ControlTrajectory greedy_max_throttle(const EvModel& model, double level = 1.0);

// Whether a position counts as having reached the target.
inline bool reached(const EvModel& model, double position) {
    return position >= model.target_position - 1e-9;
}

// Discretization of the (position, induction, radial speed) state space.
// omega_cap = 0 lets the solver pick a bound that no admissible
// trajectory of the model can exceed.
struct GridSpec {
    int np = 61;
    int ni = 41;
    int nw = 41;
    double position_margin = 0.25;  // grid extends this fraction past the target
    double omega_cap = 0.0;
};

double default_omega_cap(const EvModel& model);

// count equispaced throttle levels spanning [-1, 1].
std::vector<double> control_levels(int count);

struct DpOptions {
    GridSpec grid;
    std::vector<double> controls = control_levels(21);
};

// Backward value iteration over the state grid, then a forward greedy rollout
// of the resulting policy. The rollout is re-simulated exactly, so the
// returned energy is the true cost of the returned controls. Throws
// UnreachableTargetError when the rollout misses the target.
ControlTrajectory dp_solve(const EvModel& model, const DpOptions& options = {});

// Brute-force oracle: depth-first sweep over every admissible sequence drawn
// from the given levels (clamped per state exactly like dp_solve), keeping
// the cheapest one that reaches the target. Capped at max_sequences leaves.
ControlTrajectory enumerate_optimal(const EvModel& model,
                                    const std::vector<double>& levels,
                                    double max_sequences = 1e7);

// CSV rows t, u, p, v, i, omega, stage energy, cumulative energy for
// t = 1..T. Speed is reported in km/h; everything else in SI units.
void write_trajectory_csv(const EvModel& model, const ControlTrajectory& traj,
                          std::ostream& out);

}  // namespace locbench::evdp
