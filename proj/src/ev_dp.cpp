#include "locbench/ev_dp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace locbench::evdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kControlSlack = 1e-9;

double wheel_ratio(const EvModel& m) { return m.wheel_radius / m.transmission_ratio; }

}  // namespace

ControlBounds control_bounds(const EvModel& model, const EvState& state) {
    const double shared = (model.step * model.inductor_resistance - model.rotor_inductance) *
                              state.induction +
                          model.step * model.torque_coefficient * state.radial_speed;
    const double denom = model.step * model.supply_voltage;
    ControlBounds b;
    b.lo = std::max(-1.0, (-model.induction_limit * model.rotor_inductance + shared) / denom);
    b.hi = std::min(1.0, (model.induction_limit * model.rotor_inductance + shared) / denom);
    return b;
}

EvState step(const EvModel& model, const EvState& state, double u) {
    const auto b = control_bounds(model, state);
    if (u < b.lo - kControlSlack || u > b.hi + kControlSlack)
        throw InadmissibleControlError("control outside admissible interval", state.t);
    EvState next;
    next.t = state.t + 1;
    next.induction =
        state.induction +
        model.step *
            (model.supply_voltage * u - model.inductor_resistance * state.induction -
             model.torque_coefficient * state.radial_speed) /
            model.rotor_inductance;
    const double v = wheel_ratio(model) * state.radial_speed;
    const double resistance =
        wheel_ratio(model) * (model.mass * model.gravity * model.wheel_friction +
                              model.drag_coefficient * v * v);
    next.radial_speed = std::max(
        0.0, state.radial_speed +
                 model.step * model.inertia_constant *
                     (model.torque_coefficient * state.induction - resistance));
    next.position = state.position + model.step * wheel_ratio(model) * next.radial_speed;
    return next;
}

double stage_energy(const EvModel& model, double u, double induction) {
    const double ui = u * induction;
    return model.supply_voltage * ui + model.battery_resistance * ui * ui;
}

ControlTrajectory simulate(const EvModel& model, const std::vector<double>& controls) {
    if (static_cast<int>(controls.size()) != model.periods())
        throw std::invalid_argument("control sequence length must equal the horizon");
    ControlTrajectory traj;
    traj.controls = controls;
    traj.states.reserve(controls.size() + 1);
    traj.states.push_back(EvState{});
    traj.stage_energies.reserve(controls.size());
    for (double u : controls) {
        const EvState next = step(model, traj.states.back(), u);
        traj.stage_energies.push_back(stage_energy(model, u, next.induction));
        traj.energy += traj.stage_energies.back();
        traj.states.push_back(next);
    }
    return traj;
}

ControlTrajectory greedy_max_throttle(const EvModel& model, double level) {
    std::vector<double> controls;
    controls.reserve(model.periods());
    EvState state;
    for (int t = 0; t < model.periods(); ++t) {
        const auto b = control_bounds(model, state);
        if (b.lo > b.hi)
            throw InadmissibleControlError("no admissible control", t);
        const double u = std::clamp(level, b.lo, b.hi);
        controls.push_back(u);
        state = step(model, state, u);
    }
    return simulate(model, controls);
}

double default_omega_cap(const EvModel& model) {
    // Per-period gain is at most this, so T periods from rest bound omega.
    const double gain = model.step * model.inertia_constant * model.torque_coefficient *
                        model.induction_limit;
    // Above the speed where drag matches peak torque, omega cannot increase,
    // so steady speed plus one period of gain bounds any trajectory.
    const double surplus =
        model.torque_coefficient * model.induction_limit / wheel_ratio(model) -
        model.mass * model.gravity * model.wheel_friction;
    double steady = 0.0;
    if (surplus > 0.0)
        steady = std::sqrt(surplus / model.drag_coefficient) / wheel_ratio(model);
    const double cap = std::min(model.periods() * gain, steady + gain);
    return std::max(1e-6, 1.05 * cap);
}

std::vector<double> control_levels(int count) {
    if (count < 1) throw std::invalid_argument("control level count must be >= 1");
    if (count == 1) return {0.0};
    std::vector<double> levels(count);
    for (int k = 0; k < count; ++k)
        levels[k] = -1.0 + 2.0 * static_cast<double>(k) / (count - 1);
    return levels;
}

namespace {

struct Axis {
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;

    double at(int k) const {
        if (n == 1) return lo;
        return lo + (hi - lo) * static_cast<double>(k) / (n - 1);
    }

    // Cell index plus fractional offset, clamping out-of-range queries onto
    // the boundary.
    void locate(double x, int& cell, double& frac) const {
        if (n == 1 || hi <= lo) {
            cell = 0;
            frac = 0.0;
            return;
        }
        const double pos =
            std::clamp((x - lo) / (hi - lo), 0.0, 1.0) * static_cast<double>(n - 1);
        cell = std::min(static_cast<int>(pos), n - 2);
        frac = pos - cell;
    }
};

// Value table over one time slice, row-major over (p, i, omega).
struct ValueSlice {
    const Axis* p;
    const Axis* i;
    const Axis* w;
    std::vector<double> v;

    double& at(int ip, int ii, int iw) { return v[(ip * i->n + ii) * w->n + iw]; }
    double at(int ip, int ii, int iw) const { return v[(ip * i->n + ii) * w->n + iw]; }

    // Trilinear interpolation. Corners carrying real weight must be finite,
    // otherwise the result is conservatively infinite; zero-weight corners
    // are ignored so exact grid hits stay exact next to unreachable cells.
    double interpolate(double pv, double iv, double wv) const {
        int cp, ci, cw;
        double fp, fi, fw;
        p->locate(pv, cp, fp);
        i->locate(iv, ci, fi);
        w->locate(wv, cw, fw);
        const double wp[2] = {1.0 - fp, fp};
        const double wi[2] = {1.0 - fi, fi};
        const double ww[2] = {1.0 - fw, fw};
        double acc = 0.0;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c) {
                    const double weight = wp[a] * wi[b] * ww[c];
                    if (weight <= 1e-12) continue;
                    const double corner = at(std::min(cp + a, p->n - 1),
                                             std::min(ci + b, i->n - 1),
                                             std::min(cw + c, w->n - 1));
                    if (corner == kInf) return kInf;
                    acc += weight * corner;
                }
        return acc;
    }
};

// Control levels clamped into the admissible interval, deduplicated.
void clamped_controls(const std::vector<double>& levels, ControlBounds b,
                      std::vector<double>& out) {
    out.clear();
    if (b.lo > b.hi) return;
    for (double level : levels) {
        const double u = std::clamp(level, b.lo, b.hi);
        if (out.empty() || u != out.back()) out.push_back(u);
    }
}

}  // namespace

ControlTrajectory dp_solve(const EvModel& model, const DpOptions& options) {
    const int T = model.periods();
    if (model.target_position <= 0.0)
        return simulate(model, std::vector<double>(T, 0.0));
    GridSpec grid = options.grid;
    if (grid.np < 2 || grid.ni < 2 || grid.nw < 2)
        throw std::invalid_argument("state grid needs at least two points per axis");
    if (options.controls.empty())
        throw std::invalid_argument("control set must be nonempty");
    if (grid.omega_cap <= 0.0) grid.omega_cap = default_omega_cap(model);

    const Axis pa{0.0, model.target_position * (1.0 + grid.position_margin), grid.np};
    const Axis ia{-model.induction_limit, model.induction_limit, grid.ni};
    const Axis wa{0.0, grid.omega_cap, grid.nw};

    std::vector<ValueSlice> value(T + 1);
    for (auto& slice : value) {
        slice.p = &pa;
        slice.i = &ia;
        slice.w = &wa;
    }
    value[T].v.resize(static_cast<std::size_t>(grid.np) * grid.ni * grid.nw);
    for (int ip = 0; ip < grid.np; ++ip) {
        const double terminal = reached(model, pa.at(ip)) ? 0.0 : kInf;
        for (int ii = 0; ii < grid.ni; ++ii)
            for (int iw = 0; iw < grid.nw; ++iw) value[T].at(ip, ii, iw) = terminal;
    }

    std::vector<double> controls;
    for (int t = T - 1; t >= 0; --t) {
        value[t].v.resize(value[T].v.size());
        for (int ip = 0; ip < grid.np; ++ip)
            for (int ii = 0; ii < grid.ni; ++ii)
                for (int iw = 0; iw < grid.nw; ++iw) {
                    EvState s;
                    s.t = t;
                    s.position = pa.at(ip);
                    s.induction = ia.at(ii);
                    s.radial_speed = wa.at(iw);
                    clamped_controls(options.controls, control_bounds(model, s), controls);
                    double best = kInf;
                    for (double u : controls) {
                        const EvState next = step(model, s, u);
                        const double togo = value[t + 1].interpolate(
                            next.position, next.induction, next.radial_speed);
                        if (togo == kInf) continue;
                        const double cost = stage_energy(model, u, next.induction) + togo;
                        if (cost < best) best = cost;
                    }
                    value[t].at(ip, ii, iw) = best;
                }
    }

    // Greedy rollout of the policy from the exact initial state; ties go to
    // the lowest throttle level.
    std::vector<double> rollout;
    rollout.reserve(T);
    EvState state;
    for (int t = 0; t < T; ++t) {
        clamped_controls(options.controls, control_bounds(model, state), controls);
        double best = kInf;
        double best_u = 0.0;
        bool found = false;
        for (double u : controls) {
            const EvState next = step(model, state, u);
            const double togo = value[t + 1].interpolate(next.position, next.induction,
                                                         next.radial_speed);
            if (togo == kInf) continue;
            const double cost = stage_energy(model, u, next.induction) + togo;
            if (!found || cost < best) {
                best = cost;
                best_u = u;
                found = true;
            }
        }
        if (!found)
            throw UnreachableTargetError("target not reachable on the given grid");
        rollout.push_back(best_u);
        state = step(model, state, best_u);
    }
    if (!reached(model, state.position))
        throw UnreachableTargetError("rollout missed the target position");
    return simulate(model, rollout);
}

ControlTrajectory enumerate_optimal(const EvModel& model,
                                    const std::vector<double>& levels,
                                    double max_sequences) {
    const int T = model.periods();
    if (levels.empty()) throw std::invalid_argument("control set must be nonempty");
    if (std::pow(static_cast<double>(levels.size()), T) > max_sequences)
        throw SizeCapError("too many control sequences to enumerate");

    double best_energy = kInf;
    std::vector<double> best_controls;
    std::vector<double> prefix;
    auto dfs = [&](auto&& self, const EvState& state, double energy) -> void {
        if (state.t == T) {
            if (reached(model, state.position) && energy < best_energy) {
                best_energy = energy;
                best_controls = prefix;
            }
            return;
        }
        std::vector<double> local;
        clamped_controls(levels, control_bounds(model, state), local);
        for (double u : local) {
            const EvState next = step(model, state, u);
            prefix.push_back(u);
            self(self, next, energy + stage_energy(model, u, next.induction));
            prefix.pop_back();
        }
    };
    dfs(dfs, EvState{}, 0.0);
    if (best_energy == kInf)
        throw UnreachableTargetError("no enumerated sequence reaches the target");
    return simulate(model, best_controls);
}

void write_trajectory_csv(const EvModel& model, const ControlTrajectory& traj,
                          std::ostream& out) {
    out << "t,u,p,v_kmh,i,omega,stage_energy,cumulative_energy\n";
    out << std::setprecision(17);
    double cumulative = 0.0;
    for (std::size_t t = 1; t < traj.states.size(); ++t) {
        const EvState& s = traj.states[t];
        cumulative += traj.stage_energies[t - 1];
        out << s.t << ',' << traj.controls[t - 1] << ',' << s.position << ','
            << 3.6 * wheel_ratio(model) * s.radial_speed << ',' << s.induction << ','
            << s.radial_speed << ',' << traj.stage_energies[t - 1] << ',' << cumulative
            << '\n';
    }
}

}  // namespace locbench::evdp
