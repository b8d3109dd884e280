// Command-line front end: generate, validate, solve, cross-check and export
// plot data for every supported problem kind.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "locbench/combinatorics.hpp"
#include "locbench/ev_dp.hpp"
#include "locbench/instances.hpp"
#include "locbench/medianplex.hpp"
#include "locbench/planar.hpp"
#include "locbench/stratified_pcenter.hpp"
#include "locbench/transport.hpp"

namespace {

using nlohmann::json;
using namespace locbench;

struct Options {
    std::string type;
    std::string in_path;
    std::string out_path;
    std::string points_out;
    std::string method;
    std::string format = "json";
    std::string variant = "A";
    double tol = 0.0;
    std::uint64_t seed = 0;
    bool no_timing = false;
    int n = 3, m = 3, strata = 2, p = 1, k = 1, t = 10;
    int restarts = 1;
    int controls = 21;
    std::vector<int> grid;
};

class Timer {
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();

 public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }
};

void write_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw SchemaError("cannot write " + out_path);
    out << text;
}

void emit(const json& j, const std::string& out_path) {
    write_text(j.dump(2) + "\n", out_path);
}

json base_result(const Options& opt, const Instance& inst, const std::string& method,
                 double objective, const Timer& timer) {
    json j;
    j["problem"] = to_string(kind_of(inst));
    j["method"] = method;
    j["objective"] = objective;
    j["seed"] = opt.seed;
    if (!opt.no_timing) j["wall_ms"] = timer.ms();
    return j;
}

std::string default_method(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::tp: return "simplex";
        case ProblemKind::itp: return "oracle";
        case ProblemKind::planar: return "weiszfeld";
        case ProblemKind::spcp: return "bnb";
        case ProblemKind::medianplex: return "full";
        case ProblemKind::evdp: return "dp";
    }
    return "";
}

json allocation_json(const std::vector<int>& allocation) {
    json map = json::object();
    for (std::size_t i = 0; i < allocation.size(); ++i) {
        if (allocation[i] == medianplex::kUncovered)
            map[std::to_string(i)] = nullptr;
        else
            map[std::to_string(i)] = allocation[i];
    }
    return map;
}

evdp::DpOptions dp_options_from(const Options& opt) {
    evdp::DpOptions options;
    if (!opt.grid.empty()) {
        if (opt.grid.size() != 3)
            throw SchemaError("--grid expects np,ni,nw for trajectory solves");
        options.grid.np = opt.grid[0];
        options.grid.ni = opt.grid[1];
        options.grid.nw = opt.grid[2];
    }
    options.controls = evdp::control_levels(opt.controls);
    return options;
}

int run_gen(const Options& opt) {
    const auto kind = kind_from_string(opt.type);
    if (!kind) throw SchemaError("unknown problem type \"" + opt.type + "\"");
    GenParams params;
    params.n = opt.n;
    params.m = opt.m;
    params.strata = opt.strata;
    params.p = opt.p;
    params.K = opt.k;
    params.T = opt.t;
    write_instance(generate(*kind, params, opt.seed), opt.out_path);
    return 0;
}

int run_validate(const Options& opt) {
    const Instance inst = parse_instance(opt.in_path);
    const auto report = validate(inst);
    if (!report.ok())
        throw ValidationError("invalid instance " + opt.in_path + ": " + report.summary());
    std::cout << "ok: " << to_string(kind_of(inst)) << " instance\n";
    return 0;
}

int run_solve(const Options& opt) {
    const Instance inst = read_instance(opt.in_path);
    const ProblemKind kind = kind_of(inst);
    std::string method = opt.method.empty() ? default_method(kind) : opt.method;
    if (opt.format == "csv" && kind != ProblemKind::evdp)
        throw SchemaError("csv output is only available for trajectory solves");
    if (method == "bisection") method += "-" + opt.variant;
    const Timer timer;

    switch (kind) {
        case ProblemKind::tp: {
            if (method != "simplex") throw SchemaError("unknown method " + method);
            const auto& tp = std::get<TransportInstance>(inst);
            const auto sol = transport::solve_tp(tp);
            json j = base_result(opt, inst, method, sol.objective, timer);
            j["flow"] = sol.flow;
            j["row_duals"] = sol.row_duals;
            j["col_duals"] = sol.col_duals;
            emit(j, opt.out_path);
            return 0;
        }
        case ProblemKind::itp: {
            const auto& itp = std::get<IntervalTransportInstance>(inst);
            transport::ItpResult result;
            if (method == "oracle") {
                result = transport::itp_oracle(itp);
            } else if (method == "bisection-A" || method == "bisection-B") {
                transport::BisectionOptions options;
                if (opt.tol > 0.0) options.tol = opt.tol;
                result = transport::itp_bisection(itp,
                                                  method == "bisection-A"
                                                      ? transport::BisectionVariant::A
                                                      : transport::BisectionVariant::B,
                                                  options);
            } else {
                throw SchemaError("unknown method " + method);
            }
            json j = base_result(opt, inst, result.method, result.value, timer);
            j["value"] = result.value;
            j["d"] = result.demands;
            j["q"] = result.supplies;
            j["iterations"] = result.iterations;
            j["certified"] = result.certified;
            emit(j, opt.out_path);
            return 0;
        }
        case ProblemKind::planar: {
            const auto& set = std::get<PlanarDemandSet>(inst);
            if (method == "weiszfeld") {
                planar::WeiszfeldOptions options;
                if (opt.tol > 0.0) options.tol = opt.tol;
                const auto result = planar::weiszfeld(set, options);
                json j = base_result(opt, inst, method, result.objective, timer);
                j["x"] = result.location.x;
                j["y"] = result.location.y;
                j["iterations"] = result.iterations;
                j["reason"] = result.reason;
                emit(j, opt.out_path);
                return 0;
            }
            if (method == "foci-exact" || method == "foci-swap") {
                const auto cover = planar::select_foci(
                    set, opt.k,
                    method == "foci-exact" ? planar::FociMode::exact
                                           : planar::FociMode::swap);
                json j = base_result(opt, inst, method, cover.radius, timer);
                j["foci"] = cover.selected;
                j["attaining_index"] = cover.attaining_index;
                emit(j, opt.out_path);
                return 0;
            }
            throw SchemaError("unknown method " + method);
        }
        case ProblemKind::spcp: {
            const auto& sp = std::get<SpcpInstance>(inst);
            spcp::SpcpSolution sol;
            if (method == "bnb")
                sol = spcp::solve_bnb(sp);
            else if (method == "enum")
                sol = spcp::solve_enum(sp);
            else if (method == "interchange")
                sol = spcp::solve_interchange(sp, opt.restarts, opt.seed);
            else
                throw SchemaError("unknown method " + method);
            json j = base_result(opt, inst, method, sol.objective, timer);
            j["P"] = sol.sites;
            j["per_stratum_radii"] = sol.stratum_radii;
            j["exact"] = sol.exact;
            emit(j, opt.out_path);
            return 0;
        }
        case ProblemKind::medianplex: {
            const auto& mp = std::get<MedianPlexInstance>(inst);
            medianplex::MedianPlexSolution sol;
            if (method == "full")
                sol = medianplex::solve(mp);
            else if (method == "kmedian")
                sol = medianplex::solve_kmedian(mp);
            else
                throw SchemaError("unknown method " + method);
            json j = base_result(opt, inst, method, sol.z, timer);
            j["S"] = sol.facilities;
            j["allocation"] = allocation_json(sol.allocation);
            j["Z"] = sol.z;
            json per_facility = json::array();
            for (std::size_t i = 0; i < sol.facilities.size(); ++i)
                per_facility.push_back({{"R", sol.facility_revenue[i]},
                                        {"C", sol.facility_complexity[i]}});
            j["per_facility"] = per_facility;
            emit(j, opt.out_path);
            return 0;
        }
        case ProblemKind::evdp: {
            const auto& model = std::get<EvModel>(inst);
            if (method != "dp") throw SchemaError("unknown method " + method);
            const auto traj = evdp::dp_solve(model, dp_options_from(opt));
            if (opt.format == "csv") {
                std::ostringstream csv;
                evdp::write_trajectory_csv(model, traj, csv);
                write_text(csv.str(), opt.out_path);
                return 0;
            }
            json j = base_result(opt, inst, method, traj.energy, timer);
            j["controls"] = traj.controls;
            j["final_position"] = traj.final_state().position;
            j["final_induction"] = traj.final_state().induction;
            j["final_radial_speed"] = traj.final_state().radial_speed;
            emit(j, opt.out_path);
            return 0;
        }
    }
    throw SchemaError("unsupported problem kind");
}

// Brute force over facility sets and full allocations (uncovered allowed),
// for cross-checking the heuristic on small instances.
double medianplex_brute_force(const MedianPlexInstance& inst) {
    const int n = inst.node_count();
    const int K = inst.facility_count;
    double best = -std::numeric_limits<double>::infinity();
    for_each_combination(n, K, [&](const std::vector<int>& facilities) {
        std::vector<int> allocation(n, medianplex::kUncovered);
        auto sweep = [&](auto&& self, int node) -> void {
            if (node == n) {
                const auto parts = medianplex::try_objective(inst, facilities, allocation);
                if (parts && parts->z > best) best = parts->z;
                return;
            }
            allocation[node] = medianplex::kUncovered;
            self(self, node + 1);
            for (int f : facilities) {
                allocation[node] = f;
                self(self, node + 1);
            }
            allocation[node] = medianplex::kUncovered;
        };
        sweep(sweep, 0);
    });
    return best;
}

int run_check(const Options& opt) {
    const Instance inst = read_instance(opt.in_path);
    const Timer timer;
    json checks = json::object();
    bool ok = true;
    double objective = 0.0;
    auto record = [&](const std::string& name, double value, bool pass) {
        checks[name] = value;
        ok = ok && pass;
    };

    switch (kind_of(inst)) {
        case ProblemKind::tp: {
            const auto& tp = std::get<TransportInstance>(inst);
            const auto sol = transport::solve_tp(tp);
            objective = sol.objective;
            double column_residual = 0.0, capacity_violation = 0.0;
            for (int j = 0; j < tp.customer_count(); ++j) {
                double served = 0.0;
                for (int i = 0; i < tp.facility_count(); ++i) served += sol.flow[i][j];
                column_residual = std::max(column_residual,
                                           std::abs(served - tp.demands[j]));
            }
            for (int i = 0; i < tp.facility_count(); ++i) {
                double shipped = 0.0;
                for (int j = 0; j < tp.customer_count(); ++j) shipped += sol.flow[i][j];
                capacity_violation =
                    std::max(capacity_violation, shipped - tp.supplies[i]);
            }
            double dual = 0.0;
            for (int i = 0; i < tp.facility_count(); ++i)
                dual += sol.row_duals[i] * tp.supplies[i];
            for (int j = 0; j < tp.customer_count(); ++j)
                dual += sol.col_duals[j] * tp.demands[j];
            record("column_residual", column_residual, column_residual <= 1e-9);
            record("capacity_violation", capacity_violation, capacity_violation <= 1e-9);
            const double gap = std::abs(sol.objective - dual);
            record("duality_gap", gap, gap <= 1e-7);
            break;
        }
        case ProblemKind::itp: {
            const auto& itp = std::get<IntervalTransportInstance>(inst);
            const auto a = transport::itp_bisection(itp, transport::BisectionVariant::A);
            const auto b = transport::itp_bisection(itp, transport::BisectionVariant::B);
            if (itp.facility_count() + itp.customer_count() <= 16) {
                const auto oracle = transport::itp_oracle(itp);
                objective = oracle.value;
                record("oracle_gap_A", oracle.value - a.value,
                       oracle.value - a.value >= -1e-9);
                record("oracle_gap_B", oracle.value - b.value,
                       oracle.value - b.value >= -1e-9);
            } else {
                objective = std::max(a.value, b.value);
                record("variant_spread", std::abs(a.value - b.value), true);
            }
            break;
        }
        case ProblemKind::planar: {
            const auto& set = std::get<PlanarDemandSet>(inst);
            const auto result = planar::weiszfeld(set);
            objective = result.objective;
            planar::BBox box = planar::bounding_box(set);
            if (box.xmax - box.xmin <= 0.0) { box.xmin -= 0.5; box.xmax += 0.5; }
            if (box.ymax - box.ymin <= 0.0) { box.ymin -= 0.5; box.ymax += 0.5; }
            const auto grid = planar::contour_grid(set, box, 200, 200);
            double grid_min = std::numeric_limits<double>::infinity();
            for (double v : grid.values) grid_min = std::min(grid_min, v);
            record("grid_scan_gap", result.objective - grid_min,
                   result.objective <= grid_min + 1e-4);
            bool monotone = true;
            for (std::size_t i = 1; i < result.objective_trace.size(); ++i)
                monotone = monotone && result.objective_trace[i] <=
                                           result.objective_trace[i - 1] + 1e-9;
            record("objective_monotone", monotone ? 1.0 : 0.0, monotone);
            break;
        }
        case ProblemKind::spcp: {
            const auto& sp = std::get<SpcpInstance>(inst);
            const auto bnb = spcp::solve_bnb(sp);
            objective = bnb.objective;
            const auto inter = spcp::solve_interchange(sp, 1, 0);
            if (binomial(sp.site_count(), sp.p) <= 1e6) {
                const auto oracle = spcp::solve_enum(sp);
                record("bnb_oracle_gap", std::abs(bnb.objective - oracle.objective),
                       std::abs(bnb.objective - oracle.objective) <= 1e-9);
                record("interchange_gap", inter.objective - oracle.objective,
                       inter.objective - oracle.objective >= -1e-9);
            } else {
                record("interchange_gap", inter.objective - bnb.objective,
                       inter.objective - bnb.objective >= -1e-9);
            }
            break;
        }
        case ProblemKind::medianplex: {
            const auto& mp = std::get<MedianPlexInstance>(inst);
            const auto sol = medianplex::solve(mp);
            objective = sol.z;
            const auto recomputed =
                medianplex::objective(mp, sol.facilities, sol.allocation);
            record("recompute_gap", std::abs(sol.z - recomputed.z),
                   std::abs(sol.z - recomputed.z) <= 1e-9);
            bool monotone = true;
            for (std::size_t i = 1; i < sol.z_trace.size(); ++i)
                monotone = monotone && sol.z_trace[i] >= sol.z_trace[i - 1] - 1e-9;
            record("z_trace_monotone", monotone ? 1.0 : 0.0, monotone);
            if (mp.node_count() <= 8 && mp.facility_count <= 2) {
                const double oracle = medianplex_brute_force(mp);
                record("oracle_gap", oracle - sol.z, oracle - sol.z >= -1e-9);
            }
            break;
        }
        case ProblemKind::evdp: {
            const auto& model = std::get<EvModel>(inst);
            const auto dp = evdp::dp_solve(model);
            objective = dp.energy;
            const auto resim = evdp::simulate(model, dp.controls);
            record("resimulation_gap", std::abs(dp.energy - resim.energy),
                   std::abs(dp.energy - resim.energy) <= 1e-12);
            record("target_reached",
                   evdp::reached(model, dp.final_state().position) ? 1.0 : 0.0,
                   evdp::reached(model, dp.final_state().position));
            if (std::pow(3.0, model.periods()) <= 1e6) {
                const auto levels = evdp::control_levels(3);
                const auto oracle = evdp::enumerate_optimal(model, levels);
                evdp::DpOptions options;
                options.controls = levels;
                const auto dp3 = evdp::dp_solve(model, options);
                record("dp3_oracle_gap", dp3.energy - oracle.energy,
                       dp3.energy - oracle.energy >= -1e-9);
            }
            break;
        }
    }

    json j = base_result(opt, inst, "check", objective, timer);
    j["checks"] = checks;
    j["ok"] = ok;
    emit(j, opt.out_path);
    return ok ? 0 : 3;
}

int run_plotdata(const Options& opt) {
    const Instance inst = read_instance(opt.in_path);
    if (kind_of(inst) != ProblemKind::planar)
        throw SchemaError("plotdata requires a planar instance");
    const auto& set = std::get<PlanarDemandSet>(inst);
    int nx = 50, ny = 50;
    if (!opt.grid.empty()) {
        if (opt.grid.size() != 2) throw SchemaError("--grid expects nx,ny for plotdata");
        nx = opt.grid[0];
        ny = opt.grid[1];
    }
    planar::BBox box = planar::bounding_box(set);
    if (box.xmax - box.xmin <= 0.0) { box.xmin -= 0.5; box.xmax += 0.5; }
    if (box.ymax - box.ymin <= 0.0) { box.ymin -= 0.5; box.ymax += 0.5; }
    const auto grid = planar::contour_grid(set, box, nx, ny);

    std::ostringstream contour;
    contour << std::setprecision(17) << "x,y,value\n";
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
            contour << grid.x_at(ix) << ',' << grid.y_at(iy) << ','
                    << grid.values[static_cast<std::size_t>(iy) * nx + ix] << '\n';
    write_text(contour.str(), opt.out_path);

    std::string points_path = opt.points_out;
    if (points_path.empty() && !opt.out_path.empty()) {
        points_path = opt.out_path;
        const auto dot = points_path.rfind('.');
        points_path.insert(dot == std::string::npos ? points_path.size() : dot,
                           ".points");
    }
    std::ostringstream points;
    points << std::setprecision(17) << "x,y,weight\n";
    for (int i = 0; i < set.size(); ++i)
        points << set.points[i].x << ',' << set.points[i].y << ',' << set.weights[i]
               << '\n';
    write_text(points.str(), points_path);
    return 0;
}

int fail(const std::string& code, const std::string& what, int exit_code) {
    std::cerr << "ERR:" << code << ":" << what << "\n";
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solver workbench for transportation, planar location, stratified "
                 "p-center, K-facility profit and vehicle-trajectory problems"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", opt.out_path, "output path (stdout when omitted)");
        cmd->add_option("--seed", opt.seed, "random seed");
        cmd->add_flag("--no-timing", opt.no_timing, "omit wall_ms from results");
    };

    CLI::App* gen = app.add_subcommand("gen", "generate a seeded instance");
    gen->add_option("--type", opt.type, "problem kind")->required();
    gen->add_option("--n", opt.n, "facilities / sites / nodes / points");
    gen->add_option("--m", opt.m, "customers / demand sites");
    gen->add_option("--strata", opt.strata, "stratum count");
    gen->add_option("--p", opt.p, "open-site count");
    gen->add_option("--k", opt.k, "facility count");
    gen->add_option("--t", opt.t, "control periods");
    gen->add_option("--seed", opt.seed, "random seed");
    gen->add_option("--out", opt.out_path, "instance path")->required();

    CLI::App* validate_cmd = app.add_subcommand("validate", "validate an instance file");
    validate_cmd->add_option("--in", opt.in_path, "instance path")->required();

    CLI::App* solve = app.add_subcommand("solve", "solve an instance");
    solve->add_option("--in", opt.in_path, "instance path")->required();
    solve->add_option("--method", opt.method, "solver method for the instance kind");
    solve->add_option("--tol", opt.tol, "solver tolerance")
        ->check(CLI::PositiveNumber);
    solve->add_option("--format", opt.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    solve->add_option("--variant", opt.variant, "bisection variant")
        ->check(CLI::IsMember({"A", "B"}));
    solve->add_option("--k", opt.k, "focus count for foci selection");
    solve->add_option("--restarts", opt.restarts, "interchange restarts")
        ->check(CLI::PositiveNumber);
    solve->add_option("--controls", opt.controls, "control level count")
        ->check(CLI::PositiveNumber);
    solve->add_option("--grid", opt.grid, "state grid sizes np,ni,nw")
        ->delimiter(',');
    add_common(solve);

    CLI::App* check = app.add_subcommand("check", "cross-check solvers on an instance");
    check->add_option("--in", opt.in_path, "instance path")->required();
    add_common(check);

    CLI::App* plotdata = app.add_subcommand("plotdata", "emit contour and point CSVs");
    plotdata->add_option("--in", opt.in_path, "instance path")->required();
    plotdata->add_option("--out", opt.out_path, "contour CSV path")->required();
    plotdata->add_option("--points-out", opt.points_out, "points CSV path");
    plotdata->add_option("--grid", opt.grid, "grid sizes nx,ny")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), 2);
    }

    try {
        if (gen->parsed()) return run_gen(opt);
        if (validate_cmd->parsed()) return run_validate(opt);
        if (solve->parsed()) return run_solve(opt);
        if (check->parsed()) return run_check(opt);
        if (plotdata->parsed()) return run_plotdata(opt);
        return fail("usage", "missing subcommand", 2);
    } catch (const SchemaError& e) {
        return fail("schema", e.what(), 2);
    } catch (const ValidationError& e) {
        return fail("validation", e.what(), 2);
    } catch (const InfeasibleError& e) {
        return fail("infeasible", e.what(), 3);
    } catch (const SizeCapError& e) {
        return fail("size-cap", e.what(), 3);
    } catch (const AlphaViolationError& e) {
        return fail("alpha-violation", e.what(), 3);
    } catch (const InadmissibleControlError& e) {
        return fail("inadmissible-control", e.what(), 3);
    } catch (const UnreachableTargetError& e) {
        return fail("unreachable-target", e.what(), 3);
    } catch (const AtDemandPointError& e) {
        return fail("at-demand-point", e.what(), 3);
    } catch (const SolverError& e) {
        return fail("solver", e.what(), 3);
    } catch (const std::invalid_argument& e) {
        return fail("invalid-argument", e.what(), 3);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), 3);
    }
}
