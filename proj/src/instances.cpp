#include "locbench/instances.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "locbench/ev_dp.hpp"
#include "locbench/rng.hpp"

namespace locbench {

using nlohmann::json;

bool is_rectangular(const Matrix& m) {
    return std::all_of(m.begin(), m.end(), [&](const auto& row) {
        return row.size() == m.front().size();
    });
}

double TransportInstance::total_supply() const {
    double s = 0.0;
    for (double q : supplies) s += q;
    return s;
}

double TransportInstance::total_demand() const {
    double s = 0.0;
    for (double d : demands) s += d;
    return s;
}

std::vector<double> MedianPlexInstance::normalized_weights() const {
    double total = 0.0;
    for (double w : weights) total += w;
    std::vector<double> out(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) out[i] = weights[i] / total;
    return out;
}

const char* to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::tp: return "tp";
        case ProblemKind::itp: return "itp";
        case ProblemKind::planar: return "planar";
        case ProblemKind::spcp: return "spcp";
        case ProblemKind::medianplex: return "medianplex";
        case ProblemKind::evdp: return "evdp";
    }
    return "?";
}

std::optional<ProblemKind> kind_from_string(std::string_view name) {
    for (ProblemKind k : {ProblemKind::tp, ProblemKind::itp, ProblemKind::planar,
                          ProblemKind::spcp, ProblemKind::medianplex, ProblemKind::evdp}) {
        if (name == to_string(k)) return k;
    }
    return std::nullopt;
}

ProblemKind kind_of(const Instance& inst) {
    return static_cast<ProblemKind>(inst.index());
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

struct Check {
    ValidationReport report;

    void require(bool ok, const std::string& field, const std::string& message) {
        if (!ok) report.violations.push_back({field, message});
    }

    void finite_vector(const std::vector<double>& v, const std::string& field) {
        for (std::size_t i = 0; i < v.size(); ++i)
            require(std::isfinite(v[i]), field + "[" + std::to_string(i) + "]",
                    "not finite");
    }

    void finite_matrix(const Matrix& m, const std::string& field) {
        for (std::size_t i = 0; i < m.size(); ++i)
            finite_vector(m[i], field + "[" + std::to_string(i) + "]");
    }
};

std::string idx(const std::string& base, std::size_t i) {
    return base + "[" + std::to_string(i) + "]";
}

}  // namespace

std::string ValidationReport::summary() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        os << violations[i].field << ": " << violations[i].message;
    }
    return os.str();
}

ValidationReport validate(const TransportInstance& inst) {
    Check c;
    const int n = inst.facility_count();
    const int m = inst.customer_count();
    c.require(n >= 1, "supplies", "at least one facility required");
    c.require(m >= 1, "demands", "at least one customer required");
    c.require(row_count(inst.costs) == n && col_count(inst.costs) == m &&
                  is_rectangular(inst.costs),
              "costs", "cost matrix must be facilities x customers");
    c.finite_vector(inst.supplies, "supplies");
    c.finite_vector(inst.demands, "demands");
    c.finite_matrix(inst.costs, "costs");
    for (int i = 0; i < n; ++i)
        c.require(inst.supplies[i] >= 0.0, idx("supplies", i), "must be >= 0");
    for (int j = 0; j < m; ++j)
        c.require(inst.demands[j] > 0.0, idx("demands", j), "must be > 0");
    if (c.report.ok())
        c.require(inst.balance_feasible(), "supplies",
                  "infeasible balance: total supply below total demand");
    return c.report;
}

ValidationReport validate(const IntervalTransportInstance& inst) {
    Check c;
    const int n = inst.facility_count();
    const int m = inst.customer_count();
    c.require(n >= 1, "cap_lo", "at least one facility required");
    c.require(m >= 1, "demand_lo", "at least one customer required");
    c.require(inst.demand_hi.size() == inst.demand_lo.size(), "demand_hi",
              "length mismatch with demand_lo");
    c.require(inst.cap_hi.size() == inst.cap_lo.size(), "cap_hi",
              "length mismatch with cap_lo");
    c.require(row_count(inst.costs) == n && col_count(inst.costs) == m &&
                  is_rectangular(inst.costs),
              "costs", "cost matrix must be facilities x customers");
    c.finite_matrix(inst.costs, "costs");
    c.finite_vector(inst.demand_lo, "demand_lo");
    c.finite_vector(inst.demand_hi, "demand_hi");
    c.finite_vector(inst.cap_lo, "cap_lo");
    c.finite_vector(inst.cap_hi, "cap_hi");
    if (!c.report.ok()) return c.report;
    for (int j = 0; j < m; ++j) {
        c.require(inst.demand_lo[j] > 0.0, idx("demand_lo", j), "must be > 0");
        c.require(inst.demand_lo[j] <= inst.demand_hi[j], idx("demand_hi", j),
                  "inverted interval");
    }
    for (int i = 0; i < n; ++i) {
        c.require(inst.cap_lo[i] >= 0.0, idx("cap_lo", i), "must be >= 0");
        c.require(inst.cap_lo[i] <= inst.cap_hi[i], idx("cap_hi", i),
                  "inverted interval");
    }
    double cap_hi_sum = 0.0, demand_lo_sum = 0.0;
    for (double v : inst.cap_hi) cap_hi_sum += v;
    for (double v : inst.demand_lo) demand_lo_sum += v;
    c.require(cap_hi_sum >= demand_lo_sum, "cap_hi",
              "empty region: max capacity below min demand");
    return c.report;
}

ValidationReport validate(const PlanarDemandSet& inst) {
    Check c;
    c.require(inst.size() >= 1, "points", "at least one point required");
    c.require(inst.weights.size() == inst.points.size(), "weights",
              "length mismatch with points");
    for (std::size_t k = 0; k < inst.points.size(); ++k) {
        c.require(std::isfinite(inst.points[k].x) && std::isfinite(inst.points[k].y),
                  idx("points", k), "coordinate not finite");
    }
    for (std::size_t k = 0; k < inst.weights.size(); ++k) {
        c.require(std::isfinite(inst.weights[k]) && inst.weights[k] > 0.0,
                  idx("weights", k), "must be finite and > 0");
    }
    return c.report;
}

ValidationReport validate(const SpcpInstance& inst) {
    Check c;
    const int n = inst.site_count();
    const int m = inst.demand_count();
    c.require(n >= 1 && m >= 1 && is_rectangular(inst.dist), "dist",
              "distance matrix must be demand sites x candidate sites");
    c.finite_matrix(inst.dist, "dist");
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            if (inst.dist[i][j] < 0.0)
                c.report.violations.push_back(
                    {idx(idx("dist", i), j), "must be >= 0"});
    c.require(!inst.strata.empty(), "strata", "at least one stratum required");
    for (std::size_t s = 0; s < inst.strata.size(); ++s) {
        const auto& st = inst.strata[s];
        c.require(!st.members.empty(), idx("strata", s) + ".members",
                  "stratum must be nonempty");
        c.require(std::isfinite(st.weight) && st.weight > 0.0,
                  idx("strata", s) + ".weight", "must be > 0");
        for (std::size_t k = 0; k < st.members.size(); ++k)
            c.require(st.members[k] >= 0 && st.members[k] < m,
                      idx(idx("strata", s) + ".members", k),
                      "member index out of range");
    }
    c.require(inst.p >= 1 && inst.p <= n, "p", "must satisfy 1 <= p <= site count");
    return c.report;
}

ValidationReport validate(const MedianPlexInstance& inst) {
    Check c;
    const int n = inst.node_count();
    c.require(n >= 1, "weights", "at least one node required");
    c.finite_vector(inst.weights, "weights");
    for (int i = 0; i < n; ++i)
        c.require(inst.weights[i] > 0.0, idx("weights", i), "must be > 0");
    c.require(row_count(inst.dist) == n && col_count(inst.dist) == n &&
                  is_rectangular(inst.dist),
              "dist", "distance matrix must be node x node");
    c.finite_matrix(inst.dist, "dist");
    if (c.report.ok()) {
        for (int i = 0; i < n; ++i)
            c.require(inst.dist[i][i] == 0.0, idx(idx("dist", i), i),
                      "diagonal must be zero");
        double total = 0.0;
        for (double w : inst.normalized_weights()) total += w;
        c.require(std::abs(total - 1.0) <= 1e-12, "weights",
                  "normalized weights must sum to 1");
    }
    c.require(std::isfinite(inst.revenue_rate), "r", "not finite");
    c.require(std::isfinite(inst.transport_rate), "gamma", "not finite");
    c.require(std::isfinite(inst.facility_cost), "phi", "not finite");
    c.require(std::isfinite(inst.complexity_factor) && inst.complexity_factor >= 0.0,
              "alpha", "must be finite and >= 0");
    c.require(inst.facility_count >= 1 && inst.facility_count <= n, "K",
              "must satisfy 1 <= K <= node count");
    return c.report;
}

ValidationReport validate(const EvModel& inst) {
    Check c;
    c.require(std::isfinite(inst.step) && inst.step > 0.0, "delta", "must be > 0");
    c.require(std::isfinite(inst.horizon) && inst.horizon > 0.0, "F", "must be > 0");
    if (c.report.ok()) {
        const double ratio = inst.horizon / inst.step;
        c.require(std::abs(ratio - std::llround(ratio)) <= 1e-9 && ratio >= 0.5,
                  "F", "horizon must be a positive whole number of steps");
    }
    c.require(std::isfinite(inst.target_position) && inst.target_position >= 0.0,
              "P", "must be >= 0");
    struct Named { const char* name; double value; };
    for (const auto& [name, value] : {Named{"R", inst.wheel_radius},
                                      Named{"B", inst.battery_resistance},
                                      Named{"S", inst.supply_voltage},
                                      Named{"Tr", inst.transmission_ratio},
                                      Named{"C", inst.drag_coefficient},
                                      Named{"L", inst.rotor_inductance},
                                      Named{"I", inst.inductor_resistance},
                                      Named{"Q", inst.torque_coefficient},
                                      Named{"M", inst.mass},
                                      Named{"G", inst.gravity},
                                      Named{"Fr", inst.wheel_friction},
                                      Named{"J", inst.inertia_constant},
                                      Named{"i_max", inst.induction_limit}}) {
        c.require(std::isfinite(value) && value > 0.0, name, "must be > 0");
    }
    return c.report;
}

ValidationReport validate(const Instance& inst) {
    return std::visit([](const auto& x) { return validate(x); }, inst);
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

namespace {

TransportInstance generate_tp(int n, int m, Rng& rng) {
    TransportInstance inst;
    inst.supplies.resize(n);
    inst.demands.resize(m);
    inst.costs.assign(n, std::vector<double>(m));
    for (int j = 0; j < m; ++j) inst.demands[j] = uniform_int(rng, 1, 9);
    for (int i = 0; i < n; ++i) inst.supplies[i] = uniform_int(rng, 1, 9);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) inst.costs[i][j] = uniform_int(rng, 1, 20);
    // Top up supplies round-robin until the balance is feasible.
    double deficit = inst.total_demand() - inst.total_supply();
    for (int i = 0; deficit > 0.0; ++i, deficit -= 1.0)
        inst.supplies[i % n] += 1.0;
    return inst;
}

IntervalTransportInstance generate_itp(int n, int m, Rng& rng) {
    // Intervals grown around a feasible center, so the region of feasible
    // (demand, capacity) pairs is never empty.
    IntervalTransportInstance inst;
    std::vector<double> d(m), q(n);
    inst.costs.assign(n, std::vector<double>(m));
    for (int j = 0; j < m; ++j) d[j] = uniform_int(rng, 2, 7);
    for (int i = 0; i < n; ++i) q[i] = uniform_int(rng, 2, 7);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) inst.costs[i][j] = uniform_int(rng, 1, 20);
    inst.demand_lo.resize(m);
    inst.demand_hi.resize(m);
    for (int j = 0; j < m; ++j) {
        inst.demand_lo[j] = std::max(1.0, d[j] - uniform_int(rng, 0, 1));
        inst.demand_hi[j] = d[j] + uniform_int(rng, 0, 2);
    }
    inst.cap_lo.resize(n);
    inst.cap_hi.resize(n);
    for (int i = 0; i < n; ++i) {
        inst.cap_lo[i] = std::max(0.0, q[i] - uniform_int(rng, 0, 1));
        inst.cap_hi[i] = q[i] + uniform_int(rng, 0, 2);
    }
    // Raise capacity intervals until even the lowest capacities cover the
    // widest demands. Every point of the box is then feasible, which keeps
    // the worst case on a box vertex where the local searches operate.
    double demand_hi_sum = 0.0, cap_lo_sum = 0.0;
    for (double v : inst.demand_hi) demand_hi_sum += v;
    for (double v : inst.cap_lo) cap_lo_sum += v;
    for (int i = 0; cap_lo_sum < demand_hi_sum; ++i, cap_lo_sum += 1.0) {
        inst.cap_lo[i % n] += 1.0;
        inst.cap_hi[i % n] += 1.0;
    }
    return inst;
}

PlanarDemandSet generate_planar(int n, Rng& rng) {
    PlanarDemandSet inst;
    inst.points.resize(n);
    inst.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        inst.points[k] = {uniform_real(rng, 0.0, 10.0), uniform_real(rng, 0.0, 10.0)};
        inst.weights[k] = uniform_real(rng, 0.5, 3.0);
    }
    return inst;
}

SpcpInstance generate_spcp(int n, int m, int strata, int p, Rng& rng) {
    SpcpInstance inst;
    std::vector<Point> sites(n), demands(m);
    for (int j = 0; j < n; ++j)
        sites[j] = {uniform_real(rng, 0.0, 100.0), uniform_real(rng, 0.0, 100.0)};
    for (int i = 0; i < m; ++i)
        demands[i] = {uniform_real(rng, 0.0, 100.0), uniform_real(rng, 0.0, 100.0)};
    inst.dist.assign(m, std::vector<double>(n));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) inst.dist[i][j] = distance(demands[i], sites[j]);
    inst.strata.resize(strata);
    // Round-robin base membership keeps every stratum nonempty; extra random
    // memberships make strata overlap.
    for (int i = 0; i < m; ++i) inst.strata[i % strata].members.push_back(i);
    for (int s = 0; s < strata; ++s) {
        for (int i = 0; i < m; ++i) {
            if (i % strata != s && uniform_real(rng, 0.0, 1.0) < 0.25)
                inst.strata[s].members.push_back(i);
        }
        auto& mem = inst.strata[s].members;
        std::sort(mem.begin(), mem.end());
        mem.erase(std::unique(mem.begin(), mem.end()), mem.end());
        inst.strata[s].weight = uniform_real(rng, 0.5, 2.0);
    }
    inst.p = p;
    return inst;
}

MedianPlexInstance generate_medianplex(int n, int K, Rng& rng) {
    MedianPlexInstance inst;
    std::vector<Point> nodes(n);
    for (int i = 0; i < n; ++i)
        nodes[i] = {uniform_real(rng, 0.0, 10.0), uniform_real(rng, 0.0, 10.0)};
    inst.dist.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            inst.dist[i][j] = inst.dist[j][i] = distance(nodes[i], nodes[j]);
    inst.weights.resize(n);
    for (int i = 0; i < n; ++i) inst.weights[i] = uniform_int(rng, 1, 10);
    inst.revenue_rate = uniform_real(rng, 8.0, 14.0);
    inst.transport_rate = uniform_real(rng, 0.4, 1.0);
    inst.facility_cost = uniform_real(rng, 0.5, 3.0);
    // Entropy of any allocation set is at most log2(n), so this keeps the
    // complexity condition alpha * C < 1 satisfiable by construction.
    inst.complexity_factor =
        uniform_real(rng, 0.0, 0.8) / std::log2(static_cast<double>(std::max(2, n)));
    inst.facility_count = K;
    return inst;
}

EvModel generate_evdp(int T, Rng& rng) {
    EvModel model;
    model.step = 0.1;
    model.horizon = model.step * T;
    model.wheel_radius = uniform_real(rng, 0.25, 0.35);
    // Summarizing constant from transmission, mass and wheel radius.
    model.inertia_constant =
        model.transmission_ratio * model.transmission_ratio /
        (model.mass * model.wheel_radius * model.wheel_radius);
    model.target_position = 0.0;
    // Pick a target that a full-throttle rollout provably reaches.
    const auto limit = evdp::greedy_max_throttle(model, 1.0);
    model.target_position = 0.6 * limit.final_state().position;
    return model;
}

}  // namespace

Instance generate(ProblemKind kind, const GenParams& params, std::uint64_t seed) {
    if (params.n < 1 || params.m < 1 || params.strata < 1 || params.p < 1 ||
        params.K < 1 || params.T < 1)
        throw SchemaError("generation size parameters must be positive");
    // Mix the kind into the seed so different kinds with the same seed differ.
    Rng rng(seed * 6364136223846793005ULL + static_cast<std::uint64_t>(kind) + 1442695040888963407ULL);
    switch (kind) {
        case ProblemKind::tp: return generate_tp(params.n, params.m, rng);
        case ProblemKind::itp: return generate_itp(params.n, params.m, rng);
        case ProblemKind::planar: return generate_planar(params.n, rng);
        case ProblemKind::spcp: {
            if (params.p > params.n)
                throw SchemaError("spcp generation requires p <= n");
            const int strata = std::min(params.strata, params.m);
            return generate_spcp(params.n, params.m, strata, params.p, rng);
        }
        case ProblemKind::medianplex: {
            if (params.K > params.n)
                throw SchemaError("medianplex generation requires K <= n");
            return generate_medianplex(params.n, params.K, rng);
        }
        case ProblemKind::evdp: return generate_evdp(params.T, rng);
    }
    throw SchemaError("unknown problem kind");
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

const json& need(const json& j, const char* key, const char* context) {
    auto it = j.find(key);
    if (it == j.end())
        throw SchemaError(std::string("missing field \"") + key + "\" in " + context);
    return *it;
}

double as_number(const json& j, const std::string& where) {
    if (!j.is_number())
        throw SchemaError("expected a number at " + where);
    return j.get<double>();
}

std::vector<double> as_vector(const json& j, const std::string& where) {
    if (!j.is_array()) throw SchemaError("expected an array at " + where);
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(as_number(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

Matrix as_matrix(const json& j, const std::string& where) {
    if (!j.is_array()) throw SchemaError("expected an array of arrays at " + where);
    Matrix out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(as_vector(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

json payload_of(const TransportInstance& x) {
    return {{"supplies", x.supplies}, {"demands", x.demands}, {"costs", x.costs}};
}

json payload_of(const IntervalTransportInstance& x) {
    return {{"costs", x.costs},
            {"demand_lo", x.demand_lo},
            {"demand_hi", x.demand_hi},
            {"cap_lo", x.cap_lo},
            {"cap_hi", x.cap_hi}};
}

json payload_of(const PlanarDemandSet& x) {
    json pts = json::array();
    for (const auto& pt : x.points) pts.push_back({pt.x, pt.y});
    return {{"points", pts}, {"weights", x.weights}};
}

json payload_of(const SpcpInstance& x) {
    json strata = json::array();
    for (const auto& s : x.strata)
        strata.push_back({{"members", s.members}, {"weight", s.weight}});
    return {{"dist", x.dist}, {"strata", strata}, {"p", x.p}};
}

json payload_of(const MedianPlexInstance& x) {
    return {{"weights", x.weights}, {"dist", x.dist},    {"r", x.revenue_rate},
            {"gamma", x.transport_rate}, {"phi", x.facility_cost},
            {"alpha", x.complexity_factor}, {"K", x.facility_count}};
}

json payload_of(const EvModel& x) {
    return {{"delta", x.step},
            {"F", x.horizon},
            {"P", x.target_position},
            {"R", x.wheel_radius},
            {"B", x.battery_resistance},
            {"S", x.supply_voltage},
            {"Tr", x.transmission_ratio},
            {"C", x.drag_coefficient},
            {"L", x.rotor_inductance},
            {"I", x.inductor_resistance},
            {"Q", x.torque_coefficient},
            {"M", x.mass},
            {"G", x.gravity},
            {"Fr", x.wheel_friction},
            {"J", x.inertia_constant},
            {"i_max", x.induction_limit}};
}

TransportInstance tp_from_payload(const json& p) {
    TransportInstance x;
    x.supplies = as_vector(need(p, "supplies", "tp payload"), "payload.supplies");
    x.demands = as_vector(need(p, "demands", "tp payload"), "payload.demands");
    x.costs = as_matrix(need(p, "costs", "tp payload"), "payload.costs");
    return x;
}

IntervalTransportInstance itp_from_payload(const json& p) {
    IntervalTransportInstance x;
    x.costs = as_matrix(need(p, "costs", "itp payload"), "payload.costs");
    x.demand_lo = as_vector(need(p, "demand_lo", "itp payload"), "payload.demand_lo");
    x.demand_hi = as_vector(need(p, "demand_hi", "itp payload"), "payload.demand_hi");
    x.cap_lo = as_vector(need(p, "cap_lo", "itp payload"), "payload.cap_lo");
    x.cap_hi = as_vector(need(p, "cap_hi", "itp payload"), "payload.cap_hi");
    return x;
}

PlanarDemandSet planar_from_payload(const json& p) {
    PlanarDemandSet x;
    const json& pts = need(p, "points", "planar payload");
    if (!pts.is_array()) throw SchemaError("expected an array at payload.points");
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const auto where = "payload.points[" + std::to_string(k) + "]";
        if (!pts[k].is_array() || pts[k].size() != 2)
            throw SchemaError("expected [x, y] at " + where);
        x.points.push_back({as_number(pts[k][0], where + "[0]"),
                            as_number(pts[k][1], where + "[1]")});
    }
    x.weights = as_vector(need(p, "weights", "planar payload"), "payload.weights");
    return x;
}

SpcpInstance spcp_from_payload(const json& p) {
    SpcpInstance x;
    x.dist = as_matrix(need(p, "dist", "spcp payload"), "payload.dist");
    const json& strata = need(p, "strata", "spcp payload");
    if (!strata.is_array()) throw SchemaError("expected an array at payload.strata");
    for (std::size_t s = 0; s < strata.size(); ++s) {
        const auto where = "payload.strata[" + std::to_string(s) + "]";
        Stratum st;
        const json& members = need(strata[s], "members", where.c_str());
        if (!members.is_array()) throw SchemaError("expected an array at " + where + ".members");
        for (const auto& mv : members) {
            if (!mv.is_number_integer())
                throw SchemaError("expected integer member indices at " + where + ".members");
            st.members.push_back(mv.get<int>());
        }
        st.weight = as_number(need(strata[s], "weight", where.c_str()), where + ".weight");
        x.strata.push_back(std::move(st));
    }
    const json& pv = need(p, "p", "spcp payload");
    if (!pv.is_number_integer()) throw SchemaError("expected an integer at payload.p");
    x.p = pv.get<int>();
    return x;
}

MedianPlexInstance medianplex_from_payload(const json& p) {
    MedianPlexInstance x;
    x.weights = as_vector(need(p, "weights", "medianplex payload"), "payload.weights");
    x.dist = as_matrix(need(p, "dist", "medianplex payload"), "payload.dist");
    x.revenue_rate = as_number(need(p, "r", "medianplex payload"), "payload.r");
    x.transport_rate = as_number(need(p, "gamma", "medianplex payload"), "payload.gamma");
    x.facility_cost = as_number(need(p, "phi", "medianplex payload"), "payload.phi");
    x.complexity_factor = as_number(need(p, "alpha", "medianplex payload"), "payload.alpha");
    const json& kv = need(p, "K", "medianplex payload");
    if (!kv.is_number_integer()) throw SchemaError("expected an integer at payload.K");
    x.facility_count = kv.get<int>();
    return x;
}

EvModel evdp_from_payload(const json& p) {
    EvModel x;
    x.step = as_number(need(p, "delta", "evdp payload"), "payload.delta");
    x.horizon = as_number(need(p, "F", "evdp payload"), "payload.F");
    x.target_position = as_number(need(p, "P", "evdp payload"), "payload.P");
    x.wheel_radius = as_number(need(p, "R", "evdp payload"), "payload.R");
    x.battery_resistance = as_number(need(p, "B", "evdp payload"), "payload.B");
    x.supply_voltage = as_number(need(p, "S", "evdp payload"), "payload.S");
    x.transmission_ratio = as_number(need(p, "Tr", "evdp payload"), "payload.Tr");
    x.drag_coefficient = as_number(need(p, "C", "evdp payload"), "payload.C");
    x.rotor_inductance = as_number(need(p, "L", "evdp payload"), "payload.L");
    x.inductor_resistance = as_number(need(p, "I", "evdp payload"), "payload.I");
    x.torque_coefficient = as_number(need(p, "Q", "evdp payload"), "payload.Q");
    x.mass = as_number(need(p, "M", "evdp payload"), "payload.M");
    x.gravity = as_number(need(p, "G", "evdp payload"), "payload.G");
    x.wheel_friction = as_number(need(p, "Fr", "evdp payload"), "payload.Fr");
    x.inertia_constant = as_number(need(p, "J", "evdp payload"), "payload.J");
    x.induction_limit = as_number(need(p, "i_max", "evdp payload"), "payload.i_max");
    return x;
}

}  // namespace

nlohmann::json to_json(const Instance& inst) {
    json payload = std::visit([](const auto& x) { return payload_of(x); }, inst);
    return {{"type", to_string(kind_of(inst))}, {"payload", std::move(payload)}};
}

Instance instance_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SchemaError("instance file must be a JSON object");
    const json& type = need(j, "type", "instance envelope");
    if (!type.is_string()) throw SchemaError("expected a string at type");
    const auto kind = kind_from_string(type.get<std::string>());
    if (!kind) throw SchemaError("unknown instance type \"" + type.get<std::string>() + "\"");
    const json& payload = need(j, "payload", "instance envelope");
    switch (*kind) {
        case ProblemKind::tp: return tp_from_payload(payload);
        case ProblemKind::itp: return itp_from_payload(payload);
        case ProblemKind::planar: return planar_from_payload(payload);
        case ProblemKind::spcp: return spcp_from_payload(payload);
        case ProblemKind::medianplex: return medianplex_from_payload(payload);
        case ProblemKind::evdp: return evdp_from_payload(payload);
    }
    throw SchemaError("unknown instance type");
}

Instance parse_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError("parse error in " + path.string() + ": " + e.what());
    }
    return instance_from_json(j);
}

Instance read_instance(const std::filesystem::path& path) {
    Instance inst = parse_instance(path);
    const auto report = validate(inst);
    if (!report.ok())
        throw ValidationError("invalid instance " + path.string() + ": " + report.summary());
    return inst;
}

void write_instance(const Instance& inst, const std::filesystem::path& path) {
    const auto report = validate(inst);
    if (!report.ok())
        throw ValidationError("refusing to write invalid instance: " + report.summary());
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot write " + path.string());
    out << to_json(inst).dump(2) << "\n";
}

}  // namespace locbench
