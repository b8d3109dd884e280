#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "locbench/errors.hpp"

namespace locbench {

// ---------------------------------------------------------------------------
// Shared small types
// ---------------------------------------------------------------------------

using Matrix = std::vector<std::vector<double>>;

inline int row_count(const Matrix& m) { return static_cast<int>(m.size()); }
inline int col_count(const Matrix& m) {
    return m.empty() ? 0 : static_cast<int>(m.front().size());
}
bool is_rectangular(const Matrix& m);

struct Point {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point&) const = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

// ---------------------------------------------------------------------------
// Problem instances
// ---------------------------------------------------------------------------

// Min-cost shipment from capacitated facilities to demand points.
struct TransportInstance {
    std::vector<double> supplies;  // per facility, >= 0
    std::vector<double> demands;   // per customer, > 0
    Matrix costs;                  // facilities x customers, cost per unit

    int facility_count() const { return static_cast<int>(supplies.size()); }
    int customer_count() const { return static_cast<int>(demands.size()); }
    double total_supply() const;
    double total_demand() const;
    // Feasible iff total supply covers total demand.
    bool balance_feasible() const { return total_supply() >= total_demand() - 1e-9; }

    bool operator==(const TransportInstance&) const = default;
};

// Transportation data where demands and capacities each range over an interval.
struct IntervalTransportInstance {
    Matrix costs;  // facilities x customers
    std::vector<double> demand_lo, demand_hi;
    std::vector<double> cap_lo, cap_hi;

    int facility_count() const { return static_cast<int>(cap_lo.size()); }
    int customer_count() const { return static_cast<int>(demand_lo.size()); }

    bool operator==(const IntervalTransportInstance&) const = default;
};

// Weighted points in the plane.
struct PlanarDemandSet {
    std::vector<Point> points;
    std::vector<double> weights;  // > 0

    int size() const { return static_cast<int>(points.size()); }

    bool operator==(const PlanarDemandSet&) const = default;
};

struct Stratum {
    std::vector<int> members;  // demand-site indices
    double weight = 1.0;
    bool operator==(const Stratum&) const = default;
};

// Stratified p-center data: demand sites x candidate sites distances plus
// strata defined over the demand sites.
struct SpcpInstance {
    Matrix dist;  // demand sites (rows) x candidate sites (cols)
    std::vector<Stratum> strata;
    int p = 1;

    int site_count() const { return col_count(dist); }
    int demand_count() const { return row_count(dist); }

    bool operator==(const SpcpInstance&) const = default;
};

// Profit-maximizing K-facility location with an entropy penalty on each
// facility's allocated demand mix.
struct MedianPlexInstance {
    std::vector<double> weights;    // demand weight per node, > 0
    Matrix dist;                    // node x node, symmetric, zero diagonal
    double revenue_rate = 0.0;      // revenue per unit served
    double transport_rate = 0.0;    // cost per unit-distance
    double facility_cost = 0.0;     // fixed cost per open facility
    double complexity_factor = 0.0; // >= 0
    int facility_count = 1;         // K

    int node_count() const { return static_cast<int>(weights.size()); }
    // weights scaled to sum to 1 over all nodes
    std::vector<double> normalized_weights() const;

    bool operator==(const MedianPlexInstance&) const = default;
};

// Physical constants of the vehicle model plus horizon and target.
struct EvModel {
    double step = 0.1;                  // delta, seconds
    double horizon = 1.0;               // F, seconds
    double target_position = 0.0;       // P, meters
    double wheel_radius = 0.3;          // R, meters
    double battery_resistance = 0.05;   // B, Ohm
    double supply_voltage = 150.0;      // S, volts
    double transmission_ratio = 10.0;   // Tr
    double drag_coefficient = 0.517;    // C
    double rotor_inductance = 0.05;     // L
    double inductor_resistance = 0.03;  // I, Ohm
    double torque_coefficient = 0.27;   // Q
    double mass = 250.0;                // M, kg
    double gravity = 9.81;              // G
    double wheel_friction = 0.03;       // Fr
    double inertia_constant = 0.0;      // J
    double induction_limit = 150.0;     // i_max

    // Number of control periods; horizon/step must be a positive integer.
    int periods() const { return static_cast<int>(std::llround(horizon / step)); }

    bool operator==(const EvModel&) const = default;
};

// Vehicle state between periods. Induction stays within +-induction_limit and
// radial speed is non-negative for any admissible trajectory.
struct EvState {
    int t = 0;
    double position = 0.0;     // meters
    double induction = 0.0;
    double radial_speed = 0.0; // rad/s

    bool operator==(const EvState&) const = default;
};

// ---------------------------------------------------------------------------
// Envelope
// ---------------------------------------------------------------------------

enum class ProblemKind { tp, itp, planar, spcp, medianplex, evdp };

const char* to_string(ProblemKind kind);
std::optional<ProblemKind> kind_from_string(std::string_view name);

using Instance = std::variant<TransportInstance, IntervalTransportInstance,
                              PlanarDemandSet, SpcpInstance, MedianPlexInstance,
                              EvModel>;

ProblemKind kind_of(const Instance& inst);

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct Violation {
    std::string field;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string summary() const;
};

ValidationReport validate(const TransportInstance& inst);
ValidationReport validate(const IntervalTransportInstance& inst);
ValidationReport validate(const PlanarDemandSet& inst);
ValidationReport validate(const SpcpInstance& inst);
ValidationReport validate(const MedianPlexInstance& inst);
ValidationReport validate(const EvModel& inst);
ValidationReport validate(const Instance& inst);

// ---------------------------------------------------------------------------
// Seeded generation
// ---------------------------------------------------------------------------

struct GenParams {
    int n = 3;       // facilities / candidate sites / nodes / points
    int m = 3;       // customers / demand sites
    int strata = 2;
    int p = 1;
    int K = 1;
    int T = 10;      // control periods
};

// Deterministic in (kind, params, seed); the result always validates.
Instance generate(ProblemKind kind, const GenParams& params, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Serialization: {"type": ..., "payload": {...}} with one payload schema per kind
// ---------------------------------------------------------------------------

nlohmann::json to_json(const Instance& inst);
// Schema checks only; throws SchemaError.
Instance instance_from_json(const nlohmann::json& j);

// Parse without invariant enforcement (for reporting tools).
Instance parse_instance(const std::filesystem::path& path);
// Parse + validate; throws SchemaError / ValidationError.
Instance read_instance(const std::filesystem::path& path);
// Validates, then writes pretty-printed JSON with sorted keys.
void write_instance(const Instance& inst, const std::filesystem::path& path);

}  // namespace locbench
