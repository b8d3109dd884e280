#pragma once

#include <string>
#include <vector>

#include "locbench/instances.hpp"

namespace locbench::transport {

// Optimal flow plus the dual prices that certify it. Row duals price supply
// capacity (always <= 0), column duals price demand.
struct TpSolution {
    Matrix flow;  // facilities x customers
    double objective = 0.0;
    std::vector<double> row_duals;
    std::vector<double> col_duals;
};

// Primal transportation simplex with Bland's rule. Capacity slack goes to an
// internal zero-cost dummy column that is never exposed in the flow.
TpSolution solve_tp(const TransportInstance& inst);

// Optimal cost as a function of the right-hand side.
double tp_value(const Matrix& costs, const std::vector<double>& demands,
                const std::vector<double>& supplies);

struct ItpResult {
    double value = 0.0;
    std::vector<double> demands;
    std::vector<double> supplies;
    std::string method;
    int iterations = 0;
    bool certified = false;
};

struct OracleOptions {
    int max_size = 16;  // cap on n + m for the 2^(n+m) vertex sweep
};

// Exact maximizer of the transportation cost over the interval region:
// evaluates every box vertex satisfying the balance constraint, plus the
// points where the balance hyperplane crosses a box edge.
ItpResult itp_oracle(const IntervalTransportInstance& inst,
                     const OracleOptions& options = {});

// The two variants differ in how already visited vertices are treated: A
// keeps one visited set for the whole run, B starts fresh per candidate.
enum class BisectionVariant { A, B };

struct BisectionOptions {
    double tol = 1e-6;
    int max_iter = 200;
};

// Bisection on the cost value; each candidate value is tested for
// attainability by a coordinate-flip local search over box vertices.
ItpResult itp_bisection(const IntervalTransportInstance& inst, BisectionVariant variant,
                        const BisectionOptions& options = {});

}  // namespace locbench::transport
