#include "locbench/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "locbench/errors.hpp"

namespace locbench::transport {

namespace {

constexpr double kReducedCostTol = 1e-10;

// Balanced tableau: original columns plus one zero-cost dummy column that
// absorbs the capacity slack.
struct Tableau {
    int rows = 0;
    int cols = 0;  // includes the dummy column
    const Matrix* costs = nullptr;
    Matrix x;
    std::vector<std::vector<char>> basic;

    double cost(int i, int j) const { return j + 1 == cols ? 0.0 : (*costs)[i][j]; }
};

// Northwest-corner start. Exhausting a row moves down, anything else moves
// right, so the basic cells form a staircase spanning tree with exactly
// rows + cols - 1 members, zero allocations included.
void northwest_corner(Tableau& t, std::vector<double> remaining_supply,
                      std::vector<double> remaining_demand) {
    int i = 0, j = 0;
    while (true) {
        const double q = std::min(remaining_supply[i], remaining_demand[j]);
        t.x[i][j] = q;
        t.basic[i][j] = true;
        remaining_supply[i] -= q;
        remaining_demand[j] -= q;
        if (i == t.rows - 1 && j == t.cols - 1) break;
        if (remaining_supply[i] == 0.0 && i < t.rows - 1)
            ++i;
        else
            ++j;
    }
}

// Tree duals: row 0 pinned at zero, the rest propagated along basic cells.
void compute_duals(const Tableau& t, std::vector<double>& u, std::vector<double>& v) {
    const double unset = std::numeric_limits<double>::quiet_NaN();
    u.assign(t.rows, unset);
    v.assign(t.cols, unset);
    u[0] = 0.0;
    // Worst case needs rows + cols - 1 sweeps; instances are small.
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < t.rows; ++i)
            for (int j = 0; j < t.cols; ++j) {
                if (!t.basic[i][j]) continue;
                if (!std::isnan(u[i]) && std::isnan(v[j])) {
                    v[j] = t.cost(i, j) - u[i];
                    changed = true;
                } else if (std::isnan(u[i]) && !std::isnan(v[j])) {
                    u[i] = t.cost(i, j) - v[j];
                    changed = true;
                }
            }
    }
}

// Unique path of basic cells linking the entering cell's row and column,
// found by walking the basis tree from row node ei to column node ej.
std::vector<std::pair<int, int>> basis_cycle(const Tableau& t, int ei, int ej) {
    const int row_base = 0, col_base = t.rows;
    const int nodes = t.rows + t.cols;
    std::vector<int> parent(nodes, -1);
    std::vector<char> seen(nodes, 0);
    std::vector<int> queue{row_base + ei};
    seen[row_base + ei] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int node = queue[head];
        if (node == col_base + ej) break;
        if (node < col_base) {
            const int i = node;
            for (int j = 0; j < t.cols; ++j)
                if (t.basic[i][j] && !seen[col_base + j]) {
                    seen[col_base + j] = 1;
                    parent[col_base + j] = node;
                    queue.push_back(col_base + j);
                }
        } else {
            const int j = node - col_base;
            for (int i = 0; i < t.rows; ++i)
                if (t.basic[i][j] && !seen[i]) {
                    seen[i] = 1;
                    parent[i] = node;
                    queue.push_back(i);
                }
        }
    }
    // Cells along the cycle, entering cell first; signs alternate from '+'.
    std::vector<std::pair<int, int>> cells{{ei, ej}};
    int node = col_base + ej;
    while (node != row_base + ei) {
        const int prev = parent[node];
        if (node >= col_base)
            cells.push_back({prev, node - col_base});
        else
            cells.push_back({node, prev - col_base});
        node = prev;
    }
    return cells;
}

}  // namespace

TpSolution solve_tp(const TransportInstance& inst) {
    if (!inst.balance_feasible())
        throw InfeasibleError("total supply below total demand");
    const int n = inst.facility_count();
    const int m = inst.customer_count();
    Tableau t;
    t.rows = n;
    t.cols = m + 1;
    t.costs = &inst.costs;
    t.x.assign(n, std::vector<double>(t.cols, 0.0));
    t.basic.assign(n, std::vector<char>(t.cols, 0));

    std::vector<double> balanced_demand = inst.demands;
    balanced_demand.push_back(std::max(0.0, inst.total_supply() - inst.total_demand()));
    northwest_corner(t, inst.supplies, balanced_demand);

    std::vector<double> u, v;
    while (true) {
        compute_duals(t, u, v);
        // Bland's rule: lowest-index entering cell with negative reduced cost.
        int ei = -1, ej = -1;
        for (int i = 0; i < t.rows && ei < 0; ++i)
            for (int j = 0; j < t.cols; ++j)
                if (!t.basic[i][j] && t.cost(i, j) - u[i] - v[j] < -kReducedCostTol) {
                    ei = i;
                    ej = j;
                    break;
                }
        if (ei < 0) break;

        const auto cycle = basis_cycle(t, ei, ej);
        double theta = std::numeric_limits<double>::infinity();
        int leave = -1;
        for (std::size_t k = 1; k < cycle.size(); k += 2) {
            const auto [i, j] = cycle[k];
            // Lowest-index tie break on the leaving cell avoids cycling.
            if (t.x[i][j] < theta ||
                (t.x[i][j] == theta && leave >= 0 &&
                 std::pair{i, j} < std::pair{cycle[leave].first, cycle[leave].second})) {
                theta = t.x[i][j];
                leave = static_cast<int>(k);
            }
        }
        for (std::size_t k = 0; k < cycle.size(); ++k) {
            const auto [i, j] = cycle[k];
            t.x[i][j] += (k % 2 == 0 ? theta : -theta);
            if (t.x[i][j] < 0.0) t.x[i][j] = 0.0;
        }
        t.basic[ei][ej] = 1;
        t.basic[cycle[leave].first][cycle[leave].second] = 0;
    }

    compute_duals(t, u, v);
    // Duals are unique only up to a shift; pin the dummy column at zero so
    // row duals price capacity directly and strong duality uses original data.
    const double shift = v.back();
    for (double& ui : u) ui += shift;
    for (double& vj : v) vj -= shift;

    TpSolution sol;
    sol.flow.assign(n, std::vector<double>(m, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            sol.flow[i][j] = t.x[i][j];
            sol.objective += inst.costs[i][j] * t.x[i][j];
        }
    sol.row_duals = u;
    v.pop_back();
    sol.col_duals = v;
    return sol;
}

double tp_value(const Matrix& costs, const std::vector<double>& demands,
                const std::vector<double>& supplies) {
    TransportInstance inst;
    inst.supplies = supplies;
    inst.demands = demands;
    inst.costs = costs;
    return solve_tp(inst).objective;
}

namespace {

constexpr double kBalanceTol = 1e-9;

double sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

// Shared view of the interval box; coordinates 0..m-1 are demands,
// m..m+n-1 are capacities.
struct Box {
    const IntervalTransportInstance* inst;
    int n, m;

    double lo(int k) const {
        return k < m ? inst->demand_lo[k] : inst->cap_lo[k - m];
    }
    double hi(int k) const {
        return k < m ? inst->demand_hi[k] : inst->cap_hi[k - m];
    }
    int dims() const { return n + m; }

    void materialize(std::uint64_t mask, std::vector<double>& d,
                     std::vector<double>& q) const {
        d.resize(m);
        q.resize(n);
        for (int k = 0; k < dims(); ++k) {
            const double val = (mask >> k) & 1 ? hi(k) : lo(k);
            if (k < m)
                d[k] = val;
            else
                q[k - m] = val;
        }
    }

    bool feasible(const std::vector<double>& d, const std::vector<double>& q) const {
        return sum(q) >= sum(d) - kBalanceTol;
    }
};

bool lex_less(const std::vector<double>& d1, const std::vector<double>& q1,
              const std::vector<double>& d2, const std::vector<double>& q2) {
    if (d1 != d2) return std::lexicographical_compare(d1.begin(), d1.end(),
                                                      d2.begin(), d2.end());
    return std::lexicographical_compare(q1.begin(), q1.end(), q2.begin(), q2.end());
}

}  // namespace

ItpResult itp_oracle(const IntervalTransportInstance& inst, const OracleOptions& options) {
    const Box box{&inst, inst.facility_count(), inst.customer_count()};
    if (box.dims() > options.max_size)
        throw SizeCapError("instance too large for the vertex sweep oracle");
    if (sum(inst.cap_hi) < sum(inst.demand_lo) - kBalanceTol)
        throw InfeasibleError("empty interval region");

    ItpResult best;
    best.value = -std::numeric_limits<double>::infinity();
    best.method = "oracle";
    best.certified = true;
    std::vector<double> d, q;
    auto consider = [&](const std::vector<double>& dc, const std::vector<double>& qc) {
        ++best.iterations;
        const double z = tp_value(inst.costs, dc, qc);
        if (z > best.value ||
            (z == best.value && lex_less(dc, qc, best.demands, best.supplies))) {
            best.value = z;
            best.demands = dc;
            best.supplies = qc;
        }
    };

    const std::uint64_t masks = 1ULL << box.dims();
    for (std::uint64_t mask = 0; mask < masks; ++mask) {
        box.materialize(mask, d, q);
        if (box.feasible(d, q)) consider(d, q);
    }
    // Vertices where the balance hyperplane cuts a box edge: every coordinate
    // but one at a bound, the free one solved from sum(q) = sum(d).
    for (int free = 0; free < box.dims(); ++free) {
        for (std::uint64_t mask = 0; mask < masks; ++mask) {
            if ((mask >> free) & 1) continue;  // the free bit is meaningless
            box.materialize(mask, d, q);
            double value;
            if (free < box.m) {
                value = sum(q) - (sum(d) - d[free]);
                d[free] = value;
            } else {
                value = sum(d) - (sum(q) - q[free - box.m]);
                q[free - box.m] = value;
            }
            if (value < box.lo(free) - kBalanceTol || value > box.hi(free) + kBalanceTol)
                continue;
            if (free < box.m)
                d[free] = std::clamp(value, box.lo(free), box.hi(free));
            else
                q[free - box.m] = std::clamp(value, box.lo(free), box.hi(free));
            consider(d, q);
        }
    }
    return best;
}

ItpResult itp_bisection(const IntervalTransportInstance& inst, BisectionVariant variant,
                        const BisectionOptions& options) {
    const Box box{&inst, inst.facility_count(), inst.customer_count()};
    if (sum(inst.cap_hi) < sum(inst.demand_lo) - kBalanceTol)
        throw InfeasibleError("empty interval region");

    ItpResult result;
    result.method = variant == BisectionVariant::A ? "bisection-A" : "bisection-B";
    result.certified = false;

    // Start from low demand at full capacity; always inside the region.
    std::uint64_t incumbent = 0;
    for (int k = box.m; k < box.dims(); ++k) incumbent |= 1ULL << k;

    std::unordered_map<std::uint64_t, double> value_cache;
    std::vector<double> d, q;
    auto eval = [&](std::uint64_t mask) {
        auto it = value_cache.find(mask);
        if (it != value_cache.end()) return it->second;
        box.materialize(mask, d, q);
        const double z = tp_value(inst.costs, d, q);
        value_cache.emplace(mask, z);
        return z;
    };
    auto feasible_mask = [&](std::uint64_t mask) {
        box.materialize(mask, d, q);
        return box.feasible(d, q);
    };

    double lo = eval(incumbent);
    // Every vertex the search evaluates lies in the region, so its value is
    // an attained lower bound; the incumbent tracks the best one seen.
    auto offer = [&](std::uint64_t mask, double z) {
        if (z > lo) {
            lo = z;
            incumbent = mask;
        }
    };
    std::vector<int> flippable;
    for (int k = 0; k < box.dims(); ++k)
        if (box.lo(k) < box.hi(k)) flippable.push_back(k);
    if (flippable.empty()) {
        box.materialize(incumbent, result.demands, result.supplies);
        result.value = lo;
        result.iterations = 1;
        return result;
    }

    double max_cost = 0.0;
    for (const auto& row : inst.costs)
        for (double c : row) max_cost = std::max(max_cost, c);
    double hi = std::max(lo, sum(inst.demand_hi) * max_cost);

    std::unordered_set<std::uint64_t> visited_global;
    while (hi - lo > options.tol && result.iterations < options.max_iter) {
        ++result.iterations;
        const double candidate = 0.5 * (lo + hi);
        std::unordered_set<std::uint64_t> visited_local;
        auto& visited =
            variant == BisectionVariant::A ? visited_global : visited_local;

        // Coordinate-flip hill climb from the incumbent toward the candidate
        // value. Strict improvement with an ascending scan makes ties land on
        // the lowest coordinate.
        std::uint64_t cursor = incumbent;
        double cursor_value = eval(cursor);
        visited.insert(cursor);
        while (lo < candidate - 1e-9) {
            double best_value = cursor_value;
            std::optional<std::uint64_t> best_mask;
            for (int k : flippable) {
                const std::uint64_t next = cursor ^ (1ULL << k);
                if (visited.count(next) || !feasible_mask(next)) continue;
                const double z = eval(next);
                offer(next, z);
                if (z > best_value) {
                    best_value = z;
                    best_mask = next;
                }
            }
            if (!best_mask) break;
            cursor = *best_mask;
            cursor_value = best_value;
            visited.insert(cursor);
        }
        if (lo < candidate - 1e-9) hi = candidate;
    }

    box.materialize(incumbent, result.demands, result.supplies);
    result.value = lo;
    return result;
}

}  // namespace locbench::transport
