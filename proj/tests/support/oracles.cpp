#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "locbench/ev_dp.hpp"

namespace locbench::testing {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct TpSearch {
    const TransportInstance* inst;
    int n, m;
    std::unordered_map<std::uint64_t, double> memo;

    static std::uint64_t key(int column, const std::vector<int>& remaining) {
        std::uint64_t k = column;
        for (int r : remaining) k = (k << 10) | static_cast<std::uint64_t>(r);
        return k;
    }

    // Cheapest way to serve columns from `column` on with the given
    // remaining supplies.
    double solve(int column, std::vector<int>& remaining) {
        if (column == m) return 0.0;
        const std::uint64_t k = key(column, remaining);
        if (auto it = memo.find(k); it != memo.end()) return it->second;
        const int demand = static_cast<int>(inst->demands[column]);
        double best = kInf;
        std::vector<int> shipped(n, 0);
        split(column, 0, demand, 0.0, remaining, shipped, best);
        memo.emplace(k, best);
        return best;
    }

    // Enumerates every split of `left` units across facilities i..n-1.
    void split(int column, int i, int left, double cost, std::vector<int>& remaining,
               std::vector<int>& shipped, double& best) {
        if (i == n) {
            if (left != 0) return;
            for (int f = 0; f < n; ++f) remaining[f] -= shipped[f];
            const double rest = solve(column + 1, remaining);
            for (int f = 0; f < n; ++f) remaining[f] += shipped[f];
            best = std::min(best, cost + rest);
            return;
        }
        const int cap = std::min(left, remaining[i]);
        for (int x = 0; x <= cap; ++x) {
            shipped[i] = x;
            split(column, i + 1, left - x, cost + inst->costs[i][column] * x,
                  remaining, shipped, best);
        }
        shipped[i] = 0;
    }
};

}  // namespace

double tp_integer_flow_oracle(const TransportInstance& inst) {
    TpSearch search;
    search.inst = &inst;
    search.n = inst.facility_count();
    search.m = inst.customer_count();
    std::vector<int> remaining(search.n);
    for (int i = 0; i < search.n; ++i)
        remaining[i] = static_cast<int>(inst.supplies[i]);
    return search.solve(0, remaining);
}

namespace {

void pcenter_subsets(const Matrix& dist, int p, int start, std::vector<int>& chosen,
                     double& best) {
    const int n = col_count(dist);
    if (static_cast<int>(chosen.size()) == p) {
        double radius = 0.0;
        for (const auto& row : dist) {
            double nearest = kInf;
            for (int j : chosen) nearest = std::min(nearest, row[j]);
            radius = std::max(radius, nearest);
        }
        best = std::min(best, radius);
        return;
    }
    for (int j = start; j < n; ++j) {
        chosen.push_back(j);
        pcenter_subsets(dist, p, j + 1, chosen, best);
        chosen.pop_back();
    }
}

}  // namespace

double pcenter_enum_oracle(const Matrix& dist, int p) {
    double best = kInf;
    std::vector<int> chosen;
    pcenter_subsets(dist, p, 0, chosen, best);
    return best;
}

namespace {

struct PlexSearch {
    const MedianPlexInstance* inst;
    int n, K;
    std::vector<double> w;
    std::vector<int> facilities;
    std::vector<int> allocation;  // index into facilities, or -1
    double best = -kInf;

    void allocations(int node) {
        if (node == n) {
            score();
            return;
        }
        for (int choice = -1; choice < K; ++choice) {
            allocation[node] = choice;
            allocations(node + 1);
        }
    }

    void score() {
        double z = -inst->facility_cost * K;
        for (int k = 0; k < K; ++k) {
            double complexity = 0.0, net = 0.0;
            for (int i = 0; i < n; ++i) {
                if (allocation[i] != k) continue;
                complexity -= w[i] * std::log2(w[i]);
                net += (inst->revenue_rate -
                        inst->transport_rate * inst->dist[i][facilities[k]]) *
                       inst->weights[i];
            }
            if (inst->complexity_factor * complexity >= 1.0) return;
            z += net * (1.0 - inst->complexity_factor * complexity);
        }
        best = std::max(best, z);
    }

    void subsets(int start) {
        if (static_cast<int>(facilities.size()) == K) {
            allocations(0);
            return;
        }
        for (int j = start; j < n; ++j) {
            facilities.push_back(j);
            subsets(j + 1);
            facilities.pop_back();
        }
    }
};

}  // namespace

double medianplex_oracle(const MedianPlexInstance& inst) {
    PlexSearch search;
    search.inst = &inst;
    search.n = inst.node_count();
    search.K = inst.facility_count;
    search.w = inst.normalized_weights();
    search.allocation.assign(search.n, -1);
    search.subsets(0);
    return search.best;
}

namespace {

void ev_sequences(const EvModel& model, const std::vector<double>& levels,
                  const EvState& state, double energy, double& best) {
    if (state.t == model.periods()) {
        if (evdp::reached(model, state.position)) best = std::min(best, energy);
        return;
    }
    const auto bounds = evdp::control_bounds(model, state);
    double previous = kInf;
    for (double level : levels) {
        const double u = std::clamp(level, bounds.lo, bounds.hi);
        if (u == previous) continue;
        previous = u;
        const EvState next = evdp::step(model, state, u);
        ev_sequences(model, levels, next, energy + evdp::stage_energy(model, u, next.induction),
                     best);
    }
}

}  // namespace

double ev_enum_oracle(const EvModel& model, const std::vector<double>& levels) {
    double best = kInf;
    ev_sequences(model, levels, EvState{}, 0.0, best);
    return best;
}

}  // namespace locbench::testing
