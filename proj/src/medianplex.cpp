#include "locbench/medianplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "locbench/combinatorics.hpp"

namespace locbench::medianplex {

namespace {

constexpr double kImproveTol = 1e-12;

}  // namespace

double entropy_complexity(const std::vector<int>& members,
                          const std::vector<double>& normalized_weights) {
    double complexity = 0.0;
    for (int i : members) {
        const double w = normalized_weights[i];
        complexity -= w * std::log2(w);
    }
    return complexity;
}

double revenue(const MedianPlexInstance& inst, int facility,
               const std::vector<int>& members) {
    double total = 0.0;
    for (int i : members)
        total += (inst.revenue_rate - inst.transport_rate * inst.dist[i][facility]) *
                 inst.weights[i];
    return total;
}

std::optional<ObjectiveParts> try_objective(const MedianPlexInstance& inst,
                                            const std::vector<int>& facilities,
                                            const std::vector<int>& allocation) {
    const int n = inst.node_count();
    if (static_cast<int>(facilities.size()) != inst.facility_count)
        throw std::invalid_argument("facility set must contain exactly K nodes");
    if (static_cast<int>(allocation.size()) != n)
        throw std::invalid_argument("allocation must cover every node");

    std::vector<int> slot(n, -1);
    for (std::size_t k = 0; k < facilities.size(); ++k) {
        const int f = facilities[k];
        if (f < 0 || f >= n) throw std::invalid_argument("facility node out of range");
        if (slot[f] >= 0) throw std::invalid_argument("duplicate facility node");
        slot[f] = static_cast<int>(k);
    }
    std::vector<std::vector<int>> members(facilities.size());
    for (int i = 0; i < n; ++i) {
        if (allocation[i] == kUncovered) continue;
        if (allocation[i] < 0 || allocation[i] >= n || slot[allocation[i]] < 0)
            throw std::invalid_argument("allocation refers to a closed facility");
        members[slot[allocation[i]]].push_back(i);
    }

    const auto w = inst.normalized_weights();
    ObjectiveParts parts;
    parts.z = -inst.facility_cost * static_cast<double>(inst.facility_count);
    for (std::size_t k = 0; k < facilities.size(); ++k) {
        const double c = entropy_complexity(members[k], w);
        if (inst.complexity_factor * c >= 1.0) return std::nullopt;
        const double r = revenue(inst, facilities[k], members[k]);
        parts.facility_revenue.push_back(r);
        parts.facility_complexity.push_back(c);
        parts.z += r * (1.0 - inst.complexity_factor * c);
    }
    return parts;
}

ObjectiveParts objective(const MedianPlexInstance& inst,
                         const std::vector<int>& facilities,
                         const std::vector<int>& allocation) {
    auto parts = try_objective(inst, facilities, allocation);
    if (!parts)
        throw AlphaViolationError("complexity condition alpha*C < 1 violated");
    return *parts;
}

namespace {

double kmedian_cost(const MedianPlexInstance& inst, const std::vector<int>& sites) {
    double cost = 0.0;
    for (int i = 0; i < inst.node_count(); ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (int j : sites) nearest = std::min(nearest, inst.dist[i][j]);
        cost += inst.weights[i] * nearest;
    }
    return cost;
}

std::vector<int> nearest_allocation(const MedianPlexInstance& inst,
                                    const std::vector<int>& facilities) {
    std::vector<int> allocation(inst.node_count());
    for (int i = 0; i < inst.node_count(); ++i) {
        int best = facilities.front();
        for (int f : facilities)
            if (inst.dist[i][f] < inst.dist[i][best]) best = f;
        allocation[i] = best;
    }
    return allocation;
}

// Applies freshly computed parts to the solution and extends the trace.
void adopt(MedianPlexSolution& sol, const ObjectiveParts& parts) {
    sol.z = parts.z;
    sol.facility_revenue = parts.facility_revenue;
    sol.facility_complexity = parts.facility_complexity;
    sol.z_trace.push_back(parts.z);
}

}  // namespace

MedianPlexSolution solve_kmedian(const MedianPlexInstance& inst, KMedianMode mode) {
    const int n = inst.node_count();
    const int K = inst.facility_count;
    if (mode == KMedianMode::automatic)
        mode = binomial(n, K) <= 1e5 ? KMedianMode::enumerate : KMedianMode::interchange;

    std::vector<int> sites;
    if (mode == KMedianMode::enumerate) {
        double best_cost = std::numeric_limits<double>::infinity();
        for_each_combination(n, K, [&](const std::vector<int>& subset) {
            const double cost = kmedian_cost(inst, subset);
            if (cost < best_cost) {
                best_cost = cost;
                sites = subset;
            }
        });
    } else {
        std::vector<char> open(n, 0);
        while (static_cast<int>(sites.size()) < K) {
            int best_site = -1;
            double best_cost = std::numeric_limits<double>::infinity();
            for (int j = 0; j < n; ++j) {
                if (open[j]) continue;
                sites.push_back(j);
                const double cost = kmedian_cost(inst, sites);
                sites.pop_back();
                if (cost < best_cost) {
                    best_cost = cost;
                    best_site = j;
                }
            }
            sites.push_back(best_site);
            open[best_site] = 1;
        }
        std::sort(sites.begin(), sites.end());
        bool improved = true;
        while (improved) {
            improved = false;
            double cost = kmedian_cost(inst, sites);
            std::vector<int> best_swap;
            for (std::size_t out = 0; out < sites.size(); ++out)
                for (int in = 0; in < n; ++in) {
                    if (open[in]) continue;
                    std::vector<int> candidate = sites;
                    candidate[out] = in;
                    const double cand_cost = kmedian_cost(inst, candidate);
                    if (cand_cost < cost) {
                        cost = cand_cost;
                        best_swap = candidate;
                    }
                }
            if (!best_swap.empty()) {
                std::sort(best_swap.begin(), best_swap.end());
                for (int j : sites) open[j] = 0;
                for (int j : best_swap) open[j] = 1;
                sites = best_swap;
                improved = true;
            }
        }
    }

    MedianPlexSolution sol;
    sol.facilities = sites;
    sol.allocation = nearest_allocation(inst, sites);
    adopt(sol, objective(inst, sol.facilities, sol.allocation));
    return sol;
}

MedianPlexSolution improve(const MedianPlexInstance& inst, MedianPlexSolution sol) {
    const int n = inst.node_count();
    auto parts = objective(inst, sol.facilities, sol.allocation);
    if (sol.z_trace.empty()) sol.z_trace.push_back(parts.z);
    sol.z = parts.z;
    sol.facility_revenue = parts.facility_revenue;
    sol.facility_complexity = parts.facility_complexity;

    while (true) {
        // (a) best single-node reassignment across open facilities.
        double best_z = sol.z;
        std::optional<std::pair<int, int>> best_move;  // node, target facility
        std::optional<ObjectiveParts> best_parts;
        for (int i = 0; i < n; ++i)
            for (int f : sol.facilities) {
                if (sol.allocation[i] == f) continue;
                std::vector<int> allocation = sol.allocation;
                allocation[i] = f;
                const auto candidate = try_objective(inst, sol.facilities, allocation);
                if (candidate && candidate->z > best_z + kImproveTol &&
                    (!best_parts || candidate->z > best_parts->z)) {
                    best_move = {i, f};
                    best_parts = candidate;
                }
            }
        if (best_move) {
            sol.allocation[best_move->first] = best_move->second;
            adopt(sol, *best_parts);
            continue;
        }

        // (b) best relocation: move a facility onto one of its member nodes.
        std::optional<std::pair<int, int>> best_relocation;  // facility, new node
        for (int f : sol.facilities) {
            std::vector<int> members;
            for (int i = 0; i < n; ++i)
                if (sol.allocation[i] == f) members.push_back(i);
            for (int m : members) {
                if (m == f) continue;
                if (std::find(sol.facilities.begin(), sol.facilities.end(), m) !=
                    sol.facilities.end())
                    continue;
                std::vector<int> facilities = sol.facilities;
                *std::find(facilities.begin(), facilities.end(), f) = m;
                std::sort(facilities.begin(), facilities.end());
                std::vector<int> allocation = sol.allocation;
                for (int& a : allocation)
                    if (a == f) a = m;
                const auto candidate = try_objective(inst, facilities, allocation);
                if (candidate && candidate->z > best_z + kImproveTol &&
                    (!best_parts || candidate->z > best_parts->z)) {
                    best_relocation = {f, m};
                    best_parts = candidate;
                }
            }
        }
        if (best_relocation) {
            const auto [f, m] = *best_relocation;
            *std::find(sol.facilities.begin(), sol.facilities.end(), f) = m;
            std::sort(sol.facilities.begin(), sol.facilities.end());
            for (int& a : sol.allocation)
                if (a == f) a = m;
            adopt(sol, *best_parts);
            continue;
        }
        break;
    }
    return sol;
}

MedianPlexSolution uncover(const MedianPlexInstance& inst, MedianPlexSolution sol) {
    const int n = inst.node_count();
    auto parts = objective(inst, sol.facilities, sol.allocation);
    if (sol.z_trace.empty()) sol.z_trace.push_back(parts.z);
    sol.z = parts.z;
    sol.facility_revenue = parts.facility_revenue;
    sol.facility_complexity = parts.facility_complexity;

    while (true) {
        double best_z = sol.z;
        int best_node = -1;
        std::optional<ObjectiveParts> best_parts;
        for (int i = 0; i < n; ++i) {
            if (sol.allocation[i] == kUncovered) continue;
            std::vector<int> allocation = sol.allocation;
            allocation[i] = kUncovered;
            const auto candidate = try_objective(inst, sol.facilities, allocation);
            if (candidate && candidate->z > best_z + kImproveTol &&
                (!best_parts || candidate->z > best_parts->z)) {
                best_node = i;
                best_parts = candidate;
            }
        }
        if (best_node < 0) break;
        sol.allocation[best_node] = kUncovered;
        adopt(sol, *best_parts);
        sol = improve(inst, std::move(sol));
    }
    return sol;
}

MedianPlexSolution solve(const MedianPlexInstance& inst) {
    return uncover(inst, improve(inst, solve_kmedian(inst)));
}

}  // namespace locbench::medianplex
