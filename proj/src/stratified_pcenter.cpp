#include "locbench/stratified_pcenter.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "locbench/combinatorics.hpp"
#include "locbench/rng.hpp"

namespace locbench::spcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Nearest-open-site distance per demand site.
std::vector<double> allocation_distances(const SpcpInstance& inst,
                                         const std::vector<int>& sites) {
    std::vector<double> nearest(inst.demand_count(), kInf);
    for (int i = 0; i < inst.demand_count(); ++i)
        for (int j : sites) nearest[i] = std::min(nearest[i], inst.dist[i][j]);
    return nearest;
}

SpcpEvaluation evaluate_open(const SpcpInstance& inst, const std::vector<int>& sites) {
    const auto nearest = allocation_distances(inst, sites);
    SpcpEvaluation eval;
    eval.stratum_radii.reserve(inst.strata.size());
    for (const Stratum& stratum : inst.strata) {
        double radius = 0.0;
        for (int member : stratum.members)
            radius = std::max(radius, nearest[member]);
        eval.stratum_radii.push_back(radius);
        eval.objective += stratum.weight * radius;
    }
    return eval;
}

}  // namespace

SpcpEvaluation evaluate(const SpcpInstance& inst, const std::vector<int>& sites) {
    if (static_cast<int>(sites.size()) != inst.p)
        throw std::invalid_argument("open set must contain exactly p sites");
    std::vector<int> sorted = sites;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("open set contains a duplicate site");
    if (!sorted.empty() && (sorted.front() < 0 || sorted.back() >= inst.site_count()))
        throw std::invalid_argument("open set contains an out-of-range site");
    return evaluate_open(inst, sorted);
}

SpcpSolution solve_enum(const SpcpInstance& inst) {
    const int n = inst.site_count();
    if (binomial(n, inst.p) > 1e6)
        throw SizeCapError("too many subsets for exhaustive enumeration");
    SpcpSolution best;
    best.objective = kInf;
    for_each_combination(n, inst.p, [&](const std::vector<int>& subset) {
        const auto eval = evaluate_open(inst, subset);
        if (eval.objective < best.objective) {
            best.objective = eval.objective;
            best.sites = subset;
            best.stratum_radii = eval.stratum_radii;
        }
    });
    best.exact = true;
    return best;
}

namespace {

struct BnbState {
    const SpcpInstance* inst;
    SpcpSolution best;
    std::vector<int> chosen;

    void dfs(int next_site) {
        ++best.nodes;
        const int n = inst->site_count();
        const int missing = inst->p - static_cast<int>(chosen.size());
        if (missing == 0) {
            const auto eval = evaluate_open(*inst, chosen);
            if (eval.objective < best.objective) {
                best.objective = eval.objective;
                best.sites = chosen;
                best.stratum_radii = eval.stratum_radii;
            }
            return;
        }
        if (n - next_site < missing) return;

        // Relaxation: treat every undecided site as open. Opening sites never
        // hurts the objective, so this bounds the whole subtree.
        std::vector<int> relaxed = chosen;
        for (int j = next_site; j < n; ++j) relaxed.push_back(j);
        if (evaluate_open(*inst, relaxed).objective >= best.objective) return;

        chosen.push_back(next_site);
        dfs(next_site + 1);
        chosen.pop_back();
        dfs(next_site + 1);
    }
};

}  // namespace

SpcpSolution solve_bnb(const SpcpInstance& inst) {
    BnbState state;
    state.inst = &inst;
    state.best = solve_interchange(inst, 1, 0);
    state.best.nodes = 0;
    if (inst.p == inst.site_count()) {
        state.best.exact = true;
        state.best.nodes = 1;
        return state.best;
    }
    state.dfs(0);
    state.best.exact = true;
    return state.best;
}

namespace {

std::vector<int> greedy_from(const SpcpInstance& inst, std::vector<int> chosen) {
    std::vector<char> open(inst.site_count(), 0);
    for (int j : chosen) open[j] = 1;
    while (static_cast<int>(chosen.size()) < inst.p) {
        int best_site = -1;
        double best_objective = kInf;
        for (int j = 0; j < inst.site_count(); ++j) {
            if (open[j]) continue;
            chosen.push_back(j);
            const double objective = evaluate_open(inst, chosen).objective;
            chosen.pop_back();
            if (objective < best_objective) {
                best_objective = objective;
                best_site = j;
            }
        }
        chosen.push_back(best_site);
        open[best_site] = 1;
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

}  // namespace

SpcpSolution solve_interchange(const SpcpInstance& inst, int restarts,
                               std::uint64_t seed) {
    if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    Rng rng(seed);
    SpcpSolution best;
    best.objective = kInf;
    for (int restart = 0; restart < restarts; ++restart) {
        std::vector<int> start;
        if (restart > 0) start.push_back(uniform_int(rng, 0, inst.site_count() - 1));
        std::vector<int> sites = greedy_from(inst, start);
        double objective = evaluate_open(inst, sites).objective;

        bool improved = true;
        while (improved) {
            improved = false;
            std::vector<int> best_swap;
            double best_objective = objective;
            std::vector<char> open(inst.site_count(), 0);
            for (int j : sites) open[j] = 1;
            for (std::size_t out = 0; out < sites.size(); ++out)
                for (int in = 0; in < inst.site_count(); ++in) {
                    if (open[in]) continue;
                    std::vector<int> candidate = sites;
                    candidate[out] = in;
                    const double cand_objective = evaluate_open(inst, candidate).objective;
                    if (cand_objective < best_objective) {
                        best_objective = cand_objective;
                        best_swap = candidate;
                    }
                }
            if (!best_swap.empty()) {
                std::sort(best_swap.begin(), best_swap.end());
                sites = best_swap;
                objective = best_objective;
                improved = true;
            }
        }
        if (objective < best.objective ||
            (objective == best.objective && sites < best.sites)) {
            const auto eval = evaluate_open(inst, sites);
            best.objective = eval.objective;
            best.sites = sites;
            best.stratum_radii = eval.stratum_radii;
        }
    }
    best.exact = false;
    return best;
}

}  // namespace locbench::spcp
