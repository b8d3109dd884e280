#pragma once

#include <cstdint>
#include <vector>

#include "locbench/instances.hpp"

namespace locbench::spcp {

struct SpcpEvaluation {
    double objective = 0.0;
    std::vector<double> stratum_radii;
};

// Objective of a given open set: per stratum, the largest nearest-open-site
// distance among its members, combined as a weighted sum.
SpcpEvaluation evaluate(const SpcpInstance& inst, const std::vector<int>& sites);

struct SpcpSolution {
    std::vector<int> sites;  // sorted, |sites| = p
    std::vector<double> stratum_radii;
    double objective = 0.0;
    bool exact = false;
    long nodes = 0;  // search nodes expanded, where applicable
};

// Exhaustive sweep over all p-subsets; ties go to the lexicographically
// smallest set. Capped at 1e6 subsets.
SpcpSolution solve_enum(const SpcpInstance& inst);

// Depth-first include/exclude search in site order with a relaxation bound
// (every undecided site counted as open). Exact; seeded by the interchange
// heuristic.
SpcpSolution solve_bnb(const SpcpInstance& inst);

// Greedy construction plus best-improvement 1-interchange, best over
// restarts. Restart 1 is deterministic greedy; later restarts draw a random
// starting site.
SpcpSolution solve_interchange(const SpcpInstance& inst, int restarts = 1,
                               std::uint64_t seed = 0);

}  // namespace locbench::spcp
