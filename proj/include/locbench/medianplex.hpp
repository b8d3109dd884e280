#pragma once

#include <optional>
#include <vector>

#include "locbench/instances.hpp"

namespace locbench::medianplex {

// Allocation entry for a node served by no facility.
inline constexpr int kUncovered = -1;

// Entropy of a member set under globally normalized weights.
double entropy_complexity(const std::vector<int>& members,
                          const std::vector<double>& normalized_weights);

// Net revenue a facility at the given node collects from its members.
double revenue(const MedianPlexInstance& inst, int facility,
               const std::vector<int>& members);

struct ObjectiveParts {
    double z = 0.0;
    std::vector<double> facility_revenue;    // aligned with the facility list
    std::vector<double> facility_complexity;
};

// allocation[i] is the facility node serving i, or kUncovered.
// Returns nothing when some facility violates the complexity condition
// alpha * C < 1.
std::optional<ObjectiveParts> try_objective(const MedianPlexInstance& inst,
                                            const std::vector<int>& facilities,
                                            const std::vector<int>& allocation);

// Same, but the complexity condition failing is an error.
ObjectiveParts objective(const MedianPlexInstance& inst,
                         const std::vector<int>& facilities,
                         const std::vector<int>& allocation);

struct MedianPlexSolution {
    std::vector<int> facilities;  // sorted node indices, |facilities| = K
    std::vector<int> allocation;  // per node: serving facility node or kUncovered
    double z = 0.0;
    std::vector<double> facility_revenue;
    std::vector<double> facility_complexity;
    std::vector<double> z_trace;  // z after each accepted step, initial value first
};

enum class KMedianMode { automatic, enumerate, interchange };

// Classical weighted K-median start with nearest allocation. Enumerates all
// subsets when cheap, otherwise greedy plus 1-interchange.
MedianPlexSolution solve_kmedian(const MedianPlexInstance& inst,
                                 KMedianMode mode = KMedianMode::automatic);

// Single-node reassignments plus per-facility discrete 1-median relocations,
// accepting strict profit improvements until a fixed point.
MedianPlexSolution improve(const MedianPlexInstance& inst, MedianPlexSolution sol);

// Drops covered nodes while that strictly raises profit, re-running improve
// after every drop.
MedianPlexSolution uncover(const MedianPlexInstance& inst, MedianPlexSolution sol);

// Full pipeline: K-median start, improve, uncover.
MedianPlexSolution solve(const MedianPlexInstance& inst);

}  // namespace locbench::medianplex
