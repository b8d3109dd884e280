#pragma once

#include <string>
#include <vector>

#include "locbench/instances.hpp"

namespace locbench::planar {

// Weighted sum of distances from x to every point of the set.
double distsum(const PlanarDemandSet& set, Point x);

// Gradient of distsum; undefined on the demand points themselves, so x within
// 1e-12 of one raises AtDemandPointError.
Point distsum_gradient(const PlanarDemandSet& set, Point x);

struct WeiszfeldOptions {
    double tol = 1e-9;  // on the step norm
    int max_iter = 100000;
};

struct WeberResult {
    Point location;
    double objective = 0.0;
    int iterations = 0;
    std::string reason;  // gradient-tol | demand-point-optimal | max-iter
    std::vector<double> objective_trace;
};

// Iteratively reweighted least squares for the weighted distance-sum minimum.
// Landing on a demand point triggers the local optimality test; non-optimal
// demand points are left along the descent direction.
WeberResult weiszfeld(const PlanarDemandSet& set, const WeiszfeldOptions& options = {});

struct PolyellipseCover {
    PlanarDemandSet foci;
    double radius = 0.0;
    int attaining_index = -1;  // demand point realizing the radius
    std::vector<int> selected;  // demand indices chosen as foci, when selecting
};

// Smallest r such that every demand point a satisfies distsum(foci, a) <= r.
PolyellipseCover covering_radius(const PlanarDemandSet& foci,
                                 const PlanarDemandSet& demand);

enum class FociMode { exact, swap };

// Chooses k demand points as unit-weight foci minimizing the covering radius.
// Exact mode enumerates all k-subsets (capped at 1e6); swap mode runs a
// best-improvement 1-swap local search from a greedy start.
PolyellipseCover select_foci(const PlanarDemandSet& demand, int k, FociMode mode);

struct BBox {
    double xmin = 0.0, ymin = 0.0;
    double xmax = 1.0, ymax = 1.0;
};

struct ContourGrid {
    BBox bbox;
    int nx = 0, ny = 0;
    std::vector<double> values;  // row-major, iy * nx + ix

    double x_at(int ix) const {
        return bbox.xmin + (bbox.xmax - bbox.xmin) * ix / (nx - 1);
    }
    double y_at(int iy) const {
        return bbox.ymin + (bbox.ymax - bbox.ymin) * iy / (ny - 1);
    }
};

// distsum sampled on a regular grid, for contour plotting.
ContourGrid contour_grid(const PlanarDemandSet& set, BBox bbox, int nx, int ny);

// Tight axis-aligned box around the demand points.
BBox bounding_box(const PlanarDemandSet& set);

}  // namespace locbench::planar
