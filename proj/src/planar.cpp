#include "locbench/planar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "locbench/combinatorics.hpp"

namespace locbench::planar {

namespace {

constexpr double kCoincidenceTol = 1e-12;

}  // namespace

double distsum(const PlanarDemandSet& set, Point x) {
    double total = 0.0;
    for (int k = 0; k < set.size(); ++k)
        total += set.weights[k] * distance(x, set.points[k]);
    return total;
}

Point distsum_gradient(const PlanarDemandSet& set, Point x) {
    Point g{0.0, 0.0};
    for (int k = 0; k < set.size(); ++k) {
        const double d = distance(x, set.points[k]);
        if (d <= kCoincidenceTol)
            throw AtDemandPointError("gradient undefined at a demand point");
        g = g + (set.weights[k] / d) * (x - set.points[k]);
    }
    return g;
}

namespace {

// Coincident demand points merged into one with summed weight, so the
// demand-point test never divides by a zero distance.
PlanarDemandSet merge_coincident(const PlanarDemandSet& set) {
    PlanarDemandSet merged;
    for (int k = 0; k < set.size(); ++k) {
        bool absorbed = false;
        for (int j = 0; j < merged.size(); ++j)
            if (distance(set.points[k], merged.points[j]) <= kCoincidenceTol) {
                merged.weights[j] += set.weights[k];
                absorbed = true;
                break;
            }
        if (!absorbed) {
            merged.points.push_back(set.points[k]);
            merged.weights.push_back(set.weights[k]);
        }
    }
    return merged;
}

}  // namespace

WeberResult weiszfeld(const PlanarDemandSet& set, const WeiszfeldOptions& options) {
    if (options.tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
    const PlanarDemandSet pts = merge_coincident(set);

    Point x{0.0, 0.0};
    double weight_sum = 0.0;
    for (int k = 0; k < pts.size(); ++k) {
        x = x + pts.weights[k] * pts.points[k];
        weight_sum += pts.weights[k];
    }
    x = (1.0 / weight_sum) * x;

    WeberResult result;
    result.objective_trace.push_back(distsum(pts, x));
    for (int it = 1; it <= options.max_iter; ++it) {
        result.iterations = it;
        int anchor = -1;
        for (int k = 0; k < pts.size() && anchor < 0; ++k)
            if (distance(x, pts.points[k]) <= kCoincidenceTol) anchor = k;

        Point next;
        if (anchor >= 0) {
            // Pulled onto a demand point: optimal there iff the pull of the
            // others does not exceed this point's own weight.
            Point pull{0.0, 0.0};
            double lipschitz = 0.0;
            for (int j = 0; j < pts.size(); ++j) {
                if (j == anchor) continue;
                const double d = distance(pts.points[anchor], pts.points[j]);
                pull = pull + (pts.weights[j] / d) * (pts.points[anchor] - pts.points[j]);
                lipschitz += pts.weights[j] / d;
            }
            const double pull_norm = norm(pull);
            if (pull_norm <= pts.weights[anchor]) {
                result.location = pts.points[anchor];
                result.objective = distsum(pts, result.location);
                result.reason = "demand-point-optimal";
                return result;
            }
            const double t = (pull_norm - pts.weights[anchor]) / lipschitz;
            next = pts.points[anchor] - (t / pull_norm) * pull;
        } else {
            Point numerator{0.0, 0.0};
            double denominator = 0.0;
            for (int k = 0; k < pts.size(); ++k) {
                const double d = distance(x, pts.points[k]);
                numerator = numerator + (pts.weights[k] / d) * pts.points[k];
                denominator += pts.weights[k] / d;
            }
            next = (1.0 / denominator) * numerator;
        }
        const double step = distance(next, x);
        x = next;
        result.objective_trace.push_back(distsum(pts, x));
        if (step <= options.tol) {
            result.location = x;
            result.objective = result.objective_trace.back();
            result.reason = "gradient-tol";
            return result;
        }
    }
    result.location = x;
    result.objective = result.objective_trace.back();
    result.reason = "max-iter";
    return result;
}

PolyellipseCover covering_radius(const PlanarDemandSet& foci,
                                 const PlanarDemandSet& demand) {
    if (foci.size() < 1 || demand.size() < 1)
        throw std::invalid_argument("foci and demand sets must be nonempty");
    PolyellipseCover cover;
    cover.foci = foci;
    cover.radius = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < demand.size(); ++a) {
        const double r = distsum(foci, demand.points[a]);
        if (r > cover.radius) {
            cover.radius = r;
            cover.attaining_index = a;
        }
    }
    return cover;
}

namespace {

PlanarDemandSet unit_foci(const PlanarDemandSet& demand, const std::vector<int>& subset) {
    PlanarDemandSet foci;
    for (int idx : subset) {
        foci.points.push_back(demand.points[idx]);
        foci.weights.push_back(1.0);
    }
    return foci;
}

double subset_radius(const PlanarDemandSet& demand, const std::vector<int>& subset) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < demand.size(); ++a) {
        double r = 0.0;
        for (int idx : subset) r += distance(demand.points[a], demand.points[idx]);
        worst = std::max(worst, r);
    }
    return worst;
}

std::vector<int> greedy_from(const PlanarDemandSet& demand, int k, int first) {
    std::vector<int> chosen{first};
    std::vector<char> used(demand.size(), 0);
    used[first] = 1;
    for (int round = 1; round < k; ++round) {
        int best = -1;
        double best_radius = std::numeric_limits<double>::infinity();
        for (int c = 0; c < demand.size(); ++c) {
            if (used[c]) continue;
            chosen.push_back(c);
            const double r = subset_radius(demand, chosen);
            chosen.pop_back();
            if (r < best_radius) {
                best_radius = r;
                best = c;
            }
        }
        chosen.push_back(best);
        used[best] = 1;
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

// The first focus anchors the whole construction, so try each one and keep
// the cheapest completed subset as the start for the swap search.
std::vector<int> greedy_foci(const PlanarDemandSet& demand, int k) {
    std::vector<int> best;
    double best_radius = std::numeric_limits<double>::infinity();
    for (int first = 0; first < demand.size(); ++first) {
        std::vector<int> candidate = greedy_from(demand, k, first);
        const double r = subset_radius(demand, candidate);
        if (r < best_radius) {
            best_radius = r;
            best = candidate;
        }
    }
    return best;
}

}  // namespace

PolyellipseCover select_foci(const PlanarDemandSet& demand, int k, FociMode mode) {
    const int n = demand.size();
    if (k < 1 || k > n)
        throw std::invalid_argument("focus count must be between 1 and the set size");

    std::vector<int> best;
    if (mode == FociMode::exact) {
        if (binomial(n, k) > 1e6)
            throw SizeCapError("too many focus subsets for exact enumeration");
        double best_radius = std::numeric_limits<double>::infinity();
        for_each_combination(n, k, [&](const std::vector<int>& subset) {
            const double r = subset_radius(demand, subset);
            if (r < best_radius) {
                best_radius = r;
                best = subset;
            }
        });
    } else {
        best = greedy_foci(demand, k);
        double best_radius = subset_radius(demand, best);
        bool improved = true;
        while (improved) {
            improved = false;
            std::vector<int> best_swap;
            std::vector<char> inside(n, 0);
            for (int idx : best) inside[idx] = 1;
            for (std::size_t out = 0; out < best.size(); ++out)
                for (int in = 0; in < n; ++in) {
                    if (inside[in]) continue;
                    std::vector<int> candidate = best;
                    candidate[out] = in;
                    std::sort(candidate.begin(), candidate.end());
                    const double r = subset_radius(demand, candidate);
                    if (r < best_radius) {
                        best_radius = r;
                        best_swap = candidate;
                    }
                }
            if (!best_swap.empty()) {
                best = best_swap;
                improved = true;
            }
        }
    }

    PolyellipseCover cover = covering_radius(unit_foci(demand, best), demand);
    cover.selected = best;
    return cover;
}

ContourGrid contour_grid(const PlanarDemandSet& set, BBox bbox, int nx, int ny) {
    if (nx < 2 || ny < 2)
        throw std::invalid_argument("grid needs at least 2 points per axis");
    if (!(bbox.xmax > bbox.xmin) || !(bbox.ymax > bbox.ymin))
        throw std::invalid_argument("degenerate bounding box");
    ContourGrid grid;
    grid.bbox = bbox;
    grid.nx = nx;
    grid.ny = ny;
    grid.values.resize(static_cast<std::size_t>(nx) * ny);
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
            grid.values[static_cast<std::size_t>(iy) * nx + ix] =
                distsum(set, {grid.x_at(ix), grid.y_at(iy)});
    return grid;
}

BBox bounding_box(const PlanarDemandSet& set) {
    BBox box{set.points[0].x, set.points[0].y, set.points[0].x, set.points[0].y};
    for (const Point& p : set.points) {
        box.xmin = std::min(box.xmin, p.x);
        box.ymin = std::min(box.ymin, p.y);
        box.xmax = std::max(box.xmax, p.x);
        box.ymax = std::max(box.ymax, p.y);
    }
    return box;
}

}  // namespace locbench::planar
