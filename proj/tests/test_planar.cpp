#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "locbench/errors.hpp"
#include "locbench/instances.hpp"
#include "locbench/planar.hpp"
#include "locbench/rng.hpp"

using namespace locbench;
using namespace locbench::planar;

namespace {

PlanarDemandSet gen_planar(std::uint64_t seed, int n) {
    GenParams params;
    params.n = n;
    return std::get<PlanarDemandSet>(generate(ProblemKind::planar, params, seed));
}

PlanarDemandSet unit_square() {
    PlanarDemandSet set;
    set.points = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    set.weights = {1, 1, 1, 1};
    return set;
}

double grid_min(const PlanarDemandSet& set, int cells) {
    BBox box = bounding_box(set);
    const auto grid = contour_grid(set, box, cells, cells);
    return *std::min_element(grid.values.begin(), grid.values.end());
}

}  // namespace

TEST_CASE("planar: distsum on a simple pair") {
    PlanarDemandSet set;
    set.points = {{0, 0}, {2, 0}};
    set.weights = {1, 3};
    CHECK(distsum(set, {1, 0}) == doctest::Approx(1 + 3));
    CHECK(distsum(set, {0, 0}) == doctest::Approx(6));
}

TEST_CASE("planar: gradient matches finite differences") {
    const double h = 1e-6;
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const auto set = gen_planar(seed, 6);
        Rng rng(seed);
        // Stay away from the demand points so the gradient exists.
        const Point x{uniform_real(rng, 11.0, 14.0), uniform_real(rng, 11.0, 14.0)};
        const Point g = distsum_gradient(set, x);
        const double fx = (distsum(set, {x.x + h, x.y}) - distsum(set, {x.x - h, x.y})) / (2 * h);
        const double fy = (distsum(set, {x.x, x.y + h}) - distsum(set, {x.x, x.y - h})) / (2 * h);
        CAPTURE(seed);
        CHECK(std::abs(g.x - fx) <= 1e-5);
        CHECK(std::abs(g.y - fy) <= 1e-5);
    }
}

TEST_CASE("planar: gradient is undefined on a demand point") {
    const auto set = unit_square();
    CHECK_THROWS_AS(distsum_gradient(set, {0, 0}), AtDemandPointError);
    CHECK_THROWS_AS(distsum_gradient(set, {1.0 + 1e-14, 1.0}), AtDemandPointError);
}

TEST_CASE("planar: weiszfeld finds the unit-square center") {
    const auto r = weiszfeld(unit_square());
    CHECK(std::abs(r.location.x - 0.5) <= 1e-6);
    CHECK(std::abs(r.location.y - 0.5) <= 1e-6);
    CHECK(r.objective == doctest::Approx(2.0 * std::sqrt(2.0)));
    CHECK(r.reason == "gradient-tol");
}

TEST_CASE("planar: dominant point absorbs the optimum") {
    // The start lands exactly on the heavy point, whose weight beats the
    // combined pull of the rest.
    PlanarDemandSet set;
    set.points = {{0, 0}, {1, 0}, {-1, 0}};
    set.weights = {4, 1, 1};
    const auto r = weiszfeld(set);
    CHECK(r.reason == "demand-point-optimal");
    CHECK(r.location == Point{0, 0});
    CHECK(r.objective == doctest::Approx(2.0));
}

TEST_CASE("planar: single point is optimal at itself") {
    PlanarDemandSet set;
    set.points = {{3, 4}};
    set.weights = {2};
    const auto r = weiszfeld(set);
    CHECK(r.reason == "demand-point-optimal");
    CHECK(r.location == Point{3, 4});
    CHECK(r.objective == 0.0);
}

TEST_CASE("planar: non-optimal start point is left along the descent direction") {
    // Centroid coincides with the light middle point; the weighted median
    // sits at the heavy left point instead.
    PlanarDemandSet set;
    set.points = {{-1.0 / 3.0, 0}, {1, 0}, {-1, 0}};
    set.weights = {0.1, 1, 2};
    const auto r = weiszfeld(set);
    CHECK(r.reason != "max-iter");
    CHECK(std::abs(r.location.x + 1.0) <= 1e-3);
    CHECK(std::abs(r.location.y) <= 1e-6);
    CHECK(r.objective <= distsum(set, {-1, 0}) + 1e-6);
}

TEST_CASE("planar: duplicated points behave like merged weights") {
    PlanarDemandSet twice;
    twice.points = {{0, 0}, {0, 0}, {1, 1}};
    twice.weights = {1, 1, 5};
    PlanarDemandSet merged;
    merged.points = {{0, 0}, {1, 1}};
    merged.weights = {2, 5};
    const auto a = weiszfeld(twice);
    const auto b = weiszfeld(merged);
    CHECK(a.objective == doctest::Approx(b.objective));
    CHECK(a.reason == b.reason);
}

TEST_CASE("planar: objective trace never increases") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        const auto set = gen_planar(seed, 10);
        const auto r = weiszfeld(set);
        CAPTURE(seed);
        for (std::size_t k = 1; k < r.objective_trace.size(); ++k)
            CHECK(r.objective_trace[k] <= r.objective_trace[k - 1] + 1e-10);
    }
}

TEST_CASE("planar: weiszfeld beats a dense grid scan") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto set = gen_planar(seed, 10);
        const auto r = weiszfeld(set);
        CAPTURE(seed);
        CHECK(r.objective <= grid_min(set, 150) + 1e-4);
    }
}

TEST_CASE("planar: covering radius picks the farthest demand point") {
    PlanarDemandSet foci;
    foci.points = {{0, 0}};
    foci.weights = {1};
    PlanarDemandSet demand;
    demand.points = {{1, 0}, {0, 3}, {-2, 0}};
    demand.weights = {1, 1, 1};
    const auto cover = covering_radius(foci, demand);
    CHECK(cover.radius == doctest::Approx(3.0));
    CHECK(cover.attaining_index == 1);
}

TEST_CASE("planar: single focus selection equals the best 1-center point") {
    const auto set = gen_planar(3, 8);
    const auto cover = select_foci(set, 1, FociMode::exact);
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < set.size(); ++c) {
        double r = 0.0;
        for (int a = 0; a < set.size(); ++a)
            r = std::max(r, distance(set.points[c], set.points[a]));
        best = std::min(best, r);
    }
    CHECK(cover.radius == doctest::Approx(best));
    CHECK(cover.selected.size() == 1);
}

TEST_CASE("planar: swap selection never beats exact enumeration") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto set = gen_planar(seed, 9);
        const auto exact = select_foci(set, 3, FociMode::exact);
        const auto swapped = select_foci(set, 3, FociMode::swap);
        CAPTURE(seed);
        CHECK(swapped.radius >= exact.radius - 1e-9);
        CHECK(swapped.selected.size() == 3);
        CHECK(std::is_sorted(swapped.selected.begin(), swapped.selected.end()));
    }
}

TEST_CASE("planar: exact selection respects the subset cap") {
    PlanarDemandSet set;
    Rng rng(11);
    for (int k = 0; k < 500; ++k) {
        set.points.push_back({uniform_real(rng, 0, 1), uniform_real(rng, 0, 1)});
        set.weights.push_back(1.0);
    }
    CHECK_THROWS_AS(select_foci(set, 4, FociMode::exact), SizeCapError);
    CHECK_THROWS_AS(select_foci(set, 0, FociMode::exact), std::invalid_argument);
}

TEST_CASE("planar: contour grid samples distsum row-major") {
    const auto set = unit_square();
    const BBox box{0, 0, 2, 1};
    const auto grid = contour_grid(set, box, 5, 3);
    REQUIRE(grid.values.size() == 15);
    CHECK(grid.x_at(0) == 0.0);
    CHECK(grid.x_at(4) == 2.0);
    CHECK(grid.y_at(2) == 1.0);
    for (int iy = 0; iy < 3; ++iy)
        for (int ix = 0; ix < 5; ++ix)
            CHECK(grid.values[iy * 5 + ix] ==
                  doctest::Approx(distsum(set, {grid.x_at(ix), grid.y_at(iy)})));
    CHECK_THROWS_AS(contour_grid(set, box, 1, 3), std::invalid_argument);
    CHECK_THROWS_AS(contour_grid(set, {0, 0, 0, 1}, 4, 4), std::invalid_argument);
}

TEST_CASE("planar: bounding box is tight") {
    PlanarDemandSet set;
    set.points = {{-1, 2}, {3, -4}, {0, 0}};
    set.weights = {1, 1, 1};
    const auto box = bounding_box(set);
    CHECK(box.xmin == -1.0);
    CHECK(box.xmax == 3.0);
    CHECK(box.ymin == -4.0);
    CHECK(box.ymax == 2.0);
}
