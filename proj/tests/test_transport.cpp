#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "locbench/errors.hpp"
#include "locbench/instances.hpp"
#include "locbench/rng.hpp"
#include "locbench/transport.hpp"
#include "support/oracles.hpp"

using namespace locbench;
using namespace locbench::transport;

namespace {

TransportInstance gen_tp(std::uint64_t seed, int n, int m) {
    GenParams params;
    params.n = n;
    params.m = m;
    return std::get<TransportInstance>(generate(ProblemKind::tp, params, seed));
}

IntervalTransportInstance gen_itp(std::uint64_t seed, int n, int m) {
    GenParams params;
    params.n = n;
    params.m = m;
    return std::get<IntervalTransportInstance>(generate(ProblemKind::itp, params, seed));
}

void check_primal_feasible(const TransportInstance& inst, const TpSolution& sol) {
    const int n = inst.facility_count();
    const int m = inst.customer_count();
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < m; ++j) {
            CHECK(sol.flow[i][j] >= -1e-9);
            row += sol.flow[i][j];
        }
        CHECK(row <= inst.supplies[i] + 1e-9);
    }
    for (int j = 0; j < m; ++j) {
        double col = 0.0;
        for (int i = 0; i < n; ++i) col += sol.flow[i][j];
        CHECK(col == doctest::Approx(inst.demands[j]).epsilon(1e-12));
    }
}

double dual_value(const TransportInstance& inst, const TpSolution& sol) {
    double z = 0.0;
    for (int i = 0; i < inst.facility_count(); ++i)
        z += sol.row_duals[i] * inst.supplies[i];
    for (int j = 0; j < inst.customer_count(); ++j)
        z += sol.col_duals[j] * inst.demands[j];
    return z;
}

}  // namespace

TEST_CASE("tp: hand-checked two by two") {
    TransportInstance inst;
    inst.supplies = {10, 10};
    inst.demands = {8, 7};
    inst.costs = {{1, 5}, {4, 2}};
    const auto sol = solve_tp(inst);
    // Cheapest split sends each customer to its cheap facility.
    CHECK(sol.objective == doctest::Approx(8 * 1 + 7 * 2));
    CHECK(sol.flow[0][0] == doctest::Approx(8));
    CHECK(sol.flow[1][1] == doctest::Approx(7));
    check_primal_feasible(inst, sol);
}

TEST_CASE("tp: matches integer flow search on random instances") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        Rng rng(seed);
        const int n = uniform_int(rng, 1, 4);
        const int m = uniform_int(rng, 1, 4);
        const auto inst = gen_tp(seed, n, m);
        const auto sol = solve_tp(inst);
        const double exact = testing::tp_integer_flow_oracle(inst);
        CAPTURE(seed);
        CHECK(sol.objective == exact);  // integer data keeps the simplex exact
        check_primal_feasible(inst, sol);
    }
}

TEST_CASE("tp: duals certify the objective") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const auto inst = gen_tp(seed, 3, 4);
        const auto sol = solve_tp(inst);
        CAPTURE(seed);
        CHECK(std::abs(dual_value(inst, sol) - sol.objective) < 1e-7);
        // Dual feasibility, including the implicit zero-cost slack column.
        for (int i = 0; i < inst.facility_count(); ++i) {
            CHECK(sol.row_duals[i] <= 1e-9);
            for (int j = 0; j < inst.customer_count(); ++j)
                CHECK(sol.row_duals[i] + sol.col_duals[j] <=
                      inst.costs[i][j] + 1e-9);
        }
    }
}

TEST_CASE("tp: exactly balanced and slack-heavy instances") {
    TransportInstance inst;
    inst.supplies = {5, 5};
    inst.demands = {5, 5};
    inst.costs = {{2, 3}, {3, 2}};
    auto sol = solve_tp(inst);
    CHECK(sol.objective == doctest::Approx(20));
    check_primal_feasible(inst, sol);

    inst.supplies = {100, 100};
    sol = solve_tp(inst);
    CHECK(sol.objective == doctest::Approx(20));
    check_primal_feasible(inst, sol);
}

TEST_CASE("tp: zero-supply facility is usable data") {
    TransportInstance inst;
    inst.supplies = {0, 9};
    inst.demands = {4, 5};
    inst.costs = {{1, 1}, {7, 3}};
    const auto sol = solve_tp(inst);
    CHECK(sol.objective == doctest::Approx(4 * 7 + 5 * 3));
    check_primal_feasible(inst, sol);
}

TEST_CASE("tp: infeasible balance throws") {
    TransportInstance inst;
    inst.supplies = {3};
    inst.demands = {4};
    inst.costs = {{1}};
    CHECK_THROWS_AS(solve_tp(inst), InfeasibleError);
}

TEST_CASE("tp: value is convex in the right-hand side") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto box = gen_itp(seed, 2, 3);
        Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
        auto sample = [&](std::vector<double>& d, std::vector<double>& q) {
            d.clear();
            q.clear();
            for (int j = 0; j < box.customer_count(); ++j)
                d.push_back(uniform_real(rng, box.demand_lo[j], box.demand_hi[j]));
            for (int i = 0; i < box.facility_count(); ++i)
                q.push_back(uniform_real(rng, box.cap_lo[i], box.cap_hi[i]));
        };
        std::vector<double> d1, q1, d2, q2, dm, qm;
        sample(d1, q1);
        sample(d2, q2);
        const double s1 = std::accumulate(q1.begin(), q1.end(), 0.0);
        const double s2 = std::accumulate(q2.begin(), q2.end(), 0.0);
        const double t1 = std::accumulate(d1.begin(), d1.end(), 0.0);
        const double t2 = std::accumulate(d2.begin(), d2.end(), 0.0);
        if (s1 < t1 || s2 < t2) continue;  // need both endpoints feasible
        for (std::size_t k = 0; k < d1.size(); ++k) dm.push_back(0.5 * (d1[k] + d2[k]));
        for (std::size_t k = 0; k < q1.size(); ++k) qm.push_back(0.5 * (q1[k] + q2[k]));
        const double zm = tp_value(box.costs, dm, qm);
        const double avg = 0.5 * (tp_value(box.costs, d1, q1) + tp_value(box.costs, d2, q2));
        CAPTURE(seed);
        CHECK(zm <= avg + 1e-7);
    }
}

TEST_CASE("itp: single-cell box has a closed-form worst case") {
    IntervalTransportInstance inst;
    inst.costs = {{2}};
    inst.demand_lo = {1};
    inst.demand_hi = {3};
    inst.cap_lo = {2};
    inst.cap_hi = {5};
    const auto worst = itp_oracle(inst);
    CHECK(worst.value == doctest::Approx(6));
    CHECK(worst.demands[0] == doctest::Approx(3));
    // Lex-smallest attaining point: the balance edge crossing, not the corner.
    CHECK(worst.supplies[0] == doctest::Approx(3));
}

TEST_CASE("itp: oracle respects the size cap") {
    IntervalTransportInstance inst;
    const int n = 9, m = 8;  // n + m = 17 > 16
    inst.costs.assign(n, std::vector<double>(m, 1.0));
    inst.demand_lo.assign(m, 1.0);
    inst.demand_hi.assign(m, 2.0);
    inst.cap_lo.assign(n, 2.0);
    inst.cap_hi.assign(n, 3.0);
    CHECK_THROWS_AS(itp_oracle(inst), SizeCapError);
}

TEST_CASE("itp: empty region throws") {
    IntervalTransportInstance inst;
    inst.costs = {{1}};
    inst.demand_lo = {5};
    inst.demand_hi = {6};
    inst.cap_lo = {1};
    inst.cap_hi = {2};
    CHECK_THROWS_AS(itp_oracle(inst), InfeasibleError);
    CHECK_THROWS_AS(itp_bisection(inst, BisectionVariant::A), InfeasibleError);
}

TEST_CASE("itp: bisection never exceeds the oracle and usually matches") {
    int matches = 0, total = 0;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const auto inst = gen_itp(seed, 2, 2);
        const auto exact = itp_oracle(inst);
        for (auto variant : {BisectionVariant::A, BisectionVariant::B}) {
            const auto approx = itp_bisection(inst, variant);
            CAPTURE(seed);
            CHECK(approx.value <= exact.value + 1e-9);
            ++total;
            if (std::abs(approx.value - exact.value) <= 1e-6 * (1.0 + exact.value))
                ++matches;
        }
    }
    // The climb can stall below the maximum, but only rarely.
    CHECK(matches >= total * 9 / 10);
}

TEST_CASE("itp: degenerate box returns immediately") {
    IntervalTransportInstance inst;
    inst.costs = {{3, 1}, {2, 4}};
    inst.demand_lo = {2, 3};
    inst.demand_hi = {2, 3};
    inst.cap_lo = {4, 4};
    inst.cap_hi = {4, 4};
    const auto r = itp_bisection(inst, BisectionVariant::A);
    CHECK(r.iterations == 1);
    CHECK(r.value == doctest::Approx(tp_value(inst.costs, inst.demand_lo, inst.cap_hi)));
}

TEST_CASE("itp: oracle value is invariant under index permutations") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto inst = gen_itp(seed, 3, 3);
        IntervalTransportInstance shuffled;
        std::vector<int> rows{2, 0, 1}, cols{1, 2, 0};
        shuffled.costs.assign(3, std::vector<double>(3));
        shuffled.demand_lo.resize(3);
        shuffled.demand_hi.resize(3);
        shuffled.cap_lo.resize(3);
        shuffled.cap_hi.resize(3);
        for (int i = 0; i < 3; ++i) {
            shuffled.cap_lo[i] = inst.cap_lo[rows[i]];
            shuffled.cap_hi[i] = inst.cap_hi[rows[i]];
            for (int j = 0; j < 3; ++j)
                shuffled.costs[i][j] = inst.costs[rows[i]][cols[j]];
        }
        for (int j = 0; j < 3; ++j) {
            shuffled.demand_lo[j] = inst.demand_lo[cols[j]];
            shuffled.demand_hi[j] = inst.demand_hi[cols[j]];
        }
        CAPTURE(seed);
        CHECK(itp_oracle(inst).value ==
              doctest::Approx(itp_oracle(shuffled).value).epsilon(1e-9));
    }
}

TEST_CASE("itp: worst case sits on the box boundary") {
    const auto inst = gen_itp(7, 2, 2);
    const auto worst = itp_oracle(inst);
    int interior = 0;
    for (int j = 0; j < 2; ++j)
        if (worst.demands[j] > inst.demand_lo[j] + 1e-9 &&
            worst.demands[j] < inst.demand_hi[j] - 1e-9)
            ++interior;
    for (int i = 0; i < 2; ++i)
        if (worst.supplies[i] > inst.cap_lo[i] + 1e-9 &&
            worst.supplies[i] < inst.cap_hi[i] - 1e-9)
            ++interior;
    // A convex maximum leaves at most one coordinate off its bound (the
    // balance-edge crossing frees exactly one).
    CHECK(interior <= 1);
}
