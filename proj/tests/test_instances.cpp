#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "locbench/instances.hpp"

using namespace locbench;

namespace {

// Unique scratch path, removed on destruction.
struct TempFile {
    std::filesystem::path path;

    explicit TempFile(const std::string& name)
        : path(std::filesystem::temp_directory_path() / name) {}
    ~TempFile() { std::filesystem::remove(path); }
};

TransportInstance small_tp() {
    TransportInstance inst;
    inst.supplies = {4.0, 4.0};
    inst.demands = {3.0, 3.0};
    inst.costs = {{1.0, 9.0}, {9.0, 1.0}};
    return inst;
}

}  // namespace

TEST_CASE("well-formed transport instance validates") {
    CHECK(validate(small_tp()).ok());
}

TEST_CASE("infeasible balance is reported") {
    TransportInstance inst = small_tp();
    inst.supplies = {1.0, 1.0};
    const auto report = validate(inst);
    REQUIRE_FALSE(report.ok());
    CHECK(report.summary().find("infeasible balance") != std::string::npos);
}

TEST_CASE("non-finite and non-positive entries are reported") {
    TransportInstance inst = small_tp();
    inst.demands[1] = 0.0;
    CHECK_FALSE(validate(inst).ok());
    inst = small_tp();
    inst.costs[0][1] = std::nan("");
    CHECK_FALSE(validate(inst).ok());
}

TEST_CASE("inverted interval is reported with its field path") {
    IntervalTransportInstance inst;
    inst.costs = {{2.0, 3.0}};
    inst.demand_lo = {1.0, 4.0};
    inst.demand_hi = {2.0, 3.0};
    inst.cap_lo = {5.0};
    inst.cap_hi = {9.0};
    const auto report = validate(inst);
    REQUIRE_FALSE(report.ok());
    CHECK(report.violations.size() == 1);
    CHECK(report.violations[0].field == "demand_hi[1]");
    CHECK(report.violations[0].message == "inverted interval");
}

TEST_CASE("medianplex diagonal and K bounds are enforced") {
    MedianPlexInstance inst;
    inst.weights = {1.0, 2.0};
    inst.dist = {{0.0, 1.0}, {1.0, 0.5}};
    inst.revenue_rate = 10.0;
    inst.transport_rate = 1.0;
    inst.facility_cost = 1.0;
    inst.complexity_factor = 0.1;
    inst.facility_count = 3;
    const auto report = validate(inst);
    REQUIRE_FALSE(report.ok());
    bool diagonal = false, count = false;
    for (const auto& v : report.violations) {
        diagonal |= v.field == "dist[1][1]";
        count |= v.field == "K";
    }
    CHECK(diagonal);
    CHECK(count);
}

TEST_CASE("generation is deterministic and always validates") {
    const GenParams params{.n = 5, .m = 6, .strata = 3, .p = 2, .K = 2, .T = 12};
    for (ProblemKind kind : {ProblemKind::tp, ProblemKind::itp, ProblemKind::planar,
                             ProblemKind::spcp, ProblemKind::medianplex,
                             ProblemKind::evdp}) {
        for (std::uint64_t seed : {0ULL, 1ULL, 42ULL}) {
            const Instance a = generate(kind, params, seed);
            const Instance b = generate(kind, params, seed);
            CAPTURE(to_string(kind));
            CAPTURE(seed);
            CHECK(a == b);
            CHECK(validate(a).ok());
        }
        CHECK_FALSE(generate(kind, params, 1) == generate(kind, params, 2));
    }
}

TEST_CASE("generated interval instances admit the low-demand full-capacity point") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = std::get<IntervalTransportInstance>(
            generate(ProblemKind::itp, GenParams{.n = 3, .m = 4}, seed));
        double cap_hi_sum = 0.0, demand_hi_sum = 0.0;
        for (double v : inst.cap_hi) cap_hi_sum += v;
        for (double v : inst.demand_hi) demand_hi_sum += v;
        CHECK(cap_hi_sum >= demand_hi_sum);
    }
}

TEST_CASE("JSON round trip preserves every kind") {
    const GenParams params{.n = 4, .m = 5, .strata = 2, .p = 2, .K = 2, .T = 8};
    for (ProblemKind kind : {ProblemKind::tp, ProblemKind::itp, ProblemKind::planar,
                             ProblemKind::spcp, ProblemKind::medianplex,
                             ProblemKind::evdp}) {
        for (std::uint64_t seed : {7ULL, 8ULL}) {
            const Instance original = generate(kind, params, seed);
            const Instance reparsed = instance_from_json(to_json(original));
            CAPTURE(to_string(kind));
            CHECK(original == reparsed);
        }
    }
}

TEST_CASE("file round trip is byte-stable") {
    const Instance inst = generate(ProblemKind::spcp, GenParams{.n = 4, .m = 5}, 3);
    TempFile a("locbench_roundtrip_a.json");
    TempFile b("locbench_roundtrip_b.json");
    write_instance(inst, a.path);
    write_instance(read_instance(a.path), b.path);
    std::ifstream fa(a.path), fb(b.path);
    const std::string ta((std::istreambuf_iterator<char>(fa)), {});
    const std::string tb((std::istreambuf_iterator<char>(fb)), {});
    CHECK(ta == tb);
    CHECK_FALSE(ta.empty());
}

TEST_CASE("missing payload fields raise schema errors") {
    nlohmann::json truncated = to_json(Instance{small_tp()});
    truncated["payload"].erase("costs");
    CHECK_THROWS_AS(instance_from_json(truncated), SchemaError);

    nlohmann::json unknown = to_json(Instance{small_tp()});
    unknown["type"] = "mystery";
    CHECK_THROWS_AS(instance_from_json(unknown), SchemaError);
    CHECK_THROWS_AS(parse_instance("/nonexistent/locbench.json"), SchemaError);
}

TEST_CASE("reading an invalid instance raises a validation error") {
    TransportInstance bad = small_tp();
    bad.supplies = {1.0, 1.0};
    TempFile file("locbench_invalid.json");
    std::ofstream out(file.path);
    out << to_json(Instance{bad}).dump(2);
    out.close();
    CHECK_THROWS_AS(read_instance(file.path), ValidationError);
    CHECK_NOTHROW(parse_instance(file.path));
}

TEST_CASE("generated vehicle model reaches its target under full throttle") {
    const auto model =
        std::get<EvModel>(generate(ProblemKind::evdp, GenParams{.T = 15}, 9));
    CHECK(model.periods() == 15);
    CHECK(model.target_position > 0.0);
    CHECK(model.inertia_constant > 0.0);
}
