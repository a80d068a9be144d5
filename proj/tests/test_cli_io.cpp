#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lgas/report.hpp"
#include "lgas/scene_json.hpp"
#include "lgas/verify.hpp"
#include "test_util.hpp"

using namespace lgas;
using namespace lgas::testing;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("scene parsing: minimal scenes and schema errors") {
    GasConfig tri = parse_scene(R"({
        "lattice": {"basis": [[2.2, 0.0], [1.1, 1.905255888325765]],
                    "motif": [{"center": [0.0, 0.0], "radius": 1.0}]},
        "declared_bounds": {"k_m": 0.75, "k_M": 1.5, "tau_m": 0.1, "tau_M": 6.0}
    })");
    CHECK(tri.is_pure_periodic());
    CHECK(tri.bounds().provenance == BoundsProvenance::declared);

    GasConfig finite = parse_scene(R"({"added": [{"center": [0, 0], "radius": 1.0}]})");
    CHECK(!finite.lattice());

    auto path_of = [](auto&& fn) -> std::string {
        try {
            fn();
        } catch (const SceneParseError& e) {
            return e.json_path;
        }
        return "";
    };
    CHECK(path_of([] { parse_scene("{nope"); }) == "$");
    CHECK(path_of([] {
              parse_scene(R"({"lattice": {"basis": [[1,0],[0,1]],
                              "motif": [{"center": [0,0], "radius": -1}]}})");
          }) == "$.lattice.motif[0].radius");
    CHECK(path_of([] { parse_scene(R"({"added": [{"center": [0,0]}]})"); }) == "$.added[0].radius");
    CHECK(path_of([] { parse_scene(R"({"removed": [[0,0,0]]})"); }) == "$.removed");
    CHECK(path_of([] {
              parse_scene(R"({"added": [{"center": [0,0], "radius": 1}],
                              "declared_bounds": {"k_m": 1, "k_M": 1, "tau_m": 2}})");
          }) == "$.declared_bounds.tau_M");

    // Overlapping motif disks are a geometric validation error naming both.
    CHECK_THROWS_WITH_AS(parse_scene(R"({
        "lattice": {"basis": [[4.0, 0.0], [0.0, 4.0]],
                    "motif": [{"center": [0.0, 0.0], "radius": 1.0},
                              {"center": [1.5, 0.0], "radius": 1.0}]}
    })"),
                         doctest::Contains("overlapping scatterers"), SceneError);
}

TEST_CASE("scene round-trips through serialization") {
    GasConfig mod = modified_scene();
    const std::string text = scene_to_json(mod);
    GasConfig back = parse_scene(text);
    CHECK(back.materialize({0, 0}, 12.0) == mod.materialize({0, 0}, 12.0));
    CHECK(back.bounds().k_max == mod.bounds().k_max);
    for (const auto& id : mod.materialize({0, 0}, 12.0)) {
        CHECK(back.disk(id).center == mod.disk(id).center);
        CHECK(back.disk(id).radius == mod.disk(id).radius);
    }
}

TEST_CASE("trajectory CSV is lossless at 17 significant digits") {
    GasConfig two = two_disk_scene();
    PhasePoint x{{0, 0, 0, true}, 0.0, kPi / 2.0};
    std::vector<TrajectoryRow> rows;
    for (long k = 0; k < 2; ++k) {
        const StepResult s = billiard_map(two, x);
        REQUIRE(s.status == StepStatus::ok);
        TrajectoryRow row;
        row.step = k;
        row.alpha = x.alpha;
        row.r = x.r;
        row.phi = x.phi;
        const Vec2 q = frame_at(two.disk(x.alpha), x.r).position;
        row.x = q.x;
        row.y = q.y;
        row.tau = s.step.tau;
        row.grazing_margin = s.step.grazing_margin;
        rows.push_back(row);
        x = s.step.next;
    }
    CHECK(rows[0].alpha == ScattererId{0, 0, 0, true});
    CHECK(rows[1].alpha == ScattererId{0, 0, 1, true});
    CHECK(rows[0].tau == doctest::Approx(2.0));
    CHECK(rows[1].tau == doctest::Approx(2.0));

    const std::string csv = trajectory_csv(rows);
    CHECK(csv.find("step,alpha,r,phi,x,y,tau,grazing_margin\n") == 0);
    CHECK(csv.find('\r') == std::string::npos);
    const auto parsed = parse_trajectory_csv(csv);
    REQUIRE(parsed.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(parsed[i].alpha == rows[i].alpha);
        CHECK(parsed[i].r == rows[i].r);      // bit-exact round trip
        CHECK(parsed[i].phi == rows[i].phi);  // bit-exact round trip
        CHECK(parsed[i].tau == rows[i].tau);
    }

    CHECK(trajectory_csv({}) == "step,alpha,r,phi,x,y,tau,grazing_margin\n");
}

TEST_CASE("reports embed version, seed and hash, and are deterministic") {
    Json params;
    params["samples"] = 7;
    Json a = make_report("verify", 42, "scene-text", params);
    Json b = make_report("verify", 42, "scene-text", params);
    CHECK(a.dump() == b.dump());
    CHECK(a["version"] == kVersion);
    CHECK(a["seed"] == 42);
    CHECK(a["spec_hash"].get<std::string>().size() == 16);
    Json c = make_report("verify", 43, "scene-text", params);
    CHECK(a["spec_hash"] == c["spec_hash"]);  // hash covers scene+params, not seed
    Json d = make_report("verify", 42, "other-scene", params);
    CHECK(a["spec_hash"] != d["spec_hash"]);
}

TEST_CASE("verify suite passes on the stock scenes and is byte-stable") {
    for (const GasConfig& cfg : {two_disk_scene(), triangular_scene(), modified_scene()}) {
        VerifyOptions opts;
        opts.samples = 400;
        opts.seed = 9;
        opts.curve_resolution = 256;
        const VerifyReport rep = run_verify(cfg, opts);
        for (const auto& c : rep.checks) {
            INFO(c.name, " failures=", c.failures, " samples=", c.samples, " worst=", c.worst);
            CHECK(c.pass);
        }
        const VerifyReport rep2 = run_verify(cfg, opts);
        CHECK(rep.to_json().dump() == rep2.to_json().dump());
    }
}
