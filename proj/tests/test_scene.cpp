#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lgas/scene.hpp"
#include "test_util.hpp"

using namespace lgas;
using namespace lgas::testing;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("scatterer id round-trips through its string form") {
    ScattererId a{-3, 17, 2, false};
    CHECK(to_string(a) == "L:-3:17:2");
    CHECK(parse_scatterer_id("L:-3:17:2") == a);
    ScattererId b{0, 0, 5, true};
    CHECK(to_string(b) == "A:5");
    CHECK(parse_scatterer_id("A:5") == b);
    CHECK(!parse_scatterer_id("Q:1"));
    CHECK(!parse_scatterer_id("L:1:2"));
}

TEST_CASE("build_periodic validates the lattice") {
    LatticeSpec degenerate;
    degenerate.basis[0] = {1.0, 0.0};
    degenerate.basis[1] = {2.0, 0.0};
    degenerate.motif = {{{0.0, 0.0}, 0.3}};
    CHECK_THROWS_AS(GasConfig::build_periodic(degenerate), SceneError);

    LatticeSpec overlapping;
    overlapping.basis[0] = {1.5, 0.0};
    overlapping.basis[1] = {0.0, 1.5};
    overlapping.motif = {{{0.0, 0.0}, 1.0}};  // radius 1 on spacing 1.5 overlaps
    CHECK_THROWS_WITH_AS(GasConfig::build_periodic(overlapping),
                         doctest::Contains("overlapping scatterers"), SceneError);

    GasConfig tri = triangular_scene();
    CHECK(tri.bounds().k_min == doctest::Approx(0.75));
    CHECK(tri.is_pure_periodic());
}

TEST_CASE("two-disk free flight") {
    GasConfig cfg = two_disk_scene();
    ScattererId first{0, 0, 0, true};
    auto f = cfg.free_flight({1.0, 0.0}, {1.0, 0.0}, {first, -1.0});
    REQUIRE(f.status == FlightStatus::hit);
    CHECK(f.scatterer == ScattererId{0, 0, 1, true});
    CHECK(f.hit.distance == doctest::Approx(2.0).epsilon(1e-14));

    // Corridor ray: nothing along +y.
    auto miss = cfg.free_flight({1.0, 0.0}, {0.0, 1.0}, {first, -1.0});
    CHECK(miss.status == FlightStatus::no_hit);
}

TEST_CASE("lattice flights stay within the declared horizon") {
    GasConfig tri = triangular_scene();
    Rng rng(101);
    long hits = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto ids = tri.materialize({0.0, 0.0}, 6.0);
        PhasePoint x = measure_sample_one(tri, ids, rng);
        Ray ray = phase_to_ray(tri.disk(x.alpha), x.r, x.phi);
        auto f = tri.free_flight(ray.origin, ray.direction, {x.alpha, -1.0});
        REQUIRE(f.status == FlightStatus::hit);
        CHECK(f.hit.distance <= tri.bounds().tau_max + 1e-9);
        CHECK(f.hit.distance >= tri.bounds().tau_min - 1e-9);
        ++hits;
    }
    CHECK(hits == 1000);
}

TEST_CASE("translation equivariance of lattice flights") {
    GasConfig tri = triangular_scene();
    Rng rng(55);
    const Vec2 b1 = tri.lattice()->basis[0];
    for (int i = 0; i < 300; ++i) {
        Vec2 p{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        bool inside = false;
        for (const auto& id : tri.materialize(p, 0.1))
            if (tri.disk(id).contains(p)) inside = true;
        if (inside) continue;
        double a = rng.uniform(0.0, 2.0 * kPi);
        Vec2 dir{std::cos(a), std::sin(a)};
        auto f0 = tri.free_flight(p, dir);
        auto f1 = tri.free_flight(p + b1, dir);
        REQUIRE(f0.status == f1.status);
        if (f0.status != FlightStatus::hit) continue;
        CHECK(std::fabs(f0.hit.distance - f1.hit.distance) < 1e-9);
        CHECK(f1.scatterer.cell_i == f0.scatterer.cell_i + 1);
        CHECK(f1.scatterer.cell_j == f0.scatterer.cell_j);
    }
}

TEST_CASE("materialization is deterministic and disjoint") {
    GasConfig tri = triangular_scene();
    auto a = tri.materialize({1.0, 2.0}, 9.0);
    auto b = tri.materialize({1.0, 2.0}, 9.0);
    CHECK(a == b);
    CHECK(std::is_sorted(a.begin(), a.end()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            CHECK(disk_gap(tri.disk(a[i]), tri.disk(a[j])) > 0.0);
}

TEST_CASE("scatterer size bounds follow from the curvature bounds") {
    for (const GasConfig& cfg : {triangular_scene(), modified_scene(), two_disk_scene()}) {
        const Bounds& b = cfg.bounds();
        for (const auto& id : cfg.materialize(cfg.origin(), 8.0)) {
            const Disk d = cfg.disk(id);
            CHECK(2.0 * d.radius >= 2.0 / b.k_max - 1e-12);
            CHECK(2.0 * d.radius <= 2.0 / b.k_min + 1e-12);
            CHECK(d.boundary_length() >= 2.0 * kPi / b.k_max - 1e-12);
            CHECK(d.boundary_length() <= 2.0 * kPi / b.k_min + 1e-12);
        }
    }
}

TEST_CASE("horizon estimation: corridors and finite scenes") {
    GasConfig sq = square_scene();
    auto rep = sq.estimate_horizon(10.0, 200, 42);
    CHECK(rep.corridor_found);

    GasConfig tri = triangular_scene();
    auto rep2 = tri.estimate_horizon(10.0, 500, 42);
    CHECK(!rep2.corridor_found);
    CHECK(rep2.samples == 500);
    CHECK(rep2.escapes == 0);
    CHECK(rep2.tau_max_observed > rep2.tau_min_observed);
    CHECK(rep2.tau_max_observed < tri.bounds().tau_max);

    GasConfig two = two_disk_scene();
    auto rep3 = two.estimate_horizon(10.0, 200, 42);
    CHECK(rep3.corridor_found);
    CHECK(rep3.escapes > 0);
}

TEST_CASE("finite modification: identity, refinement, violations") {
    GasConfig tri = triangular_scene();
    GasConfig same = tri.finite_modification({}, {});
    CHECK(same.materialize({0, 0}, 8.0) == tri.materialize({0, 0}, 8.0));

    GasConfig mod = modified_scene();
    CHECK(mod.bounds().k_max == doctest::Approx(2.3));
    auto ids = mod.materialize({0.0, 0.0}, 0.04);
    CHECK(ids.empty());  // the vacated center is empty space now
    auto near = mod.materialize({0.0, 0.5}, 0.1);
    REQUIRE(near.size() == 1);
    CHECK(near[0].added);

    // Overlapping replacement is rejected and names the pair.
    CHECK_THROWS_WITH_AS(
        tri.finite_modification({{0, 0, 0, false}}, {{{1.6, 0.0}, 0.5}}),
        doctest::Contains("overlaps"), SceneError);
}

TEST_CASE("modify_annulus basic rules") {
    GasConfig two = two_disk_scene();
    GasConfig same = two.modify_annulus(10.0, 1.0, {});
    CHECK(same.materialize({0, 0}, 20.0) == two.materialize({0, 0}, 20.0));

    // Replacement outside the closed annulus is rejected.
    CHECK_THROWS_WITH_AS(two.modify_annulus(10.0, 1.0, {{{30.0, 0.0}, 0.5}}),
                         doctest::Contains("outside the closed annulus"), SceneError);

    // A second rewrite of the same region is rejected.
    CHECK_THROWS_WITH_AS(same.modify_annulus(10.0, 1.0, {}),
                         doctest::Contains("previously modified"), SceneError);

    // Jittered rewrite of a lattice annulus keeps the gas valid.
    GasConfig tri = triangular_scene();
    const double inner = 9.0, width = 3.0;
    std::vector<Disk> jittered;
    Rng rng(7);
    for (const auto& id : tri.materialize({0, 0}, inner + width + 2.0)) {
        Disk d = tri.disk(id);
        double rc = distance(d.center, tri.origin());
        if (rc - d.radius < inner + width && rc + d.radius > inner) {
            double ang = rng.uniform(0.0, 2.0 * kPi);
            d.center += Vec2{std::cos(ang), std::sin(ang)} * rng.uniform(0.0, 0.02);
            d.radius *= rng.uniform(0.97, 1.03);
            jittered.push_back(d);
        }
    }
    REQUIRE(!jittered.empty());
    GasConfig rewritten = tri.modify_annulus(inner, width, jittered);
    CHECK(rewritten.modified_annuli().size() == 1);
    CHECK(rewritten.added().size() == jittered.size());
}
