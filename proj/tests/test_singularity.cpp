#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "lgas/singularity.hpp"
#include "test_util.hpp"

using namespace lgas;
using namespace lgas::testing;

namespace {
constexpr double kPi = std::numbers::pi;

bool strictly_increasing_phi(const SingularityCurve& c) {
    for (std::size_t i = 1; i < c.samples.size(); ++i)
        if (!(c.samples[i].phi > c.samples[i - 1].phi)) return false;
    return true;
}

bool strictly_decreasing_phi(const SingularityCurve& c) {
    for (std::size_t i = 1; i < c.samples.size(); ++i)
        if (!(c.samples[i].phi < c.samples[i - 1].phi)) return false;
    return true;
}

// Grazing reproduction: the flight from a curve point (or a hair to either
// side) must graze the curve's neighbor.
double grazing_margin_at(const GasConfig& cfg, const SingularityCurve& c, std::size_t i) {
    double best = 1.0;
    const PhasePoint base{c.base, c.samples[i].r, c.samples[i].phi};
    for (double nudge : {0.0, 1e-13, -1e-13}) {
        PhasePoint x = base;
        x.phi += nudge;
        const StepResult s = billiard_map(cfg, x);
        if (s.status == StepStatus::horizon) continue;
        if (s.step.next.alpha == c.neighbor || s.status == StepStatus::singular)
            best = std::min(best, s.step.grazing_margin);
    }
    return best;
}
}  // namespace

TEST_CASE("two-disk singularity curves: one neighbor, two increasing branches") {
    GasConfig cfg = two_disk_scene();
    const ScattererId alpha{0, 0, 0, true};
    auto plus = singularity_curves(cfg, alpha, CurveKind::sigma_plus, 512);
    REQUIRE(plus.size() == 2);
    CHECK(count_visible_neighbors(plus) == 1);
    for (const auto& c : plus) {
        CHECK(c.neighbor == ScattererId{0, 0, 1, true});
        CHECK(strictly_increasing_phi(c));
        CHECK(c.samples.size() >= 16);
        for (const auto& p : c.samples) {
            CHECK(p.r >= 0.0);
            CHECK(p.r < cfg.disk(alpha).boundary_length());
            CHECK(p.phi > 0.0);
            CHECK(p.phi < kPi);
        }
    }

    auto minus = singularity_curves(cfg, alpha, CurveKind::sigma_minus, 512);
    REQUIRE(minus.size() == 2);
    for (const auto& c : minus) CHECK(strictly_decreasing_phi(c));
    // Mirror relation between the kinds.
    for (std::size_t k = 0; k < plus.size(); ++k)
        for (std::size_t i = 0; i < plus[k].samples.size(); ++i)
            CHECK(minus[k].samples[i].phi ==
                  doctest::Approx(kPi - plus[k].samples[i].phi).epsilon(1e-14));
}

TEST_CASE("single-scatterer scene has no singularity curves") {
    GasConfig solo = GasConfig::finite_scene({{{0.0, 0.0}, 1.0}});
    CHECK(singularity_curves(solo, {0, 0, 0, true}, CurveKind::sigma_plus, 256).empty());
}

TEST_CASE("curve points reproduce grazing collisions") {
    GasConfig tri = triangular_scene();
    auto curves = singularity_curves(tri, {0, 0, 0, false}, CurveKind::sigma_plus, 256);
    REQUIRE(!curves.empty());
    int checked = 0;
    for (const auto& c : curves)
        for (std::size_t i = 0; i < c.samples.size(); i += 16) {
            CHECK(grazing_margin_at(tri, c, i) < 1e-6);
            ++checked;
        }
    CHECK(checked > 30);
}

TEST_CASE("lattice curves are monotone and count visible neighbors") {
    GasConfig tri = triangular_scene();
    auto curves = singularity_curves(tri, {0, 0, 0, false}, CurveKind::sigma_plus, 1024);
    REQUIRE(!curves.empty());
    for (const auto& c : curves) CHECK(strictly_increasing_phi(c));
    const int visible = count_visible_neighbors(curves);
    CHECK(visible >= 6);  // at least the first ring
    CHECK(curves.size() == 2 * static_cast<std::size_t>(visible));
}

TEST_CASE("atlas distance agrees with brute force") {
    GasConfig tri = triangular_scene();
    SingularityAtlas atlas(tri, 512);
    const ScattererId alpha{0, 0, 0, false};
    const auto& curves = atlas.curves_for(alpha);
    REQUIRE(!curves.empty());

    // On-curve points are at distance ~0.
    const auto& c0 = curves.front();
    PhasePoint on{alpha, c0.samples[c0.samples.size() / 2].r,
                  c0.samples[c0.samples.size() / 2].phi};
    CHECK(atlas.singular_distance(on) < 1e-9);

    const double L = tri.disk(alpha).boundary_length();
    Rng rng(5150);
    const double w_cap = 1e300;
    (void)w_cap;
    for (int t = 0; t < 200; ++t) {
        PhasePoint x{alpha, rng.uniform(0.0, L), rng.uniform(0.05, kPi - 0.05)};
        const double fast = atlas.singular_distance(x);
        // Brute force over every segment of every curve, both kinds.
        const double w = std::sin(x.phi);
        double brute = std::min(x.phi, kPi - x.phi);
        for (int mirror = 0; mirror < 2; ++mirror) {
            const PhasePoint q = mirror ? involute(x) : x;
            for (const auto& c : curves)
                for (std::size_t i = 0; i + 1 < c.samples.size(); ++i) {
                    const double dr0 = arclength_diff(c.samples[i].r, q.r, L) * w;
                    const double dr1 =
                        (arclength_diff(c.samples[i].r, q.r, L) +
                         arclength_diff(c.samples[i + 1].r, c.samples[i].r, L)) *
                        w;
                    const double dp0 = c.samples[i].phi - q.phi;
                    const double dp1 = c.samples[i + 1].phi - q.phi;
                    const double ex = dr1 - dr0, ey = dp1 - dp0;
                    const double len2 = ex * ex + ey * ey;
                    double tt = len2 > 0 ? -(dr0 * ex + dp0 * ey) / len2 : 0.0;
                    tt = std::clamp(tt, 0.0, 1.0);
                    const double px = dr0 + tt * ex, py = dp0 + tt * ey;
                    brute = std::min(brute, std::sqrt(px * px + py * py));
                }
        }
        CHECK(fast == doctest::Approx(brute).epsilon(1e-12));
    }
}

TEST_CASE("eps tube of the boundary strip alone matches the exact integral") {
    // A lone scatterer has no singularity curves, so the tube reduces to the
    // strip phi <= eps or phi >= pi - eps with normalized measure 1 - cos(eps).
    GasConfig solo = GasConfig::finite_scene({{{0.0, 0.0}, 1.0}});
    SingularityAtlas atlas(solo, 256);
    for (double eps : {0.05, 0.1}) {
        auto est = eps_tube_measure(atlas, {0, 0, 0, true}, eps, 100000, 77);
        const double exact = 1.0 - std::cos(eps);
        CHECK(est.fraction.lo <= exact);
        CHECK(est.fraction.hi >= exact);
    }
}

TEST_CASE("eps tube measure: zero at zero, linear scaling, alpha independence") {
    GasConfig tri = triangular_scene();
    SingularityAtlas atlas(tri, 1024);
    const ScattererId alpha{0, 0, 0, false};

    auto zero = eps_tube_measure(atlas, alpha, 0.0, 1000, 9);
    CHECK(zero.fraction.estimate == 0.0);
    CHECK_THROWS(eps_tube_measure(atlas, alpha, 0.2, 10, 9));

    auto e1 = eps_tube_measure(atlas, alpha, 0.01, 30000, 9);
    auto e2 = eps_tube_measure(atlas, alpha, 0.02, 30000, 9);
    CHECK(e1.fraction.estimate > 0.0);
    CHECK(e2.fraction.estimate > e1.fraction.estimate);
    CHECK(e2.fraction.estimate / e1.fraction.estimate <= 2.5);

    // Same gas described with a doubled cell: estimates must agree.
    GasConfig tri2 = triangular_two_class_scene();
    SingularityAtlas atlas2(tri2, 1024);
    for (const ScattererId beta : {ScattererId{0, 0, 0, false}, ScattererId{0, 0, 1, false}}) {
        auto other = eps_tube_measure(atlas2, beta, 0.01, 30000, 10);
        CHECK(other.fraction.lo <= e1.fraction.hi);
        CHECK(e1.fraction.lo <= other.fraction.hi);
    }
}

TEST_CASE("neighbor sets: two-disk base case and containment") {
    GasConfig two = two_disk_scene();
    const ScattererId d1{0, 0, 0, true};
    auto geo = neighbor_set(two, d1, 1, NeighborMethod::geometric);
    REQUIRE(geo.ids.size() == 1);
    CHECK(geo.ids[0] == ScattererId{0, 0, 1, true});
    auto dyn = neighbor_set(two, d1, 1, NeighborMethod::dynamical, 2000, 77);
    CHECK(dyn.ids == geo.ids);

    GasConfig tri = triangular_scene();
    const ScattererId alpha{0, 0, 0, false};
    auto dyn_profile = dynamical_neighbor_profile(tri, alpha, 6, 3000, 77);
    for (int n = 1; n <= 6; ++n) {
        auto g = neighbor_set(tri, alpha, n, NeighborMethod::geometric);
        const auto& d = dyn_profile[static_cast<std::size_t>(n - 1)];
        CHECK(std::includes(g.ids.begin(), g.ids.end(), d.ids.begin(), d.ids.end()));
        if (n >= 2) {
            auto prev = dyn_profile[static_cast<std::size_t>(n - 2)];
            CHECK(std::includes(d.ids.begin(), d.ids.end(), prev.ids.begin(), prev.ids.end()));
        }
    }
}

TEST_CASE("geometric neighbor counts grow quadratically") {
    GasConfig tri = triangular_scene();
    const ScattererId alpha{0, 0, 0, false};
    std::vector<double> ns, counts;
    for (int n = 1; n <= 8; ++n) {
        ns.push_back(n);
        counts.push_back(static_cast<double>(
            neighbor_set(tri, alpha, n, NeighborMethod::geometric).ids.size()));
    }
    auto fit = fit_quadratic(ns, counts);
    CHECK(fit.relative_residual < 0.05);
    CHECK(fit.a > 0.0);
}

TEST_CASE("orbit singularity profile") {
    GasConfig tri = triangular_scene();
    SingularityAtlas atlas(tri, 512);
    const ScattererId ids[] = {ScattererId{0, 0, 0, false}};
    Rng rng(31337);
    int done = 0;
    while (done < 10) {
        PhasePoint x0 = measure_sample_one(tri, ids, rng);
        auto prof = orbit_singularity_profile(atlas, x0, 500);
        if (prof.steps_completed < 500) continue;
        ++done;
        for (const auto& p : prof.points) CHECK(p.dist > 0.0);
        CHECK(prof.min_n4_dist > 0.0);
        CHECK(prof.argmin_n >= 1);
    }

    // Starting exactly on a curve sample reports distance zero at n = 0.
    const auto& curves = atlas.curves_for(ids[0]);
    REQUIRE(!curves.empty());
    const auto& c = curves.front();
    PhasePoint on{ids[0], c.samples[1].r, c.samples[1].phi};
    auto prof = orbit_singularity_profile(atlas, on, 0);
    CHECK(prof.points.at(0).dist < 1e-9);
}
