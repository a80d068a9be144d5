#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lgas/geometry.hpp"
#include "lgas/rng.hpp"

using namespace lgas;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("frame_at reference point and clockwise orientation") {
    Disk unit{{0.0, 0.0}, 1.0};
    auto f0 = frame_at(unit, 0.0);
    CHECK(f0.position.x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f0.position.y == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(f0.outward_normal.x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f0.outward_normal.y == doctest::Approx(0.0).epsilon(1e-14));

    // Quarter turn clockwise lands at the bottom of the disk.
    auto fq = frame_at(unit, kPi / 2.0);
    CHECK(fq.position.x == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(fq.position.y == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("frame_at wraps modulo the boundary length") {
    Disk d{{5.0, 0.0}, 2.0};  // L = 4*pi
    auto full = frame_at(d, 4.0 * kPi);
    CHECK(full.position.x == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(full.position.y == doctest::Approx(0.0).epsilon(1e-12));
    auto half = frame_at(d, 2.0 * kPi);
    CHECK(half.position.x == doctest::Approx(3.0).epsilon(1e-12));

    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        double r = rng.uniform(0.0, d.boundary_length());
        auto a = frame_at(d, r);
        auto b = frame_at(d, r + d.boundary_length());
        CHECK(distance(a.position, b.position) < 1e-12 * d.radius);
        // Wrapped coordinate reproduces the frame bit for bit.
        auto c = frame_at(d, wrap_arclength(d, r));
        CHECK(a.position == c.position);
        CHECK(a.r == c.r);
    }
}

TEST_CASE("frame invariants: on-circle, orthonormal") {
    Rng rng(11);
    Disk d{{-3.0, 2.5}, 0.7};
    for (int i = 0; i < 500; ++i) {
        double r = rng.uniform(-10.0, 30.0);
        auto f = frame_at(d, r);
        CHECK(std::fabs(distance(f.position, d.center) - d.radius) < 1e-12 * d.radius);
        CHECK(std::fabs(f.clockwise_tangent.norm() - 1.0) < 1e-14);
        CHECK(std::fabs(f.outward_normal.norm() - 1.0) < 1e-14);
        CHECK(std::fabs(f.clockwise_tangent.dot(f.outward_normal)) < 1e-14);
    }
}

TEST_CASE("curvature is 1/radius") {
    CHECK(curvature(Disk{{0, 0}, 1.0}) == doctest::Approx(1.0));
    CHECK(curvature(Disk{{0, 0}, 2.0}) == doctest::Approx(0.5));
    CHECK(curvature(Disk{{0, 0}, 0.25}) == doctest::Approx(4.0));
}

TEST_CASE("ray_intersect head-on, miss, and circle residual") {
    Disk unit{{0.0, 0.0}, 1.0};
    auto hit = ray_intersect(unit, {2.0, 0.0}, {-1.0, 0.0});
    CHECK(hit.classification == HitClass::transversal);
    CHECK(hit.distance == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(hit.arclength == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(hit.grazing_margin == doctest::Approx(1.0).epsilon(1e-14));

    CHECK(ray_intersect(unit, {2.0, 0.0}, {0.0, 1.0}).classification == HitClass::miss);

    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        Vec2 p{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
        if (p.norm() <= 1.1) continue;
        double a = rng.uniform(0.0, 2.0 * kPi);
        Vec2 dir{std::cos(a), std::sin(a)};
        auto h = ray_intersect(unit, p, dir);
        if (h.classification == HitClass::miss) continue;
        Vec2 q = p + h.distance * dir;
        CHECK(std::fabs(q.norm2() - 1.0) < 1e-12);
    }
}

TEST_CASE("tangency construction from an external point") {
    Disk unit{{0.0, 0.0}, 1.0};
    // From (2,0) the half-aperture is arcsin(1/2) = 30 degrees and the
    // tangency point sits at distance sqrt(3).
    auto dirs = tangency_directions(unit, {2.0, 0.0});
    for (const Vec2& d : dirs) {
        Vec2 axis{-1.0, 0.0};
        CHECK(std::fabs(d.dot(axis) - std::cos(kPi / 6.0)) < 1e-14);
        Vec2 touch = Vec2{2.0, 0.0} + std::sqrt(3.0) * d;
        CHECK(std::fabs(touch.norm() - 1.0) < 1e-12);
    }
    auto dirs2 = tangency_directions(unit, {std::sqrt(2.0), std::sqrt(2.0)});
    Vec2 axis = (Vec2{0, 0} - Vec2{std::sqrt(2.0), std::sqrt(2.0)}).normalized();
    for (const Vec2& d : dirs2) CHECK(std::fabs(d.dot(axis) - std::cos(kPi / 6.0)) < 1e-14);

    CHECK_THROWS(tangency_directions(unit, {1.0, 0.0}));
    CHECK_THROWS(tangency_directions(unit, {0.3, 0.1}));
}

TEST_CASE("tangency directions graze the disk") {
    Disk d{{1.0, -2.0}, 1.4};
    Rng rng(19);
    for (int i = 0; i < 300; ++i) {
        Vec2 p{rng.uniform(-8.0, 10.0), rng.uniform(-10.0, 6.0)};
        if (distance(p, d.center) < d.radius + 0.2) continue;
        for (const Vec2& dir : tangency_directions(d, p)) {
            auto h = ray_intersect(d, p, dir);
            // The exact tangent ray either just misses or grazes.
            if (h.classification != HitClass::miss) CHECK(h.grazing_margin < 1e-6);
            double reach = std::sqrt((p - d.center).norm2() - d.radius * d.radius);
            Vec2 touch = p + reach * dir;
            CHECK(std::fabs(distance(touch, d.center) - d.radius) < 1e-10);
        }
    }
}

TEST_CASE("phase_to_ray conventions") {
    Disk unit{{0.0, 0.0}, 1.0};
    auto normal_shot = phase_to_ray(unit, 0.0, kPi / 2.0);
    CHECK(normal_shot.origin.x == doctest::Approx(1.0));
    CHECK(normal_shot.direction.x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(normal_shot.direction.y == doctest::Approx(0.0).epsilon(1e-14));

    // phi = pi/4 rotates the clockwise tangent (0,-1) halfway toward the
    // outward normal (1,0).
    auto oblique = phase_to_ray(unit, 0.0, kPi / 4.0);
    CHECK(oblique.direction.x == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(oblique.direction.y == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-14));

    CHECK_THROWS(phase_to_ray(unit, 0.0, 0.0));
    CHECK_THROWS(phase_to_ray(unit, 0.0, kPi));
    CHECK_THROWS(phase_to_ray(unit, 0.0, -0.5));
}

TEST_CASE("ray_to_phase reflects specularly and inverts phase_to_ray") {
    Disk d{{0.5, 1.5}, 2.3};
    auto head_on = ray_to_phase(d, 1.0, -frame_at(d, 1.0).outward_normal);
    CHECK(head_on.phi == doctest::Approx(kPi / 2.0).epsilon(1e-14));

    CHECK_THROWS(ray_to_phase(d, 1.0, frame_at(d, 1.0).outward_normal));

    Rng rng(23);
    for (int i = 0; i < 1000; ++i) {
        double r = rng.uniform(0.0, d.boundary_length());
        double phi = rng.uniform(1e-3, kPi - 1e-3);
        auto ray = phase_to_ray(d, r, phi);
        auto f = frame_at(d, r);
        // The incoming direction whose reflection is `ray.direction`.
        Vec2 in = ray.direction - 2.0 * ray.direction.dot(f.outward_normal) * f.outward_normal;
        auto e = ray_to_phase(d, r, in);
        CHECK(std::fabs(arclength_diff(e.r, f.r, d.boundary_length())) < 1e-10);
        CHECK(std::fabs(e.phi - phi) < 1e-10);
    }
}
