#pragma once
// Disk scatterers and the local geometric queries everything else is built on:
// boundary frames, ray intersection, external tangents, and the conversion
// between line elements (r, phi) and rays in the plane.
//
// Conventions. The boundary is parametrized clockwise by arclength r, with
// r = 0 at the boundary point of maximal x-coordinate. phi in (0, pi) is the
// angle between the outgoing velocity and the clockwise tangent, so phi = pi/2
// points along the outward normal.

#include <array>
#include <cstdint>
#include <string>

#include "lgas/vec2.hpp"

namespace lgas {

/// Hits with |sin(angle to tangent)| below this are treated as tangencies.
inline constexpr double kTangencyTolerance = 1e-9;

struct Disk {
    Vec2 center;
    double radius = 1.0;

    double curvature() const { return 1.0 / radius; }
    double boundary_length() const;
    bool contains(Vec2 p) const { return (p - center).norm2() < radius * radius; }
};

/// A scatterer boundary satisfying the queries below; Disk is the one model
/// the toolkit ships. Kept as a concept so a general strictly convex boundary
/// can slot in later.
template <class S>
concept ConvexScatterer = requires(const S& s, double r) {
    { s.curvature() } -> std::convertible_to<double>;
    { s.boundary_length() } -> std::convertible_to<double>;
};

struct BoundaryFrame {
    double r = 0.0;  // wrapped into [0, L)
    Vec2 position;
    Vec2 clockwise_tangent;
    Vec2 outward_normal;
};

enum class HitClass : std::uint8_t { transversal, near_tangent, miss };

struct RayHit {
    double distance = 0.0;
    double arclength = 0.0;
    HitClass classification = HitClass::miss;
    double grazing_margin = 0.0;  // sine of the angle between ray and tangent
};

struct Ray {
    Vec2 origin;
    Vec2 direction;  // unit
};

/// Wrap an arclength coordinate into [0, L).
double wrap_arclength(const Disk& disk, double r);

/// Wrapped difference a - b on the circle of length L, in (-L/2, L/2].
double arclength_diff(double a, double b, double boundary_length);

BoundaryFrame frame_at(const Disk& disk, double r);

double curvature(const Disk& disk, double r = 0.0);

/// First intersection of the ray with the disk. The origin must be outside.
RayHit ray_intersect(const Disk& disk, Vec2 origin, Vec2 direction);

/// The two tangent directions from an external point, ordered {left, right}
/// relative to the direction toward the center (left = counterclockwise).
/// Throws std::invalid_argument if the point is inside or on the disk.
std::array<Vec2, 2> tangency_directions(const Disk& disk, Vec2 external_point);

/// Outgoing ray of the line element (r, phi). Requires phi in (0, pi).
Ray phase_to_ray(const Disk& disk, double r, double phi);

/// Reflect an incoming direction hitting the boundary at the given arclength
/// and return the post-collision line element (r, phi). The incoming direction
/// must point into the disk.
struct LineElement {
    double r = 0.0;
    double phi = 0.0;
};
LineElement ray_to_phase(const Disk& disk, double hit_arclength, Vec2 incoming);

}  // namespace lgas
