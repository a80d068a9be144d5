#include "lgas/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lgas {

namespace {
constexpr double kPi = std::numbers::pi;
}

double Disk::boundary_length() const { return 2.0 * kPi * radius; }

double wrap_arclength(const Disk& disk, double r) {
    const double L = disk.boundary_length();
    double w = std::fmod(r, L);
    if (w < 0.0) w += L;
    if (w >= L) w = 0.0;  // fmod can land exactly on L after the correction
    return w;
}

double arclength_diff(double a, double b, double boundary_length) {
    double d = std::fmod(a - b, boundary_length);
    if (d <= -0.5 * boundary_length) d += boundary_length;
    if (d > 0.5 * boundary_length) d -= boundary_length;
    return d;
}

BoundaryFrame frame_at(const Disk& disk, double r) {
    BoundaryFrame f;
    f.r = wrap_arclength(disk, r);
    const double theta = f.r / disk.radius;  // clockwise angle from (1, 0)
    const double c = std::cos(theta), s = std::sin(theta);
    f.outward_normal = {c, -s};
    f.clockwise_tangent = {-s, -c};
    f.position = disk.center + disk.radius * f.outward_normal;
    return f;
}

double curvature(const Disk& disk, double) { return disk.curvature(); }

RayHit ray_intersect(const Disk& disk, Vec2 origin, Vec2 direction) {
    RayHit hit;
    const Vec2 m = origin - disk.center;
    const double b = m.dot(direction);
    const double c = m.norm2() - disk.radius * disk.radius;
    if (b >= 0.0) return hit;  // moving away
    const double disc = b * b - c;
    if (disc < 0.0) return hit;
    // Stable smaller positive root of s^2 + 2bs + c = 0.
    const double s = c / (-b + std::sqrt(disc));
    if (s <= 0.0) return hit;

    hit.distance = s;
    const Vec2 p = origin + s * direction;
    const Vec2 n = (p - disk.center).normalized();
    // theta is the clockwise angle of the hit point, n = (cos, -sin).
    double theta = std::atan2(-n.y, n.x);
    if (theta < 0.0) theta += 2.0 * std::numbers::pi;
    hit.arclength = wrap_arclength(disk, theta * disk.radius);
    hit.grazing_margin = std::fabs(direction.dot(n));
    hit.classification =
        hit.grazing_margin < kTangencyTolerance ? HitClass::near_tangent : HitClass::transversal;
    return hit;
}

std::array<Vec2, 2> tangency_directions(const Disk& disk, Vec2 external_point) {
    const Vec2 to_center = disk.center - external_point;
    const double dist = to_center.norm();
    if (dist <= disk.radius)
        throw std::invalid_argument("tangency_directions: point not strictly outside the disk");
    const Vec2 axis = to_center * (1.0 / dist);
    const double sin_half = disk.radius / dist;
    const double cos_half = std::sqrt(1.0 - sin_half * sin_half);
    const Vec2 left = {axis.x * cos_half - axis.y * sin_half,
                       axis.x * sin_half + axis.y * cos_half};
    const Vec2 right = {axis.x * cos_half + axis.y * sin_half,
                        -axis.x * sin_half + axis.y * cos_half};
    return {left, right};
}

Ray phase_to_ray(const Disk& disk, double r, double phi) {
    if (!(phi > 0.0 && phi < kPi))
        throw std::invalid_argument("phase_to_ray: phi must lie strictly in (0, pi)");
    const BoundaryFrame f = frame_at(disk, r);
    const double c = std::cos(phi), s = std::sin(phi);
    return {f.position, f.clockwise_tangent * c + f.outward_normal * s};
}

LineElement ray_to_phase(const Disk& disk, double hit_arclength, Vec2 incoming) {
    const BoundaryFrame f = frame_at(disk, hit_arclength);
    const double into = incoming.dot(f.outward_normal);
    if (into >= 0.0)
        throw std::invalid_argument("ray_to_phase: direction does not point into the scatterer");
    const Vec2 out = incoming - 2.0 * into * f.outward_normal;
    LineElement e;
    e.r = f.r;
    e.phi = std::atan2(out.dot(f.outward_normal), out.dot(f.clockwise_tangent));
    return e;
}

}  // namespace lgas
