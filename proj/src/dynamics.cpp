#include "lgas/dynamics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lgas {

namespace {
constexpr double kPi = std::numbers::pi;
}

PhasePoint involute(const PhasePoint& x) { return {x.alpha, x.r, kPi - x.phi}; }

StepResult billiard_map(const GasConfig& cfg, const PhasePoint& x) {
    StepResult result;
    const Disk d = cfg.disk(x.alpha);
    const Ray ray = phase_to_ray(d, x.r, x.phi);
    const FlightResult flight = cfg.free_flight(ray.origin, ray.direction, {x.alpha, -1.0});
    if (flight.status == FlightStatus::no_hit) {
        result.status = StepStatus::horizon;
        return result;
    }
    result.step.tau = flight.hit.distance;
    result.step.grazing_margin = flight.hit.grazing_margin;
    if (flight.hit.classification == HitClass::near_tangent) {
        result.status = StepStatus::singular;
        result.step.next = {flight.scatterer, flight.hit.arclength, 0.0};
        return result;
    }
    const LineElement out =
        ray_to_phase(cfg.disk(flight.scatterer), flight.hit.arclength, ray.direction);
    result.step.next = {flight.scatterer, out.r, out.phi};
    result.status = StepStatus::ok;
    return result;
}

StepResult inverse_map(const GasConfig& cfg, const PhasePoint& x) {
    StepResult r = billiard_map(cfg, involute(x));
    if (r.status == StepStatus::ok) r.step.next = involute(r.step.next);
    return r;
}

Mat2 collision_jacobian(const GasConfig& cfg, const PhasePoint& x, const CollisionStep& step) {
    const double k = cfg.disk(x.alpha).curvature();
    const double k1 = cfg.disk(step.next.alpha).curvature();
    const double tau = step.tau;
    const double s = std::sin(x.phi);
    const double s1 = std::sin(step.next.phi);
    Mat2 m;
    m.a11 = -(s + k * tau) / s1;
    m.a12 = tau / s1;
    m.a21 = k + k1 * s / s1 + k * k1 * tau / s1;
    m.a22 = -(1.0 + k1 * tau / s1);
    return m;
}

JacobianResult jacobian(const GasConfig& cfg, const PhasePoint& x) {
    JacobianResult out;
    const StepResult r = billiard_map(cfg, x);
    out.status = r.status;
    out.step = r.step;
    if (r.status == StepStatus::ok) out.matrix = collision_jacobian(cfg, x, r.step);
    return out;
}

double increasing_norm(double phi, TangentVec u) {
    const double s = std::sin(phi);
    return std::sqrt(s * s * u.dr * u.dr + u.dphi * u.dphi);
}

double expansion_constant(const GasConfig& cfg) {
    const Bounds& b = cfg.bounds();
    return 1.0 + b.k_min * b.tau_min;
}

PropagationResult propagate_tangent(const GasConfig& cfg, const PhasePoint& x, TangentVec u,
                                    long n) {
    if (!(u.dr != 0.0 || u.dphi != 0.0))
        throw std::invalid_argument("propagate_tangent: zero tangent vector");
    PropagationResult res;
    res.x = x;
    double norm = increasing_norm(x.phi, u);
    res.u = {u.dr / norm, u.dphi / norm};
    for (long i = 0; i < n; ++i) {
        const StepResult step = billiard_map(cfg, res.x);
        if (step.status != StepStatus::ok) {
            res.last_status = step.status;
            return res;
        }
        const Mat2 dt = collision_jacobian(cfg, res.x, step.step);
        const TangentVec v = dt.apply(res.u);
        const double vn = increasing_norm(step.step.next.phi, v);
        res.log_expansion += std::log(vn);  // res.u has unit norm
        res.u = {v.dr / vn, v.dphi / vn};
        res.x = step.step.next;
        ++res.steps_completed;
    }
    return res;
}

LyapunovEstimate lyapunov_estimate(const GasConfig& cfg, const PhasePoint& x0, long n, Rng& rng) {
    LyapunovEstimate est;
    est.steps_requested = n;
    // Random direction in the unstable cone (second quadrant), unit increasing norm.
    const double theta = rng.uniform(0.5 * kPi, kPi);
    const TangentVec u{std::cos(theta), std::sin(theta)};
    const PropagationResult run = propagate_tangent(cfg, x0, u, n);
    est.steps_completed = run.steps_completed;
    if (run.steps_completed > 0)
        est.value = run.log_expansion / static_cast<double>(run.steps_completed);
    return est;
}

PhasePoint measure_sample_one(const GasConfig& cfg, std::span<const ScattererId> ids, Rng& rng) {
    if (ids.empty()) throw std::invalid_argument("measure_sample: empty scatterer set");
    std::size_t pick = 0;
    if (ids.size() > 1) {
        // Weight by boundary length.
        double total = 0.0;
        for (const auto& id : ids) total += cfg.disk(id).radius;
        double u = rng.uniform(0.0, total);
        for (; pick + 1 < ids.size(); ++pick) {
            u -= cfg.disk(ids[pick]).radius;
            if (u <= 0.0) break;
        }
    }
    const Disk d = cfg.disk(ids[pick]);
    PhasePoint x;
    x.alpha = ids[pick];
    x.r = rng.uniform(0.0, d.boundary_length());
    x.phi = std::acos(1.0 - 2.0 * rng.uniform());
    if (x.phi <= 0.0) x.phi = std::numeric_limits<double>::min();
    if (x.phi >= kPi) x.phi = std::nextafter(kPi, 0.0);
    return x;
}

std::vector<PhasePoint> measure_sample(const GasConfig& cfg, std::span<const ScattererId> ids,
                                       long n, Rng& rng) {
    std::vector<PhasePoint> out;
    out.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) out.push_back(measure_sample_one(cfg, ids, rng));
    return out;
}

}  // namespace lgas
