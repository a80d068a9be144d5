#pragma once
// The billiard map T on the post-collision cross-section, its inverse via the
// time-reversal involution, the exact 2x2 tangent map per collision, the
// invariant measure sampler, unstable cones and Lyapunov accumulation.

#include <cstdint>
#include <span>
#include <vector>

#include "lgas/rng.hpp"
#include "lgas/scene.hpp"

namespace lgas {

struct PhasePoint {
    ScattererId alpha;
    double r = 0.0;
    double phi = 0.0;  // strictly inside (0, pi)

    friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

struct TangentVec {
    double dr = 0.0;
    double dphi = 0.0;

    /// Unstable cone membership: dr * dphi <= 0.
    bool in_unstable_cone() const { return dr * dphi <= 0.0; }
};

struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;
    double det() const { return a11 * a22 - a12 * a21; }
    TangentVec apply(TangentVec u) const {
        return {a11 * u.dr + a12 * u.dphi, a21 * u.dr + a22 * u.dphi};
    }
};

enum class StepStatus : std::uint8_t { ok, singular, horizon };

struct CollisionStep {
    PhasePoint next;
    double tau = 0.0;
    double grazing_margin = 0.0;
};

struct StepResult {
    StepStatus status = StepStatus::horizon;
    CollisionStep step;  // populated for ok and (diagnostically) for singular

    explicit operator bool() const { return status == StepStatus::ok; }
};

/// Time-reversal involution I(r, phi) = (r, pi - phi).
PhasePoint involute(const PhasePoint& x);

/// One application of the billiard map. Near-tangent collisions are rejected
/// as singular (the step still carries the offending grazing margin);
/// exhausted flight searches report horizon.
StepResult billiard_map(const GasConfig& cfg, const PhasePoint& x);

/// T^{-1} computed as I o T o I.
StepResult inverse_map(const GasConfig& cfg, const PhasePoint& x);

/// Exact differential of T at x for an already computed transversal step:
///   [ -(sin phi + k tau)/sin phi1                          tau/sin phi1      ]
///   [ k + k1 sin phi/sin phi1 + k k1 tau/sin phi1   -(1 + k1 tau/sin phi1)   ]
Mat2 collision_jacobian(const GasConfig& cfg, const PhasePoint& x, const CollisionStep& step);

/// Convenience: run the map and return its differential; status passes through.
struct JacobianResult {
    StepStatus status = StepStatus::horizon;
    Mat2 matrix;
    CollisionStep step;
};
JacobianResult jacobian(const GasConfig& cfg, const PhasePoint& x);

/// Norm in which unstable vectors expand uniformly:
/// |u|^2 = sin^2(phi) dr^2 + dphi^2.
double increasing_norm(double phi, TangentVec u);
inline double increasing_norm(const PhasePoint& x, TangentVec u) {
    return increasing_norm(x.phi, u);
}

/// lambda = 1 + k_min * tau_min; > 1 on hyperbolic input.
double expansion_constant(const GasConfig& cfg);

struct PropagationResult {
    PhasePoint x;
    TangentVec u;          // renormalized to unit increasing norm after each step
    double log_expansion = 0.0;
    long steps_completed = 0;
    StepStatus last_status = StepStatus::ok;
};

/// Push a tangent vector n steps with the exact tangent map, accumulating the
/// log of the per-step increasing-norm expansion. Aborts on singular/horizon
/// steps with partial results.
PropagationResult propagate_tangent(const GasConfig& cfg, const PhasePoint& x, TangentVec u,
                                    long n);

struct LyapunovEstimate {
    double value = 0.0;      // log expansion per completed step
    long steps_completed = 0;
    long steps_requested = 0;
};

/// Mean log expansion of a random unit unstable vector along the orbit of x0.
LyapunovEstimate lyapunov_estimate(const GasConfig& cfg, const PhasePoint& x0, long n, Rng& rng);

/// i.i.d. samples of the normalized invariant measure sin(phi)/2 dr dphi on
/// the union of the given scatterers (weighted by boundary length).
std::vector<PhasePoint> measure_sample(const GasConfig& cfg, std::span<const ScattererId> ids,
                                       long n, Rng& rng);
PhasePoint measure_sample_one(const GasConfig& cfg, std::span<const ScattererId> ids, Rng& rng);

}  // namespace lgas
