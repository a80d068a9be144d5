#pragma once
// First-return dynamics on a chosen cross-section, excursion radii and
// A(R) membership estimates, recurrence statistics, Birkhoff averages along
// the return map, and the explicit construction of aperiodic recurrent gases
// by repeated annulus rewrites.

#include <functional>
#include <string>
#include <vector>

#include "lgas/dynamics.hpp"
#include "lgas/scene.hpp"
#include "lgas/stats.hpp"

namespace lgas {

/// Cross-section to return to: explicit scatterers and/or whole motif classes
/// of the lattice.
struct TargetSet {
    std::vector<ScattererId> ids;               // sorted
    std::vector<std::int32_t> motif_classes;    // lattice motif indices

    bool contains(const ScattererId& id) const;
    /// Representative scatterers used for mu-sampling starting points.
    std::vector<ScattererId> sampling_ids() const;

    static TargetSet single(const ScattererId& id);
    static TargetSet motif_class(std::int32_t index);
};

enum class ReturnOutcome : std::uint8_t { returned, exceeded_cap, singular, horizon };

struct ReturnRecord {
    PhasePoint x0;
    ReturnOutcome outcome = ReturnOutcome::exceeded_cap;
    long n1 = 0;            // first-return step count when returned
    PhasePoint x_ret;       // valid when returned
    double excursion = 0.0; // sup over 0 < k < n1 of dist(q(T^k x), O)
};

/// Iterate the billiard map until the orbit re-enters the target set. The
/// excursion tracks the farthest collision point from the config origin
/// strictly between departure and return. An optional recorder receives every
/// intermediate phase point including the return.
ReturnRecord first_return(const GasConfig& cfg, const PhasePoint& x, const TargetSet& target,
                          long cap, std::vector<PhasePoint>* orbit_recorder = nullptr);

struct AMeasureEstimate {
    BinomialCI membership;   // fraction of Pi_alpha certified in A(R)
    BinomialCI complement;   // conservative: non-returns count against A(R)
    long returned = 0, exceeded = 0, singular = 0, horizon = 0;
};

/// Monte Carlo estimate of the normalized measure of
/// A(R) = {x : returns with excursion <= R} on the cross-section of alpha.
AMeasureEstimate estimate_A_measure(const GasConfig& cfg, const ScattererId& alpha,
                                    const TargetSet& target, double R, long n_samples, long cap,
                                    std::uint64_t seed, int threads = 1);

struct ChooseRResult {
    bool ok = false;
    double R = 0.0;
    int doublings = 0;
    AMeasureEstimate final_estimate;
    std::string diagnostic;
};

/// Double R from the initial guess (at least 10 * tau_max and any floor the
/// caller imposes) until the complement's upper confidence bound drops to
/// eps. Gives up after 20 doublings.
ChooseRResult choose_R(const GasConfig& cfg, const ScattererId& alpha, const TargetSet& target,
                       double eps, long n_samples, long cap, std::uint64_t seed,
                       double R_floor = 0.0);

struct AnnulusContext {
    const GasConfig* base = nullptr;
    double inner = 0.0;
    double outer = 0.0;
    std::vector<ScattererId> removed;
};

/// Produces the replacement disks for a rewritten annulus.
using ModificationPolicy =
    std::function<std::vector<Disk>(const AnnulusContext&, Rng&)>;

/// Replaces removed disks with themselves; the modified gas equals the base.
ModificationPolicy identity_policy();

/// Jitters positions and radii of the removed disks. Displacement plus radius
/// change are each capped at one tenth of the disk's free gap in the base
/// configuration, which keeps all pairwise gaps positive; radii stay within
/// [radius_lo, radius_hi] times the original and inside the declared
/// curvature bounds.
ModificationPolicy jitter_policy(double radius_lo = 0.8, double radius_hi = 1.25);

struct BuildRound {
    int k = 0;
    double R = 0.0;
    double eps = 0.0;
    double complement_estimate = 0.0;
    double complement_hi = 0.0;
    double annulus_inner = 0.0;
    double annulus_outer = 0.0;
    long removed_count = 0;
    long added_count = 0;
    long local_horizon_samples = 0;
    bool local_horizon_ok = false;
};

struct AperiodicBuildLog {
    std::vector<BuildRound> rounds;
    bool completed = false;
    std::string failure;
};

struct BuildOptions {
    std::vector<double> eps_schedule;  // strictly decreasing
    double annulus_width = 0.0;        // <= 0: 3 * tau_max
    long samples_per_round = 400;
    long return_cap = 20000;
    long local_horizon_samples = 400;
};

struct BuildResult {
    GasConfig config;
    AperiodicBuildLog log;
};

/// One finite stage of the recursive construction: per round k, certify a
/// radius R_k with mu-complement of A_k(R_k) below eps_k, then rewrite the
/// annulus [R_k, R_k + width] with policy-generated scatterers. Requires a
/// periodic base with finite horizon.
BuildResult build_aperiodic(const GasConfig& base, const ScattererId& alpha,
                            const TargetSet& target, const BuildOptions& options,
                            const ModificationPolicy& policy, std::uint64_t seed);

struct RecurrenceFractions {
    std::vector<long> checkpoints;
    std::vector<BinomialCI> fractions;  // returned within checkpoint steps
    long singular = 0;                  // excluded from the denominators
    long horizon = 0;                   // counted as non-returns, reported
    long samples_used = 0;
};

/// Fraction of mu-sampled starting points in the target whose orbit re-enters
/// the target within N' steps, for N' in {N/8, N/4, N/2, N}.
RecurrenceFractions recurrence_fraction(const GasConfig& cfg, const TargetSet& target, long n_max,
                                        long n_samples, std::uint64_t seed, int threads = 1);

enum class Observable : std::uint8_t { constant_one, sin_phi, cos_r, next_tau };

double evaluate_observable(const GasConfig& cfg, Observable f, const PhasePoint& x);

struct BirkhoffResult {
    double forward = 0.0, backward = 0.0;
    long forward_count = 0, backward_count = 0;
    double forward_sem = 0.0, backward_sem = 0.0;  // batch-means standard errors
    bool truncated = false;                        // ran out of raw-step budget
};

/// Forward and backward Birkhoff averages of the observable along the return
/// map to the target, starting from x0, over n_returns returns each (raw-step
/// budget 1000 * n_returns per direction).
BirkhoffResult birkhoff_average(const GasConfig& cfg, const TargetSet& target, Observable f,
                                const PhasePoint& x0, long n_returns);

}  // namespace lgas
