#pragma once
// Singularity geometry on each cross-section: the curves of line elements
// whose next (or previous) collision is tangential, epsilon-tube measure
// estimates around them, neighbor sets, and orbit-to-singularity distances.

#include <map>
#include <mutex>
#include <vector>

#include "lgas/dynamics.hpp"
#include "lgas/scene.hpp"
#include "lgas/stats.hpp"

namespace lgas {

enum class CurveKind : std::uint8_t { sigma_plus, sigma_minus };
enum class TangentBranch : std::uint8_t { left, right };

struct CurvePoint {
    double r = 0.0;
    double phi = 0.0;
};

/// One branch of the singularity set over one scatterer: the (r, phi) locus
/// tangent to a fixed visible neighbor, sampled on a uniform r grid and split
/// where the neighbor becomes occluded. sigma_plus curves are strictly
/// increasing in phi, sigma_minus strictly decreasing.
struct SingularityCurve {
    CurveKind kind = CurveKind::sigma_plus;
    ScattererId base;
    ScattererId neighbor;
    TangentBranch branch = TangentBranch::left;
    std::vector<CurvePoint> samples;
};

/// All singularity curves of the given kind on the cross-section of alpha.
/// resolution = number of r grid points per boundary length.
std::vector<SingularityCurve> singularity_curves(const GasConfig& cfg, const ScattererId& alpha,
                                                 CurveKind kind, int resolution = 2048);

/// Number of distinct neighbors appearing in a curve list.
int count_visible_neighbors(const std::vector<SingularityCurve>& curves);

/// Lazily computed, cached curves per scatterer plus distance queries in the
/// increasing metric (frozen at the query point). Distances to sigma_minus
/// reuse the sigma_plus curves through the time-reversal involution.
class SingularityAtlas {
public:
    explicit SingularityAtlas(const GasConfig& cfg, int resolution = 2048)
        : cfg_(&cfg), resolution_(resolution) {}

    const std::vector<SingularityCurve>& curves_for(const ScattererId& alpha);

    /// d_par(x, sigma+ ∪ sigma- ∪ boundary) on the cross-section of x.alpha.
    double singular_distance(const PhasePoint& x);

    const GasConfig& config() const { return *cfg_; }

private:
    ScattererId canonical(const ScattererId& id) const;
    double curve_distance(const std::vector<SingularityCurve>& curves, const PhasePoint& x) const;

    const GasConfig* cfg_;
    int resolution_;
    std::map<ScattererId, std::vector<SingularityCurve>> cache_;
    std::mutex mutex_;
};

struct TubeEstimate {
    double eps = 0.0;
    BinomialCI fraction;  // of mu(Pi_alpha), i.e. already normalized by 2 L_alpha
};

/// Monte Carlo estimate of the normalized measure of the eps-neighborhood of
/// the singularity set on Pi_alpha. Requires 0 < eps <= 0.1.
TubeEstimate eps_tube_measure(SingularityAtlas& atlas, const ScattererId& alpha, double eps,
                              long n_samples, std::uint64_t seed, int threads = 1);

enum class NeighborMethod : std::uint8_t { geometric, dynamical };

struct NeighborSet {
    ScattererId alpha;
    int n = 0;
    NeighborMethod method = NeighborMethod::geometric;
    std::vector<ScattererId> ids;  // sorted
};

/// Geometric: every scatterer within boundary distance n * tau_max (a
/// certified superset of everything an n-step orbit can visit). Dynamical:
/// scatterers actually visited by sampled n-step orbits from Pi_alpha.
NeighborSet neighbor_set(const GasConfig& cfg, const ScattererId& alpha, int n,
                         NeighborMethod method, long samples = 10000, std::uint64_t seed = 1);

/// Cumulative dynamical neighbor sets for n = 1..n_max from one batch of
/// sampled orbits; entry [n-1] corresponds to n steps.
std::vector<NeighborSet> dynamical_neighbor_profile(const GasConfig& cfg,
                                                    const ScattererId& alpha, int n_max,
                                                    long samples, std::uint64_t seed);

struct ProfilePoint {
    long n = 0;
    double dist = 0.0;
};

struct OrbitSingularityProfile {
    std::vector<ProfilePoint> points;  // n = 0..steps_completed
    long steps_completed = 0;
    StepStatus last_status = StepStatus::ok;
    double min_n4_dist = 0.0;  // min over n >= 1 of n^4 * dist, the C0 candidate
    long argmin_n = 0;
};

OrbitSingularityProfile orbit_singularity_profile(SingularityAtlas& atlas, const PhasePoint& x0,
                                                  long n_steps);

}  // namespace lgas
