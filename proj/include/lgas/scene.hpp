#pragma once
// A whole Lorentz gas: an optional periodic lattice of disks, a finite list
// of removed lattice disks, a finite list of added disks, curvature / free
// path bounds, and the spatial queries (free flight, materialization,
// horizon estimation) the dynamics runs on.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lgas/geometry.hpp"
#include "lgas/rng.hpp"
#include "lgas/vec2.hpp"

namespace lgas {

/// Identifies one scatterer: a lattice translate (cell_i, cell_j, motif index)
/// or an entry of the added list.
struct ScattererId {
    std::int32_t cell_i = 0;
    std::int32_t cell_j = 0;
    std::int32_t index = 0;
    bool added = false;

    friend bool operator==(const ScattererId&, const ScattererId&) = default;
    friend auto operator<=>(const ScattererId&, const ScattererId&) = default;
};

std::string to_string(const ScattererId& id);                 // "L:i:j:k" or "A:k"
std::optional<ScattererId> parse_scatterer_id(const std::string& text);

struct ScattererIdHash {
    std::size_t operator()(const ScattererId& id) const {
        std::uint64_t h = static_cast<std::uint32_t>(id.cell_i);
        h = h * 0x9e3779b97f4a7c15ull + static_cast<std::uint32_t>(id.cell_j);
        h = h * 0x9e3779b97f4a7c15ull + static_cast<std::uint32_t>(id.index);
        return static_cast<std::size_t>(h * 2 + (id.added ? 1 : 0));
    }
};

struct LatticeSpec {
    Vec2 basis[2];
    std::vector<Disk> motif;
};

enum class BoundsProvenance : std::uint8_t { declared, estimated };

/// Curvature and free-path bounds of the gas (conditions on the class the
/// dynamics assumes): k_min <= k <= k_max, tau_min <= tau <= tau_max.
struct Bounds {
    double k_min = 0.0;
    double k_max = 0.0;
    double tau_min = 0.0;
    double tau_max = 0.0;
    BoundsProvenance provenance = BoundsProvenance::estimated;
};

struct HorizonReport {
    double tau_min_observed = 0.0;
    double tau_max_observed = 0.0;
    bool corridor_found = false;
    long samples = 0;
    long escapes = 0;  // flights that exhausted the search range
};

struct SceneError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class FlightStatus : std::uint8_t { hit, no_hit };

struct FlightResult {
    FlightStatus status = FlightStatus::no_hit;
    ScattererId scatterer;
    RayHit hit;
};

struct AnnulusRegion {
    double inner = 0.0;
    double outer = 0.0;
};

class GasConfig {
public:
    /// Periodic gas from a lattice spec. Validates the motif on a 5x5 patch
    /// of cells; throws SceneError naming the offending pair on overlap.
    static GasConfig build_periodic(const LatticeSpec& spec, Vec2 origin = {0.0, 0.0},
                                    std::optional<Bounds> declared = std::nullopt);

    /// Finite scene: just a list of disks, no lattice.
    static GasConfig finite_scene(std::vector<Disk> disks, Vec2 origin = {0.0, 0.0},
                                  std::optional<Bounds> declared = std::nullopt);

    /// Remove finitely many lattice disks and add a finite disjoint family.
    /// Validates positive gaps between every added disk and everything kept.
    GasConfig finite_modification(const std::vector<ScattererId>& removed,
                                  const std::vector<Disk>& added) const;

    /// Rewrite the open annulus {inner < dist(. , O) < inner + width}: every
    /// scatterer intersecting it is removed and the replacement disks are
    /// inserted. Each replacement must intersect the closed annulus. Errors if
    /// the annulus touches a previously modified region.
    GasConfig modify_annulus(double inner, double width, const std::vector<Disk>& replacement) const;

    // --- queries ---------------------------------------------------------

    bool exists(const ScattererId& id) const;
    Disk disk(const ScattererId& id) const;

    /// All scatterers intersecting the closed disk of the given radius around
    /// center, in a deterministic order.
    std::vector<ScattererId> materialize(Vec2 center, double radius) const;

    struct FlightOptions {
        std::optional<ScattererId> exclude;
        double max_distance = -1.0;  // < 0: use flight_cap()
    };
    FlightResult free_flight(Vec2 origin, Vec2 direction, const FlightOptions& opts) const;
    FlightResult free_flight(Vec2 origin, Vec2 direction) const {
        return free_flight(origin, direction, FlightOptions{});
    }

    HorizonReport estimate_horizon(double region_radius, long n_samples, std::uint64_t seed) const;

    // --- accessors -------------------------------------------------------

    const std::optional<LatticeSpec>& lattice() const { return lattice_; }
    const std::vector<Disk>& added() const { return added_; }
    const std::vector<ScattererId>& removed() const { return removed_list_; }
    Vec2 origin() const { return origin_; }
    const Bounds& bounds() const { return bounds_; }
    bool has_bounds() const { return bounds_.tau_max > 0.0; }
    double cell_size() const { return cell_size_; }
    double max_diameter() const { return 2.0 / bounds_.k_min; }
    const std::vector<AnnulusRegion>& modified_annuli() const { return modified_annuli_; }
    bool is_pure_periodic() const {
        return lattice_.has_value() && removed_list_.empty() && added_.empty();
    }

    /// Search range for free flights: flight_cap_factor * tau_max.
    double flight_cap() const;
    double flight_cap_factor = 4.0;

    /// Expansion constant 1 + k_min * tau_min of the declared/estimated bounds.
    double expansion_constant() const { return 1.0 + bounds_.k_min * bounds_.tau_min; }

    /// Re-estimate tau bounds by sampling (keeps declared bounds when they
    /// already bracket the observations).
    void adopt_tau_observations(double tau_min_obs, double tau_max_obs);

private:
    GasConfig() = default;
    void rebuild_index();
    void validate_pairwise_patch() const;
    void validate_added_gaps(std::size_t first_new_added) const;

    // Enumerate scatterers overlapping grid cell (ix, iy) into out.
    void gather_cell(std::int64_t ix, std::int64_t iy, std::vector<ScattererId>& out) const;

    std::optional<LatticeSpec> lattice_;
    double inv_basis_[2][2] = {{0, 0}, {0, 0}};  // maps plane coords to lattice coords
    std::vector<ScattererId> removed_list_;
    std::unordered_set<std::uint64_t> removed_;
    std::vector<Disk> added_;
    std::unordered_map<std::uint64_t, std::vector<std::int32_t>> added_by_cell_;
    Vec2 origin_;
    Bounds bounds_;
    double cell_size_ = 1.0;
    std::vector<AnnulusRegion> modified_annuli_;
};

/// Boundary-to-boundary distance of two disks (negative means overlap).
double disk_gap(const Disk& a, const Disk& b);

}  // namespace lgas
