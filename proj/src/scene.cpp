#include "lgas/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace lgas {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kInternalEstimateSeed = 0xa11ce5eedull;

// 22-bit fields per cell coordinate, 20 bits for the motif index.
std::uint64_t pack_removed(std::int32_t i, std::int32_t j, std::int32_t m) {
    auto f = [](std::int32_t v) {
        return static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) & 0x3fffffull;
    };
    return (f(i) << 42) | (f(j) << 20) | (static_cast<std::uint64_t>(m) & 0xfffffull);
}

std::uint64_t pack_cell(std::int64_t ix, std::int64_t iy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(iy));
}

struct BBox {
    double x0, x1, y0, y1;
};

}  // namespace

std::string to_string(const ScattererId& id) {
    std::ostringstream os;
    if (id.added)
        os << "A:" << id.index;
    else
        os << "L:" << id.cell_i << ":" << id.cell_j << ":" << id.index;
    return os.str();
}

std::optional<ScattererId> parse_scatterer_id(const std::string& text) {
    ScattererId id;
    if (text.size() < 3 || text[1] != ':') return std::nullopt;
    const char kind = text[0];
    std::istringstream is(text.substr(2));
    char sep = ':';
    if (kind == 'A') {
        id.added = true;
        if (!(is >> id.index) || !is.eof()) return std::nullopt;
        return id;
    }
    if (kind == 'L') {
        if (!(is >> id.cell_i >> sep >> id.cell_j) || sep != ':') return std::nullopt;
        if (!(is >> sep >> id.index) || sep != ':' || !is.eof()) return std::nullopt;
        return id;
    }
    return std::nullopt;
}

double disk_gap(const Disk& a, const Disk& b) {
    return distance(a.center, b.center) - a.radius - b.radius;
}

// ---------------------------------------------------------------------------
// Construction / validation
// ---------------------------------------------------------------------------

void GasConfig::rebuild_index() {
    double max_d = 0.0;
    if (lattice_) {
        for (const auto& d : lattice_->motif) max_d = std::max(max_d, 2.0 * d.radius);
        const Vec2 b1 = lattice_->basis[0], b2 = lattice_->basis[1];
        const double det = b1.cross(b2);
        inv_basis_[0][0] = b2.y / det;
        inv_basis_[0][1] = -b2.x / det;
        inv_basis_[1][0] = -b1.y / det;
        inv_basis_[1][1] = b1.x / det;
    }
    for (const auto& d : added_) max_d = std::max(max_d, 2.0 * d.radius);
    cell_size_ = std::max(max_d, 1e-6);

    added_by_cell_.clear();
    for (std::size_t k = 0; k < added_.size(); ++k) {
        const Disk& d = added_[k];
        const double h = cell_size_;
        const auto lo_x = static_cast<std::int64_t>(std::floor((d.center.x - d.radius) / h));
        const auto hi_x = static_cast<std::int64_t>(std::floor((d.center.x + d.radius) / h));
        const auto lo_y = static_cast<std::int64_t>(std::floor((d.center.y - d.radius) / h));
        const auto hi_y = static_cast<std::int64_t>(std::floor((d.center.y + d.radius) / h));
        for (std::int64_t ix = lo_x; ix <= hi_x; ++ix)
            for (std::int64_t iy = lo_y; iy <= hi_y; ++iy)
                added_by_cell_[pack_cell(ix, iy)].push_back(static_cast<std::int32_t>(k));
    }
}

void GasConfig::validate_pairwise_patch() const {
    if (!lattice_) return;
    std::vector<std::pair<ScattererId, Disk>> patch;
    for (std::int32_t i = -2; i <= 2; ++i)
        for (std::int32_t j = -2; j <= 2; ++j)
            for (std::int32_t m = 0; m < static_cast<std::int32_t>(lattice_->motif.size()); ++m) {
                ScattererId id{i, j, m, false};
                patch.emplace_back(id, disk(id));
            }
    for (std::size_t a = 0; a < patch.size(); ++a)
        for (std::size_t b = a + 1; b < patch.size(); ++b)
            if (disk_gap(patch[a].second, patch[b].second) <= 0.0)
                throw SceneError("overlapping scatterers " + to_string(patch[a].first) + " and " +
                                 to_string(patch[b].first));
}

void GasConfig::validate_added_gaps(std::size_t first_new_added) const {
    for (std::size_t k = first_new_added; k < added_.size(); ++k) {
        const Disk& d = added_[k];
        const ScattererId self{0, 0, static_cast<std::int32_t>(k), true};
        const auto nearby = materialize(d.center, d.radius + cell_size_ + 1.0);
        for (const auto& other : nearby) {
            if (other == self) continue;
            if (disk_gap(d, disk(other)) <= 0.0)
                throw SceneError("scatterer " + to_string(self) + " overlaps or touches " +
                                 to_string(other));
        }
    }
}

GasConfig GasConfig::build_periodic(const LatticeSpec& spec, Vec2 origin,
                                    std::optional<Bounds> declared) {
    const double det = spec.basis[0].cross(spec.basis[1]);
    const double scale = std::max(spec.basis[0].norm2(), spec.basis[1].norm2());
    if (std::fabs(det) <= 1e-12 * std::max(scale, 1.0))
        throw SceneError("degenerate lattice: basis vectors are linearly dependent");
    if (spec.motif.empty()) throw SceneError("lattice motif is empty");
    for (const auto& d : spec.motif)
        if (!(d.radius > 0.0)) throw SceneError("motif disk has non-positive radius");

    GasConfig cfg;
    cfg.lattice_ = spec;
    cfg.origin_ = origin;
    cfg.rebuild_index();
    cfg.validate_pairwise_patch();

    double rho_min = spec.motif[0].radius, rho_max = spec.motif[0].radius;
    for (const auto& d : spec.motif) {
        rho_min = std::min(rho_min, d.radius);
        rho_max = std::max(rho_max, d.radius);
    }
    if (declared) {
        if (declared->k_min > 1.0 / rho_max || declared->k_max < 1.0 / rho_min)
            throw SceneError("declared curvature bounds do not bracket the motif radii");
        cfg.bounds_ = *declared;
        cfg.bounds_.provenance = BoundsProvenance::declared;
    } else {
        cfg.bounds_.k_min = 1.0 / rho_max;
        cfg.bounds_.k_max = 1.0 / rho_min;
        cfg.bounds_.provenance = BoundsProvenance::estimated;
        // Patch minimum gap is the infimum of free paths for a periodic gas.
        double min_gap = std::numeric_limits<double>::infinity();
        for (std::int32_t i = -2; i <= 2; ++i)
            for (std::int32_t j = -2; j <= 2; ++j)
                for (std::int32_t m = 0; m < static_cast<std::int32_t>(spec.motif.size()); ++m) {
                    if (i == 0 && j == 0 && m == 0) continue;
                    min_gap = std::min(min_gap, disk_gap(cfg.disk({0, 0, 0, false}),
                                                         cfg.disk({i, j, m, false})));
                }
        cfg.bounds_.tau_min = min_gap;
        cfg.bounds_.tau_max = 0.0;
        const double span = spec.basis[0].norm() + spec.basis[1].norm();
        HorizonReport rep = cfg.estimate_horizon(2.0 * span, 2000, kInternalEstimateSeed);
        cfg.bounds_.tau_min = std::min(cfg.bounds_.tau_min, rep.tau_min_observed);
        cfg.bounds_.tau_max = 1.25 * rep.tau_max_observed + 0.05 * cfg.cell_size_;
    }
    return cfg;
}

GasConfig GasConfig::finite_scene(std::vector<Disk> disks, Vec2 origin,
                                  std::optional<Bounds> declared) {
    if (disks.empty()) throw SceneError("finite scene needs at least one scatterer");
    for (const auto& d : disks)
        if (!(d.radius > 0.0)) throw SceneError("scatterer has non-positive radius");

    GasConfig cfg;
    cfg.added_ = std::move(disks);
    cfg.origin_ = origin;
    cfg.rebuild_index();
    for (std::size_t a = 0; a < cfg.added_.size(); ++a)
        for (std::size_t b = a + 1; b < cfg.added_.size(); ++b)
            if (disk_gap(cfg.added_[a], cfg.added_[b]) <= 0.0)
                throw SceneError("overlapping scatterers A:" + std::to_string(a) + " and A:" +
                                 std::to_string(b));

    double rho_min = cfg.added_[0].radius, rho_max = cfg.added_[0].radius;
    double min_gap = std::numeric_limits<double>::infinity();
    double max_chord = 0.0;
    for (std::size_t a = 0; a < cfg.added_.size(); ++a) {
        rho_min = std::min(rho_min, cfg.added_[a].radius);
        rho_max = std::max(rho_max, cfg.added_[a].radius);
        for (std::size_t b = a + 1; b < cfg.added_.size(); ++b) {
            min_gap = std::min(min_gap, disk_gap(cfg.added_[a], cfg.added_[b]));
            max_chord = std::max(max_chord, distance(cfg.added_[a].center, cfg.added_[b].center) +
                                                cfg.added_[a].radius + cfg.added_[b].radius);
        }
    }
    if (declared) {
        if (declared->k_min > 1.0 / rho_max || declared->k_max < 1.0 / rho_min)
            throw SceneError("declared curvature bounds do not bracket the scatterer radii");
        cfg.bounds_ = *declared;
        cfg.bounds_.provenance = BoundsProvenance::declared;
    } else {
        cfg.bounds_.k_min = 1.0 / rho_max;
        cfg.bounds_.k_max = 1.0 / rho_min;
        cfg.bounds_.tau_min = std::isfinite(min_gap) ? min_gap : 1.0;
        cfg.bounds_.tau_max = std::max(max_chord, 1.0);
        cfg.bounds_.provenance = BoundsProvenance::estimated;
    }
    return cfg;
}

GasConfig GasConfig::finite_modification(const std::vector<ScattererId>& removed,
                                         const std::vector<Disk>& added) const {
    GasConfig cfg = *this;
    for (const auto& id : removed) {
        if (id.added) throw SceneError("only lattice scatterers can be removed: " + to_string(id));
        if (!lattice_ || id.index < 0 ||
            id.index >= static_cast<std::int32_t>(lattice_->motif.size()))
            throw SceneError("removed scatterer does not exist: " + to_string(id));
        const auto key = pack_removed(id.cell_i, id.cell_j, id.index);
        if (cfg.removed_.insert(key).second) cfg.removed_list_.push_back(id);
    }
    const std::size_t first_new = cfg.added_.size();
    for (const auto& d : added) {
        if (!(d.radius > 0.0)) throw SceneError("added scatterer has non-positive radius");
        cfg.added_.push_back(d);
    }
    cfg.rebuild_index();
    cfg.validate_added_gaps(first_new);

    if (!added.empty()) {
        double rho_min = 1.0 / cfg.bounds_.k_max, rho_max = 1.0 / cfg.bounds_.k_min;
        for (const auto& d : added) {
            rho_min = std::min(rho_min, d.radius);
            rho_max = std::max(rho_max, d.radius);
        }
        const double k_lo = 1.0 / rho_max, k_hi = 1.0 / rho_min;
        if (k_lo < cfg.bounds_.k_min || k_hi > cfg.bounds_.k_max) {
            if (cfg.bounds_.provenance == BoundsProvenance::declared)
                throw SceneError("added scatterers violate the declared curvature bounds");
            cfg.bounds_.k_min = std::min(cfg.bounds_.k_min, k_lo);
            cfg.bounds_.k_max = std::max(cfg.bounds_.k_max, k_hi);
        }
    }
    if (!removed.empty() || !added.empty()) {
        if (cfg.bounds_.provenance == BoundsProvenance::estimated) {
            // Geometry changed; refresh the tau ceiling near the modification.
            Vec2 center = added.empty() ? disk(removed.front()).center : added.front().center;
            HorizonReport rep =
                cfg.estimate_horizon(distance(center, cfg.origin_) + 4.0 * cfg.cell_size_, 1500,
                                     kInternalEstimateSeed);
            cfg.bounds_.tau_min = std::min(cfg.bounds_.tau_min, rep.tau_min_observed);
            cfg.bounds_.tau_max = std::max(cfg.bounds_.tau_max, 1.25 * rep.tau_max_observed);
        }
    }
    return cfg;
}

GasConfig GasConfig::modify_annulus(double inner, double width,
                                    const std::vector<Disk>& replacement) const {
    if (!(inner >= 0.0) || !(width > 0.0))
        throw SceneError("modify_annulus: invalid annulus parameters");
    const double outer = inner + width;
    for (const auto& prev : modified_annuli_)
        if (inner < prev.outer && outer > prev.inner)
            throw SceneError("modify_annulus: region overlaps a previously modified annulus");
    auto radial_extent = [&](const Disk& d) { return distance(d.center, origin_) + d.radius; };
    for (std::size_t k = 0; k < added_.size(); ++k)
        if (radial_extent(added_[k]) >= inner)
            throw SceneError("modify_annulus: previous modification A:" + std::to_string(k) +
                             " is not strictly inside the new annulus");
    for (const auto& id : removed_list_)
        if (radial_extent(disk(id)) >= inner)
            throw SceneError("modify_annulus: previous modification " + to_string(id) +
                             " is not strictly inside the new annulus");

    // Disks intersecting the open annulus get removed.
    std::vector<ScattererId> to_remove;
    for (const auto& id : materialize(origin_, outer + cell_size_)) {
        const Disk d = disk(id);
        const double rc = distance(d.center, origin_);
        if (rc - d.radius < outer && rc + d.radius > inner) {
            if (id.added)
                throw SceneError("modify_annulus: annulus touches prior replacement " +
                                 to_string(id));
            to_remove.push_back(id);
        }
    }
    for (const auto& d : replacement) {
        const double rc = distance(d.center, origin_);
        if (!(rc - d.radius <= outer && rc + d.radius >= inner))
            throw SceneError("modify_annulus: replacement disk lies outside the closed annulus");
    }

    GasConfig cfg = finite_modification(to_remove, replacement);
    cfg.modified_annuli_.push_back({inner, outer});

    // Full pairwise validation on the annulus plus a tau_max margin collar.
    const double margin = bounds_.tau_max > 0 ? bounds_.tau_max : 2.0 * cell_size_;
    const auto collar = cfg.materialize(origin_, outer + margin);
    std::vector<Disk> disks;
    disks.reserve(collar.size());
    for (const auto& id : collar) disks.push_back(cfg.disk(id));
    for (std::size_t a = 0; a < disks.size(); ++a) {
        const double ra = distance(disks[a].center, origin_);
        if (ra + disks[a].radius < inner - margin) continue;
        for (std::size_t b = a + 1; b < disks.size(); ++b)
            if (disk_gap(disks[a], disks[b]) <= 0.0)
                throw SceneError("modify_annulus: validation found overlap between " +
                                 to_string(collar[a]) + " and " + to_string(collar[b]));
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

bool GasConfig::exists(const ScattererId& id) const {
    if (id.added)
        return id.index >= 0 && id.index < static_cast<std::int32_t>(added_.size());
    if (!lattice_) return false;
    if (id.index < 0 || id.index >= static_cast<std::int32_t>(lattice_->motif.size())) return false;
    return removed_.count(pack_removed(id.cell_i, id.cell_j, id.index)) == 0;
}

Disk GasConfig::disk(const ScattererId& id) const {
    if (id.added) return added_.at(static_cast<std::size_t>(id.index));
    const Disk& base = lattice_->motif.at(static_cast<std::size_t>(id.index));
    const Vec2 shift = lattice_->basis[0] * static_cast<double>(id.cell_i) +
                       lattice_->basis[1] * static_cast<double>(id.cell_j);
    return {base.center + shift, base.radius};
}

void GasConfig::gather_cell(std::int64_t ix, std::int64_t iy, std::vector<ScattererId>& out) const {
    const double h = cell_size_;
    if (lattice_) {
        const BBox box{static_cast<double>(ix) * h, static_cast<double>(ix + 1) * h,
                       static_cast<double>(iy) * h, static_cast<double>(iy + 1) * h};
        for (std::int32_t m = 0; m < static_cast<std::int32_t>(lattice_->motif.size()); ++m) {
            const Disk& d = lattice_->motif[static_cast<std::size_t>(m)];
            const double x0 = box.x0 - d.radius - d.center.x, x1 = box.x1 + d.radius - d.center.x;
            const double y0 = box.y0 - d.radius - d.center.y, y1 = box.y1 + d.radius - d.center.y;
            double lo_i = std::numeric_limits<double>::infinity(), hi_i = -lo_i;
            double lo_j = lo_i, hi_j = -lo_i;
            for (const Vec2 corner : {Vec2{x0, y0}, Vec2{x1, y0}, Vec2{x0, y1}, Vec2{x1, y1}}) {
                const double li = inv_basis_[0][0] * corner.x + inv_basis_[0][1] * corner.y;
                const double lj = inv_basis_[1][0] * corner.x + inv_basis_[1][1] * corner.y;
                lo_i = std::min(lo_i, li);
                hi_i = std::max(hi_i, li);
                lo_j = std::min(lo_j, lj);
                hi_j = std::max(hi_j, lj);
            }
            const auto i0 = static_cast<std::int32_t>(std::ceil(lo_i - 1e-9));
            const auto i1 = static_cast<std::int32_t>(std::floor(hi_i + 1e-9));
            const auto j0 = static_cast<std::int32_t>(std::ceil(lo_j - 1e-9));
            const auto j1 = static_cast<std::int32_t>(std::floor(hi_j + 1e-9));
            for (std::int32_t i = i0; i <= i1; ++i)
                for (std::int32_t j = j0; j <= j1; ++j)
                    if (removed_.count(pack_removed(i, j, m)) == 0)
                        out.push_back({i, j, m, false});
        }
    }
    if (!added_by_cell_.empty()) {
        auto it = added_by_cell_.find(pack_cell(ix, iy));
        if (it != added_by_cell_.end())
            for (std::int32_t k : it->second) out.push_back({0, 0, k, true});
    }
}

std::vector<ScattererId> GasConfig::materialize(Vec2 center, double radius) const {
    std::vector<ScattererId> out;
    if (lattice_) {
        for (std::int32_t m = 0; m < static_cast<std::int32_t>(lattice_->motif.size()); ++m) {
            const Disk& d = lattice_->motif[static_cast<std::size_t>(m)];
            const double reach = radius + d.radius;
            const double x0 = center.x - reach - d.center.x, x1 = center.x + reach - d.center.x;
            const double y0 = center.y - reach - d.center.y, y1 = center.y + reach - d.center.y;
            double lo_i = std::numeric_limits<double>::infinity(), hi_i = -lo_i;
            double lo_j = lo_i, hi_j = -lo_i;
            for (const Vec2 corner : {Vec2{x0, y0}, Vec2{x1, y0}, Vec2{x0, y1}, Vec2{x1, y1}}) {
                const double li = inv_basis_[0][0] * corner.x + inv_basis_[0][1] * corner.y;
                const double lj = inv_basis_[1][0] * corner.x + inv_basis_[1][1] * corner.y;
                lo_i = std::min(lo_i, li);
                hi_i = std::max(hi_i, li);
                lo_j = std::min(lo_j, lj);
                hi_j = std::max(hi_j, lj);
            }
            for (auto i = static_cast<std::int32_t>(std::ceil(lo_i - 1e-9));
                 i <= static_cast<std::int32_t>(std::floor(hi_i + 1e-9)); ++i)
                for (auto j = static_cast<std::int32_t>(std::ceil(lo_j - 1e-9));
                     j <= static_cast<std::int32_t>(std::floor(hi_j + 1e-9)); ++j) {
                    const ScattererId id{i, j, m, false};
                    if (removed_.count(pack_removed(i, j, m)) != 0) continue;
                    if (distance(disk(id).center, center) <= reach) out.push_back(id);
                }
        }
    }
    for (std::size_t k = 0; k < added_.size(); ++k)
        if (distance(added_[k].center, center) <= radius + added_[k].radius)
            out.push_back({0, 0, static_cast<std::int32_t>(k), true});
    std::sort(out.begin(), out.end());
    return out;
}

double GasConfig::flight_cap() const {
    if (bounds_.tau_max > 0.0) return flight_cap_factor * bounds_.tau_max;
    return 1000.0 * cell_size_;
}

FlightResult GasConfig::free_flight(Vec2 origin, Vec2 direction, const FlightOptions& opts) const {
    FlightResult result;
    const double cap = opts.max_distance >= 0.0 ? opts.max_distance : flight_cap();
    const double h = cell_size_;

    auto ix = static_cast<std::int64_t>(std::floor(origin.x / h));
    auto iy = static_cast<std::int64_t>(std::floor(origin.y / h));
    const std::int64_t step_x = direction.x > 0.0 ? 1 : -1;
    const std::int64_t step_y = direction.y > 0.0 ? 1 : -1;
    const double inf = std::numeric_limits<double>::infinity();
    double t_max_x = inf, t_max_y = inf, t_delta_x = inf, t_delta_y = inf;
    if (direction.x != 0.0) {
        const double edge = (static_cast<double>(ix) + (direction.x > 0.0 ? 1.0 : 0.0)) * h;
        t_max_x = (edge - origin.x) / direction.x;
        t_delta_x = h / std::fabs(direction.x);
    }
    if (direction.y != 0.0) {
        const double edge = (static_cast<double>(iy) + (direction.y > 0.0 ? 1.0 : 0.0)) * h;
        t_max_y = (edge - origin.y) / direction.y;
        t_delta_y = h / std::fabs(direction.y);
    }

    thread_local std::vector<ScattererId> scratch;
    double best = inf;
    double entry = 0.0;
    while (entry <= cap && entry <= best) {
        scratch.clear();
        gather_cell(ix, iy, scratch);
        for (const auto& id : scratch) {
            if (opts.exclude && id == *opts.exclude) continue;
            const RayHit hit = ray_intersect(disk(id), origin, direction);
            if (hit.classification == HitClass::miss) continue;
            if (hit.distance < best) {
                best = hit.distance;
                result.scatterer = id;
                result.hit = hit;
            }
        }
        if (t_max_x < t_max_y) {
            entry = t_max_x;
            t_max_x += t_delta_x;
            ix += step_x;
        } else {
            entry = t_max_y;
            t_max_y += t_delta_y;
            iy += step_y;
        }
    }
    if (best <= cap) result.status = FlightStatus::hit;
    return result;
}

HorizonReport GasConfig::estimate_horizon(double region_radius, long n_samples,
                                          std::uint64_t seed) const {
    HorizonReport rep;
    const auto ids = materialize(origin_, region_radius);
    if (ids.empty() || n_samples <= 0) return rep;

    double probe = flight_cap();
    double span = 0.0;
    if (lattice_) {
        span = lattice_->basis[0].norm() + lattice_->basis[1].norm();
        probe = 50.0 * span;
    }

    std::vector<double> cum(ids.size());
    double total = 0.0;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        total += disk(ids[k]).radius;  // boundary length is proportional to radius
        cum[k] = total;
    }

    double tmin = std::numeric_limits<double>::infinity(), tmax = 0.0;
    for (long s = 0; s < n_samples; ++s) {
        Rng rng = Rng::stream(seed, 0x40712011, static_cast<std::uint64_t>(s));
        const double pick = rng.uniform(0.0, total);
        const std::size_t k = static_cast<std::size_t>(
            std::lower_bound(cum.begin(), cum.end(), pick) - cum.begin());
        const Disk d = disk(ids[k]);
        const double r = rng.uniform(0.0, d.boundary_length());
        const double phi = std::acos(1.0 - 2.0 * rng.uniform());
        if (!(phi > 0.0 && phi < kPi)) continue;
        const Ray ray = phase_to_ray(d, r, phi);
        const FlightResult f = free_flight(ray.origin, ray.direction, {ids[k], probe});
        ++rep.samples;
        if (f.status == FlightStatus::hit) {
            tmin = std::min(tmin, f.hit.distance);
            tmax = std::max(tmax, f.hit.distance);
        } else {
            ++rep.escapes;
        }
    }
    if (rep.samples > rep.escapes) {
        rep.tau_min_observed = tmin;
        rep.tau_max_observed = tmax;
    }

    if (!lattice_) {
        rep.corridor_found = true;  // finitely many scatterers: escape to infinity
        return rep;
    }

    // Corridor scan: lattice directions with small coprime coefficients plus a
    // uniform fan of angles, several transversal offsets each.
    const double probe_len = 50.0 * span;
    auto probe_dir = [&](Vec2 dir, int n_offsets) {
        const Vec2 side = dir.perp();
        for (int k = 0; k < n_offsets; ++k) {
            const double off = (static_cast<double>(k) / n_offsets - 0.5) * span;
            const Vec2 p = origin_ + side * off;
            bool inside = false;
            for (const auto& id : materialize(p, cell_size_))
                if (disk(id).contains(p)) inside = true;
            if (inside) continue;
            if (free_flight(p, dir, {std::nullopt, probe_len}).status == FlightStatus::no_hit)
                return true;
        }
        return false;
    };
    for (int p = -8; p <= 8 && !rep.corridor_found; ++p)
        for (int q = -8; q <= 8 && !rep.corridor_found; ++q) {
            if (p == 0 && q == 0) continue;
            if (std::gcd(std::abs(p), std::abs(q)) != 1) continue;
            const Vec2 dir = (lattice_->basis[0] * p + lattice_->basis[1] * q).normalized();
            if (probe_dir(dir, 32)) rep.corridor_found = true;
        }
    for (int a = 0; a < 10000 && !rep.corridor_found; ++a) {
        const double angle = 2.0 * kPi * static_cast<double>(a) / 10000.0;
        if (probe_dir({std::cos(angle), std::sin(angle)}, 4)) rep.corridor_found = true;
    }
    return rep;
}

void GasConfig::adopt_tau_observations(double tau_min_obs, double tau_max_obs) {
    if (bounds_.provenance == BoundsProvenance::declared && tau_min_obs >= bounds_.tau_min &&
        tau_max_obs <= bounds_.tau_max)
        return;
    bounds_.tau_min = std::min(bounds_.tau_min, tau_min_obs);
    bounds_.tau_max = std::max(bounds_.tau_max, tau_max_obs);
    bounds_.provenance = BoundsProvenance::estimated;
}

}  // namespace lgas
