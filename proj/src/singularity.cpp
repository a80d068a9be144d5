#include "lgas/singularity.hpp"

#include "lgas/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

namespace lgas {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kVisibilityShortening = 1e-7;

// Tangency solve for one grid point: the outgoing angle phi of the tangent
// ray from boundary point p toward the given branch of neighbor beta, or
// nothing if the tangent direction is not an outgoing ray or is occluded.
struct TangencySample {
    bool visible = false;
    double phi = 0.0;
};

TangencySample tangency_at(const GasConfig& cfg, const ScattererId& alpha,
                           const BoundaryFrame& frame, const Disk& beta_disk,
                           TangentBranch branch) {
    TangencySample out;
    const auto dirs = tangency_directions(beta_disk, frame.position);
    const Vec2 d = branch == TangentBranch::left ? dirs[0] : dirs[1];
    const double phi = std::atan2(d.dot(frame.outward_normal), d.dot(frame.clockwise_tangent));
    if (!(phi > 1e-12 && phi < kPi - 1e-12)) return out;

    const double dist2 = (beta_disk.center - frame.position).norm2();
    const double reach = std::sqrt(dist2 - beta_disk.radius * beta_disk.radius);
    GasConfig::FlightOptions opts;
    opts.exclude = alpha;
    opts.max_distance = reach - kVisibilityShortening;
    if (cfg.free_flight(frame.position, d, opts).status == FlightStatus::hit) return out;

    // Confirm beta is actually reachable: nothing blocks the ray shortened by
    // the tolerance, so the grazing point at `reach` belongs to beta.
    out.visible = true;
    out.phi = phi;
    return out;
}

}  // namespace

std::vector<SingularityCurve> singularity_curves(const GasConfig& cfg, const ScattererId& alpha,
                                                 CurveKind kind, int resolution) {
    if (resolution < 8) throw std::invalid_argument("singularity_curves: resolution too small");
    std::vector<SingularityCurve> curves;
    const Disk a = cfg.disk(alpha);
    const double L = a.boundary_length();

    const double reach = a.radius + cfg.bounds().tau_max + cfg.max_diameter();
    std::vector<ScattererId> candidates;
    for (const auto& id : cfg.materialize(a.center, reach))
        if (!(id == alpha)) candidates.push_back(id);

    std::vector<BoundaryFrame> frames(static_cast<std::size_t>(resolution));
    for (int g = 0; g < resolution; ++g)
        frames[static_cast<std::size_t>(g)] = frame_at(a, L * static_cast<double>(g) / resolution);

    for (const auto& beta : candidates) {
        const Disk b = cfg.disk(beta);
        for (TangentBranch branch : {TangentBranch::left, TangentBranch::right}) {
            std::vector<char> visible(static_cast<std::size_t>(resolution), 0);
            std::vector<double> phis(static_cast<std::size_t>(resolution), 0.0);
            bool any = false;
            for (int g = 0; g < resolution; ++g) {
                const auto s =
                    tangency_at(cfg, alpha, frames[static_cast<std::size_t>(g)], b, branch);
                if (s.visible) {
                    visible[static_cast<std::size_t>(g)] = 1;
                    phis[static_cast<std::size_t>(g)] = s.phi;
                    any = true;
                }
            }
            if (!any) continue;

            // Collect maximal visible runs on the cyclic grid.
            std::vector<std::pair<int, int>> runs;  // [first, last] inclusive
            int g = 0;
            while (g < resolution) {
                if (!visible[static_cast<std::size_t>(g)]) {
                    ++g;
                    continue;
                }
                int start = g;
                while (g < resolution && visible[static_cast<std::size_t>(g)]) ++g;
                runs.emplace_back(start, g - 1);
            }
            // Stitch a run wrapping through the seam.
            if (runs.size() >= 2 && runs.front().first == 0 &&
                runs.back().second == resolution - 1) {
                runs.back().second = runs.front().second + resolution;
                runs.erase(runs.begin());
            }

            for (const auto& run : runs) {
                if (run.second - run.first + 1 < 2) continue;  // isolated grid point
                SingularityCurve c;
                c.kind = kind;
                c.base = alpha;
                c.neighbor = beta;
                c.branch = branch;
                for (int idx = run.first; idx <= run.second; ++idx) {
                    const int gg = idx % resolution;
                    const double r = L * static_cast<double>(gg) / resolution;
                    double phi = phis[static_cast<std::size_t>(gg)];
                    if (kind == CurveKind::sigma_minus) phi = kPi - phi;
                    c.samples.push_back({r, phi});
                }
                curves.push_back(std::move(c));
            }
        }
    }
    return curves;
}

int count_visible_neighbors(const std::vector<SingularityCurve>& curves) {
    std::set<ScattererId> ids;
    for (const auto& c : curves) ids.insert(c.neighbor);
    return static_cast<int>(ids.size());
}

ScattererId SingularityAtlas::canonical(const ScattererId& id) const {
    // In a pure periodic gas every translate of a motif disk sees the same
    // local geometry, so curves can be shared across cells.
    if (!id.added && cfg_->is_pure_periodic()) return {0, 0, id.index, false};
    return id;
}

const std::vector<SingularityCurve>& SingularityAtlas::curves_for(const ScattererId& alpha) {
    const ScattererId key = canonical(alpha);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    auto curves = singularity_curves(*cfg_, key, CurveKind::sigma_plus, resolution_);
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.emplace(key, std::move(curves)).first->second;
}

double SingularityAtlas::curve_distance(const std::vector<SingularityCurve>& curves,
                                        const PhasePoint& x) const {
    const double L = cfg_->disk(x.alpha).boundary_length();
    const double w = std::sin(x.phi);
    double best = std::numeric_limits<double>::infinity();

    for (const auto& c : curves) {
        const auto& s = c.samples;
        const std::size_t n = s.size();
        if (n < 2) continue;
        // phi is strictly monotone along the curve; locate the bracketing
        // segment and expand outward until the phi gap alone exceeds best.
        std::size_t lo = 0, hi = n - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (s[mid].phi <= x.phi)
                lo = mid;
            else
                hi = mid;
        }
        auto segment_distance = [&](std::size_t i) {
            const double dr0 = arclength_diff(s[i].r, x.r, L) * w;
            const double dr1 = (arclength_diff(s[i].r, x.r, L) +
                                arclength_diff(s[i + 1].r, s[i].r, L)) *
                               w;
            const double dp0 = s[i].phi - x.phi;
            const double dp1 = s[i + 1].phi - x.phi;
            const double ex = dr1 - dr0, ey = dp1 - dp0;
            const double len2 = ex * ex + ey * ey;
            double t = len2 > 0.0 ? -(dr0 * ex + dp0 * ey) / len2 : 0.0;
            t = std::clamp(t, 0.0, 1.0);
            const double px = dr0 + t * ex, py = dp0 + t * ey;
            return std::sqrt(px * px + py * py);
        };
        auto phi_gap = [&](std::size_t i) {
            const double a = s[i].phi - x.phi, b = s[i + 1].phi - x.phi;
            if ((a <= 0.0 && b >= 0.0) || (a >= 0.0 && b <= 0.0)) return 0.0;
            return std::min(std::fabs(a), std::fabs(b));
        };
        long down = static_cast<long>(lo), up = static_cast<long>(lo) + 1;
        const long last = static_cast<long>(n) - 2;
        while (down >= 0 || up <= last) {
            const double gd = down >= 0 ? phi_gap(static_cast<std::size_t>(down))
                                        : std::numeric_limits<double>::infinity();
            const double gu = up <= last ? phi_gap(static_cast<std::size_t>(up))
                                         : std::numeric_limits<double>::infinity();
            if (std::min(gd, gu) >= best) break;
            if (gd <= gu) {
                best = std::min(best, segment_distance(static_cast<std::size_t>(down)));
                --down;
            } else {
                best = std::min(best, segment_distance(static_cast<std::size_t>(up)));
                ++up;
            }
        }
    }
    return best;
}

double SingularityAtlas::singular_distance(const PhasePoint& x) {
    const auto& curves = curves_for(x.alpha);
    double d = std::min(x.phi, kPi - x.phi);  // distance to the boundary phi in {0, pi}
    PhasePoint local = x;
    local.alpha = canonical(x.alpha);
    d = std::min(d, curve_distance(curves, local));                // sigma+
    d = std::min(d, curve_distance(curves, involute(local)));      // sigma- by reversal
    return d;
}

TubeEstimate eps_tube_measure(SingularityAtlas& atlas, const ScattererId& alpha, double eps,
                              long n_samples, std::uint64_t seed, int threads) {
    if (!(eps >= 0.0 && eps <= 0.1))
        throw std::invalid_argument("eps_tube_measure: eps must lie in [0, 0.1]");
    TubeEstimate est;
    est.eps = eps;
    if (eps == 0.0) {
        est.fraction = wilson_interval(0, n_samples);
        return est;
    }
    const GasConfig& cfg = atlas.config();
    atlas.curves_for(alpha);  // warm the cache outside the sampling loop
    const ScattererId ids[] = {alpha};
    std::vector<char> hit(static_cast<std::size_t>(n_samples), 0);
    parallel_for(n_samples, threads, [&](long i) {
        Rng rng = Rng::stream(seed, 0x707e5eed, static_cast<std::uint64_t>(i));
        const PhasePoint x = measure_sample_one(cfg, ids, rng);
        if (atlas.singular_distance(x) <= eps) hit[static_cast<std::size_t>(i)] = 1;
    });
    long inside = 0;
    for (char h : hit) inside += h;
    est.fraction = wilson_interval(inside, n_samples);
    return est;
}

NeighborSet neighbor_set(const GasConfig& cfg, const ScattererId& alpha, int n,
                         NeighborMethod method, long samples, std::uint64_t seed) {
    NeighborSet out;
    out.alpha = alpha;
    out.n = n;
    out.method = method;
    if (n < 1) throw std::invalid_argument("neighbor_set: n must be >= 1");

    if (method == NeighborMethod::geometric) {
        const Disk a = cfg.disk(alpha);
        const double reach = static_cast<double>(n) * cfg.bounds().tau_max;
        for (const auto& id : cfg.materialize(a.center, a.radius + reach + cfg.max_diameter())) {
            if (id == alpha) continue;
            if (disk_gap(a, cfg.disk(id)) <= reach) out.ids.push_back(id);
        }
        // Revisiting the starting scatterer takes at least two collisions.
        if (n >= 2) out.ids.push_back(alpha);
        std::sort(out.ids.begin(), out.ids.end());
        return out;
    }

    auto profile = dynamical_neighbor_profile(cfg, alpha, n, samples, seed);
    return profile.back();
}

std::vector<NeighborSet> dynamical_neighbor_profile(const GasConfig& cfg,
                                                    const ScattererId& alpha, int n_max,
                                                    long samples, std::uint64_t seed) {
    std::vector<std::set<ScattererId>> visited(static_cast<std::size_t>(n_max));
    const ScattererId ids[] = {alpha};
    for (long s = 0; s < samples; ++s) {
        Rng rng = Rng::stream(seed, 0x4e1b4b5e, static_cast<std::uint64_t>(s));
        PhasePoint x = measure_sample_one(cfg, ids, rng);
        for (int k = 1; k <= n_max; ++k) {
            const StepResult step = billiard_map(cfg, x);
            if (step.status != StepStatus::ok) break;  // recorded by omission, not fatal
            x = step.step.next;
            visited[static_cast<std::size_t>(k - 1)].insert(x.alpha);
        }
    }
    std::vector<NeighborSet> out;
    std::set<ScattererId> cumulative;
    for (int k = 1; k <= n_max; ++k) {
        cumulative.insert(visited[static_cast<std::size_t>(k - 1)].begin(),
                          visited[static_cast<std::size_t>(k - 1)].end());
        NeighborSet ns;
        ns.alpha = alpha;
        ns.n = k;
        ns.method = NeighborMethod::dynamical;
        ns.ids.assign(cumulative.begin(), cumulative.end());
        out.push_back(std::move(ns));
    }
    return out;
}

OrbitSingularityProfile orbit_singularity_profile(SingularityAtlas& atlas, const PhasePoint& x0,
                                                  long n_steps) {
    OrbitSingularityProfile prof;
    prof.min_n4_dist = std::numeric_limits<double>::infinity();
    PhasePoint x = x0;
    prof.points.push_back({0, atlas.singular_distance(x)});
    for (long n = 1; n <= n_steps; ++n) {
        const StepResult step = billiard_map(atlas.config(), x);
        if (step.status != StepStatus::ok) {
            prof.last_status = step.status;
            break;
        }
        x = step.step.next;
        const double d = atlas.singular_distance(x);
        prof.points.push_back({n, d});
        const double n4 = std::pow(static_cast<double>(n), 4);
        if (n4 * d < prof.min_n4_dist) {
            prof.min_n4_dist = n4 * d;
            prof.argmin_n = n;
        }
        prof.steps_completed = n;
    }
    return prof;
}

}  // namespace lgas
