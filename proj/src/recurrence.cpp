#include "lgas/recurrence.hpp"

#include "lgas/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lgas {

namespace {
constexpr double kPi = std::numbers::pi;

Vec2 collision_point(const GasConfig& cfg, const PhasePoint& x) {
    return frame_at(cfg.disk(x.alpha), x.r).position;
}
}  // namespace

bool TargetSet::contains(const ScattererId& id) const {
    if (!id.added)
        for (std::int32_t m : motif_classes)
            if (m == id.index) return true;
    return std::binary_search(ids.begin(), ids.end(), id);
}

std::vector<ScattererId> TargetSet::sampling_ids() const {
    std::vector<ScattererId> out = ids;
    for (std::int32_t m : motif_classes) {
        ScattererId rep{0, 0, m, false};
        if (!std::binary_search(ids.begin(), ids.end(), rep)) out.push_back(rep);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

TargetSet TargetSet::single(const ScattererId& id) {
    TargetSet t;
    t.ids = {id};
    return t;
}

TargetSet TargetSet::motif_class(std::int32_t index) {
    TargetSet t;
    t.motif_classes = {index};
    return t;
}

ReturnRecord first_return(const GasConfig& cfg, const PhasePoint& x, const TargetSet& target,
                          long cap, std::vector<PhasePoint>* orbit_recorder) {
    ReturnRecord rec;
    rec.x0 = x;
    PhasePoint cur = x;
    const Vec2 origin = cfg.origin();
    for (long k = 1; k <= cap; ++k) {
        const StepResult step = billiard_map(cfg, cur);
        if (step.status == StepStatus::singular) {
            rec.outcome = ReturnOutcome::singular;
            rec.n1 = k;
            return rec;
        }
        if (step.status == StepStatus::horizon) {
            rec.outcome = ReturnOutcome::horizon;
            rec.n1 = k;
            return rec;
        }
        cur = step.step.next;
        if (orbit_recorder) orbit_recorder->push_back(cur);
        if (target.contains(cur.alpha)) {
            rec.outcome = ReturnOutcome::returned;
            rec.n1 = k;
            rec.x_ret = cur;
            return rec;
        }
        rec.excursion = std::max(rec.excursion, distance(collision_point(cfg, cur), origin));
    }
    rec.outcome = ReturnOutcome::exceeded_cap;
    rec.n1 = cap;
    return rec;
}

AMeasureEstimate estimate_A_measure(const GasConfig& cfg, const ScattererId& alpha,
                                    const TargetSet& target, double R, long n_samples, long cap,
                                    std::uint64_t seed, int threads) {
    AMeasureEstimate est;
    const ScattererId ids[] = {alpha};
    struct Slot {
        ReturnOutcome outcome = ReturnOutcome::exceeded_cap;
        bool member = false;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(n_samples));
    parallel_for(n_samples, threads, [&](long i) {
        Rng rng = Rng::stream(seed, 0xa0ea50be, static_cast<std::uint64_t>(i));
        const PhasePoint x0 = measure_sample_one(cfg, ids, rng);
        const ReturnRecord rec = first_return(cfg, x0, target, cap);
        slots[static_cast<std::size_t>(i)] = {rec.outcome, rec.outcome == ReturnOutcome::returned &&
                                                               rec.excursion <= R};
    });
    long members = 0;
    for (const Slot& s : slots) {
        switch (s.outcome) {
            case ReturnOutcome::returned: ++est.returned; break;
            case ReturnOutcome::exceeded_cap: ++est.exceeded; break;
            case ReturnOutcome::singular: ++est.singular; break;
            case ReturnOutcome::horizon: ++est.horizon; break;
        }
        if (s.member) ++members;
    }
    est.membership = wilson_interval(members, n_samples);
    est.complement = wilson_interval(n_samples - members, n_samples);
    return est;
}

ChooseRResult choose_R(const GasConfig& cfg, const ScattererId& alpha, const TargetSet& target,
                       double eps, long n_samples, long cap, std::uint64_t seed, double R_floor) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("choose_R: eps must be in (0, 1]");
    ChooseRResult out;
    double R = std::max(10.0 * cfg.bounds().tau_max, R_floor);
    for (int round = 0; round <= 20; ++round) {
        const AMeasureEstimate est =
            estimate_A_measure(cfg, alpha, target, R, n_samples, cap,
                               seed ^ (0x517e00dull + static_cast<std::uint64_t>(round)));
        if (est.complement.hi <= eps) {
            out.ok = true;
            out.R = R;
            out.doublings = round;
            out.final_estimate = est;
            return out;
        }
        out.final_estimate = est;
        R *= 2.0;
    }
    out.diagnostic =
        "choose_R: complement never certified below eps; sampling cap too small or the gas is "
        "not recurrent at this scale";
    return out;
}

ModificationPolicy identity_policy() {
    return [](const AnnulusContext& ctx, Rng&) {
        std::vector<Disk> out;
        out.reserve(ctx.removed.size());
        for (const auto& id : ctx.removed) out.push_back(ctx.base->disk(id));
        return out;
    };
}

ModificationPolicy jitter_policy(double radius_lo, double radius_hi) {
    return [=](const AnnulusContext& ctx, Rng& rng) {
        const GasConfig& base = *ctx.base;
        const double rho_min = 1.0 / base.bounds().k_max;
        const double rho_max = 1.0 / base.bounds().k_min;
        std::vector<Disk> out;
        out.reserve(ctx.removed.size());
        for (const auto& id : ctx.removed) {
            const Disk d = base.disk(id);
            double gap = std::numeric_limits<double>::infinity();
            for (const auto& other : base.materialize(d.center, d.radius + 2.0 * base.cell_size()))
                if (!(other == id)) gap = std::min(gap, disk_gap(d, base.disk(other)));
            if (!std::isfinite(gap)) gap = base.bounds().tau_min;
            const double budget = 0.1 * gap;

            Disk j = d;
            double rho = d.radius * rng.uniform(radius_lo, radius_hi);
            rho = std::clamp(rho, std::max(d.radius - budget, rho_min),
                             std::min(d.radius + budget, rho_max));
            j.radius = rho;
            const double ang = rng.uniform(0.0, 2.0 * kPi);
            j.center += Vec2{std::cos(ang), std::sin(ang)} * rng.uniform(0.0, budget);

            // Keep the disk attached to the rewritten annulus; fall back to
            // the original placement (which intersected the open annulus).
            auto attached = [&](const Disk& c) {
                const double rc = distance(c.center, base.origin());
                return rc - c.radius <= ctx.outer && rc + c.radius >= ctx.inner;
            };
            if (!attached(j)) j.center = d.center;
            if (!attached(j)) j.radius = d.radius;
            out.push_back(j);
        }
        return out;
    };
}

BuildResult build_aperiodic(const GasConfig& base, const ScattererId& alpha,
                            const TargetSet& target, const BuildOptions& options,
                            const ModificationPolicy& policy, std::uint64_t seed) {
    if (!base.lattice()) throw std::invalid_argument("build_aperiodic: base must be periodic");
    for (std::size_t k = 1; k < options.eps_schedule.size(); ++k)
        if (!(options.eps_schedule[k] < options.eps_schedule[k - 1]))
            throw std::invalid_argument("build_aperiodic: eps schedule must strictly decrease");

    BuildResult result{base, {}};
    if (options.eps_schedule.empty()) {
        result.log.completed = true;
        return result;
    }

    {
        const double span = base.lattice()->basis[0].norm() + base.lattice()->basis[1].norm();
        const HorizonReport rep = base.estimate_horizon(2.0 * span, 200, seed ^ 0xf1a9ull);
        if (rep.corridor_found) {
            result.log.failure = "base gas has an open corridor; the construction needs a finite horizon";
            return result;
        }
    }

    double R_prev = 0.0;
    for (std::size_t k = 0; k < options.eps_schedule.size(); ++k) {
        const double eps = options.eps_schedule[k];
        const double width =
            options.annulus_width > 0.0 ? options.annulus_width : 3.0 * result.config.bounds().tau_max;
        // Replacement disks may straddle the previous outer edge by up to a
        // diameter; the next annulus must clear their full extent.
        const double floor =
            k == 0 ? 0.0
                   : (R_prev + width + result.config.max_diameter()) * (1.0 + 1e-12) + 1e-9;

        const ChooseRResult cr =
            choose_R(result.config, alpha, target, eps, options.samples_per_round,
                     options.return_cap, seed + 1000003ull * (k + 1), floor);
        if (!cr.ok) {
            result.log.failure = cr.diagnostic;
            return result;
        }

        AnnulusContext ctx;
        ctx.base = &result.config;
        ctx.inner = cr.R;
        ctx.outer = cr.R + width;
        for (const auto& id : result.config.materialize(result.config.origin(),
                                                        ctx.outer + result.config.cell_size())) {
            const Disk d = result.config.disk(id);
            const double rc = distance(d.center, result.config.origin());
            if (rc - d.radius < ctx.outer && rc + d.radius > ctx.inner) ctx.removed.push_back(id);
        }
        Rng policy_rng = Rng::stream(seed, 0x90110c6, k);
        const std::vector<Disk> replacement = policy(ctx, policy_rng);

        BuildRound round;
        round.k = static_cast<int>(k);
        round.R = cr.R;
        round.eps = eps;
        round.complement_estimate = cr.final_estimate.complement.estimate;
        round.complement_hi = cr.final_estimate.complement.hi;
        round.annulus_inner = ctx.inner;
        round.annulus_outer = ctx.outer;
        round.removed_count = static_cast<long>(ctx.removed.size());
        round.added_count = static_cast<long>(replacement.size());

        GasConfig next = result.config;
        try {
            next = result.config.modify_annulus(ctx.inner, width, replacement);
        } catch (const SceneError& err) {
            result.log.failure = err.what();
            result.log.rounds.push_back(round);
            return result;
        }

        // Annulus-local horizon check: flights from the rewritten region must
        // still terminate.
        const double margin = next.bounds().tau_max;
        std::vector<ScattererId> local;
        for (const auto& id : next.materialize(next.origin(), ctx.outer + margin)) {
            const Disk d = next.disk(id);
            const double rc = distance(d.center, next.origin());
            if (rc + d.radius > ctx.inner - margin) local.push_back(id);
        }
        round.local_horizon_samples = options.local_horizon_samples;
        round.local_horizon_ok = true;
        for (long s = 0; s < options.local_horizon_samples && !local.empty(); ++s) {
            Rng rng = Rng::stream(seed, 0x10ca1c8c | (k << 8), static_cast<std::uint64_t>(s));
            const PhasePoint x = measure_sample_one(next, local, rng);
            const Ray ray = phase_to_ray(next.disk(x.alpha), x.r, x.phi);
            if (next.free_flight(ray.origin, ray.direction, {x.alpha, -1.0}).status !=
                FlightStatus::hit) {
                round.local_horizon_ok = false;
                break;
            }
        }
        if (!round.local_horizon_ok) {
            result.log.failure = "annulus-local horizon check failed after rewrite";
            result.log.rounds.push_back(round);
            return result;
        }

        result.config = next;
        result.log.rounds.push_back(round);
        R_prev = cr.R;
    }
    result.log.completed = true;
    return result;
}

RecurrenceFractions recurrence_fraction(const GasConfig& cfg, const TargetSet& target, long n_max,
                                        long n_samples, std::uint64_t seed, int threads) {
    RecurrenceFractions out;
    out.checkpoints = {std::max(1l, n_max / 8), std::max(1l, n_max / 4), std::max(1l, n_max / 2),
                       std::max(1l, n_max)};
    const auto ids = target.sampling_ids();
    std::vector<ReturnRecord> records(static_cast<std::size_t>(n_samples));
    parallel_for(n_samples, threads, [&](long i) {
        Rng rng = Rng::stream(seed, 0x2ec0bbe2, static_cast<std::uint64_t>(i));
        const PhasePoint x0 = measure_sample_one(cfg, ids, rng);
        records[static_cast<std::size_t>(i)] = first_return(cfg, x0, target, n_max);
    });
    std::vector<long> reentry;
    reentry.reserve(static_cast<std::size_t>(n_samples));
    for (const ReturnRecord& rec : records) {
        switch (rec.outcome) {
            case ReturnOutcome::returned: reentry.push_back(rec.n1); break;
            case ReturnOutcome::exceeded_cap:
                reentry.push_back(std::numeric_limits<long>::max());
                break;
            case ReturnOutcome::horizon:
                // The orbit left for good: a genuine non-return.
                ++out.horizon;
                reentry.push_back(std::numeric_limits<long>::max());
                break;
            case ReturnOutcome::singular: ++out.singular; break;
        }
    }
    out.samples_used = static_cast<long>(reentry.size());
    for (long cp : out.checkpoints) {
        long hits = 0;
        for (long r : reentry)
            if (r <= cp) ++hits;
        out.fractions.push_back(wilson_interval(hits, out.samples_used));
    }
    return out;
}

double evaluate_observable(const GasConfig& cfg, Observable f, const PhasePoint& x) {
    switch (f) {
        case Observable::constant_one: return 1.0;
        case Observable::sin_phi: return std::sin(x.phi);
        case Observable::cos_r:
            return std::cos(2.0 * kPi * x.r / cfg.disk(x.alpha).boundary_length());
        case Observable::next_tau: {
            const StepResult s = billiard_map(cfg, x);
            return s.status == StepStatus::horizon ? 0.0 : s.step.tau;
        }
    }
    return 0.0;
}

namespace {

// Averages f over successive return-map iterates of x0 (x0 included).
void return_map_series(const GasConfig& cfg, const TargetSet& target, Observable f,
                       const PhasePoint& x0, long n_returns, bool backward,
                       std::vector<double>& series, bool& truncated) {
    long budget = 1000 * n_returns;
    PhasePoint x = x0;
    series.push_back(evaluate_observable(cfg, f, x));
    while (static_cast<long>(series.size()) < n_returns && budget > 0) {
        PhasePoint cur = x;
        bool found = false;
        while (budget > 0) {
            --budget;
            const StepResult step = backward ? inverse_map(cfg, cur) : billiard_map(cfg, cur);
            if (step.status != StepStatus::ok) {
                truncated = true;
                return;
            }
            cur = step.step.next;
            if (target.contains(cur.alpha)) {
                found = true;
                break;
            }
        }
        if (!found) {
            truncated = true;
            return;
        }
        x = cur;
        series.push_back(evaluate_observable(cfg, f, x));
    }
    if (static_cast<long>(series.size()) < n_returns) truncated = true;
}

}  // namespace

BirkhoffResult birkhoff_average(const GasConfig& cfg, const TargetSet& target, Observable f,
                                const PhasePoint& x0, long n_returns) {
    BirkhoffResult out;
    std::vector<double> fwd, bwd;
    fwd.reserve(static_cast<std::size_t>(n_returns));
    bwd.reserve(static_cast<std::size_t>(n_returns));
    return_map_series(cfg, target, f, x0, n_returns, false, fwd, out.truncated);
    return_map_series(cfg, target, f, x0, n_returns, true, bwd, out.truncated);
    out.forward_count = static_cast<long>(fwd.size());
    out.backward_count = static_cast<long>(bwd.size());
    for (double v : fwd) out.forward += v;
    for (double v : bwd) out.backward += v;
    if (out.forward_count > 0) out.forward /= static_cast<double>(out.forward_count);
    if (out.backward_count > 0) out.backward /= static_cast<double>(out.backward_count);
    out.forward_sem = batch_means_sem(fwd);
    out.backward_sem = batch_means_sem(bwd);
    return out;
}

}  // namespace lgas
