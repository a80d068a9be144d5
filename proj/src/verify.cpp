#include "lgas/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "lgas/dynamics.hpp"
#include "lgas/recurrence.hpp"
#include "lgas/singularity.hpp"

namespace lgas {

namespace {

constexpr double kPi = std::numbers::pi;

// Independent finite-difference probe of the billiard map, kept separate from
// the analytic tangent map it cross-checks.
bool fd_tangent(const GasConfig& cfg, const PhasePoint& x, const CollisionStep& base, double h,
                Mat2& out) {
    const double L1 = cfg.disk(base.next.alpha).boundary_length();
    CollisionStep probes[4];
    const double dr[4] = {h, -h, 0.0, 0.0};
    const double dp[4] = {0.0, 0.0, h, -h};
    for (int k = 0; k < 4; ++k) {
        PhasePoint p{x.alpha, x.r + dr[k], x.phi + dp[k]};
        if (!(p.phi > 0.0 && p.phi < kPi)) return false;
        const StepResult s = billiard_map(cfg, p);
        if (s.status != StepStatus::ok) return false;
        if (!(s.step.next.alpha == base.next.alpha)) return false;
        if (std::fabs(s.step.tau - base.tau) > 10.0 * h) return false;
        probes[k] = s.step;
    }
    out.a11 = arclength_diff(probes[0].next.r, probes[1].next.r, L1) / (2.0 * h);
    out.a21 = (probes[0].next.phi - probes[1].next.phi) / (2.0 * h);
    out.a12 = arclength_diff(probes[2].next.r, probes[3].next.r, L1) / (2.0 * h);
    out.a22 = (probes[2].next.phi - probes[3].next.phi) / (2.0 * h);
    return true;
}

double frob(const Mat2& m) {
    return std::sqrt(m.a11 * m.a11 + m.a12 * m.a12 + m.a21 * m.a21 + m.a22 * m.a22);
}

// Scatterers the sampled checks draw from: a patch around the origin plus a
// band through every rewritten annulus.
std::vector<ScattererId> sampling_ids(const GasConfig& cfg) {
    std::set<ScattererId> ids;
    for (const auto& id : cfg.materialize(cfg.origin(), 4.0 * cfg.cell_size())) ids.insert(id);
    for (const auto& ann : cfg.modified_annuli()) {
        const auto ring = cfg.materialize(cfg.origin(), ann.outer + cfg.cell_size());
        int taken = 0;
        for (const auto& id : ring) {
            const Disk d = cfg.disk(id);
            const double rc = distance(d.center, cfg.origin());
            if (rc + d.radius > ann.inner - cfg.cell_size() && taken < 64) {
                ids.insert(id);
                ++taken;
            }
        }
    }
    if (ids.empty()) {
        for (const auto& id : cfg.materialize(cfg.origin(), 100.0 * cfg.cell_size())) {
            ids.insert(id);
            if (ids.size() >= 16) break;
        }
    }
    return {ids.begin(), ids.end()};
}

}  // namespace

Json VerifyReport::to_json() const {
    Json j = Json::array();
    for (const auto& c : checks) {
        Json e;
        e["name"] = c.name;
        e["samples"] = c.samples;
        e["failures"] = c.failures;
        e["worst"] = c.worst;
        e["pass"] = c.pass;
        if (!c.note.empty()) e["note"] = c.note;
        j.push_back(e);
    }
    return j;
}

VerifyReport run_verify(const GasConfig& cfg, const VerifyOptions& opts) {
    VerifyReport report;
    const auto ids = sampling_ids(cfg);
    const long n = opts.samples;

    auto add = [&](CheckResult c) { report.checks.push_back(std::move(c)); };

    {  // boundary frames: on-circle, orthonormal, periodic wrap
        CheckResult c;
        c.name = "geometry.frames";
        for (long i = 0; i < n; ++i) {
            Rng rng = Rng::stream(opts.seed, 0x6e0'1, static_cast<std::uint64_t>(i));
            const Disk d = cfg.disk(ids[rng.below(ids.size())]);
            const double r = rng.uniform(-2.0 * d.boundary_length(), 2.0 * d.boundary_length());
            const BoundaryFrame f = frame_at(d, r);
            const double on = std::fabs(distance(f.position, d.center) - d.radius);
            const double orth = std::fabs(f.clockwise_tangent.dot(f.outward_normal));
            const BoundaryFrame g = frame_at(d, r + d.boundary_length());
            const double wrap = distance(f.position, g.position);
            const double worst = std::max({on, orth, wrap});
            c.worst = std::max(c.worst, worst);
            if (worst > 1e-12 * std::max(1.0, d.radius)) ++c.failures;
            ++c.samples;
        }
        c.pass = c.failures == 0;
        add(c);
    }

    {  // phase <-> ray round trip
        CheckResult c;
        c.name = "geometry.phase_ray_roundtrip";
        for (long i = 0; i < n; ++i) {
            Rng rng = Rng::stream(opts.seed, 0x6e0'2, static_cast<std::uint64_t>(i));
            const Disk d = cfg.disk(ids[rng.below(ids.size())]);
            const double r = rng.uniform(0.0, d.boundary_length());
            const double phi = rng.uniform(1e-6, kPi - 1e-6);
            const Ray ray = phase_to_ray(d, r, phi);
            const BoundaryFrame f = frame_at(d, r);
            const Vec2 in =
                ray.direction - 2.0 * ray.direction.dot(f.outward_normal) * f.outward_normal;
            const LineElement e = ray_to_phase(d, r, in);
            const double err = std::max(
                std::fabs(arclength_diff(e.r, f.r, d.boundary_length())), std::fabs(e.phi - phi));
            c.worst = std::max(c.worst, err);
            if (err > 1e-10) ++c.failures;
            ++c.samples;
        }
        c.pass = c.failures == 0;
        add(c);
    }

    {  // materialization determinism and pairwise disjointness
        CheckResult c;
        c.name = "scene.disjoint_and_deterministic";
        const double radius = 6.0 * cfg.cell_size();
        const auto a = cfg.materialize(cfg.origin(), radius);
        const auto b = cfg.materialize(cfg.origin(), radius);
        c.samples = static_cast<long>(a.size());
        if (a != b) ++c.failures;
        double min_gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = i + 1; j < a.size(); ++j)
                min_gap = std::min(min_gap, disk_gap(cfg.disk(a[i]), cfg.disk(a[j])));
        c.worst = std::isfinite(min_gap) ? min_gap : 0.0;
        if (!a.empty() && std::isfinite(min_gap) && min_gap <= 0.0) ++c.failures;
        c.pass = c.failures == 0;
        c.note = "worst = smallest pairwise gap";
        add(c);
    }

    {  // scatterer sizes against the curvature bounds
        CheckResult c;
        c.name = "scene.size_bounds";
        const Bounds& b = cfg.bounds();
        for (const auto& id : ids) {
            const Disk d = cfg.disk(id);
            ++c.samples;
            const bool ok = 2.0 * d.radius >= 2.0 / b.k_max - 1e-12 &&
                            2.0 * d.radius <= 2.0 / b.k_min + 1e-12 &&
                            d.boundary_length() >= 2.0 * kPi / b.k_max - 1e-12 &&
                            d.boundary_length() <= 2.0 * kPi / b.k_min + 1e-12;
            if (!ok) ++c.failures;
        }
        c.pass = c.failures == 0;
        add(c);
    }

    if (cfg.lattice() && cfg.removed().empty() && cfg.added().empty()) {
        CheckResult c;
        c.name = "scene.translation_equivariance";
        const Vec2 b1 = cfg.lattice()->basis[0];
        for (long i = 0; i < n / 4; ++i) {
            Rng rng = Rng::stream(opts.seed, 0x6e0'3, static_cast<std::uint64_t>(i));
            const PhasePoint x = measure_sample_one(cfg, ids, rng);
            const Ray ray = phase_to_ray(cfg.disk(x.alpha), x.r, x.phi);
            const auto f0 = cfg.free_flight(ray.origin, ray.direction, {x.alpha, -1.0});
            ScattererId shifted = x.alpha;
            shifted.cell_i += 1;
            const auto f1 = cfg.free_flight(ray.origin + b1, ray.direction, {shifted, -1.0});
            ++c.samples;
            if (f0.status != f1.status) {
                ++c.failures;
                continue;
            }
            if (f0.status != FlightStatus::hit) continue;
            const double err = std::fabs(f0.hit.distance - f1.hit.distance);
            c.worst = std::max(c.worst, err);
            if (err > 1e-9 || f1.scatterer.cell_i != f0.scatterer.cell_i + 1) ++c.failures;
        }
        c.pass = c.failures == 0;
        add(c);
    }

    {  // exact tangent map vs finite differences, and det DT = sin/sin
        CheckResult fd;
        fd.name = "dynamics.fd_jacobian";
        CheckResult det;
        det.name = "dynamics.det_jacobian";
        CheckResult cone;
        cone.name = "dynamics.cone_invariance";
        CheckResult exp;
        exp.name = "dynamics.uniform_expansion";
        const double lambda = cfg.expansion_constant();
        long i = 0;
        while (fd.samples < n && i < 20 * n) {
            Rng rng = Rng::stream(opts.seed, 0x6e0'4, static_cast<std::uint64_t>(i++));
            const PhasePoint x = measure_sample_one(cfg, ids, rng);
            const JacobianResult j = jacobian(cfg, x);
            if (j.status != StepStatus::ok) continue;

            const double expected = std::sin(x.phi) / std::sin(j.step.next.phi);
            const double det_err = std::fabs(j.matrix.det() - expected) / std::fabs(expected);
            det.worst = std::max(det.worst, det_err);
            ++det.samples;
            if (det_err > 1e-9) ++det.failures;

            const double theta = rng.uniform(0.5 * kPi, kPi);
            const TangentVec u{std::cos(theta), std::sin(theta)};
            const TangentVec v = j.matrix.apply(u);
            ++cone.samples;
            if (!v.in_unstable_cone()) ++cone.failures;
            const double growth = increasing_norm(j.step.next.phi, v) / increasing_norm(x.phi, u);
            exp.worst = std::min(exp.worst == 0.0 ? growth : exp.worst, growth);
            ++exp.samples;
            if (growth < lambda - 1e-12) ++exp.failures;

            Mat2 fd_mat;
            if (!fd_tangent(cfg, x, j.step, 1e-6, fd_mat)) continue;
            Mat2 diff{fd_mat.a11 - j.matrix.a11, fd_mat.a12 - j.matrix.a12,
                      fd_mat.a21 - j.matrix.a21, fd_mat.a22 - j.matrix.a22};
            const double rel = frob(diff) / frob(j.matrix);
            fd.worst = std::max(fd.worst, rel);
            ++fd.samples;
            if (rel > 1e-5) ++fd.failures;
        }
        fd.pass = fd.failures == 0 && fd.samples >= n / 2;
        det.pass = det.failures == 0;
        cone.pass = cone.failures == 0;
        exp.pass = exp.failures == 0;
        exp.note = "worst = smallest per-step expansion factor";
        add(fd);
        add(det);
        add(cone);
        add(exp);
    }

    {  // reversibility
        CheckResult c;
        c.name = "dynamics.reversibility";
        long i = 0;
        while (c.samples < n / 2 && i < 10 * n) {
            Rng rng = Rng::stream(opts.seed, 0x6e0'5, static_cast<std::uint64_t>(i++));
            const PhasePoint x = measure_sample_one(cfg, ids, rng);
            const StepResult fwd = billiard_map(cfg, x);
            if (fwd.status != StepStatus::ok) continue;
            const StepResult back = inverse_map(cfg, fwd.step.next);
            if (back.status != StepStatus::ok) continue;
            ++c.samples;
            if (!(back.step.next.alpha == x.alpha)) {
                ++c.failures;
                continue;
            }
            const double L = cfg.disk(x.alpha).boundary_length();
            const double err = std::max(std::fabs(arclength_diff(back.step.next.r, x.r, L)),
                                        std::fabs(back.step.next.phi - x.phi));
            c.worst = std::max(c.worst, err);
            if (err > 1e-9) ++c.failures;
        }
        c.pass = c.failures == 0;
        add(c);
    }

    if (cfg.bounds().provenance == BoundsProvenance::declared) {
        CheckResult c;
        c.name = "dynamics.tau_within_bounds";
        long i = 0;
        while (c.samples < n && i < 10 * n) {
            Rng rng = Rng::stream(opts.seed, 0x6e0'6, static_cast<std::uint64_t>(i++));
            const PhasePoint x = measure_sample_one(cfg, ids, rng);
            const StepResult s = billiard_map(cfg, x);
            if (s.status != StepStatus::ok) continue;
            ++c.samples;
            if (s.step.tau < cfg.bounds().tau_min - 1e-9 ||
                s.step.tau > cfg.bounds().tau_max + 1e-9)
                ++c.failures;
            c.worst = std::max(c.worst, s.step.tau);
        }
        c.pass = c.failures == 0;
        c.note = "worst = largest observed free path";
        add(c);
    }

    {  // cone collapse along orbits
        CheckResult c;
        c.name = "dynamics.cone_collapse";
        long done = 0, i = 0;
        while (done < 5 && i < 200) {
            Rng rng = Rng::stream(opts.seed, 0x6e0'7, static_cast<std::uint64_t>(i++));
            PhasePoint x = measure_sample_one(cfg, ids, rng);
            TangentVec a{1.0, 0.0}, b{0.0, -1.0};
            double angle = kPi / 2.0;
            bool ok = true;
            for (int k = 0; k < 30 && ok; ++k) {
                const JacobianResult j = jacobian(cfg, x);
                if (j.status != StepStatus::ok) {
                    ok = false;
                    break;
                }
                a = j.matrix.apply(a);
                b = j.matrix.apply(b);
                const double na = std::sqrt(a.dr * a.dr + a.dphi * a.dphi);
                const double nb = std::sqrt(b.dr * b.dr + b.dphi * b.dphi);
                a = {a.dr / na, a.dphi / na};
                b = {b.dr / nb, b.dphi / nb};
                angle = std::asin(std::min(1.0, std::fabs(a.dr * b.dphi - a.dphi * b.dr)));
                x = j.step.next;
            }
            if (!ok) continue;
            ++done;
            ++c.samples;
            c.worst = std::max(c.worst, angle);
            if (angle >= 1e-6) ++c.failures;
        }
        // A finite scene may simply have no orbit of length 30.
        c.pass = c.failures == 0 && (c.samples > 0 || !cfg.lattice());
        if (c.samples == 0) c.note = "no 30-step orbit found";
        add(c);
    }

    {  // singularity curves: monotone, grazing, count
        CheckResult mono;
        mono.name = "singularity.monotone_curves";
        CheckResult graze;
        graze.name = "singularity.grazing_reproduction";
        CheckResult count;
        count.name = "singularity.curve_count";
        const ScattererId alpha = ids[0];
        const auto plus = singularity_curves(cfg, alpha, CurveKind::sigma_plus,
                                             opts.curve_resolution);
        const auto minus = singularity_curves(cfg, alpha, CurveKind::sigma_minus,
                                              opts.curve_resolution);
        for (const auto& c : plus) {
            ++mono.samples;
            for (std::size_t i = 1; i < c.samples.size(); ++i)
                if (!(c.samples[i].phi > c.samples[i - 1].phi)) {
                    ++mono.failures;
                    break;
                }
        }
        for (const auto& c : minus) {
            ++mono.samples;
            for (std::size_t i = 1; i < c.samples.size(); ++i)
                if (!(c.samples[i].phi < c.samples[i - 1].phi)) {
                    ++mono.failures;
                    break;
                }
        }
        mono.pass = mono.failures == 0;

        for (const auto& c : plus) {
            for (std::size_t i = 0; i < c.samples.size(); i += 32) {
                double margin = 1.0;
                for (double nudge : {0.0, 1e-13, -1e-13}) {
                    PhasePoint x{c.base, c.samples[i].r, c.samples[i].phi + nudge};
                    const StepResult s = billiard_map(cfg, x);
                    if (s.status == StepStatus::horizon) continue;
                    if (s.step.next.alpha == c.neighbor || s.status == StepStatus::singular)
                        margin = std::min(margin, s.step.grazing_margin);
                }
                ++graze.samples;
                graze.worst = std::max(graze.worst, margin);
                if (margin >= 1e-6) ++graze.failures;
            }
        }
        graze.pass = graze.failures == 0;

        count.samples = static_cast<long>(plus.size() + minus.size());
        const int visible = count_visible_neighbors(plus);
        count.worst = visible;
        count.note = "worst = visible neighbors";
        if (plus.size() != 2 * static_cast<std::size_t>(visible)) ++count.failures;
        if (minus.size() != plus.size()) ++count.failures;
        count.pass = count.failures == 0;
        add(mono);
        add(graze);
        add(count);
    }

    {  // A(R) nesting and recurrence-fraction monotonicity
        CheckResult nest;
        nest.name = "recurrence.a_nesting";
        const ScattererId alpha = ids[0];
        const TargetSet target = TargetSet::single(alpha);
        const ScattererId sample_ids[] = {alpha};
        const double R1 = 5.0 * cfg.bounds().tau_max, R2 = 2.0 * R1;
        for (long i = 0; i < n / 4; ++i) {
            Rng rng = Rng::stream(opts.seed, 0x6e0'8, static_cast<std::uint64_t>(i));
            const PhasePoint x0 = measure_sample_one(cfg, sample_ids, rng);
            const ReturnRecord rec = first_return(cfg, x0, target, 500);
            ++nest.samples;
            if (rec.outcome != ReturnOutcome::returned) continue;
            const bool in1 = rec.excursion <= R1, in2 = rec.excursion <= R2;
            if (in1 && !in2) ++nest.failures;
        }
        nest.pass = nest.failures == 0;
        add(nest);

        CheckResult mono;
        mono.name = "recurrence.fraction_monotone";
        const auto rf = recurrence_fraction(cfg, target, 400, n / 4, opts.seed, opts.threads);
        mono.samples = rf.samples_used;
        for (std::size_t i = 1; i < rf.fractions.size(); ++i)
            if (rf.fractions[i].estimate < rf.fractions[i - 1].estimate) ++mono.failures;
        mono.worst = rf.fractions.empty() ? 0.0 : rf.fractions.back().estimate;
        mono.note = "worst = fraction at the last checkpoint";
        mono.pass = mono.failures == 0;
        add(mono);
    }

    return report;
}

}  // namespace lgas
