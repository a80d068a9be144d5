#pragma once
// Shared fixtures and independent oracles for the test suites.

#include <cmath>
#include <optional>

#include "lgas/dynamics.hpp"
#include "lgas/scene.hpp"

namespace lgas::testing {

// Two unit disks at (0,0) and (4,0); lambda = 1 + k_m tau_m = 3.
inline GasConfig two_disk_scene() {
    Bounds b{1.0, 1.0, 2.0, 6.0, BoundsProvenance::declared};
    return GasConfig::finite_scene({{{0.0, 0.0}, 1.0}, {{4.0, 0.0}, 1.0}}, {0.0, 0.0}, b);
}

// Triangular lattice, spacing 2.2, unit disks: finite horizon, min gap 0.2.
// Declared bounds leave room for the jittered modifications the recurrence
// experiments make (radii within [2/3, 4/3], gaps shrinking to >= 0.12).
inline GasConfig triangular_scene() {
    LatticeSpec spec;
    spec.basis[0] = {2.2, 0.0};
    spec.basis[1] = {1.1, 1.1 * std::sqrt(3.0)};
    spec.motif = {{{0.0, 0.0}, 1.0}};
    Bounds b{0.75, 1.5, 0.1, 6.0, BoundsProvenance::declared};
    return GasConfig::build_periodic(spec, {0.0, 0.0}, b);
}

// Same scatterer set as triangular_scene but described with a doubled cell,
// so the two motif classes split the disks into two interleaved families.
inline GasConfig triangular_two_class_scene() {
    LatticeSpec spec;
    spec.basis[0] = {4.4, 0.0};
    spec.basis[1] = {1.1, 1.1 * std::sqrt(3.0)};
    spec.motif = {{{0.0, 0.0}, 1.0}, {{2.2, 0.0}, 1.0}};
    Bounds b{0.75, 1.5, 0.1, 6.0, BoundsProvenance::declared};
    return GasConfig::build_periodic(spec, {0.0, 0.0}, b);
}

// Square lattice spacing 4 with unit disks: open corridors along the axes.
inline GasConfig square_scene() {
    LatticeSpec spec;
    spec.basis[0] = {4.0, 0.0};
    spec.basis[1] = {0.0, 4.0};
    spec.motif = {{{0.0, 0.0}, 1.0}};
    Bounds b{1.0, 1.0, 2.0, 100.0, BoundsProvenance::declared};
    return GasConfig::build_periodic(spec, {0.0, 0.0}, b);
}

// Triangular lattice with the origin disk replaced by two smaller disks.
inline GasConfig modified_scene() {
    LatticeSpec spec;
    spec.basis[0] = {2.2, 0.0};
    spec.basis[1] = {1.1, 1.1 * std::sqrt(3.0)};
    spec.motif = {{{0.0, 0.0}, 1.0}};
    Bounds b{0.75, 2.3, 0.05, 6.0, BoundsProvenance::declared};
    GasConfig base = GasConfig::build_periodic(spec, {0.0, 0.0}, b);
    return base.finite_modification({{0, 0, 0, false}},
                                    {{{0.0, 0.5}, 0.45}, {{0.0, -0.5}, 0.45}});
}

// Central finite differences of the billiard map in (r, phi); rejects stencils
// that land on a different scatterer or show a free-path jump > 10 * step
// (both signal a singularity crossing).
inline std::optional<Mat2> fd_jacobian(const GasConfig& cfg, const PhasePoint& x,
                                       double h = 1e-6) {
    const StepResult base = billiard_map(cfg, x);
    if (base.status != StepStatus::ok) return std::nullopt;
    const double L1 = cfg.disk(base.step.next.alpha).boundary_length();

    auto probe = [&](double dr, double dphi) -> std::optional<CollisionStep> {
        PhasePoint p{x.alpha, x.r + dr, x.phi + dphi};
        if (!(p.phi > 0.0 && p.phi < 3.14159265358979)) return std::nullopt;
        const StepResult s = billiard_map(cfg, p);
        if (s.status != StepStatus::ok) return std::nullopt;
        if (!(s.step.next.alpha == base.step.next.alpha)) return std::nullopt;
        if (std::fabs(s.step.tau - base.step.tau) > 10.0 * h) return std::nullopt;
        return s.step;
    };

    const auto rp = probe(h, 0.0), rm = probe(-h, 0.0);
    const auto pp = probe(0.0, h), pm = probe(0.0, -h);
    if (!rp || !rm || !pp || !pm) return std::nullopt;

    Mat2 m;
    m.a11 = arclength_diff(rp->next.r, rm->next.r, L1) / (2.0 * h);
    m.a21 = (rp->next.phi - rm->next.phi) / (2.0 * h);
    m.a12 = arclength_diff(pp->next.r, pm->next.r, L1) / (2.0 * h);
    m.a22 = (pp->next.phi - pm->next.phi) / (2.0 * h);
    return m;
}

inline double frobenius(const Mat2& m) {
    return std::sqrt(m.a11 * m.a11 + m.a12 * m.a12 + m.a21 * m.a21 + m.a22 * m.a22);
}

inline double matrix_rel_error(const Mat2& a, const Mat2& b) {
    Mat2 d{a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
    return frobenius(d) / frobenius(b);
}

}  // namespace lgas::testing
