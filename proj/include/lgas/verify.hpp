#pragma once
// The invariant suite behind `lgas verify`: every module contributes checks
// (geometry exactness, disjointness and size bounds, tangent-map identities,
// cone invariance and expansion, reversibility, singularity-curve structure,
// return statistics) run against one scene at a configurable sample scale.

#include <cstdint>
#include <string>
#include <vector>

#include "lgas/report.hpp"
#include "lgas/scene.hpp"

namespace lgas {

struct CheckResult {
    std::string name;
    long samples = 0;
    long failures = 0;
    double worst = 0.0;  // check-specific figure of merit
    bool pass = true;
    std::string note;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    Json to_json() const;
};

struct VerifyOptions {
    long samples = 2000;   // scale for sampled checks
    std::uint64_t seed = 1;
    int threads = 1;
    int curve_resolution = 512;
};

VerifyReport run_verify(const GasConfig& cfg, const VerifyOptions& opts);

}  // namespace lgas
