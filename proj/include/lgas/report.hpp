#pragma once
// Report and trajectory file formats. Reports are JSON with insertion-ordered
// keys and no timestamps, so identical runs produce byte-identical files.
// Trajectories are CSV with 17-significant-digit floats (lossless round-trip).

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "lgas/dynamics.hpp"
#include "lgas/scene.hpp"

namespace lgas {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "lgas 0.1.0";

/// Shortest-width formatting with 17 significant digits (%.17g).
std::string format_g17(double v);

std::uint64_t fnv1a64(const std::string& text);
std::string hex64(std::uint64_t v);

/// Report envelope: command, version, seed, spec hash, parameters, results.
Json make_report(const std::string& command, std::uint64_t seed, const std::string& scene_text,
                 const Json& params);

void write_text_file(const std::string& path, const std::string& text);

struct TrajectoryRow {
    long step = 0;
    ScattererId alpha;
    double r = 0.0;
    double phi = 0.0;
    double x = 0.0;
    double y = 0.0;
    double tau = 0.0;
    double grazing_margin = 0.0;
};

/// Columns: step,alpha,r,phi,x,y,tau,grazing_margin. LF newlines, header row.
std::string trajectory_csv(const std::vector<TrajectoryRow>& rows);
std::vector<TrajectoryRow> parse_trajectory_csv(const std::string& text);

/// Curve polyline export: alpha,kind,beta,branch,curve_index,r,phi.
struct CurveCsvRow {
    std::string alpha, kind, beta, branch;
    long curve_index = 0;
    double r = 0.0;
    double phi = 0.0;
};
std::string curves_csv(const std::vector<CurveCsvRow>& rows);

}  // namespace lgas
