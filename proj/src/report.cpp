#include "lgas/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lgas {

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

Json make_report(const std::string& command, std::uint64_t seed, const std::string& scene_text,
                 const Json& params) {
    Json r;
    r["command"] = command;
    r["version"] = kVersion;
    r["seed"] = seed;
    r["spec_hash"] = hex64(fnv1a64(scene_text + "|" + params.dump()));
    r["params"] = params;
    r["results"] = Json::object();
    return r;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string trajectory_csv(const std::vector<TrajectoryRow>& rows) {
    std::ostringstream os;
    os << "step,alpha,r,phi,x,y,tau,grazing_margin\n";
    for (const auto& row : rows) {
        os << row.step << ',' << to_string(row.alpha) << ',' << format_g17(row.r) << ','
           << format_g17(row.phi) << ',' << format_g17(row.x) << ',' << format_g17(row.y) << ','
           << format_g17(row.tau) << ',' << format_g17(row.grazing_margin) << '\n';
    }
    return os.str();
}

std::vector<TrajectoryRow> parse_trajectory_csv(const std::string& text) {
    std::vector<TrajectoryRow> rows;
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("trajectory csv: empty file");
    if (line != "step,alpha,r,phi,x,y,tau,grazing_margin")
        throw std::runtime_error("trajectory csv: unexpected header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        TrajectoryRow row;
        auto next = [&]() {
            if (!std::getline(ls, field, ',')) throw std::runtime_error("trajectory csv: short row");
            return field;
        };
        row.step = std::strtol(next().c_str(), nullptr, 10);
        auto id = parse_scatterer_id(next());
        if (!id) throw std::runtime_error("trajectory csv: bad scatterer id");
        row.alpha = *id;
        row.r = std::strtod(next().c_str(), nullptr);
        row.phi = std::strtod(next().c_str(), nullptr);
        row.x = std::strtod(next().c_str(), nullptr);
        row.y = std::strtod(next().c_str(), nullptr);
        row.tau = std::strtod(next().c_str(), nullptr);
        row.grazing_margin = std::strtod(next().c_str(), nullptr);
        rows.push_back(row);
    }
    return rows;
}

std::string curves_csv(const std::vector<CurveCsvRow>& rows) {
    std::ostringstream os;
    os << "alpha,kind,beta,branch,curve_index,r,phi\n";
    for (const auto& row : rows)
        os << row.alpha << ',' << row.kind << ',' << row.beta << ',' << row.branch << ','
           << row.curve_index << ',' << format_g17(row.r) << ',' << format_g17(row.phi) << '\n';
    return os.str();
}

}  // namespace lgas
