#include "lgas/scene_json.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lgas {

namespace {

using Json = nlohmann::json;

double number_at(const Json& j, const std::string& path) {
    if (!j.is_number()) throw SceneParseError(path, "expected a number");
    return j.get<double>();
}

Vec2 vec2_at(const Json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) throw SceneParseError(path, "expected [x, y]");
    return {number_at(j[0], path + "[0]"), number_at(j[1], path + "[1]")};
}

Disk disk_at(const Json& j, const std::string& path) {
    if (!j.is_object()) throw SceneParseError(path, "expected {\"center\", \"radius\"}");
    if (!j.contains("center")) throw SceneParseError(path + ".center", "missing field");
    if (!j.contains("radius")) throw SceneParseError(path + ".radius", "missing field");
    Disk d;
    d.center = vec2_at(j["center"], path + ".center");
    d.radius = number_at(j["radius"], path + ".radius");
    if (!(d.radius > 0.0)) throw SceneParseError(path + ".radius", "radius must be positive");
    return d;
}

}  // namespace

GasConfig parse_scene(const std::string& json_text) {
    Json root = Json::parse(json_text, nullptr, false);
    if (root.is_discarded()) throw SceneParseError("$", "malformed JSON");
    if (!root.is_object()) throw SceneParseError("$", "expected a JSON object");

    std::optional<Bounds> declared;
    if (root.contains("declared_bounds")) {
        const Json& b = root["declared_bounds"];
        if (!b.is_object()) throw SceneParseError("$.declared_bounds", "expected an object");
        Bounds bounds;
        bounds.provenance = BoundsProvenance::declared;
        for (const char* key : {"k_m", "k_M", "tau_m", "tau_M"})
            if (!b.contains(key))
                throw SceneParseError(std::string("$.declared_bounds.") + key, "missing field");
        bounds.k_min = number_at(b["k_m"], "$.declared_bounds.k_m");
        bounds.k_max = number_at(b["k_M"], "$.declared_bounds.k_M");
        bounds.tau_min = number_at(b["tau_m"], "$.declared_bounds.tau_m");
        bounds.tau_max = number_at(b["tau_M"], "$.declared_bounds.tau_M");
        if (!(bounds.k_min > 0.0) || bounds.k_max < bounds.k_min)
            throw SceneParseError("$.declared_bounds.k_m", "need 0 < k_m <= k_M");
        if (bounds.tau_min < 0.0 || bounds.tau_max < bounds.tau_min)
            throw SceneParseError("$.declared_bounds.tau_m", "need 0 <= tau_m <= tau_M");
        declared = bounds;
    }

    Vec2 origin{0.0, 0.0};
    if (root.contains("origin")) origin = vec2_at(root["origin"], "$.origin");

    std::vector<Disk> added;
    if (root.contains("added")) {
        const Json& a = root["added"];
        if (!a.is_array()) throw SceneParseError("$.added", "expected an array");
        for (std::size_t i = 0; i < a.size(); ++i)
            added.push_back(disk_at(a[i], "$.added[" + std::to_string(i) + "]"));
    }

    if (!root.contains("lattice")) {
        if (root.contains("removed") && !root["removed"].empty())
            throw SceneParseError("$.removed", "removal needs a lattice");
        if (added.empty()) throw SceneParseError("$", "scene has no scatterers");
        return GasConfig::finite_scene(std::move(added), origin, declared);
    }

    const Json& lat = root["lattice"];
    if (!lat.is_object()) throw SceneParseError("$.lattice", "expected an object");
    if (!lat.contains("basis")) throw SceneParseError("$.lattice.basis", "missing field");
    if (!lat.contains("motif")) throw SceneParseError("$.lattice.motif", "missing field");
    const Json& basis = lat["basis"];
    if (!basis.is_array() || basis.size() != 2)
        throw SceneParseError("$.lattice.basis", "expected two basis vectors");

    LatticeSpec spec;
    spec.basis[0] = vec2_at(basis[0], "$.lattice.basis[0]");
    spec.basis[1] = vec2_at(basis[1], "$.lattice.basis[1]");
    const Json& motif = lat["motif"];
    if (!motif.is_array() || motif.empty())
        throw SceneParseError("$.lattice.motif", "expected a non-empty array");
    for (std::size_t i = 0; i < motif.size(); ++i)
        spec.motif.push_back(disk_at(motif[i], "$.lattice.motif[" + std::to_string(i) + "]"));

    std::vector<ScattererId> removed;
    if (root.contains("removed")) {
        const Json& rem = root["removed"];
        if (!rem.is_array()) throw SceneParseError("$.removed", "expected an array");
        for (std::size_t i = 0; i < rem.size(); ++i) {
            const std::string path = "$.removed[" + std::to_string(i) + "]";
            const Json& e = rem[i];
            if (!e.is_array() || e.size() != 3)
                throw SceneParseError(path, "expected [cell_i, cell_j, motif_index]");
            for (int k = 0; k < 3; ++k)
                if (!e[k].is_number_integer())
                    throw SceneParseError(path + "[" + std::to_string(k) + "]",
                                          "expected an integer");
            ScattererId id;
            id.cell_i = e[0].get<std::int32_t>();
            id.cell_j = e[1].get<std::int32_t>();
            id.index = e[2].get<std::int32_t>();
            if (id.index < 0 || id.index >= static_cast<std::int32_t>(spec.motif.size()))
                throw SceneParseError(path + "[2]", "motif index out of range");
            removed.push_back(id);
        }
    }

    GasConfig cfg = GasConfig::build_periodic(spec, origin, declared);
    if (removed.empty() && added.empty()) return cfg;
    return cfg.finite_modification(removed, added);
}

GasConfig load_scene_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SceneError("cannot open scene file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scene(buf.str());
}

std::string scene_to_json(const GasConfig& cfg) {
    nlohmann::ordered_json root;
    if (cfg.lattice()) {
        const LatticeSpec& lat = *cfg.lattice();
        nlohmann::ordered_json j;
        j["basis"] = {{lat.basis[0].x, lat.basis[0].y}, {lat.basis[1].x, lat.basis[1].y}};
        j["motif"] = nlohmann::ordered_json::array();
        for (const Disk& d : lat.motif)
            j["motif"].push_back({{"center", {d.center.x, d.center.y}}, {"radius", d.radius}});
        root["lattice"] = j;
    }
    if (!cfg.removed().empty()) {
        root["removed"] = nlohmann::ordered_json::array();
        for (const auto& id : cfg.removed())
            root["removed"].push_back({id.cell_i, id.cell_j, id.index});
    }
    if (!cfg.added().empty()) {
        root["added"] = nlohmann::ordered_json::array();
        for (const Disk& d : cfg.added())
            root["added"].push_back({{"center", {d.center.x, d.center.y}}, {"radius", d.radius}});
    }
    root["origin"] = {cfg.origin().x, cfg.origin().y};
    root["declared_bounds"] = {{"k_m", cfg.bounds().k_min},
                               {"k_M", cfg.bounds().k_max},
                               {"tau_m", cfg.bounds().tau_min},
                               {"tau_M", cfg.bounds().tau_max}};
    return root.dump(2) + "\n";
}

}  // namespace lgas
