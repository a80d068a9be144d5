#pragma once
// Scene file schema:
//   { "lattice":  {"basis": [[f,f],[f,f]], "motif": [{"center":[f,f],"radius":f}]},
//     "removed":  [[i,j,m], ...],
//     "added":    [{"center":[f,f],"radius":f}, ...],
//     "origin":   [f,f],
//     "declared_bounds": {"k_m":f, "k_M":f, "tau_m":f, "tau_M":f} }
// "lattice" is optional (a finite scene lists only "added"); schema errors
// carry the JSON path of the offending value.

#include <string>

#include "lgas/scene.hpp"

namespace lgas {

struct SceneParseError : SceneError {
    SceneParseError(const std::string& path, const std::string& what)
        : SceneError(what + " at " + path), json_path(path) {}
    std::string json_path;
};

GasConfig parse_scene(const std::string& json_text);
GasConfig load_scene_file(const std::string& path);

/// Serialize a config back into the schema above (bounds are written as
/// declared_bounds; removed/added reflect all accumulated modifications).
std::string scene_to_json(const GasConfig& cfg);

}  // namespace lgas
