#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "slotkit/scene.hpp"

namespace slotkit {

// Scene files are canonical JSON: keys sorted, two-space indent, doubles in
// shortest round-trip form, trailing newline. serialize(parse(text)) == text
// for any file produced here.
nlohmann::json scene_to_json(const Scene& scene);
Scene scene_from_json(const nlohmann::json& j);
std::string serialize_scene(const Scene& scene);
Scene parse_scene(const std::string& text);
void save_scene(const std::filesystem::path& path, const Scene& scene);
Scene load_scene(const std::filesystem::path& path);

// Calibration is a flat key/value text file: intrinsics and world pose for
// both cameras plus the end-effector pose and hand-eye transform.
std::string serialize_calibration(const CameraRig& rig);
CameraRig parse_calibration(const std::string& text);
void save_calibration(const std::filesystem::path& path, const CameraRig& rig);
CameraRig load_calibration(const std::filesystem::path& path);

}  // namespace slotkit
