#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slotkit/geometry.hpp"
#include "slotkit/image.hpp"

namespace slotkit {

// The nine task categories.
enum class Category {
    Ordinal,
    Size,
    Height,
    Distance,
    Compositional,
    Negation,
    Vague,
    Affordance,
    Knowledge,
};

const std::vector<Category>& all_categories();
std::string to_string(Category c);
Category category_from_string(const std::string& s);

// One tray slot. Grid indices are 1-based: rows counted from the bottom
// (increasing tray-frame y), columns from the left (increasing tray-frame x).
// center sits at the slot opening; the cavity descends `depth` below it and
// the rim rises `rim_height` above the tray base.
struct Slot {
    int row = 1;
    int col = 1;
    WorldPoint center;
    double inner_dx = 0;  // full extent, meters
    double inner_dy = 0;
    double depth = 0;
    double rim_height = 0;
};

inline double slot_area(const Slot& s) { return s.inner_dx * s.inner_dy; }

struct Tray {
    std::vector<Slot> slots;
    RigidTransform base_pose;  // tray frame -> world
    double wall_thickness = 0.008;
    int rows = 0;
    int cols = 0;
};

enum class ObjectRole { PickTarget, Distractor, Reference };

std::string to_string(ObjectRole r);
ObjectRole role_from_string(const std::string& s);

// A box-shaped object standing on the table. pose places the footprint
// center on the support plane; the box spans [0, height] above it.
struct SceneObject {
    std::string name;
    double footprint_x = 0;  // insertion cross-section for the pick target
    double footprint_y = 0;
    double height = 0;
    RigidTransform pose;
    ObjectRole role = ObjectRole::Distractor;
    Rgb color;
};

struct CameraRig {
    CameraModel head;
    CameraModel wrist;
    RigidTransform ee_pose;   // world pose of the end effector
    RigidTransform hand_eye;  // end effector -> wrist camera
};

struct Scene {
    Category category = Category::Ordinal;
    int variant = 1;
    std::uint64_t seed = 0;
    Tray tray;
    std::vector<SceneObject> objects;
    CameraRig rig;
    std::map<std::string, std::vector<std::string>> knowledge;  // name -> attributes
    std::string fingerprint;  // config hash stamped by the generator CLI

    std::string id() const;
    const SceneObject& pick_target() const;
    const SceneObject* find_object(const std::string& name) const;
    std::optional<int> slot_index(int row, int col) const;
    std::set<int> all_slot_indices() const;
};

// Clearance (per side, meters) an object needs inside a slot to count as
// feasible. The constraint resolver and the generator's well-posedness checks
// must use the same value or they would disagree about feasible sets.
inline constexpr double kFeasibilityClearance = 0.002;

// Knob block for the generator; defaults reproduce the standard benchmark
// geometry. Tests shrink the camera to exercise degenerate-scene handling.
struct SceneGenParams {
    int image_width = 640;
    int image_height = 480;
    double focal = 525.0;  // scaled with image_width/640
    double slot_pitch = 0.07;
    double wall_thickness = 0.008;
    double base_thickness = 0.012;
    double max_translation_noise = 0.05;  // per axis, meters
    double max_tray_yaw = 0.26;           // radians
    double pick_cross_section = 0.025;
    double pick_length = 0.15;
    double feasibility_clearance = kFeasibilityClearance;
    int max_attempts = 64;
};

// Deterministic for fixed (category, variant, seed). Throws DegenerateScene
// when the retry budget cannot satisfy the category's well-posedness.
Scene generate_scene(Category category, int variant, std::uint64_t seed,
                     const SceneGenParams& params = {});

// Closed-region membership test: true iff p lies within inner_extent/2 + tol
// of the slot center in the tray plane and within the slot's vertical span.
bool slot_region_contains(const Scene& scene, const Slot& slot, const WorldPoint& p,
                          double tol);

// Indices of slots the object's cross-section (plus clearance on each side)
// fits into; a 90-degree yaw is allowed.
std::set<int> feasible_slots(const Scene& scene, const SceneObject& obj, double clearance);

// Stability on top of feasibility: the cavity must swallow at least half the
// object's length.
bool slot_is_stable(const Slot& slot, const SceneObject& obj);

// Vertical ordering key for height reasoning: world z of the slot opening.
inline double rim_top(const Slot& s) { return s.center.p.z(); }

// Distance-reasoning key: Euclidean distance from the slot center to an
// object's base position. Shared by the generator's ambiguity margins and the
// constraint resolver so both rank slots identically.
inline double reference_distance(const Slot& s, const SceneObject& obj) {
    return (s.center.p - obj.pose.translation).norm();
}

// Throws DegenerateScene describing the first violated invariant.
void validate_scene(const Scene& scene);

// Curated world-knowledge catalog: object name -> semantic attributes.
const std::map<std::string, std::vector<std::string>>& knowledge_catalog();

// Color of an object by catalog name, or a default distractor color.
Rgb object_color(const std::string& name);

RigidTransform look_at(const Vec3& eye, const Vec3& target, const Vec3& up = Vec3(0, 0, 1));

}  // namespace slotkit
