#include "slotkit/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "slotkit/errors.hpp"
#include "slotkit/rng.hpp"

namespace slotkit {

namespace {

struct GridShape {
    int rows;
    int cols;
};

// Tray shapes cycled by variant number.
constexpr GridShape kGrids[] = {{3, 3}, {2, 4}, {3, 4}, {2, 3}, {4, 3}};
constexpr int kGridCount = 5;

struct CatalogEntry {
    std::vector<std::string> attributes;
    double footprint_x;
    double footprint_y;
    double height;
    Rgb color;
};

// Reference-object catalog. Colors stay clear of the marker detector's
// default hue window (blue at full saturation).
const std::map<std::string, CatalogEntry>& catalog() {
    static const std::map<std::string, CatalogEntry> table = {
        {"apple", {{"fruit", "perishable"}, 0.07, 0.07, 0.07, {190, 45, 40}}},
        {"banana", {{"fruit", "elongated"}, 0.16, 0.04, 0.04, {225, 200, 60}}},
        {"battery", {{"electronic", "hazardous"}, 0.03, 0.03, 0.05, {105, 105, 115}}},
        {"candle", {{"flammable", "waxy"}, 0.05, 0.05, 0.10, {240, 230, 200}}},
        {"glass-jar", {{"fragile", "transparent", "recyclable"}, 0.08, 0.08, 0.11, {160, 205, 175}}},
        {"mug", {{"ceramic", "drinkware"}, 0.09, 0.07, 0.09, {200, 130, 60}}},
        {"screwdriver", {{"tool", "pointed"}, 0.18, 0.03, 0.03, {235, 175, 40}}},
        {"soda-can", {{"beverage", "recyclable"}, 0.06, 0.06, 0.12, {200, 40, 90}}},
        {"sponge", {{"cleaning", "absorbent"}, 0.10, 0.07, 0.03, {230, 120, 160}}},
        {"wrench", {{"tool", "heavy"}, 0.16, 0.04, 0.02, {150, 150, 160}}},
    };
    return table;
}

constexpr Rgb kPegColor{205, 60, 45};
constexpr Rgb kBlockColor{60, 160, 70};
constexpr Rgb kFallbackColor{120, 110, 100};

// Gap between the best and second-best values of key over the slots;
// direction +1 = max, -1 = min. Zero gap means the extremum is ambiguous.
template <typename Key>
double extremum_margin(const std::vector<Slot>& slots, Key key, int direction) {
    int best = 0;
    double best_v = key(slots[0]);
    for (int i = 1; i < static_cast<int>(slots.size()); ++i) {
        const double v = key(slots[i]);
        if (direction > 0 ? v > best_v : v < best_v) {
            best = i;
            best_v = v;
        }
    }
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(slots.size()); ++i) {
        if (i == best) continue;
        margin = std::min(margin, std::abs(key(slots[i]) - best_v));
    }
    return margin;
}

RigidTransform make_hand_eye() {
    const Eigen::AngleAxisd twist(0.9, Vec3(0.2, -1.0, 0.3).normalized());
    return RigidTransform::from_parts(twist.toRotationMatrix(), Vec3(0.035, -0.02, 0.055));
}

CameraRig make_rig(const SceneGenParams& params) {
    const double scale = params.image_width / 640.0;
    Intrinsics head_k{params.focal * scale, params.focal * scale,
                      params.image_width / 2.0, params.image_height / 2.0,
                      params.image_width, params.image_height};
    CameraRig rig;
    rig.head = CameraModel{head_k, look_at(Vec3(0.0, -0.55, 0.80), Vec3(0.0, 0.0, 0.05)),
                           CameraId::Head};
    rig.wrist = CameraModel{head_k, look_at(Vec3(0.32, -0.30, 0.50), Vec3(0.0, 0.0, 0.05)),
                            CameraId::Wrist};
    rig.wrist.id = CameraId::Wrist;
    rig.hand_eye = make_hand_eye();
    rig.ee_pose = rig.wrist.world_pose.compose(rig.hand_eye.inverse());
    return rig;
}

struct SlotDims {
    double dx;
    double dy;
    double depth;
    double rim;
};

// Sampled per attempt; the outer retry loop re-rolls on any margin failure.
std::vector<SlotDims> sample_dims(Category cat, int n, Rng& rng) {
    std::vector<SlotDims> dims(n);
    auto fill_uniform = [&](double lo, double hi) {
        for (auto& d : dims) {
            d.dx = rng.uniform(lo, hi);
            d.dy = rng.uniform(lo, hi);
            d.depth = rng.uniform(0.012, 0.016);
            d.rim = rng.uniform(0.020, 0.026);
        }
    };
    switch (cat) {
        case Category::Ordinal:
        case Category::Distance:
        case Category::Knowledge:
            fill_uniform(0.0295, 0.040);
            break;
        case Category::Vague:
            fill_uniform(0.031, 0.037);
            break;
        case Category::Size: {
            fill_uniform(0.032, 0.038);
            const int big = rng.uniform_int(0, n - 1);
            int small = rng.uniform_int(0, n - 2);
            if (small >= big) ++small;
            dims[big].dx = rng.uniform(0.041, 0.046);
            dims[big].dy = rng.uniform(0.041, 0.046);
            dims[small].dx = rng.uniform(0.0296, 0.0305);
            dims[small].dy = rng.uniform(0.0296, 0.0305);
            break;
        }
        case Category::Height: {
            fill_uniform(0.0295, 0.040);
            std::vector<int> level(n);
            for (int i = 0; i < n; ++i) level[i] = i;
            rng.shuffle(level);
            for (int i = 0; i < n; ++i) {
                dims[i].rim = 0.016 + level[i] * 0.0055 + rng.uniform(-0.0015, 0.0015);
                dims[i].depth = rng.uniform(0.010, 0.013);
            }
            break;
        }
        case Category::Compositional: {
            fill_uniform(0.0295, 0.046);
            std::vector<int> level(n);
            for (int i = 0; i < n; ++i) level[i] = i;
            rng.shuffle(level);
            for (int i = 0; i < n; ++i)
                dims[i].rim = 0.016 + level[i] * 0.0045 + rng.uniform(-0.001, 0.001);
            break;
        }
        case Category::Negation:
            fill_uniform(0.0262, 0.0282);
            break;
        case Category::Affordance:
            fill_uniform(0.031, 0.038);
            break;
    }
    return dims;
}

// World-frame anchor offsets (from the tray center) for reference objects
// and distractors, spread around the tray without crossing the pick zone.
std::vector<Vec3> object_anchors(double half_x, double half_y) {
    return {
        Vec3(half_x + 0.13, 0.0, 0.0),
        Vec3(-half_x - 0.13, 0.02, 0.0),
        Vec3(0.03, half_y + 0.12, 0.0),
        Vec3(half_x + 0.11, half_y + 0.10, 0.0),
    };
}

SceneObject make_standing_object(const std::string& name, const CatalogEntry& spec,
                                 const Vec3& base_xy, double yaw, ObjectRole role) {
    SceneObject obj;
    obj.name = name;
    obj.footprint_x = spec.footprint_x;
    obj.footprint_y = spec.footprint_y;
    obj.height = spec.height;
    obj.pose = RigidTransform::from_parts(
        Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix(),
        Vec3(base_xy.x(), base_xy.y(), 0.0));
    obj.role = role;
    obj.color = spec.color;
    return obj;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw DegenerateScene(what);
}

Scene attempt_scene(Category cat, int variant, std::uint64_t seed,
                    const SceneGenParams& params, Rng& rng) {
    Scene scene;
    scene.category = cat;
    scene.variant = variant;
    scene.seed = seed;

    const GridShape grid = kGrids[(variant - 1) % kGridCount];
    const int n = grid.rows * grid.cols;

    Tray tray;
    tray.rows = grid.rows;
    tray.cols = grid.cols;
    tray.wall_thickness = params.wall_thickness;
    const double yaw = rng.uniform(-params.max_tray_yaw, params.max_tray_yaw);
    const double tx = rng.uniform(-params.max_translation_noise, params.max_translation_noise);
    const double ty = rng.uniform(-params.max_translation_noise, params.max_translation_noise);
    tray.base_pose = RigidTransform::from_parts(
        Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix(),
        Vec3(tx, ty, params.base_thickness));

    std::vector<SlotDims> dims = sample_dims(cat, n, rng);
    int stable_idx = -1;
    if (cat == Category::Affordance) {
        stable_idx = rng.uniform_int(0, n - 1);
        dims[stable_idx].depth = rng.uniform(0.048, 0.055);
        dims[stable_idx].rim = dims[stable_idx].depth + 0.004;
        dims[stable_idx].dx = rng.uniform(0.033, 0.038);
        dims[stable_idx].dy = rng.uniform(0.033, 0.038);
    }
    std::set<int> negation_pair;
    if (cat == Category::Negation) {
        const int a = rng.uniform_int(0, n - 1);
        int b = rng.uniform_int(0, n - 2);
        if (b >= a) ++b;
        negation_pair = {a, b};
        for (int i : negation_pair) {
            dims[i].dx = rng.uniform(0.032, 0.036);
            dims[i].dy = rng.uniform(0.032, 0.036);
        }
    }

    for (int row = 1; row <= grid.rows; ++row) {
        for (int col = 1; col <= grid.cols; ++col) {
            const int i = (row - 1) * grid.cols + (col - 1);
            Slot s;
            s.row = row;
            s.col = col;
            s.inner_dx = dims[i].dx;
            s.inner_dy = dims[i].dy;
            s.depth = dims[i].depth;
            s.rim_height = dims[i].rim;
            const double gx = (col - (grid.cols + 1) / 2.0) * params.slot_pitch;
            const double gy = (row - (grid.rows + 1) / 2.0) * params.slot_pitch;
            s.center = WorldPoint{tray.base_pose.apply(Vec3(gx, gy, s.rim_height))};
            tray.slots.push_back(s);
        }
    }
    scene.tray = tray;

    SceneObject peg;
    peg.name = "peg";
    peg.footprint_x = params.pick_cross_section;
    peg.footprint_y = params.pick_cross_section;
    peg.height = cat == Category::Affordance ? 0.09 : params.pick_length;
    peg.pose = RigidTransform::from_parts(
        Eigen::AngleAxisd(rng.uniform(-3.1, 3.1), Vec3::UnitZ()).toRotationMatrix(),
        Vec3(rng.uniform(-0.15, 0.15), rng.uniform(-0.34, -0.28), 0.0));
    peg.role = ObjectRole::PickTarget;
    peg.color = kPegColor;
    scene.objects.push_back(peg);

    const int ref_count = cat == Category::Distance ? 2 : cat == Category::Knowledge ? 3 : 0;
    const double half_x = grid.cols * params.slot_pitch / 2.0;
    const double half_y = grid.rows * params.slot_pitch / 2.0;
    std::vector<Vec3> anchors = object_anchors(half_x, half_y);
    rng.shuffle(anchors);
    const Vec3 tray_center = tray.base_pose.translation;
    std::size_t next_anchor = 0;

    if (ref_count > 0) {
        std::vector<std::string> names;
        for (const auto& [name, entry] : catalog()) names.push_back(name);
        rng.shuffle(names);
        for (int k = 0; k < ref_count; ++k) {
            const Vec3 base = tray_center + anchors[next_anchor++] +
                              Vec3(rng.uniform(-0.03, 0.03), rng.uniform(-0.03, 0.03), 0.0);
            scene.objects.push_back(make_standing_object(
                names[k], catalog().at(names[k]), base, rng.uniform(-3.1, 3.1),
                ObjectRole::Reference));
        }
    }
    if (next_anchor < anchors.size() && rng.coin()) {
        SceneObject block;
        block.name = "block";
        block.footprint_x = 0.04;
        block.footprint_y = 0.04;
        block.height = 0.05;
        const Vec3 base = tray_center + anchors[next_anchor++] +
                          Vec3(rng.uniform(-0.02, 0.02), rng.uniform(-0.02, 0.02), 0.0);
        block.pose = RigidTransform::from_parts(
            Eigen::AngleAxisd(rng.uniform(-3.1, 3.1), Vec3::UnitZ()).toRotationMatrix(),
            Vec3(base.x(), base.y(), 0.0));
        block.role = ObjectRole::Distractor;
        block.color = kBlockColor;
        scene.objects.push_back(block);
    }

    for (const auto& obj : scene.objects) {
        auto it = catalog().find(obj.name);
        if (it != catalog().end()) scene.knowledge[obj.name] = it->second.attributes;
    }

    scene.rig = make_rig(params);

    // Category well-posedness. Margins keep every comparative instruction
    // uniquely resolvable on this scene.
    const auto& slots = scene.tray.slots;
    const std::set<int> feasible =
        feasible_slots(scene, scene.pick_target(), params.feasibility_clearance);
    switch (cat) {
        case Category::Ordinal:
        case Category::Vague:
            require(static_cast<int>(feasible.size()) == n, "expected every slot feasible");
            break;
        case Category::Size: {
            require(static_cast<int>(feasible.size()) == n, "expected every slot feasible");
            require(extremum_margin(slots, slot_area, +1) >= 3e-5 &&
                        extremum_margin(slots, slot_area, -1) >= 3e-5,
                    "slot area extrema too close");
            break;
        }
        case Category::Height: {
            require(static_cast<int>(feasible.size()) == n, "expected every slot feasible");
            require(extremum_margin(slots, rim_top, +1) >= 2e-3 &&
                        extremum_margin(slots, rim_top, -1) >= 2e-3,
                    "rim height extrema too close");
            break;
        }
        case Category::Distance: {
            require(static_cast<int>(feasible.size()) == n, "expected every slot feasible");
            for (const auto& obj : scene.objects) {
                if (obj.role != ObjectRole::Reference) continue;
                auto key = [&](const Slot& s) { return reference_distance(s, obj); };
                require(extremum_margin(slots, key, -1) >= 5e-3 &&
                            extremum_margin(slots, key, +1) >= 5e-3,
                        "reference distance extrema too close");
            }
            break;
        }
        case Category::Compositional: {
            require(static_cast<int>(feasible.size()) == n, "expected every slot feasible");
            std::vector<double> areas, rims;
            for (const auto& s : slots) {
                areas.push_back(slot_area(s));
                rims.push_back(rim_top(s));
            }
            std::sort(areas.begin(), areas.end());
            std::sort(rims.begin(), rims.end());
            for (std::size_t i = 1; i < areas.size(); ++i)
                require(areas[i] - areas[i - 1] >= 2e-5, "slot areas not pairwise separated");
            for (std::size_t i = 1; i < rims.size(); ++i)
                require(rims[i] - rims[i - 1] >= 1.5e-3, "rim heights not pairwise separated");
            break;
        }
        case Category::Negation:
            require(feasible == negation_pair, "expected exactly the chosen feasible pair");
            break;
        case Category::Affordance: {
            require(static_cast<int>(feasible.size()) == n, "expected every slot feasible");
            int stable_count = 0;
            for (int i : feasible)
                if (slot_is_stable(slots[i], scene.pick_target())) ++stable_count;
            require(stable_count == 1 && slot_is_stable(slots[stable_idx], scene.pick_target()),
                    "expected a unique stable slot");
            break;
        }
        case Category::Knowledge: {
            require(static_cast<int>(feasible.size()) == n, "expected every slot feasible");
            std::map<std::string, int> attr_count;
            for (const auto& [name, attrs] : scene.knowledge)
                for (const auto& a : attrs) ++attr_count[a];
            bool has_unique_bearer = false;
            for (const auto& [name, attrs] : scene.knowledge)
                for (const auto& a : attrs)
                    if (attr_count[a] == 1) has_unique_bearer = true;
            require(has_unique_bearer, "no reference with a unique attribute");
            for (const auto& obj : scene.objects) {
                if (obj.role != ObjectRole::Reference) continue;
                auto key = [&](const Slot& s) { return reference_distance(s, obj); };
                require(extremum_margin(slots, key, -1) >= 5e-3,
                        "nearest slot to reference not unique");
            }
            break;
        }
    }

    validate_scene(scene);
    return scene;
}

}  // namespace

const std::vector<Category>& all_categories() {
    static const std::vector<Category> cats = {
        Category::Ordinal,  Category::Size,     Category::Height,
        Category::Distance, Category::Compositional, Category::Negation,
        Category::Vague,    Category::Affordance,    Category::Knowledge,
    };
    return cats;
}

std::string to_string(Category c) {
    switch (c) {
        case Category::Ordinal: return "ordinal";
        case Category::Size: return "size";
        case Category::Height: return "height";
        case Category::Distance: return "distance";
        case Category::Compositional: return "compositional";
        case Category::Negation: return "negation";
        case Category::Vague: return "vague";
        case Category::Affordance: return "affordance";
        case Category::Knowledge: return "knowledge";
    }
    throw ConfigError("unknown category value");
}

Category category_from_string(const std::string& s) {
    for (Category c : all_categories())
        if (to_string(c) == s) return c;
    throw ConfigError("unknown category: " + s);
}

std::string to_string(ObjectRole r) {
    switch (r) {
        case ObjectRole::PickTarget: return "pick-target";
        case ObjectRole::Distractor: return "distractor";
        case ObjectRole::Reference: return "reference";
    }
    throw ConfigError("unknown object role value");
}

ObjectRole role_from_string(const std::string& s) {
    if (s == "pick-target") return ObjectRole::PickTarget;
    if (s == "distractor") return ObjectRole::Distractor;
    if (s == "reference") return ObjectRole::Reference;
    throw ConfigError("unknown object role: " + s);
}

std::string Scene::id() const {
    std::ostringstream out;
    out << to_string(category) << "/v" << variant << "/s" << seed;
    return out.str();
}

const SceneObject& Scene::pick_target() const {
    for (const auto& obj : objects)
        if (obj.role == ObjectRole::PickTarget) return obj;
    throw DegenerateScene("scene has no pick target");
}

const SceneObject* Scene::find_object(const std::string& name) const {
    for (const auto& obj : objects)
        if (obj.name == name) return &obj;
    return nullptr;
}

std::optional<int> Scene::slot_index(int row, int col) const {
    for (std::size_t i = 0; i < tray.slots.size(); ++i)
        if (tray.slots[i].row == row && tray.slots[i].col == col)
            return static_cast<int>(i);
    return std::nullopt;
}

std::set<int> Scene::all_slot_indices() const {
    std::set<int> all;
    for (std::size_t i = 0; i < tray.slots.size(); ++i) all.insert(static_cast<int>(i));
    return all;
}

Scene generate_scene(Category category, int variant, std::uint64_t seed,
                     const SceneGenParams& params) {
    if (variant < 1) throw ConfigError("variant numbers start at 1");
    std::ostringstream purpose;
    purpose << "scene/" << to_string(category) << "/v" << variant;
    Rng rng(derive_seed(seed, purpose.str()));
    std::string last_reason = "no attempt made";
    for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
        try {
            return attempt_scene(category, variant, seed, params, rng);
        } catch (const DegenerateScene& e) {
            last_reason = e.what();
        }
    }
    throw DegenerateScene("retry budget exhausted for " + to_string(category) +
                          " v" + std::to_string(variant) + ": " + last_reason);
}

bool slot_region_contains(const Scene& scene, const Slot& slot, const WorldPoint& p,
                          double tol) {
    const RigidTransform world_to_tray = scene.tray.base_pose.inverse();
    const Vec3 q = world_to_tray.apply(p.p);
    const Vec3 c = world_to_tray.apply(slot.center.p);
    return std::abs(q.x() - c.x()) <= slot.inner_dx / 2.0 + tol &&
           std::abs(q.y() - c.y()) <= slot.inner_dy / 2.0 + tol &&
           q.z() >= c.z() - slot.depth - tol && q.z() <= c.z() + slot.rim_height + tol;
}

std::set<int> feasible_slots(const Scene& scene, const SceneObject& obj, double clearance) {
    std::set<int> out;
    const double need_x = obj.footprint_x + 2.0 * clearance;
    const double need_y = obj.footprint_y + 2.0 * clearance;
    for (std::size_t i = 0; i < scene.tray.slots.size(); ++i) {
        const Slot& s = scene.tray.slots[i];
        const bool straight = need_x <= s.inner_dx && need_y <= s.inner_dy;
        const bool rotated = need_y <= s.inner_dx && need_x <= s.inner_dy;
        if (straight || rotated) out.insert(static_cast<int>(i));
    }
    return out;
}

bool slot_is_stable(const Slot& slot, const SceneObject& obj) {
    return slot.depth >= obj.height / 2.0;
}

void validate_scene(const Scene& scene) {
    const Tray& tray = scene.tray;
    if (tray.slots.empty()) throw DegenerateScene("tray has no slots");
    if (tray.rows < 1 || tray.cols < 1) throw DegenerateScene("tray grid dimensions invalid");
    if (!tray.base_pose.is_orthonormal(1e-9))
        throw DegenerateScene("tray pose rotation not orthonormal");

    std::set<std::pair<int, int>> cells;
    const RigidTransform world_to_tray = tray.base_pose.inverse();
    for (const Slot& s : tray.slots) {
        if (s.row < 1 || s.row > tray.rows || s.col < 1 || s.col > tray.cols)
            throw DegenerateScene("slot grid index out of range");
        if (!cells.insert({s.row, s.col}).second)
            throw DegenerateScene("duplicate slot grid index");
        if (s.inner_dx <= 0 || s.inner_dy <= 0 || s.depth <= 0 || s.rim_height <= 0)
            throw DegenerateScene("slot dimensions must be positive");
        if (s.rim_height < s.depth)
            throw DegenerateScene("slot cavity deeper than its rim allows");
    }
    // Grid indices must agree with tray-frame geometry: columns increase
    // with x, rows with y.
    for (const Slot& a : tray.slots) {
        const Vec3 pa = world_to_tray.apply(a.center.p);
        for (const Slot& b : tray.slots) {
            const Vec3 pb = world_to_tray.apply(b.center.p);
            if (a.row == b.row && a.col < b.col && pa.x() >= pb.x())
                throw DegenerateScene("column order disagrees with tray-frame x");
            if (a.col == b.col && a.row < b.row && pa.y() >= pb.y())
                throw DegenerateScene("row order disagrees with tray-frame y");
            if (&a != &b) {
                const bool sep_x = std::abs(pa.x() - pb.x()) >= (a.inner_dx + b.inner_dx) / 2.0;
                const bool sep_y = std::abs(pa.y() - pb.y()) >= (a.inner_dy + b.inner_dy) / 2.0;
                if (!sep_x && !sep_y) throw DegenerateScene("slot inner regions overlap");
            }
        }
    }

    int targets = 0;
    std::set<std::string> names;
    for (const auto& obj : scene.objects) {
        if (obj.role == ObjectRole::PickTarget) ++targets;
        if (obj.footprint_x <= 0 || obj.footprint_y <= 0 || obj.height <= 0)
            throw DegenerateScene("object dimensions must be positive");
        if (!names.insert(obj.name).second)
            throw DegenerateScene("duplicate object name: " + obj.name);
        if (!obj.pose.is_orthonormal(1e-9))
            throw DegenerateScene("object pose rotation not orthonormal");
    }
    if (targets != 1) throw DegenerateScene("scene must have exactly one pick target");

    if (!scene.rig.head.intrinsics.valid() || !scene.rig.wrist.intrinsics.valid())
        throw DegenerateScene("camera intrinsics invalid");
    const RigidTransform derived = scene.rig.ee_pose.compose(scene.rig.hand_eye);
    const double rot_err =
        (derived.rotation - scene.rig.wrist.world_pose.rotation).norm();
    const double trans_err =
        (derived.translation - scene.rig.wrist.world_pose.translation).norm();
    if (rot_err > 1e-9 || trans_err > 1e-9)
        throw DegenerateScene("wrist pose disagrees with end-effector and hand-eye");

    const int margin = 10;
    for (const Slot& s : tray.slots) {
        Projection pr;
        try {
            pr = project(s.center, scene.rig.head);
        } catch (const BehindCamera&) {
            throw DegenerateScene("slot center behind head camera");
        }
        const auto& k = scene.rig.head.intrinsics;
        if (pr.pixel.u < margin || pr.pixel.u > k.width - margin || pr.pixel.v < margin ||
            pr.pixel.v > k.height - margin)
            throw DegenerateScene("slot center out of head camera view");
    }
}

const std::map<std::string, std::vector<std::string>>& knowledge_catalog() {
    static const std::map<std::string, std::vector<std::string>> table = [] {
        std::map<std::string, std::vector<std::string>> t;
        for (const auto& [name, entry] : catalog()) t[name] = entry.attributes;
        return t;
    }();
    return table;
}

Rgb object_color(const std::string& name) {
    if (name == "peg") return kPegColor;
    if (name == "block") return kBlockColor;
    auto it = catalog().find(name);
    return it != catalog().end() ? it->second.color : kFallbackColor;
}

RigidTransform look_at(const Vec3& eye, const Vec3& target, const Vec3& up) {
    const Vec3 f = (target - eye).normalized();
    Vec3 reference = up;
    if (f.cross(reference).norm() < 1e-9) reference = Vec3(0, 1, 0);
    const Vec3 x = f.cross(reference).normalized();
    const Vec3 y = f.cross(x);
    Mat3 rot;
    rot.col(0) = x;
    rot.col(1) = y;
    rot.col(2) = f;
    return RigidTransform::from_parts(rot, eye);
}

}  // namespace slotkit
