#include "slotkit/scene_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "slotkit/errors.hpp"

namespace slotkit {

namespace {

using nlohmann::json;

json pose_to_json(const RigidTransform& t) {
    json j;
    json rot = json::array();
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) rot.push_back(t.rotation(r, c));
    json trans = json::array();
    for (int i = 0; i < 3; ++i) trans.push_back(t.translation(i));
    j["rotation"] = rot;
    j["translation"] = trans;
    return j;
}

RigidTransform pose_from_json(const json& j) {
    const auto& rot = j.at("rotation");
    const auto& trans = j.at("translation");
    if (rot.size() != 9 || trans.size() != 3)
        throw ConfigError("pose arrays must hold 9 rotation and 3 translation entries");
    Mat3 r;
    for (int i = 0; i < 9; ++i) r(i / 3, i % 3) = rot[i].get<double>();
    Vec3 t;
    for (int i = 0; i < 3; ++i) t(i) = trans[i].get<double>();
    RigidTransform out = RigidTransform::from_parts(r, t);
    if (!out.is_orthonormal(1e-9)) throw ConfigError("pose rotation not orthonormal");
    return out;
}

json color_to_json(const Rgb& c) { return json::array({c.r, c.g, c.b}); }

Rgb color_from_json(const json& j) {
    if (j.size() != 3) throw ConfigError("color must hold 3 channels");
    auto channel = [&](int i) {
        const int v = j[i].get<int>();
        if (v < 0 || v > 255) throw ConfigError("color channel out of range");
        return static_cast<std::uint8_t>(v);
    };
    return Rgb{channel(0), channel(1), channel(2)};
}

json camera_to_json(const CameraModel& cam) {
    json j;
    j["fx"] = cam.intrinsics.fx;
    j["fy"] = cam.intrinsics.fy;
    j["cx"] = cam.intrinsics.cx;
    j["cy"] = cam.intrinsics.cy;
    j["width"] = cam.intrinsics.width;
    j["height"] = cam.intrinsics.height;
    j["pose"] = pose_to_json(cam.world_pose);
    return j;
}

CameraModel camera_from_json(const json& j, CameraId id) {
    CameraModel cam;
    cam.intrinsics.fx = j.at("fx").get<double>();
    cam.intrinsics.fy = j.at("fy").get<double>();
    cam.intrinsics.cx = j.at("cx").get<double>();
    cam.intrinsics.cy = j.at("cy").get<double>();
    cam.intrinsics.width = j.at("width").get<int>();
    cam.intrinsics.height = j.at("height").get<int>();
    cam.world_pose = pose_from_json(j.at("pose"));
    cam.id = id;
    if (!cam.intrinsics.valid()) throw ConfigError("camera intrinsics invalid");
    return cam;
}

}  // namespace

json scene_to_json(const Scene& scene) {
    json j;
    j["category"] = to_string(scene.category);
    j["variant"] = scene.variant;
    j["seed"] = scene.seed;
    j["fingerprint"] = scene.fingerprint;

    json tray;
    tray["rows"] = scene.tray.rows;
    tray["cols"] = scene.tray.cols;
    tray["wall_thickness"] = scene.tray.wall_thickness;
    tray["base_pose"] = pose_to_json(scene.tray.base_pose);
    json slots = json::array();
    for (const Slot& s : scene.tray.slots) {
        json sj;
        sj["row"] = s.row;
        sj["col"] = s.col;
        sj["center"] = json::array({s.center.p.x(), s.center.p.y(), s.center.p.z()});
        sj["inner_dx"] = s.inner_dx;
        sj["inner_dy"] = s.inner_dy;
        sj["depth"] = s.depth;
        sj["rim_height"] = s.rim_height;
        slots.push_back(sj);
    }
    tray["slots"] = slots;
    j["tray"] = tray;

    json objects = json::array();
    for (const SceneObject& obj : scene.objects) {
        json oj;
        oj["name"] = obj.name;
        oj["role"] = to_string(obj.role);
        oj["footprint"] = json::array({obj.footprint_x, obj.footprint_y});
        oj["height"] = obj.height;
        oj["pose"] = pose_to_json(obj.pose);
        oj["color"] = color_to_json(obj.color);
        objects.push_back(oj);
    }
    j["objects"] = objects;

    json rig;
    rig["head"] = camera_to_json(scene.rig.head);
    rig["wrist"] = camera_to_json(scene.rig.wrist);
    rig["ee_pose"] = pose_to_json(scene.rig.ee_pose);
    rig["hand_eye"] = pose_to_json(scene.rig.hand_eye);
    j["rig"] = rig;

    j["knowledge"] = scene.knowledge;
    return j;
}

Scene scene_from_json(const json& j) {
    Scene scene;
    try {
        scene.category = category_from_string(j.at("category").get<std::string>());
        scene.variant = j.at("variant").get<int>();
        scene.seed = j.at("seed").get<std::uint64_t>();
        scene.fingerprint = j.at("fingerprint").get<std::string>();

        const auto& tj = j.at("tray");
        scene.tray.rows = tj.at("rows").get<int>();
        scene.tray.cols = tj.at("cols").get<int>();
        scene.tray.wall_thickness = tj.at("wall_thickness").get<double>();
        scene.tray.base_pose = pose_from_json(tj.at("base_pose"));
        for (const auto& sj : tj.at("slots")) {
            Slot s;
            s.row = sj.at("row").get<int>();
            s.col = sj.at("col").get<int>();
            const auto& c = sj.at("center");
            if (c.size() != 3) throw ConfigError("slot center must hold 3 coordinates");
            s.center = WorldPoint{Vec3(c[0].get<double>(), c[1].get<double>(), c[2].get<double>())};
            s.inner_dx = sj.at("inner_dx").get<double>();
            s.inner_dy = sj.at("inner_dy").get<double>();
            s.depth = sj.at("depth").get<double>();
            s.rim_height = sj.at("rim_height").get<double>();
            scene.tray.slots.push_back(s);
        }

        for (const auto& oj : j.at("objects")) {
            SceneObject obj;
            obj.name = oj.at("name").get<std::string>();
            obj.role = role_from_string(oj.at("role").get<std::string>());
            const auto& f = oj.at("footprint");
            if (f.size() != 2) throw ConfigError("object footprint must hold 2 extents");
            obj.footprint_x = f[0].get<double>();
            obj.footprint_y = f[1].get<double>();
            obj.height = oj.at("height").get<double>();
            obj.pose = pose_from_json(oj.at("pose"));
            obj.color = color_from_json(oj.at("color"));
            scene.objects.push_back(obj);
        }

        const auto& rj = j.at("rig");
        scene.rig.head = camera_from_json(rj.at("head"), CameraId::Head);
        scene.rig.wrist = camera_from_json(rj.at("wrist"), CameraId::Wrist);
        scene.rig.ee_pose = pose_from_json(rj.at("ee_pose"));
        scene.rig.hand_eye = pose_from_json(rj.at("hand_eye"));

        scene.knowledge =
            j.at("knowledge").get<std::map<std::string, std::vector<std::string>>>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed scene file: ") + e.what());
    }
    try {
        validate_scene(scene);
    } catch (const DegenerateScene& e) {
        throw ConfigError(std::string("scene file violates invariants: ") + e.what());
    }
    return scene;
}

std::string serialize_scene(const Scene& scene) { return scene_to_json(scene).dump(2) + "\n"; }

Scene parse_scene(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scene file is not valid JSON: ") + e.what());
    }
    return scene_from_json(j);
}

void save_scene(const std::filesystem::path& path, const Scene& scene) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path.string());
    out << serialize_scene(scene);
    if (!out) throw ConfigError("write failed: " + path.string());
}

Scene load_scene(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open scene file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scene(buf.str());
}

namespace {

void put_double(std::ostream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
}

void put_pose(std::ostream& out, const std::string& prefix, const RigidTransform& t) {
    out << prefix << ".rotation";
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            out << ' ';
            put_double(out, t.rotation(r, c));
        }
    out << '\n' << prefix << ".translation";
    for (int i = 0; i < 3; ++i) {
        out << ' ';
        put_double(out, t.translation(i));
    }
    out << '\n';
}

void put_intrinsics(std::ostream& out, const std::string& prefix, const Intrinsics& k) {
    auto line = [&](const char* key, double v) {
        out << prefix << '.' << key << ' ';
        put_double(out, v);
        out << '\n';
    };
    line("fx", k.fx);
    line("fy", k.fy);
    line("cx", k.cx);
    line("cy", k.cy);
    out << prefix << ".width " << k.width << '\n';
    out << prefix << ".height " << k.height << '\n';
}

struct CalibParser {
    std::map<std::string, std::vector<double>> entries;

    explicit CalibParser(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto start = line.find_first_not_of(" \t\r");
            if (start == std::string::npos || line[start] == '#') continue;
            std::istringstream fields(line);
            std::string key;
            fields >> key;
            std::vector<double> values;
            double v;
            while (fields >> v) values.push_back(v);
            if (values.empty())
                throw ConfigError("calibration line " + std::to_string(lineno) +
                                  " has no numeric values");
            if (!entries.emplace(key, std::move(values)).second)
                throw ConfigError("duplicate calibration key: " + key);
        }
    }

    const std::vector<double>& get(const std::string& key, std::size_t count) const {
        auto it = entries.find(key);
        if (it == entries.end()) throw ConfigError("missing calibration key: " + key);
        if (it->second.size() != count)
            throw ConfigError("calibration key " + key + " expects " + std::to_string(count) +
                              " values");
        return it->second;
    }

    double scalar(const std::string& key) const { return get(key, 1)[0]; }

    RigidTransform pose(const std::string& prefix) const {
        const auto& r = get(prefix + ".rotation", 9);
        const auto& t = get(prefix + ".translation", 3);
        Mat3 rot;
        for (int i = 0; i < 9; ++i) rot(i / 3, i % 3) = r[i];
        RigidTransform out = RigidTransform::from_parts(rot, Vec3(t[0], t[1], t[2]));
        if (!out.is_orthonormal(1e-9))
            throw ConfigError("calibration pose " + prefix + " not orthonormal");
        return out;
    }

    Intrinsics intrinsics(const std::string& prefix) const {
        Intrinsics k;
        k.fx = scalar(prefix + ".fx");
        k.fy = scalar(prefix + ".fy");
        k.cx = scalar(prefix + ".cx");
        k.cy = scalar(prefix + ".cy");
        k.width = static_cast<int>(scalar(prefix + ".width"));
        k.height = static_cast<int>(scalar(prefix + ".height"));
        if (!k.valid()) throw ConfigError("calibration intrinsics " + prefix + " invalid");
        return k;
    }
};

}  // namespace

std::string serialize_calibration(const CameraRig& rig) {
    std::ostringstream out;
    out << "# camera rig: intrinsics, world poses, end-effector and hand-eye\n";
    put_intrinsics(out, "head", rig.head.intrinsics);
    put_pose(out, "head.pose", rig.head.world_pose);
    put_intrinsics(out, "wrist", rig.wrist.intrinsics);
    put_pose(out, "wrist.pose", rig.wrist.world_pose);
    put_pose(out, "ee.pose", rig.ee_pose);
    put_pose(out, "hand_eye", rig.hand_eye);
    return out.str();
}

CameraRig parse_calibration(const std::string& text) {
    const CalibParser p(text);
    CameraRig rig;
    rig.head.intrinsics = p.intrinsics("head");
    rig.head.world_pose = p.pose("head.pose");
    rig.head.id = CameraId::Head;
    rig.wrist.intrinsics = p.intrinsics("wrist");
    rig.wrist.world_pose = p.pose("wrist.pose");
    rig.wrist.id = CameraId::Wrist;
    rig.ee_pose = p.pose("ee.pose");
    rig.hand_eye = p.pose("hand_eye");
    const RigidTransform derived = rig.ee_pose.compose(rig.hand_eye);
    if ((derived.rotation - rig.wrist.world_pose.rotation).norm() > 1e-6 ||
        (derived.translation - rig.wrist.world_pose.translation).norm() > 1e-6)
        throw ConfigError("calibration wrist pose disagrees with end-effector and hand-eye");
    return rig;
}

void save_calibration(const std::filesystem::path& path, const CameraRig& rig) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path.string());
    out << serialize_calibration(rig);
    if (!out) throw ConfigError("write failed: " + path.string());
}

CameraRig load_calibration(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open calibration file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_calibration(buf.str());
}

}  // namespace slotkit
