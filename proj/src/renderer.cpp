#include "slotkit/renderer.hpp"

#include <algorithm>
#include <cmath>

namespace slotkit {

namespace {

constexpr double kZNear = 0.05;

Box make_box(const RigidTransform& parent, const Vec3& center, const Vec3& half,
             const Rgb& color) {
    return Box{RigidTransform::from_parts(parent.rotation, parent.apply(center)), half, color};
}

void append_slot_boxes(std::vector<Box>& boxes, const Tray& tray, const Slot& s) {
    const RigidTransform& base = tray.base_pose;
    const double w = tray.wall_thickness;
    const RigidTransform world_to_tray = base.inverse();
    const Vec3 c = world_to_tray.apply(s.center.p);  // tray-frame opening center
    const double sx = c.x();
    const double sy = c.y();
    const double h = s.rim_height;
    const double hx = s.inner_dx / 2.0;
    const double hy = s.inner_dy / 2.0;

    boxes.push_back(make_box(base, Vec3(sx - hx - w / 2, sy, h / 2),
                             Vec3(w / 2, hy + w, h / 2), kTrayColor));
    boxes.push_back(make_box(base, Vec3(sx + hx + w / 2, sy, h / 2),
                             Vec3(w / 2, hy + w, h / 2), kTrayColor));
    boxes.push_back(make_box(base, Vec3(sx, sy - hy - w / 2, h / 2),
                             Vec3(hx, w / 2, h / 2), kTrayColor));
    boxes.push_back(make_box(base, Vec3(sx, sy + hy + w / 2, h / 2),
                             Vec3(hx, w / 2, h / 2), kTrayColor));
    const double pedestal = s.rim_height - s.depth;
    if (pedestal > 1e-9)
        boxes.push_back(make_box(base, Vec3(sx, sy, pedestal / 2),
                                 Vec3(hx, hy, pedestal / 2), kTrayColor));
}

}  // namespace

std::vector<Box> scene_boxes(const Scene& scene) {
    std::vector<Box> boxes;
    if (scene.tray.slots.empty() && scene.objects.empty()) return boxes;

    // Table top under everything; world z = 0 is its surface.
    boxes.push_back(Box{RigidTransform::from_parts(Mat3::Identity(), Vec3(0, 0, -0.01)),
                        Vec3(0.55, 0.55, 0.01), kTableColor});

    if (!scene.tray.slots.empty()) {
        const Tray& tray = scene.tray;
        const double plate_hx = tray.cols * 0.07 / 2.0 + 0.01;
        const double plate_hy = tray.rows * 0.07 / 2.0 + 0.01;
        const double t = tray.base_pose.translation.z();  // base top sits at tray-frame 0
        boxes.push_back(make_box(tray.base_pose, Vec3(0, 0, -t / 2),
                                 Vec3(plate_hx, plate_hy, t / 2), kTrayColor));
        for (const Slot& s : tray.slots) append_slot_boxes(boxes, tray, s);
    }

    for (const SceneObject& obj : scene.objects)
        boxes.push_back(make_box(obj.pose, Vec3(0, 0, obj.height / 2),
                                 Vec3(obj.footprint_x / 2, obj.footprint_y / 2, obj.height / 2),
                                 obj.color));
    return boxes;
}

namespace {

struct ScreenVertex {
    double u;
    double v;
    double inv_z;
};

ScreenVertex to_screen(const Vec3& cam_point, const Intrinsics& k) {
    return ScreenVertex{k.fx * cam_point.x() / cam_point.z() + k.cx,
                        k.fy * cam_point.y() / cam_point.z() + k.cy, 1.0 / cam_point.z()};
}

double edge(const ScreenVertex& a, const ScreenVertex& b, double su, double sv) {
    return (b.u - a.u) * (sv - a.v) - (su - a.u) * (b.v - a.v);
}

void raster_triangle(ScreenVertex p0, ScreenVertex p1, ScreenVertex p2, const Rgb& color,
                     RgbImage& rgb, DepthImage& depth) {
    double area = (p1.u - p0.u) * (p2.v - p0.v) - (p2.u - p0.u) * (p1.v - p0.v);
    if (std::abs(area) < 1e-12) return;
    if (area < 0) {
        std::swap(p1, p2);
        area = -area;
    }
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min({p0.u, p1.u, p2.u}))));
    const int x1 = std::min(rgb.width - 1,
                            static_cast<int>(std::ceil(std::max({p0.u, p1.u, p2.u}))));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min({p0.v, p1.v, p2.v}))));
    const int y1 = std::min(rgb.height - 1,
                            static_cast<int>(std::ceil(std::max({p0.v, p1.v, p2.v}))));
    for (int iy = y0; iy <= y1; ++iy) {
        const double sv = iy + 0.5;
        for (int ix = x0; ix <= x1; ++ix) {
            const double su = ix + 0.5;
            const double e0 = edge(p1, p2, su, sv);
            const double e1 = edge(p2, p0, su, sv);
            const double e2 = edge(p0, p1, su, sv);
            if (e0 < 0 || e1 < 0 || e2 < 0) continue;
            const double inv_z = (e0 * p0.inv_z + e1 * p1.inv_z + e2 * p2.inv_z) / area;
            if (inv_z <= 0) continue;
            const double z = 1.0 / inv_z;
            if (z < kZNear) continue;
            float& slot = depth.at(ix, iy);
            if (slot == 0.0f || z < static_cast<double>(slot)) {
                slot = static_cast<float>(z);
                rgb.set(ix, iy, color);
            }
        }
    }
}

// Clip the triangle against the near plane, then rasterize the resulting fan.
void clip_and_raster(const Vec3& a, const Vec3& b, const Vec3& c, const Rgb& color,
                     const Intrinsics& k, RgbImage& rgb, DepthImage& depth) {
    const Vec3 in[3] = {a, b, c};
    Vec3 poly[4];
    int count = 0;
    for (int i = 0; i < 3; ++i) {
        const Vec3& p = in[i];
        const Vec3& q = in[(i + 1) % 3];
        const bool p_in = p.z() >= kZNear;
        const bool q_in = q.z() >= kZNear;
        if (p_in) poly[count++] = p;
        if (p_in != q_in) {
            const double t = (kZNear - p.z()) / (q.z() - p.z());
            poly[count++] = p + t * (q - p);
        }
    }
    if (count < 3) return;
    const ScreenVertex s0 = to_screen(poly[0], k);
    for (int i = 1; i + 1 < count; ++i)
        raster_triangle(s0, to_screen(poly[i], k), to_screen(poly[i + 1], k), color, rgb, depth);
}

Rgb shade(const Rgb& base, const Vec3& world_normal) {
    static const Vec3 light = Vec3(0.35, -0.45, 0.82).normalized();
    const double f = 0.55 + 0.45 * std::max(0.0, world_normal.dot(light));
    auto channel = [f](std::uint8_t c) {
        return static_cast<std::uint8_t>(
            std::min(255.0, std::round(static_cast<double>(c) * f)));
    };
    return Rgb{channel(base.r), channel(base.g), channel(base.b)};
}

void raster_box(const Box& box, const RigidTransform& world_to_cam, const Intrinsics& k,
                RgbImage& rgb, DepthImage& depth) {
    Vec3 corners_cam[8];
    for (int i = 0; i < 8; ++i) {
        const Vec3 local((i & 1) ? box.half.x() : -box.half.x(),
                         (i & 2) ? box.half.y() : -box.half.y(),
                         (i & 4) ? box.half.z() : -box.half.z());
        corners_cam[i] = world_to_cam.apply(box.pose.apply(local));
    }
    struct Face {
        int idx[4];
        Vec3 normal;  // box frame, outward
    };
    static const Face faces[6] = {
        {{4, 5, 7, 6}, Vec3(0, 0, 1)},  {{0, 2, 3, 1}, Vec3(0, 0, -1)},
        {{1, 3, 7, 5}, Vec3(1, 0, 0)},  {{0, 4, 6, 2}, Vec3(-1, 0, 0)},
        {{2, 6, 7, 3}, Vec3(0, 1, 0)},  {{0, 1, 5, 4}, Vec3(0, -1, 0)},
    };
    for (const Face& f : faces) {
        const Rgb color = shade(box.color, box.pose.rotation * f.normal);
        clip_and_raster(corners_cam[f.idx[0]], corners_cam[f.idx[1]], corners_cam[f.idx[2]],
                        color, k, rgb, depth);
        clip_and_raster(corners_cam[f.idx[0]], corners_cam[f.idx[2]], corners_cam[f.idx[3]],
                        color, k, rgb, depth);
    }
}

}  // namespace

RenderResult render(const Scene& scene, const CameraModel& cam) {
    RenderResult out{RgbImage(cam.intrinsics.width, cam.intrinsics.height, kBackgroundColor),
                     DepthImage(cam.intrinsics.width, cam.intrinsics.height)};
    const RigidTransform world_to_cam = cam.world_pose.inverse();
    for (const Box& box : scene_boxes(scene))
        raster_box(box, world_to_cam, cam.intrinsics, out.rgb, out.depth);
    return out;
}

void draw_sphere_marker(RgbImage& img, const PixelPoint& center, double radius_px,
                        const Rgb& color) {
    if (radius_px < 0) radius_px = 0;
    const int cx = static_cast<int>(std::floor(center.u));
    const int cy = static_cast<int>(std::floor(center.v));
    if (img.in_bounds(cx, cy)) img.set(cx, cy, color);
    if (radius_px == 0) return;
    const int x0 = std::max(0, static_cast<int>(std::floor(center.u - radius_px - 1)));
    const int x1 = std::min(img.width - 1, static_cast<int>(std::ceil(center.u + radius_px + 1)));
    const int y0 = std::max(0, static_cast<int>(std::floor(center.v - radius_px - 1)));
    const int y1 = std::min(img.height - 1, static_cast<int>(std::ceil(center.v + radius_px + 1)));
    const double r2 = radius_px * radius_px;
    for (int iy = y0; iy <= y1; ++iy)
        for (int ix = x0; ix <= x1; ++ix) {
            const double du = ix + 0.5 - center.u;
            const double dv = iy + 0.5 - center.v;
            if (du * du + dv * dv <= r2) img.set(ix, iy, color);
        }
}

GoalOverlays render_goal_overlays(const Scene& scene, const WorldPoint& anchor, double r) {
    GoalOverlays out{render(scene, scene.rig.head).rgb, render(scene, scene.rig.wrist).rgb,
                     std::nullopt, std::nullopt};
    const CameraModel* cams[2] = {&scene.rig.head, &scene.rig.wrist};
    RgbImage* imgs[2] = {&out.head, &out.wrist};
    std::optional<double>* depths[2] = {&out.head_depth, &out.wrist_depth};
    for (int i = 0; i < 2; ++i) {
        const auto pr = try_project(anchor, *cams[i]);
        if (!pr) continue;
        draw_sphere_marker(*imgs[i], pr->pixel, pixel_radius(r, pr->depth, cams[i]->intrinsics.fx),
                           kMarkerColor);
        *depths[i] = pr->depth;
    }
    return out;
}

}  // namespace slotkit
