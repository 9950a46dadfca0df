#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "slotkit/geometry.hpp"
#include "slotkit/marker.hpp"
#include "slotkit/renderer.hpp"
#include "slotkit/scene.hpp"

using namespace slotkit;

namespace {

// Signed distance from a world point to the box surface; ~0 means the point
// lies on the surface. Independent oracle for the rasterizer's depth.
double box_sdf(const RigidTransform& world_to_box, const Vec3& half, const Vec3& world_p) {
    const Vec3 p = world_to_box.apply(world_p);
    const Vec3 q = p.cwiseAbs() - half;
    const Vec3 q_pos = q.cwiseMax(0.0);
    return q_pos.norm() + std::min(0.0, q.maxCoeff());
}

int count_color(const RgbImage& img, const Rgb& color) {
    int n = 0;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (img.at(x, y) == color) ++n;
    return n;
}

}  // namespace

TEST_CASE("an empty scene renders as pure background with no depth hits") {
    Scene empty;
    empty.rig.head = CameraModel{Intrinsics{525, 525, 160, 120, 320, 240},
                                 RigidTransform::identity(), CameraId::Head};
    const RenderResult r = render(empty, empty.rig.head);
    for (int y = 0; y < r.rgb.height; ++y)
        for (int x = 0; x < r.rgb.width; ++x) {
            CHECK(r.rgb.at(x, y) == kBackgroundColor);
            CHECK(r.depth.at(x, y) == 0.0f);
        }
}

TEST_CASE("a unit box ahead of an identity camera puts its near face at half a meter") {
    Scene s;
    SceneObject box;
    box.name = "box";
    box.footprint_x = 1.0;
    box.footprint_y = 1.0;
    box.height = 1.0;
    // Box occupies z in [0.5, 1.5] along the optical axis; its center sits at z = 1.
    box.pose = RigidTransform::from_parts(Mat3::Identity(), Vec3(0, 0, 0.5));
    box.role = ObjectRole::PickTarget;
    box.color = Rgb{200, 100, 50};
    s.objects.push_back(box);

    CameraModel cam{Intrinsics{525, 525, 320, 240, 640, 480}, RigidTransform::identity(),
                    CameraId::Head};
    const RenderResult r = render(s, cam);
    CHECK(r.depth.at(320, 240) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK_FALSE(r.rgb.at(320, 240) == kBackgroundColor);
}

TEST_CASE("every rendered depth pixel lies on a scene surface") {
    const Scene s = generate_scene(Category::Compositional, 3, 21);
    const RenderResult r = render(s, s.rig.head);
    const std::vector<Box> boxes = scene_boxes(s);
    std::vector<RigidTransform> inverses;
    for (const Box& b : boxes) inverses.push_back(b.pose.inverse());

    int hits = 0;
    for (int y = 0; y < r.depth.height; ++y)
        for (int x = 0; x < r.depth.width; ++x) {
            const double d = r.depth.at(x, y);
            if (d <= 0) continue;
            ++hits;
            const CameraPoint c =
                back_project(PixelPoint{x + 0.5, y + 0.5}, d, s.rig.head.intrinsics);
            const Vec3 p = to_world(c, s.rig.head).p;
            double best = 1e9;
            for (std::size_t i = 0; i < boxes.size(); ++i)
                best = std::min(best, std::abs(box_sdf(inverses[i], boxes[i].half, p)));
            CHECK(best <= 0.002);
        }
    CHECK(hits > 10000);
}

TEST_CASE("depth and color agree on which pixels were hit") {
    const Scene s = generate_scene(Category::Ordinal, 2, 5);
    const RenderResult r = render(s, s.rig.head);
    for (int y = 0; y < r.depth.height; ++y)
        for (int x = 0; x < r.depth.width; ++x) {
            const bool has_depth = r.depth.at(x, y) > 0.0f;
            const bool has_color = !(r.rgb.at(x, y) == kBackgroundColor);
            CHECK(has_depth == has_color);
        }
}

TEST_CASE("rendering is deterministic") {
    const Scene s = generate_scene(Category::Size, 1, 77);
    const RenderResult a = render(s, s.rig.head);
    const RenderResult b = render(s, s.rig.head);
    CHECK(a.rgb == b.rgb);
    CHECK(a.depth.depths == b.depth.depths);
}

TEST_CASE("scene geometry never enters the marker detector's color window") {
    for (Category cat : {Category::Ordinal, Category::Distance, Category::Knowledge}) {
        const Scene s = generate_scene(cat, 1, 13);
        for (const CameraModel* cam : {&s.rig.head, &s.rig.wrist}) {
            const RenderResult r = render(s, *cam);
            CHECK(segment(r.rgb).count() == 0);
            CHECK(count_color(r.rgb, kMarkerColor) == 0);
        }
    }
}

TEST_CASE("a zero-radius marker paints exactly the pixel containing its center") {
    RgbImage img(64, 64, kBackgroundColor);
    draw_sphere_marker(img, PixelPoint{10.7, 20.2}, 0.0, kMarkerColor);
    CHECK(count_color(img, kMarkerColor) == 1);
    CHECK(img.at(10, 20) == kMarkerColor);
}

TEST_CASE("a marker fully outside the image leaves it unchanged") {
    RgbImage img(64, 64, kBackgroundColor);
    const RgbImage before = img;
    draw_sphere_marker(img, PixelPoint{-50.0, -50.0}, 8.0, kMarkerColor);
    CHECK(img == before);
}

TEST_CASE("marker disk area matches its radius") {
    RgbImage img(256, 256, kBackgroundColor);
    draw_sphere_marker(img, PixelPoint{100.0, 150.0}, 8.0, kMarkerColor);
    const int area = count_color(img, kMarkerColor);
    CHECK(area >= M_PI * 7.5 * 7.5);
    CHECK(area <= M_PI * 8.5 * 8.5);
}

TEST_CASE("marker clips silently at the image border") {
    RgbImage img(64, 64, kBackgroundColor);
    draw_sphere_marker(img, PixelPoint{0.0, 32.0}, 6.0, kMarkerColor);
    const int area = count_color(img, kMarkerColor);
    CHECK(area > 0);
    CHECK(area < M_PI * 6.5 * 6.5 * 0.75);
}

TEST_CASE("goal overlays mark the anchor consistently in both views") {
    const Scene s = generate_scene(Category::Ordinal, 1, 42);
    const WorldPoint anchor = s.tray.slots[4].center;
    const GoalOverlays ov = render_goal_overlays(s, anchor, 0.015);

    REQUIRE(ov.head_depth.has_value());
    REQUIRE(ov.wrist_depth.has_value());
    CHECK(count_color(ov.head, kMarkerColor) > 0);
    CHECK(count_color(ov.wrist, kMarkerColor) > 0);

    const MarkerDetection head_det = detect_marker(ov.head);
    const MarkerDetection wrist_det = detect_marker(ov.wrist);
    const Projection head_pr = project(anchor, s.rig.head);
    const Projection wrist_pr = project(anchor, s.rig.wrist);
    CHECK(std::hypot(head_det.center.u - head_pr.pixel.u,
                     head_det.center.v - head_pr.pixel.v) < 1.0);
    CHECK(std::hypot(wrist_det.center.u - wrist_pr.pixel.u,
                     wrist_det.center.v - wrist_pr.pixel.v) < 1.0);

    // Back-projecting each view's marker through its own analytic depth must
    // land on the same world point.
    const Vec3 from_head =
        to_world(back_project(head_det.center, *ov.head_depth, s.rig.head.intrinsics,
                              CameraId::Head),
                 s.rig.head)
            .p;
    const Vec3 from_wrist =
        to_world(back_project(wrist_det.center, *ov.wrist_depth, s.rig.wrist.intrinsics,
                              CameraId::Wrist),
                 s.rig.wrist)
            .p;
    CHECK((from_head - from_wrist).norm() < 1e-3);
}

TEST_CASE("doubling the metric marker radius doubles the measured pixel radius") {
    const Scene s = generate_scene(Category::Ordinal, 1, 42);
    const WorldPoint anchor = s.tray.slots[4].center;
    const GoalOverlays small = render_goal_overlays(s, anchor, 0.015);
    const GoalOverlays big = render_goal_overlays(s, anchor, 0.030);
    const double r_small = detect_marker(small.head).major;
    const double r_big = detect_marker(big.head).major;
    CHECK(std::abs(r_big - 2.0 * r_small) < 1.0);
}

TEST_CASE("an anchor behind a camera draws no marker in that view") {
    const Scene s = generate_scene(Category::Ordinal, 1, 42);
    const Vec3 eye = s.rig.wrist.world_pose.translation;
    const Vec3 forward = s.rig.wrist.world_pose.rotation.col(2);
    const WorldPoint behind{eye - 0.2 * forward};
    const GoalOverlays ov = render_goal_overlays(s, behind, 0.015);
    CHECK_FALSE(ov.wrist_depth.has_value());
    CHECK(count_color(ov.wrist, kMarkerColor) == 0);
}
