#pragma once

#include <optional>
#include <vector>

#include "slotkit/geometry.hpp"
#include "slotkit/image.hpp"
#include "slotkit/scene.hpp"

namespace slotkit {

inline constexpr Rgb kBackgroundColor{40, 40, 40};
inline constexpr Rgb kTrayColor{135, 135, 142};
inline constexpr Rgb kTableColor{70, 65, 58};
// Pure saturated blue, reserved for markers; scene geometry never renders
// inside the detector's color window.
inline constexpr Rgb kMarkerColor{0, 0, 255};

// Axis-aligned box in its own frame, centered on the pose origin.
struct Box {
    RigidTransform pose;  // box frame -> world
    Vec3 half;            // half extents, meters
    Rgb color;
};

// Scene geometry as render primitives: tray walls, cavity floors, base
// plate, table top, and every object. Exposed so tests can ray-cast the
// same geometry independently of the rasterizer.
std::vector<Box> scene_boxes(const Scene& scene);

struct RenderResult {
    RgbImage rgb;
    DepthImage depth;  // camera-frame z in meters, 0 = no hit
};

// Z-buffered triangle rasterization of the scene boxes, flat-shaded per
// face, sampled at pixel centers. Deterministic for fixed inputs.
RenderResult render(const Scene& scene, const CameraModel& cam);

// Filled disk, no anti-aliasing, clipped at image bounds. Radius 0 still
// paints the single pixel containing the center so markers never vanish.
void draw_sphere_marker(RgbImage& img, const PixelPoint& center, double radius_px,
                        const Rgb& color);

struct GoalOverlays {
    RgbImage head;
    RgbImage wrist;
    // Camera-frame depth of the anchor per view; empty when the anchor sits
    // behind that camera (in which case no marker was drawn).
    std::optional<double> head_depth;
    std::optional<double> wrist_depth;
};

// Renders both views and marks the anchor in each with a disk whose radius
// follows perspective scaling of the metric marker radius r.
GoalOverlays render_goal_overlays(const Scene& scene, const WorldPoint& anchor, double r);

}  // namespace slotkit
