#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "slotkit/geometry.hpp"
#include "slotkit/image.hpp"
#include "slotkit/instruct.hpp"
#include "slotkit/scene.hpp"

namespace slotkit {

// Metric radius of the goal sphere. Half a typical slot extent: large
// enough to survive blob detection, small enough never to span two slots.
inline constexpr double kDefaultSphereRadius = 0.015;

// What a grounding backend hands back: the edited head image with the
// marker, plus the camera-frame depth of the marked point when the backend
// knows it exactly. The oracle marks a slot center it can locate in 3D, so
// it reports the analytic depth; image-editing backends cannot, and the
// pipeline then reads the clean depth image at the detected pixel.
struct GroundResult {
    RgbImage image;
    std::optional<double> marked_depth;
};

// Maps an instruction onto the head image as a drawn marker.
class GroundingBackend {
public:
    virtual ~GroundingBackend() = default;
    virtual GroundResult ground(const RgbImage& head_rgb, const std::string& instruction) = 0;
};

// Everything captured at episode start that goal construction consumes.
struct Observation {
    RgbImage head_rgb;
    DepthImage head_depth;  // registered to head_rgb, same intrinsics
    CameraModel head;
    CameraModel wrist;
};

// Renders the episode-start observation for a scene.
Observation observe(const Scene& scene);

struct ViewGoal {
    PixelPoint pixel;
    double radius_px = 0;
};

// A grounded goal: the 3D anchor plus its appearance in every camera that
// can see it. Re-projecting anchor through a listed camera reproduces the
// stored pixel exactly; views with the anchor behind the lens are absent.
struct VisualGoal {
    WorldPoint anchor;
    std::map<CameraId, ViewGoal> per_view;
    double sphere_radius = kDefaultSphereRadius;
    PixelPoint source_pixel;   // detected marker center in the head image
    double source_depth = 0;   // camera-frame z used for back-projection
};

// Depth lookup with hole filling: the value at the pixel containing p, or
// the lower median of the valid depths in the surrounding 5x5 window, or
// DepthHole when the whole window is empty.
double depth_at(const DepthImage& depth, PixelPoint p);

// The full grounding chain: backend edit, marker detection, depth read,
// back-projection to the world anchor, and re-projection into both views.
// Throws NoMarker/DepthHole from the respective stages, DimensionMismatch
// if the backend resized the image, and ConfigError for r <= 0. A wrist
// view behind the anchor is dropped; the head view is always present.
VisualGoal construct_goal(const Observation& obs, const Instruction& instruction,
                          GroundingBackend& backend, double r = kDefaultSphereRadius);

// Ground-truth backend: marks the projection of gt_slot's center into the
// head view and reports its analytic depth. Byte-deterministic.
std::unique_ptr<GroundingBackend> oracle_backend(const Scene& scene, const Slot& gt_slot,
                                                 double r = kDefaultSphereRadius);

// Wraps another backend and moves its marker by a Gaussian pixel offset
// (fresh draw per call, reproducible for a fixed seed). sigma_px = 0 passes
// the inner result through untouched. The depth report is forwarded: the
// injected noise is purely lateral.
std::unique_ptr<GroundingBackend> perturbed_backend(std::unique_ptr<GroundingBackend> inner,
                                                    double sigma_px, std::uint64_t seed);

}  // namespace slotkit
