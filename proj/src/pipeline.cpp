#include "slotkit/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <utility>
#include <vector>

#include "slotkit/errors.hpp"
#include "slotkit/marker.hpp"
#include "slotkit/renderer.hpp"
#include "slotkit/rng.hpp"

namespace slotkit {

Observation observe(const Scene& scene) {
    RenderResult head = render(scene, scene.rig.head);
    return Observation{std::move(head.rgb), std::move(head.depth), scene.rig.head,
                       scene.rig.wrist};
}

double depth_at(const DepthImage& depth, PixelPoint p) {
    const int ix = static_cast<int>(std::floor(p.u));
    const int iy = static_cast<int>(std::floor(p.v));
    if (ix < 0 || iy < 0 || ix >= depth.width || iy >= depth.height)
        throw OutOfBounds("depth lookup outside the image");
    const float direct = depth.at(ix, iy);
    if (direct > 0.0f) return direct;

    std::vector<float> window;
    for (int dy = -2; dy <= 2; ++dy) {
        for (int dx = -2; dx <= 2; ++dx) {
            const int x = ix + dx;
            const int y = iy + dy;
            if (x < 0 || y < 0 || x >= depth.width || y >= depth.height) continue;
            const float d = depth.at(x, y);
            if (d > 0.0f) window.push_back(d);
        }
    }
    if (window.empty())
        throw DepthHole("no valid depth in the 5x5 window around (" + std::to_string(ix) +
                        ", " + std::to_string(iy) + ")");
    const std::size_t mid = (window.size() - 1) / 2;  // lower median
    std::nth_element(window.begin(), window.begin() + static_cast<std::ptrdiff_t>(mid),
                     window.end());
    return window[mid];
}

VisualGoal construct_goal(const Observation& obs, const Instruction& instruction,
                          GroundingBackend& backend, double r) {
    if (r <= 0.0) throw ConfigError("sphere radius must be positive");
    if (obs.head_rgb.width != obs.head_depth.width ||
        obs.head_rgb.height != obs.head_depth.height)
        throw ConfigError("depth image is not registered to the head image");

    const GroundResult grounded = backend.ground(obs.head_rgb, instruction.text);
    if (grounded.image.width != obs.head_rgb.width ||
        grounded.image.height != obs.head_rgb.height)
        throw DimensionMismatch("backend returned " + std::to_string(grounded.image.width) +
                                "x" + std::to_string(grounded.image.height) + " for " +
                                std::to_string(obs.head_rgb.width) + "x" +
                                std::to_string(obs.head_rgb.height) + " input");

    const MarkerDetection det = detect_marker(grounded.image);
    const double z = grounded.marked_depth ? *grounded.marked_depth
                                           : depth_at(obs.head_depth, det.center);

    const CameraPoint in_head = back_project(det.center, z, obs.head.intrinsics, obs.head.id);
    const WorldPoint anchor = to_world(in_head, obs.head);

    VisualGoal goal;
    goal.anchor = anchor;
    goal.sphere_radius = r;
    goal.source_pixel = det.center;
    goal.source_depth = z;
    for (const CameraModel* cam : {&obs.head, &obs.wrist}) {
        const auto proj = try_project(anchor, *cam);
        if (!proj) continue;  // behind this camera; drop the view
        goal.per_view[cam->id] =
            ViewGoal{proj->pixel, pixel_radius(r, proj->depth, cam->intrinsics.fx)};
    }
    return goal;
}

namespace {

class OracleBackend final : public GroundingBackend {
public:
    OracleBackend(const Scene& scene, const Slot& gt_slot, double r)
        : head_(scene.rig.head), center_(gt_slot.center), r_(r) {}

    GroundResult ground(const RgbImage& head_rgb, const std::string&) override {
        const Projection proj = project(center_, head_);
        GroundResult out;
        out.image = head_rgb;
        draw_sphere_marker(out.image, proj.pixel,
                           pixel_radius(r_, proj.depth, head_.intrinsics.fx), kMarkerColor);
        out.marked_depth = proj.depth;
        return out;
    }

private:
    CameraModel head_;
    WorldPoint center_;
    double r_;
};

class PerturbedBackend final : public GroundingBackend {
public:
    PerturbedBackend(std::unique_ptr<GroundingBackend> inner, double sigma_px,
                     std::uint64_t seed)
        : inner_(std::move(inner)),
          sigma_(sigma_px),
          rng_(derive_seed(seed, "backend/perturb")) {}

    GroundResult ground(const RgbImage& head_rgb, const std::string& instruction) override {
        GroundResult base = inner_->ground(head_rgb, instruction);
        if (sigma_ == 0.0) return base;

        std::lock_guard<std::mutex> lock(mutex_);
        const MarkerDetection det = detect_marker(base.image);
        const PixelPoint shifted{det.center.u + rng_.gaussian(0.0, sigma_),
                                 det.center.v + rng_.gaussian(0.0, sigma_)};
        // Redrawing on the clean input erases the inner marker without
        // needing to reconstruct occluded pixels.
        GroundResult out;
        out.image = head_rgb;
        draw_sphere_marker(out.image, shifted, det.major, kMarkerColor);
        out.marked_depth = base.marked_depth;
        return out;
    }

private:
    std::unique_ptr<GroundingBackend> inner_;
    double sigma_;
    Rng rng_;
    std::mutex mutex_;
};

}  // namespace

std::unique_ptr<GroundingBackend> oracle_backend(const Scene& scene, const Slot& gt_slot,
                                                 double r) {
    return std::make_unique<OracleBackend>(scene, gt_slot, r);
}

std::unique_ptr<GroundingBackend> perturbed_backend(std::unique_ptr<GroundingBackend> inner,
                                                    double sigma_px, std::uint64_t seed) {
    return std::make_unique<PerturbedBackend>(std::move(inner), sigma_px, seed);
}

}  // namespace slotkit
