#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "slotkit/errors.hpp"
#include "slotkit/instruct.hpp"
#include "slotkit/marker.hpp"
#include "slotkit/pipeline.hpp"
#include "slotkit/renderer.hpp"
#include "slotkit/rng.hpp"
#include "slotkit/scene.hpp"

using namespace slotkit;

namespace {

Instruction dummy_instruction(const Scene& sc) {
    return generate_instruction(sc, sc.category, 1, sc.seed);
}

// Backend that replays a fixed result regardless of input.
class FixedBackend final : public GroundingBackend {
public:
    explicit FixedBackend(GroundResult result) : result_(std::move(result)) {}
    GroundResult ground(const RgbImage&, const std::string&) override { return result_; }

private:
    GroundResult result_;
};

// Strips the depth report so construct_goal exercises the depth-image path.
class HintStripper final : public GroundingBackend {
public:
    explicit HintStripper(std::unique_ptr<GroundingBackend> inner) : inner_(std::move(inner)) {}
    GroundResult ground(const RgbImage& img, const std::string& text) override {
        GroundResult r = inner_->ground(img, text);
        r.marked_depth.reset();
        return r;
    }

private:
    std::unique_ptr<GroundingBackend> inner_;
};

double sample_std(const std::vector<double>& xs) {
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    double acc = 0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / (xs.size() - 1));
}

}  // namespace

TEST_CASE("depth lookup reads the pixel containing the sample point") {
    DepthImage d(8, 8);
    d.at(3, 4) = 1.25f;
    CHECK(depth_at(d, {3.0, 4.0}) == doctest::Approx(1.25));
    CHECK(depth_at(d, {3.9, 4.9}) == doctest::Approx(1.25));
    CHECK_THROWS_AS(depth_at(d, {-0.1, 4.0}), OutOfBounds);
    CHECK_THROWS_AS(depth_at(d, {8.0, 4.0}), OutOfBounds);
}

TEST_CASE("depth holes fall back to the window median") {
    DepthImage d(9, 9);
    // Center (4,4) is a hole; plant five valid depths in the 5x5 window.
    d.at(2, 2) = 2.0f;
    d.at(3, 4) = 1.0f;
    d.at(5, 4) = 3.0f;
    d.at(6, 6) = 5.0f;
    d.at(4, 3) = 4.0f;
    CHECK(depth_at(d, {4.2, 4.7}) == doctest::Approx(3.0));  // median of {1,2,3,4,5}

    DepthImage even(9, 9);
    even.at(3, 4) = 1.0f;
    even.at(5, 4) = 2.0f;
    even.at(4, 3) = 3.0f;
    even.at(4, 5) = 4.0f;
    CHECK(depth_at(even, {4.0, 4.0}) == doctest::Approx(2.0));  // lower median of {1,2,3,4}

    DepthImage empty(9, 9);
    empty.at(0, 0) = 1.0f;  // outside the 5x5 window around (4,4)
    CHECK_THROWS_AS(depth_at(empty, {4.0, 4.0}), DepthHole);
}

TEST_CASE("oracle goal lands within two millimeters of the slot center") {
    for (Category cat : {Category::Ordinal, Category::Affordance, Category::Size}) {
        const Scene sc = generate_scene(cat, 1, 33);
        const Observation obs = observe(sc);
        for (const Slot& slot : sc.tray.slots) {
            auto backend = oracle_backend(sc, slot);
            const VisualGoal goal = construct_goal(obs, dummy_instruction(sc), *backend);
            CHECK((goal.anchor.p - slot.center.p).norm() < 0.002);
        }
    }
}

TEST_CASE("anchor error stays within the half-pixel centroid bound") {
    const Scene sc = generate_scene(Category::Height, 2, 9);
    const Observation obs = observe(sc);
    for (const Slot& slot : sc.tray.slots) {
        auto backend = oracle_backend(sc, slot);
        const VisualGoal goal = construct_goal(obs, dummy_instruction(sc), *backend);
        const Projection proj = project(slot.center, sc.rig.head);
        const double lateral_bound = 0.5 * proj.depth / sc.rig.head.intrinsics.fx;
        CHECK((goal.anchor.p - slot.center.p).norm() <= lateral_bound + 1e-9);
    }
}

TEST_CASE("per-view entries reproject from the anchor to machine precision") {
    const Scene sc = generate_scene(Category::Distance, 3, 21);
    const Observation obs = observe(sc);
    auto backend = oracle_backend(sc, sc.tray.slots[2]);
    const VisualGoal goal = construct_goal(obs, dummy_instruction(sc), *backend);
    REQUIRE(goal.per_view.count(CameraId::Head) == 1);
    REQUIRE(goal.per_view.count(CameraId::Wrist) == 1);
    for (const auto& [id, view] : goal.per_view) {
        const CameraModel& cam = id == CameraId::Head ? obs.head : obs.wrist;
        const Projection proj = project(goal.anchor, cam);
        CHECK(std::abs(proj.pixel.u - view.pixel.u) < 1e-6);
        CHECK(std::abs(proj.pixel.v - view.pixel.v) < 1e-6);
        CHECK(view.radius_px ==
              doctest::Approx(pixel_radius(goal.sphere_radius, proj.depth, cam.intrinsics.fx)));
    }
}

TEST_CASE("a backend that draws nothing raises NoMarker") {
    const Scene sc = generate_scene(Category::Vague, 1, 3);
    const Observation obs = observe(sc);
    FixedBackend backend(GroundResult{obs.head_rgb, std::nullopt});
    CHECK_THROWS_AS(construct_goal(obs, dummy_instruction(sc), backend), NoMarker);
}

TEST_CASE("a resized backend response raises DimensionMismatch") {
    const Scene sc = generate_scene(Category::Vague, 2, 3);
    const Observation obs = observe(sc);
    RgbImage small(320, 240, kMarkerColor);
    FixedBackend backend(GroundResult{small, std::nullopt});
    CHECK_THROWS_AS(construct_goal(obs, dummy_instruction(sc), backend), DimensionMismatch);
}

TEST_CASE("non-positive sphere radius is rejected") {
    const Scene sc = generate_scene(Category::Vague, 3, 3);
    const Observation obs = observe(sc);
    auto backend = oracle_backend(sc, sc.tray.slots[0]);
    CHECK_THROWS_AS(construct_goal(obs, dummy_instruction(sc), *backend, 0.0), ConfigError);
    CHECK_THROWS_AS(construct_goal(obs, dummy_instruction(sc), *backend, -0.01), ConfigError);
}

TEST_CASE("an anchor behind the wrist camera keeps only the head view") {
    const Scene sc = generate_scene(Category::Ordinal, 2, 12);
    Observation obs = observe(sc);
    // Point the wrist camera straight away from the tray.
    obs.wrist.world_pose = look_at(Vec3(0.32, -0.30, 0.50), Vec3(0.32, -2.0, 0.50));
    auto backend = oracle_backend(sc, sc.tray.slots[1]);
    const VisualGoal goal = construct_goal(obs, dummy_instruction(sc), *backend);
    CHECK(goal.per_view.count(CameraId::Head) == 1);
    CHECK(goal.per_view.count(CameraId::Wrist) == 0);
}

TEST_CASE("the oracle backend is byte-deterministic") {
    const Scene sc = generate_scene(Category::Knowledge, 1, 8);
    const Observation obs = observe(sc);
    auto backend = oracle_backend(sc, sc.tray.slots[3]);
    const GroundResult a = backend->ground(obs.head_rgb, "text");
    const GroundResult b = backend->ground(obs.head_rgb, "text");
    CHECK(a.image == b.image);
    REQUIRE(a.marked_depth.has_value());
    REQUIRE(b.marked_depth.has_value());
    CHECK(*a.marked_depth == *b.marked_depth);
}

TEST_CASE("an edge-clipped marker still grounds close to the slot center") {
    Scene sc = generate_scene(Category::Ordinal, 3, 19);
    const Slot& slot = sc.tray.slots[0];
    // Shift the principal point so the slot center projects 4 px from the
    // left edge; the drawn disk is clipped but keeps more than 5 px^2.
    const Projection nominal = project(slot.center, sc.rig.head);
    sc.rig.head.intrinsics.cx -= nominal.pixel.u - 4.0;
    REQUIRE(sc.rig.head.intrinsics.valid());
    const Observation obs = observe(sc);
    const Projection shifted = project(slot.center, sc.rig.head);
    REQUIRE(shifted.pixel.u == doctest::Approx(4.0));

    auto backend = oracle_backend(sc, slot);
    const VisualGoal goal = construct_goal(obs, dummy_instruction(sc), *backend);
    // Clipping biases the detected centroid by a few pixels at most.
    const double px_err = std::hypot(goal.source_pixel.u - shifted.pixel.u,
                                     goal.source_pixel.v - shifted.pixel.v);
    CHECK(px_err < 4.0);
    CHECK((goal.anchor.p - slot.center.p).norm() < 0.01);
}

TEST_CASE("without a depth report the clean depth image is read honestly") {
    const Scene sc = generate_scene(Category::Size, 1, 14);
    const Observation obs = observe(sc);
    const Slot& slot = sc.tray.slots[4];
    HintStripper backend(oracle_backend(sc, slot));
    const VisualGoal goal = construct_goal(obs, dummy_instruction(sc), backend);
    // The ray through the slot opening hits the cavity floor, so the read
    // depth exceeds the opening depth by roughly the cavity depth.
    const Projection opening = project(slot.center, sc.rig.head);
    CHECK(goal.source_depth > opening.depth + 0.5 * slot.depth);
    CHECK(goal.source_depth < opening.depth + 3.0 * slot.depth);
    // And the anchor consequently sits below the opening plane.
    CHECK(goal.anchor.p.z() < slot.center.p.z() - 0.25 * slot.depth);
}

TEST_CASE("a marker over empty background raises DepthHole on the no-report path") {
    const Scene sc = generate_scene(Category::Ordinal, 1, 6);
    const Observation obs = observe(sc);
    // Find a pixel whose whole 5x5 depth neighborhood is empty.
    int bx = -1, by = -1;
    for (int y = 3; y < obs.head_depth.height - 3 && bx < 0; ++y) {
        for (int x = 3; x < obs.head_depth.width - 3 && bx < 0; ++x) {
            bool clear = true;
            for (int dy = -3; dy <= 3 && clear; ++dy)
                for (int dx = -3; dx <= 3 && clear; ++dx)
                    if (obs.head_depth.at(x + dx, y + dy) > 0.0f) clear = false;
            if (clear) {
                bx = x;
                by = y;
            }
        }
    }
    REQUIRE(bx >= 0);
    RgbImage marked = obs.head_rgb;
    draw_sphere_marker(marked, {bx + 0.5, by + 0.5}, 2.5, kMarkerColor);
    FixedBackend backend(GroundResult{marked, std::nullopt});
    CHECK_THROWS_AS(construct_goal(obs, dummy_instruction(sc), backend), DepthHole);
}

TEST_CASE("zero-sigma perturbation is an exact passthrough") {
    const Scene sc = generate_scene(Category::Height, 1, 25);
    const Observation obs = observe(sc);
    auto plain = oracle_backend(sc, sc.tray.slots[2]);
    const GroundResult want = plain->ground(obs.head_rgb, "t");
    auto wrapped = perturbed_backend(oracle_backend(sc, sc.tray.slots[2]), 0.0, 77);
    const GroundResult got = wrapped->ground(obs.head_rgb, "t");
    CHECK(got.image == want.image);
    CHECK(got.marked_depth == want.marked_depth);
}

TEST_CASE("perturbation offsets are reproducible for a fixed seed") {
    const Scene sc = generate_scene(Category::Height, 2, 26);
    const Observation obs = observe(sc);
    auto a = perturbed_backend(oracle_backend(sc, sc.tray.slots[1]), 4.0, 123);
    auto b = perturbed_backend(oracle_backend(sc, sc.tray.slots[1]), 4.0, 123);
    for (int i = 0; i < 5; ++i) {
        const GroundResult ra = a->ground(obs.head_rgb, "t");
        const GroundResult rb = b->ground(obs.head_rgb, "t");
        CHECK(ra.image == rb.image);
    }
    auto c = perturbed_backend(oracle_backend(sc, sc.tray.slots[1]), 4.0, 124);
    CHECK(c->ground(obs.head_rgb, "t").image != a->ground(obs.head_rgb, "t").image);
}

TEST_CASE("sigma five empirical offset standard deviation sits in [4, 6]") {
    const Scene sc = generate_scene(Category::Size, 3, 31);
    const Observation obs = observe(sc);
    const Slot& slot = sc.tray.slots[3];
    auto clean = oracle_backend(sc, slot);
    const MarkerDetection base = detect_marker(clean->ground(obs.head_rgb, "t").image);
    auto noisy = perturbed_backend(oracle_backend(sc, slot), 5.0, 2025);

    std::vector<double> dx, dy;
    for (int i = 0; i < 500; ++i) {
        const GroundResult r = noisy->ground(obs.head_rgb, "t");
        const MarkerDetection det = detect_marker(r.image);
        dx.push_back(det.center.u - base.center.u);
        dy.push_back(det.center.v - base.center.v);
    }
    CHECK(sample_std(dx) > 4.0);
    CHECK(sample_std(dx) < 6.0);
    CHECK(sample_std(dy) > 4.0);
    CHECK(sample_std(dy) < 6.0);
}

TEST_CASE("mean anchor error grows monotonically with marker noise") {
    SceneGenParams params;
    params.image_width = 320;
    params.image_height = 240;
    const Scene sc = generate_scene(Category::Ordinal, 4, 40, params);
    const Observation obs = observe(sc);
    const Slot& slot = sc.tray.slots[2];
    const Instruction ins = dummy_instruction(sc);

    std::vector<double> means;
    for (double sigma : {0.0, 2.0, 5.0, 10.0}) {
        auto backend = perturbed_backend(oracle_backend(sc, slot), sigma, 555);
        double total = 0;
        int ok = 0;
        for (int trial = 0; trial < 220; ++trial) {
            try {
                const VisualGoal goal = construct_goal(obs, ins, *backend);
                total += (goal.anchor.p - slot.center.p).norm();
                ++ok;
            } catch (const NoMarker&) {
                total += 0.5;  // off-image marker: count as a large error
                ++ok;
            }
        }
        REQUIRE(ok >= 200);
        means.push_back(total / ok);
    }
    CHECK(means[0] < means[1]);
    CHECK(means[1] < means[2]);
    CHECK(means[2] < means[3]);
}
