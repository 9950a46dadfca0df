#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "slotkit/errors.hpp"
#include "slotkit/eval.hpp"
#include "slotkit/geometry.hpp"
#include "slotkit/instruct.hpp"
#include "slotkit/pipeline.hpp"
#include "slotkit/remote.hpp"
#include "slotkit/renderer.hpp"
#include "slotkit/scene.hpp"
#include "slotkit/stub_server.hpp"

using namespace slotkit;

namespace {

RgbImage gradient_image(int w, int h) {
    RgbImage img(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            img.set(x, y,
                    {static_cast<std::uint8_t>(x * 7 % 256),
                     static_cast<std::uint8_t>(y * 13 % 256),
                     static_cast<std::uint8_t>((x + y) % 256)});
        }
    }
    return img;
}

RemoteConfig local_config(int port) {
    RemoteConfig cfg;
    cfg.port = port;
    cfg.timeout_sec = 5;
    return cfg;
}

}  // namespace

TEST_CASE("prompt embeds the instruction and the marker directive") {
    const std::string p = grounding_prompt("put the battery in the rightmost slot");
    CHECK(p.find("put the battery in the rightmost slot") != std::string::npos);
    CHECK(p.find("render a single small solid blue sphere marker at the described slot; "
                 "change nothing else") != std::string::npos);
}

TEST_CASE("endpoint strings parse into host, port, and path") {
    const RemoteConfig a = parse_endpoint("10.0.0.5:9900");
    CHECK(a.host == "10.0.0.5");
    CHECK(a.port == 9900);
    CHECK(a.path == "/v1/ground");  // default path preserved

    const RemoteConfig b = parse_endpoint("grounder.local:8080/api/mark");
    CHECK(b.host == "grounder.local");
    CHECK(b.port == 8080);
    CHECK(b.path == "/api/mark");

    CHECK_THROWS_AS(parse_endpoint("no-port-here"), ConfigError);
    CHECK_THROWS_AS(parse_endpoint(":8080"), ConfigError);
    CHECK_THROWS_AS(parse_endpoint("host:"), ConfigError);
    CHECK_THROWS_AS(parse_endpoint("host:eight"), ConfigError);
    CHECK_THROWS_AS(parse_endpoint("host:99999"), ConfigError);
    CHECK_THROWS_AS(parse_endpoint("host:0/x"), ConfigError);
}

TEST_CASE("echo stub round-trips the request image unchanged") {
    StubServer stub = StubServer::echo();
    const int port = stub.start();
    auto backend = remote_backend(local_config(port));

    const RgbImage input = gradient_image(97, 61);
    const GroundResult out = backend->ground(input, "any instruction");
    CHECK(out.image == input);
    CHECK_FALSE(out.marked_depth.has_value());
    CHECK(stub.request_count() == 1);
}

TEST_CASE("stub grounding like the oracle matches the oracle image byte for byte") {
    const Scene sc = generate_scene(Category::Ordinal, 1, 7);
    const Slot gt = sc.tray.slots[4];
    auto oracle = oracle_backend(sc, gt);

    StubServer stub = StubServer::transforming(
        [&](const RgbImage& img, const std::string& prompt) {
            return oracle_backend(sc, gt)->ground(img, prompt).image;
        });
    const int port = stub.start();
    auto backend = remote_backend(local_config(port));

    const Observation obs = observe(sc);
    const Instruction instr = generate_instruction(sc, sc.category, 1, sc.seed);
    const GroundResult via_wire = backend->ground(obs.head_rgb, instr.text);
    const GroundResult direct = oracle->ground(obs.head_rgb, instr.text);
    CHECK(via_wire.image == direct.image);
}

TEST_CASE("resized responses are rejected") {
    StubServer stub = StubServer::resized(512, 512);
    const int port = stub.start();
    auto backend = remote_backend(local_config(port));

    const RgbImage input = gradient_image(640, 480);
    CHECK_THROWS_AS(backend->ground(input, "x"), DimensionMismatch);
}

TEST_CASE("refusals and malformed bodies raise BackendRefusal") {
    const RgbImage input = gradient_image(32, 32);

    StubServer refusing = StubServer::refusing();
    auto a = remote_backend(local_config(refusing.start()));
    CHECK_THROWS_WITH_AS(a->ground(input, "x"), doctest::Contains("status 503"),
                         BackendRefusal);

    StubServer garbled = StubServer::garbled();
    auto b = remote_backend(local_config(garbled.start()));
    CHECK_THROWS_WITH_AS(b->ground(input, "x"), doctest::Contains("JSON"), BackendRefusal);
}

TEST_CASE("unreachable endpoint raises TransportError") {
    StubServer stub = StubServer::echo();
    const int port = stub.start();
    stub.stop();

    auto backend = remote_backend(local_config(port));
    CHECK_THROWS_AS(backend->ground(gradient_image(16, 16), "x"), TransportError);
}

TEST_CASE("bearer token is sent only when the environment variable is set") {
    StubServer stub = StubServer::echo();
    auto backend = remote_backend(local_config(stub.start()));
    const RgbImage input = gradient_image(16, 16);

    REQUIRE(setenv(kApiTokenEnvVar, "sekret-123", 1) == 0);
    backend->ground(input, "x");
    CHECK(stub.last_authorization() == "Bearer sekret-123");

    REQUIRE(unsetenv(kApiTokenEnvVar) == 0);
    backend->ground(input, "x");
    CHECK(stub.last_authorization() == "");
}

TEST_CASE("stub offsetting the marker shifts the grounded pixel by that amount") {
    const Scene sc = generate_scene(Category::Size, 1, 21);
    const Slot gt = sc.tray.slots[0];
    const Observation obs = observe(sc);
    const Instruction instr = generate_instruction(sc, sc.category, 1, sc.seed);

    auto marking_stub = [&](double du) {
        return StubServer::transforming([&sc, &gt, du](const RgbImage& img, const std::string&) {
            const Projection pr = project(gt.center, sc.rig.head);
            RgbImage out = img;
            draw_sphere_marker(out, {pr.pixel.u + du, pr.pixel.v},
                               pixel_radius(kDefaultSphereRadius, pr.depth,
                                            sc.rig.head.intrinsics.fx),
                               kMarkerColor);
            return out;
        });
    };

    StubServer exact = marking_stub(0.0);
    auto exact_backend = remote_backend(local_config(exact.start()));
    const VisualGoal g0 = construct_goal(obs, instr, *exact_backend);

    StubServer offset = marking_stub(3.0);
    auto offset_backend = remote_backend(local_config(offset.start()));
    const VisualGoal g3 = construct_goal(obs, instr, *offset_backend);

    const double pixel_shift =
        std::hypot(g3.source_pixel.u - g0.source_pixel.u, g3.source_pixel.v - g0.source_pixel.v);
    CHECK(pixel_shift == doctest::Approx(3.0).epsilon(0.25));

    const double err0 = (g0.anchor.p - gt.center.p).norm();
    const double err3 = (g3.anchor.p - gt.center.p).norm();
    CHECK(err3 > err0);
}

TEST_CASE("an offset-injecting stub drags suite instruction accuracy below the oracle") {
    // The wire carries only the edited image, so the stub must be told which
    // slot each generated trial targets; the factory updates that as it runs.
    struct Target {
        std::mutex m;
        Scene scene;
        Slot gt;
    };
    auto target = std::make_shared<Target>();

    StubServer stub = StubServer::transforming(
        [target](const RgbImage& img, const std::string&) {
            const std::lock_guard<std::mutex> lock(target->m);
            const Projection pr = project(target->gt.center, target->scene.rig.head);
            RgbImage out = img;
            draw_sphere_marker(out, {pr.pixel.u + 3.0, pr.pixel.v},
                               pixel_radius(kDefaultSphereRadius, pr.depth,
                                            target->scene.rig.head.intrinsics.fx),
                               kMarkerColor);
            return out;
        });
    const int port = stub.start();

    SuiteConfig cfg;
    cfg.categories = {Category::Ordinal};
    cfg.trials_per_category = 3;
    cfg.seed = 51;
    cfg.exec_sigma = 0.0;
    cfg.scene.image_width = 320;
    cfg.scene.image_height = 240;

    const SuiteRun oracle_run = run_suite(cfg, oracle_factory());
    REQUIRE(percent(oracle_run.report.overall.ia, oracle_run.report.overall.trials) == 100.0);

    const BackendFactory wire_factory = [target, port](const Scene& sc, const Slot& gt) {
        {
            const std::lock_guard<std::mutex> lock(target->m);
            target->scene = sc;
            target->gt = gt;
        }
        return remote_backend(local_config(port));
    };
    const SuiteRun wire_run = run_suite(cfg, wire_factory);
    for (const TrialRecord& rec : wire_run.records) CHECK_FALSE(rec.backend_failed);
    CHECK(percent(wire_run.report.overall.ia, wire_run.report.overall.trials) <
          percent(oracle_run.report.overall.ia, oracle_run.report.overall.trials));
}

TEST_CASE("concurrent ground calls all complete through the single-flight lock") {
    StubServer stub = StubServer::echo();
    auto backend = remote_backend(local_config(stub.start()));
    const RgbImage input = gradient_image(48, 48);

    std::vector<std::thread> threads;
    std::vector<int> ok(4, 0);
    for (int t = 0; t < 4; ++t) {
        threads.emplace_back([&, t] {
            for (int i = 0; i < 3; ++i) {
                if (backend->ground(input, "x").image == input) ++ok[t];
            }
        });
    }
    for (auto& th : threads) th.join();
    for (int t = 0; t < 4; ++t) CHECK(ok[t] == 3);
    CHECK(stub.request_count() == 12);
}
