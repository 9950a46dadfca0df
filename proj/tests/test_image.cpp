#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <string>

#include "slotkit/errors.hpp"
#include "slotkit/image.hpp"
#include "slotkit/image_io.hpp"
#include "slotkit/rng.hpp"

using namespace slotkit;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "slotkit-image-tests";
    fs::create_directories(dir);
    return dir / name;
}

RgbImage random_image(int w, int h, Rng& rng) {
    RgbImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            img.set(x, y,
                    Rgb{static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
                        static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
                        static_cast<std::uint8_t>(rng.uniform_int(0, 255))});
    return img;
}

}  // namespace

TEST_CASE("rgb png file round trip preserves every pixel") {
    Rng rng(derive_seed(1, "test/png-roundtrip"));
    const RgbImage img = random_image(33, 21, rng);
    const fs::path path = temp_file("roundtrip.png");
    write_png(path, img);
    const RgbImage back = read_png(path);
    CHECK(back == img);
}

TEST_CASE("in-memory png codec round trips and rejects garbage") {
    Rng rng(derive_seed(2, "test/png-memory"));
    const RgbImage img = random_image(17, 9, rng);
    const std::vector<std::uint8_t> bytes = encode_png(img);
    CHECK(decode_png(bytes) == img);
    CHECK_THROWS_AS(decode_png({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}), Error);
}

TEST_CASE("depth png stores millimeters and zero means no hit") {
    DepthImage depth(8, 4);
    depth.at(0, 0) = 0.0f;
    depth.at(1, 0) = 0.5004f;
    depth.at(2, 0) = 1.2343f;
    depth.at(3, 0) = 0.0001f;
    depth.at(7, 3) = 65.5351f;
    const fs::path path = temp_file("depth.png");
    write_depth_png(path, depth);
    const DepthImage back = read_depth_png(path);
    REQUIRE(back.width == 8);
    REQUIRE(back.height == 4);
    CHECK(back.at(0, 0) == 0.0f);
    CHECK(back.at(1, 0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(back.at(2, 0) == doctest::Approx(1.234).epsilon(1e-6) /* nearest mm */);
    CHECK(back.at(3, 0) == 0.0f /* rounds to zero: below quantization floor */);
    CHECK(back.at(7, 3) == doctest::Approx(65.535).epsilon(1e-6) /* saturates */);
}

TEST_CASE("depth quantization error never exceeds half a millimeter") {
    Rng rng(derive_seed(3, "test/depth-quant"));
    DepthImage depth(64, 16);
    for (int y = 0; y < depth.height; ++y)
        for (int x = 0; x < depth.width; ++x)
            depth.at(x, y) = static_cast<float>(rng.uniform(0.01, 5.0));
    const fs::path path = temp_file("depth-quant.png");
    write_depth_png(path, depth);
    const DepthImage back = read_depth_png(path);
    for (int y = 0; y < depth.height; ++y)
        for (int x = 0; x < depth.width; ++x)
            CHECK(std::abs(back.at(x, y) - depth.at(x, y)) <= 0.0005 + 1e-7);
}

TEST_CASE("base64 matches the reference vectors both ways") {
    const std::pair<std::string, std::string> vectors[] = {
        {"", ""},           {"f", "Zg=="},     {"fo", "Zm8="},
        {"foo", "Zm9v"},    {"foob", "Zm9vYg=="}, {"fooba", "Zm9vYmE="},
        {"foobar", "Zm9vYmFy"},
    };
    for (const auto& [plain, encoded] : vectors) {
        const std::vector<std::uint8_t> bytes(plain.begin(), plain.end());
        CHECK(base64_encode(bytes) == encoded);
        CHECK(base64_decode(encoded) == bytes);
    }
}

TEST_CASE("base64 round trips arbitrary bytes and rejects invalid input") {
    Rng rng(derive_seed(4, "test/base64"));
    for (int len = 0; len < 64; ++len) {
        std::vector<std::uint8_t> bytes;
        for (int i = 0; i < len; ++i)
            bytes.push_back(static_cast<std::uint8_t>(rng.uniform_int(0, 255)));
        CHECK(base64_decode(base64_encode(bytes)) == bytes);
    }
    CHECK_THROWS_AS(base64_decode("not*valid"), Error);
}

TEST_CASE("image accessors enforce bounds") {
    RgbImage img(4, 3);
    CHECK(img.in_bounds(0, 0));
    CHECK(img.in_bounds(3, 2));
    CHECK_FALSE(img.in_bounds(4, 2));
    CHECK_FALSE(img.in_bounds(0, 3));
    CHECK_FALSE(img.in_bounds(-1, 0));
}
