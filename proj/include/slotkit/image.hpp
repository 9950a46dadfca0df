#pragma once

#include <cstdint>
#include <vector>

namespace slotkit {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

// Row-major 8-bit RGB image.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // 3 bytes per pixel

    RgbImage() = default;
    RgbImage(int w, int h, Rgb fill = {0, 0, 0}) : width(w), height(h) {
        pixels.resize(static_cast<std::size_t>(w) * h * 3);
        for (int i = 0; i < w * h; ++i) set_index(i, fill);
    }

    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    Rgb at(int x, int y) const {
        const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
        return {pixels[i], pixels[i + 1], pixels[i + 2]};
    }

    void set(int x, int y, Rgb c) { set_index(y * width + x, c); }

    bool operator==(const RgbImage&) const = default;

private:
    void set_index(int i, Rgb c) {
        const std::size_t k = static_cast<std::size_t>(i) * 3;
        pixels[k] = c.r;
        pixels[k + 1] = c.g;
        pixels[k + 2] = c.b;
    }
};

// Row-major depth image in meters; 0 means no hit.
struct DepthImage {
    int width = 0;
    int height = 0;
    std::vector<float> depths;

    DepthImage() = default;
    DepthImage(int w, int h) : width(w), height(h) {
        depths.assign(static_cast<std::size_t>(w) * h, 0.0f);
    }

    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    float at(int x, int y) const { return depths[static_cast<std::size_t>(y) * width + x]; }
    float& at(int x, int y) { return depths[static_cast<std::size_t>(y) * width + x]; }

    bool operator==(const DepthImage&) const = default;
};

// Binary mask, row-major.
struct Mask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    Mask() = default;
    Mask(int w, int h) : width(w), height(h) {
        bits.assign(static_cast<std::size_t>(w) * h, 0);
    }

    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto b : bits) n += b;
        return n;
    }
};

}  // namespace slotkit
