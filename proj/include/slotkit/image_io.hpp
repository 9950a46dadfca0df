#pragma once

#include <string>
#include <vector>

#include "slotkit/image.hpp"

namespace slotkit {

// 8-bit RGB PNG.
void write_png(const std::string& path, const RgbImage& img);
RgbImage read_png(const std::string& path);

// Depth as 16-bit grayscale PNG, 1 unit = 1 mm, 0 = no hit. Values round to
// the nearest millimeter and saturate at 65.535 m.
void write_depth_png(const std::string& path, const DepthImage& img);
DepthImage read_depth_png(const std::string& path);

// In-memory PNG encode/decode for the wire protocol.
std::vector<std::uint8_t> encode_png(const RgbImage& img);
RgbImage decode_png(const std::vector<std::uint8_t>& bytes);

std::string base64_encode(const std::vector<std::uint8_t>& data);
std::vector<std::uint8_t> base64_decode(const std::string& text);

}  // namespace slotkit
