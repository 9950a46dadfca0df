#pragma once

#include "slotkit/geometry.hpp"
#include "slotkit/image.hpp"

namespace slotkit {

// Hue interval may wrap through 0 (hue_lo > hue_hi selects the complement
// arc). Defaults bracket the pure-blue marker color.
struct HsvThresholds {
    double hue_lo = 200.0;  // degrees
    double hue_hi = 260.0;
    double sat_lo = 0.5;
    double val_lo = 0.3;
};

struct Hsv {
    double h;  // degrees [0, 360)
    double s;  // [0, 1]
    double v;  // [0, 1]
};

Hsv rgb_to_hsv(const Rgb& c);
bool hsv_in_window(const Hsv& p, const HsvThresholds& th);

// Axes are semi-axes of the moments-fitted ellipse, in pixels.
struct MarkerDetection {
    PixelPoint center;
    double major = 0;
    double minor = 0;
    double area = 0;        // component area, pixels^2
    double confidence = 0;  // component area / fitted ellipse area, clamped to [0, 1]
};

// Color threshold, then 3x3 morphological opening followed by closing
// (one iteration each; pixels beyond the border count as false).
Mask segment(const RgbImage& img, const HsvThresholds& th = {});

// Largest 8-connected component of the segmented mask, centered by an
// image-moments ellipse fit. Area ties go to the component whose centroid
// comes first in row-major order. Throws NoMarker when nothing usable
// remains (largest component below 5 px^2).
MarkerDetection detect_marker(const RgbImage& img, const HsvThresholds& th = {});

}  // namespace slotkit
