#include "slotkit/marker.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "slotkit/errors.hpp"

namespace slotkit {

Hsv rgb_to_hsv(const Rgb& c) {
    const double r = c.r / 255.0;
    const double g = c.g / 255.0;
    const double b = c.b / 255.0;
    const double cmax = std::max({r, g, b});
    const double cmin = std::min({r, g, b});
    const double delta = cmax - cmin;
    double h = 0.0;
    if (delta > 0.0) {
        if (cmax == r)
            h = 60.0 * std::fmod((g - b) / delta + 6.0, 6.0);
        else if (cmax == g)
            h = 60.0 * ((b - r) / delta + 2.0);
        else
            h = 60.0 * ((r - g) / delta + 4.0);
    }
    const double s = cmax > 0.0 ? delta / cmax : 0.0;
    return Hsv{h, s, cmax};
}

bool hsv_in_window(const Hsv& p, const HsvThresholds& th) {
    if (p.s < th.sat_lo || p.v < th.val_lo) return false;
    if (th.hue_lo <= th.hue_hi) return p.h >= th.hue_lo && p.h <= th.hue_hi;
    return p.h >= th.hue_lo || p.h <= th.hue_hi;
}

namespace {

// The 3x3 box element separates into a horizontal and a vertical 1x3 pass;
// out-of-bounds neighbors count as false in both, matching the full-window
// definition at the borders.
Mask erode3(const Mask& in) {
    const int w = in.width;
    const int h = in.height;
    Mask horiz(w, h);
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* row = in.bits.data() + static_cast<std::size_t>(y) * w;
        std::uint8_t* dst = horiz.bits.data() + static_cast<std::size_t>(y) * w;
        for (int x = 1; x + 1 < w; ++x) dst[x] = row[x - 1] & row[x] & row[x + 1];
    }
    Mask out(w, h);
    for (int y = 1; y + 1 < h; ++y) {
        const std::uint8_t* up = horiz.bits.data() + static_cast<std::size_t>(y - 1) * w;
        const std::uint8_t* mid = horiz.bits.data() + static_cast<std::size_t>(y) * w;
        const std::uint8_t* dn = horiz.bits.data() + static_cast<std::size_t>(y + 1) * w;
        std::uint8_t* dst = out.bits.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) dst[x] = up[x] & mid[x] & dn[x];
    }
    return out;
}

Mask dilate3(const Mask& in) {
    const int w = in.width;
    const int h = in.height;
    Mask horiz(w, h);
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* row = in.bits.data() + static_cast<std::size_t>(y) * w;
        std::uint8_t* dst = horiz.bits.data() + static_cast<std::size_t>(y) * w;
        if (w == 1) {
            dst[0] = row[0];
            continue;
        }
        dst[0] = row[0] | row[1];
        for (int x = 1; x + 1 < w; ++x) dst[x] = row[x - 1] | row[x] | row[x + 1];
        dst[w - 1] = row[w - 2] | row[w - 1];
    }
    Mask out(w, h);
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* up =
            horiz.bits.data() + static_cast<std::size_t>(y > 0 ? y - 1 : y) * w;
        const std::uint8_t* mid = horiz.bits.data() + static_cast<std::size_t>(y) * w;
        const std::uint8_t* dn =
            horiz.bits.data() + static_cast<std::size_t>(y + 1 < h ? y + 1 : y) * w;
        std::uint8_t* dst = out.bits.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) dst[x] = up[x] | mid[x] | dn[x];
    }
    return out;
}

struct Component {
    double area = 0;
    double cx = 0;  // centroid over pixel centers
    double cy = 0;
    double mxx = 0;  // central second moments
    double myy = 0;
    double mxy = 0;
};

std::vector<Component> components(const Mask& mask) {
    std::vector<int> label(static_cast<std::size_t>(mask.width) * mask.height, -1);
    std::vector<Component> out;
    std::vector<std::pair<int, int>> stack;
    for (int y0 = 0; y0 < mask.height; ++y0)
        for (int x0 = 0; x0 < mask.width; ++x0) {
            const std::size_t i0 = static_cast<std::size_t>(y0) * mask.width + x0;
            if (!mask.at(x0, y0) || label[i0] != -1) continue;
            const int id = static_cast<int>(out.size());
            std::vector<std::pair<int, int>> pixels;
            stack.clear();
            stack.emplace_back(x0, y0);
            label[i0] = id;
            while (!stack.empty()) {
                const auto [x, y] = stack.back();
                stack.pop_back();
                pixels.emplace_back(x, y);
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = x + dx;
                        const int ny = y + dy;
                        if (nx < 0 || nx >= mask.width || ny < 0 || ny >= mask.height) continue;
                        const std::size_t ni = static_cast<std::size_t>(ny) * mask.width + nx;
                        if (!mask.at(nx, ny) || label[ni] != -1) continue;
                        label[ni] = id;
                        stack.emplace_back(nx, ny);
                    }
            }
            Component c;
            c.area = static_cast<double>(pixels.size());
            for (const auto& [x, y] : pixels) {
                c.cx += x + 0.5;
                c.cy += y + 0.5;
            }
            c.cx /= c.area;
            c.cy /= c.area;
            for (const auto& [x, y] : pixels) {
                const double du = x + 0.5 - c.cx;
                const double dv = y + 0.5 - c.cy;
                c.mxx += du * du;
                c.myy += dv * dv;
                c.mxy += du * dv;
            }
            // Per-pixel variance of 1/12 keeps the minor axis positive for
            // single-row components.
            c.mxx = c.mxx / c.area + 1.0 / 12.0;
            c.myy = c.myy / c.area + 1.0 / 12.0;
            c.mxy /= c.area;
            out.push_back(c);
        }
    return out;
}

}  // namespace

Mask segment(const RgbImage& img, const HsvThresholds& th) {
    Mask mask(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        const std::uint8_t* row =
            img.pixels.data() + static_cast<std::size_t>(y) * img.width * 3;
        std::uint8_t* dst = mask.bits.data() + static_cast<std::size_t>(y) * img.width;
        for (int x = 0; x < img.width; ++x) {
            const std::uint8_t* px = row + static_cast<std::size_t>(x) * 3;
            // Value and saturation gates repeat rgb_to_hsv's exact
            // expressions so the fast path decides identically; the hue (the
            // expensive branchy part) runs only for surviving pixels.
            const double r = px[0] / 255.0;
            const double g = px[1] / 255.0;
            const double b = px[2] / 255.0;
            const double cmax = std::max({r, g, b});
            if (cmax < th.val_lo) continue;
            const double cmin = std::min({r, g, b});
            const double s = cmax > 0.0 ? (cmax - cmin) / cmax : 0.0;
            if (s < th.sat_lo) continue;
            dst[x] = hsv_in_window(rgb_to_hsv(Rgb{px[0], px[1], px[2]}), th) ? 1 : 0;
        }
    }
    // Opening (erode, dilate) then closing (dilate, erode).
    return erode3(dilate3(dilate3(erode3(mask))));
}

MarkerDetection detect_marker(const RgbImage& img, const HsvThresholds& th) {
    const Mask mask = segment(img, th);
    const std::vector<Component> comps = components(mask);
    const Component* best = nullptr;
    for (const Component& c : comps) {
        if (!best || c.area > best->area ||
            (c.area == best->area &&
             std::make_pair(c.cy, c.cx) < std::make_pair(best->cy, best->cx)))
            best = &c;
    }
    if (!best || best->area < 5.0) throw NoMarker("no marker component of at least 5 px^2");

    const double mean = (best->mxx + best->myy) / 2.0;
    const double diff = (best->mxx - best->myy) / 2.0;
    const double radical = std::sqrt(diff * diff + best->mxy * best->mxy);
    const double lambda_major = mean + radical;
    const double lambda_minor = std::max(mean - radical, 1e-12);

    MarkerDetection det;
    det.center = PixelPoint{best->cx, best->cy};
    det.major = 2.0 * std::sqrt(lambda_major);
    det.minor = 2.0 * std::sqrt(lambda_minor);
    det.area = best->area;
    det.confidence = std::clamp(best->area / (M_PI * det.major * det.minor), 0.0, 1.0);
    return det;
}

}  // namespace slotkit
