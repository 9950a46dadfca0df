#include "slotkit/image_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>

#include "slotkit/errors.hpp"

namespace slotkit {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// libpng sink writing into a byte vector.
void vector_write(png_structp png, png_bytep data, png_size_t len) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + len);
}

struct MemReader {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos;
};

void vector_read(png_structp png, png_bytep out, png_size_t len) {
    auto* r = static_cast<MemReader*>(png_get_io_ptr(png));
    if (r->pos + len > r->size) {
        png_error(png, "truncated PNG stream");
        return;
    }
    std::memcpy(out, r->data + r->pos, len);
    r->pos += len;
}

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;

    PngWriter() {
        png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png) info = png_create_info_struct(png);
        if (!png || !info) throw Error("libpng: failed to allocate write structs");
    }
    ~PngWriter() { png_destroy_write_struct(&png, &info); }
};

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;

    PngReader() {
        png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png) info = png_create_info_struct(png);
        if (!png || !info) throw Error("libpng: failed to allocate read structs");
    }
    ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
};

void encode_rgb(const RgbImage& img, png_structp png, png_infop info) {
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y) {
        rows[y] = const_cast<png_bytep>(img.pixels.data() + static_cast<std::size_t>(y) * img.width * 3);
    }
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
}

RgbImage decode_rgb(png_structp png, png_infop info) {
    png_read_info(png, info);
    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    const int bit_depth = png_get_bit_depth(png, info);
    const int color = png_get_color_type(png, info);

    if (bit_depth == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    RgbImage img(width, height);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y) {
        rows[y] = img.pixels.data() + static_cast<std::size_t>(y) * width * 3;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    return img;
}

std::vector<std::uint16_t> quantize_depth(const DepthImage& img) {
    std::vector<std::uint16_t> mm(static_cast<std::size_t>(img.width) * img.height);
    for (std::size_t i = 0; i < mm.size(); ++i) {
        const double v = std::lround(static_cast<double>(img.depths[i]) * 1000.0);
        mm[i] = static_cast<std::uint16_t>(std::min(v, 65535.0));
    }
    return mm;
}

void encode_depth(const DepthImage& img, png_structp png, png_infop info) {
    png_set_IHDR(png, info, img.width, img.height, 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const auto mm = quantize_depth(img);
    // PNG stores 16-bit samples big-endian.
    std::vector<std::uint8_t> raw(mm.size() * 2);
    for (std::size_t i = 0; i < mm.size(); ++i) {
        raw[2 * i] = static_cast<std::uint8_t>(mm[i] >> 8);
        raw[2 * i + 1] = static_cast<std::uint8_t>(mm[i] & 0xff);
    }
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y) {
        rows[y] = raw.data() + static_cast<std::size_t>(y) * img.width * 2;
    }
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
}

DepthImage decode_depth(png_structp png, png_infop info) {
    png_read_info(png, info);
    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    if (png_get_color_type(png, info) != PNG_COLOR_TYPE_GRAY ||
        png_get_bit_depth(png, info) != 16) {
        throw Error("depth PNG must be 16-bit grayscale");
    }
    png_read_update_info(png, info);

    std::vector<std::uint8_t> raw(static_cast<std::size_t>(width) * height * 2);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y) {
        rows[y] = raw.data() + static_cast<std::size_t>(y) * width * 2;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);

    DepthImage img(width, height);
    for (std::size_t i = 0; i < img.depths.size(); ++i) {
        const std::uint16_t mm = static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
        img.depths[i] = static_cast<float>(mm) / 1000.0f;
    }
    return img;
}

}  // namespace

void write_png(const std::string& path, const RgbImage& img) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw Error("cannot open '" + path + "' for writing");
    PngWriter w;
    if (setjmp(png_jmpbuf(w.png))) throw Error("libpng: write failed for '" + path + "'");
    png_init_io(w.png, f.get());
    encode_rgb(img, w.png, w.info);
}

RgbImage read_png(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw Error("cannot open '" + path + "' for reading");
    PngReader r;
    if (setjmp(png_jmpbuf(r.png))) throw Error("libpng: read failed for '" + path + "'");
    png_init_io(r.png, f.get());
    return decode_rgb(r.png, r.info);
}

void write_depth_png(const std::string& path, const DepthImage& img) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw Error("cannot open '" + path + "' for writing");
    PngWriter w;
    if (setjmp(png_jmpbuf(w.png))) throw Error("libpng: write failed for '" + path + "'");
    png_init_io(w.png, f.get());
    encode_depth(img, w.png, w.info);
}

DepthImage read_depth_png(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw Error("cannot open '" + path + "' for reading");
    PngReader r;
    if (setjmp(png_jmpbuf(r.png))) throw Error("libpng: read failed for '" + path + "'");
    png_init_io(r.png, f.get());
    return decode_depth(r.png, r.info);
}

std::vector<std::uint8_t> encode_png(const RgbImage& img) {
    std::vector<std::uint8_t> out;
    PngWriter w;
    if (setjmp(png_jmpbuf(w.png))) throw Error("libpng: in-memory encode failed");
    png_set_write_fn(w.png, &out, vector_write, nullptr);
    encode_rgb(img, w.png, w.info);
    return out;
}

RgbImage decode_png(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
        throw Error("buffer is not a PNG stream");
    }
    MemReader reader{bytes.data(), bytes.size(), 0};
    PngReader r;
    if (setjmp(png_jmpbuf(r.png))) throw Error("libpng: in-memory decode failed");
    png_set_read_fn(r.png, &reader, vector_read);
    return decode_rgb(r.png, r.info);
}

std::string base64_encode(const std::vector<std::uint8_t>& data) {
    static const char tbl[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= data.size(); i += 3) {
        const std::uint32_t n = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
        out += tbl[(n >> 18) & 63];
        out += tbl[(n >> 12) & 63];
        out += tbl[(n >> 6) & 63];
        out += tbl[n & 63];
    }
    const std::size_t rem = data.size() - i;
    if (rem == 1) {
        const std::uint32_t n = data[i] << 16;
        out += tbl[(n >> 18) & 63];
        out += tbl[(n >> 12) & 63];
        out += "==";
    } else if (rem == 2) {
        const std::uint32_t n = (data[i] << 16) | (data[i + 1] << 8);
        out += tbl[(n >> 18) & 63];
        out += tbl[(n >> 12) & 63];
        out += tbl[(n >> 6) & 63];
        out += '=';
    }
    return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
    auto value = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 4 * 3);
    std::uint32_t buf = 0;
    int bits = 0;
    for (char c : text) {
        if (c == '=' || c == '\n' || c == '\r') continue;
        const int v = value(c);
        if (v < 0) throw Error("invalid base64 character");
        buf = (buf << 6) | static_cast<std::uint32_t>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<std::uint8_t>((buf >> bits) & 0xff));
        }
    }
    return out;
}

}  // namespace slotkit
