#ifndef DCC_IMAGE_HPP
#define DCC_IMAGE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <vector>

#include "dcc/error.hpp"

namespace dcc {

// Interleaved 8-bit RGB image.
struct ImageRgb {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // width*height*3, row-major

    ImageRgb() = default;
    ImageRgb(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, fill) {
        if (w < 0 || h < 0) throw InvalidArgument("ImageRgb: negative dimensions");
    }

    std::uint8_t& at(int x, int y, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    std::uint8_t at(int x, int y, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }

    bool same_dims(const ImageRgb& o) const { return width == o.width && height == o.height; }
};

// Single 8-bit plane.
struct Plane {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    Plane() = default;
    Plane(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

    // Clamped access for borders.
    std::uint8_t at_clamped(int x, int y) const {
        x = std::clamp(x, 0, width - 1);
        y = std::clamp(y, 0, height - 1);
        return at(x, y);
    }
};

// 4:2:0 planar frame; luma dims must be even.
struct Yuv420 {
    Plane y;
    Plane cb;
    Plane cr;

    Yuv420() = default;
    Yuv420(int w, int h) : y(w, h), cb(w / 2, h / 2, 128), cr(w / 2, h / 2, 128) {
        if (w % 2 || h % 2) throw InvalidArgument("Yuv420: dimensions must be even");
    }

    int width() const { return y.width; }
    int height() const { return y.height; }

    bool operator==(const Yuv420& o) const {
        return y.data == o.y.data && cb.data == o.cb.data && cr.data == o.cr.data &&
               y.width == o.y.width && y.height == o.y.height;
    }
};

inline std::uint8_t clamp_u8(int v) {
    return static_cast<std::uint8_t>(std::clamp(v, 0, 255));
}

// Full-range BT.601 with 8-bit integer coefficients. Gray (R=G=B) maps to
// Cb=Cr=128 and round-trips exactly.
inline void rgb_to_ycbcr(std::uint8_t r, std::uint8_t g, std::uint8_t b,
                         std::uint8_t& yv, std::uint8_t& cbv, std::uint8_t& crv) {
    yv = static_cast<std::uint8_t>((77 * r + 150 * g + 29 * b + 128) >> 8);
    cbv = clamp_u8(128 + ((-43 * r - 85 * g + 128 * b + 128) >> 8));
    crv = clamp_u8(128 + ((128 * r - 107 * g - 21 * b + 128) >> 8));
}

inline void ycbcr_to_rgb(std::uint8_t yv, std::uint8_t cbv, std::uint8_t crv,
                         std::uint8_t& r, std::uint8_t& g, std::uint8_t& b) {
    const int cb = cbv - 128, cr = crv - 128;
    r = clamp_u8(yv + ((359 * cr + 128) >> 8));
    g = clamp_u8(yv - ((88 * cb + 183 * cr + 128) >> 8));
    b = clamp_u8(yv + ((454 * cb + 128) >> 8));
}

// Odd-sized inputs are padded by edge replication to even dims before
// chroma subsampling (2x2 mean, rounded).
inline Yuv420 rgb_to_yuv420(const ImageRgb& img) {
    const int w = img.width + (img.width & 1);
    const int h = img.height + (img.height & 1);
    Plane y(w, h), cbf(w, h), crf(w, h);
    for (int yy = 0; yy < h; ++yy) {
        const int sy = std::min(yy, img.height - 1);
        for (int xx = 0; xx < w; ++xx) {
            const int sx = std::min(xx, img.width - 1);
            std::uint8_t Y, Cb, Cr;
            rgb_to_ycbcr(img.at(sx, sy, 0), img.at(sx, sy, 1), img.at(sx, sy, 2), Y, Cb, Cr);
            y.at(xx, yy) = Y;
            cbf.at(xx, yy) = Cb;
            crf.at(xx, yy) = Cr;
        }
    }
    Yuv420 out(w, h);
    out.y = std::move(y);
    for (int cy = 0; cy < h / 2; ++cy) {
        for (int cx = 0; cx < w / 2; ++cx) {
            auto avg = [&](const Plane& p) {
                int s = p.at(2 * cx, 2 * cy) + p.at(2 * cx + 1, 2 * cy) +
                        p.at(2 * cx, 2 * cy + 1) + p.at(2 * cx + 1, 2 * cy + 1);
                return static_cast<std::uint8_t>((s + 2) >> 2);
            };
            out.cb.at(cx, cy) = avg(cbf);
            out.cr.at(cx, cy) = avg(crf);
        }
    }
    return out;
}

// Chroma is replicated 2x2 (no interpolation, keeps the path bit-exact).
inline ImageRgb yuv420_to_rgb(const Yuv420& f, int out_w = -1, int out_h = -1) {
    if (out_w < 0) out_w = f.width();
    if (out_h < 0) out_h = f.height();
    if (out_w > f.width() || out_h > f.height())
        throw InvalidArgument("yuv420_to_rgb: crop larger than frame");
    ImageRgb img(out_w, out_h);
    for (int y = 0; y < out_h; ++y) {
        for (int x = 0; x < out_w; ++x) {
            std::uint8_t r, g, b;
            ycbcr_to_rgb(f.y.at(x, y), f.cb.at(x / 2, y / 2), f.cr.at(x / 2, y / 2), r, g, b);
            img.at(x, y, 0) = r;
            img.at(x, y, 1) = g;
            img.at(x, y, 2) = b;
        }
    }
    return img;
}

inline int luma_of_rgb(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    return (77 * r + 150 * g + 29 * b + 128) >> 8;
}

// Mean squared error over the luma plane of two same-sized RGB regions.
inline double region_psnr_luma(const ImageRgb& a, const ImageRgb& b,
                               int x0, int y0, int w, int h) {
    if (!a.same_dims(b)) throw InvalidArgument("region_psnr_luma: dimension mismatch");
    x0 = std::clamp(x0, 0, a.width);
    y0 = std::clamp(y0, 0, a.height);
    const int x1 = std::clamp(x0 + w, 0, a.width);
    const int y1 = std::clamp(y0 + h, 0, a.height);
    if (x1 <= x0 || y1 <= y0) return 0.0;
    double sse = 0.0;
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            const int la = luma_of_rgb(a.at(x, y, 0), a.at(x, y, 1), a.at(x, y, 2));
            const int lb = luma_of_rgb(b.at(x, y, 0), b.at(x, y, 1), b.at(x, y, 2));
            const double d = la - lb;
            sse += d * d;
        }
    }
    const double n = static_cast<double>(x1 - x0) * (y1 - y0);
    if (sse == 0.0) return 99.0; // identical content; cap instead of infinity
    const double mse = sse / n;
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

} // namespace dcc

#endif // DCC_IMAGE_HPP
