#ifndef DCC_MOTION_HPP
#define DCC_MOTION_HPP

#include <cstdint>
#include <cstdlib>
#include <vector>

#include "dcc/error.hpp"
#include "dcc/geometry.hpp"
#include "dcc/image.hpp"
#include "dcc/segmentation.hpp"

namespace dcc {

struct Rect {
    int x0 = 0, y0 = 0, w = 0, h = 0;
    int x1() const { return x0 + w; }
    int y1() const { return y0 + h; }
    bool empty() const { return w <= 0 || h <= 0; }
    std::int64_t area() const { return empty() ? 0 : static_cast<std::int64_t>(w) * h; }
    bool contains(int x, int y) const { return x >= x0 && x < x1() && y >= y0 && y < y1(); }
    bool contains(const Rect& r) const {
        return r.x0 >= x0 && r.y0 >= y0 && r.x1() <= x1() && r.y1() <= y1();
    }
};

// Chroma plane shift for a luma offset: half, rounded away from zero, so both
// codec ends derive the same alignment.
inline int chroma_shift(int d) {
    return d >= 0 ? (d + 1) / 2 : -((-d + 1) / 2);
}

struct ShiftedReference {
    Yuv420 image;                // reference translated by (d_w, d_l)
    Rect overlap;                // region valid in both frames (luma coords)
    std::vector<Rect> uncovered; // newly exposed bands, up to 3 rectangles
    GlobalMotion gm;
};

// Pure integer translation: out(x, y) = ref(x + d_w, y + d_l), edge-clamped
// outside the overlap (those pixels have no reference and are intra-coded).
// The uncovered L-shape is split at the corner into up to 3 rectangles.
inline ShiftedReference shift_reference(const Yuv420& ref, GlobalMotion gm) {
    const int w = ref.width(), h = ref.height();
    if (std::abs(gm.d_w) >= w || std::abs(gm.d_l) >= h)
        throw InvalidArgument("shift_reference: no overlap for this offset");

    ShiftedReference out;
    out.gm = gm;
    out.image = Yuv420(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            out.image.y.at(x, y) = ref.y.at_clamped(x + gm.d_w, y + gm.d_l);
    const int cw = w / 2, ch = h / 2;
    const int cdw = chroma_shift(gm.d_w), cdl = chroma_shift(gm.d_l);
    for (int y = 0; y < ch; ++y)
        for (int x = 0; x < cw; ++x) {
            out.image.cb.at(x, y) = ref.cb.at_clamped(x + cdw, y + cdl);
            out.image.cr.at(x, y) = ref.cr.at_clamped(x + cdw, y + cdl);
        }

    const int ox0 = std::max(0, -gm.d_w), ox1 = std::min(w, w - gm.d_w);
    const int oy0 = std::max(0, -gm.d_l), oy1 = std::min(h, h - gm.d_l);
    out.overlap = {ox0, oy0, ox1 - ox0, oy1 - oy0};

    // Vertical band on the leading x edge, horizontal band on the leading y
    // edge, corner separated.
    const Rect vband = gm.d_w > 0 ? Rect{ox1, 0, w - ox1, h}
                                  : Rect{0, 0, ox0, h};
    const Rect hband = gm.d_l > 0 ? Rect{ox0, oy1, ox1 - ox0, h - oy1}
                                  : Rect{ox0, 0, ox1 - ox0, oy0};
    if (!vband.empty() && !hband.empty()) {
        out.uncovered.push_back({vband.x0, hband.y0, vband.w, hband.h}); // corner
        out.uncovered.push_back({vband.x0, oy0, vband.w, oy1 - oy0});
        out.uncovered.push_back(hband);
    } else if (!vband.empty()) {
        out.uncovered.push_back(vband);
    } else if (!hband.empty()) {
        out.uncovered.push_back(hband);
    }
    return out;
}

// Signed differences over the overlap (zero outside), with per-macroblock
// luma SAD summaries.
struct ResidualPlane {
    int width = 0, height = 0;
    std::vector<std::int16_t> y;  // width*height
    std::vector<std::int16_t> cb; // (width/2)*(height/2)
    std::vector<std::int16_t> cr;
    Rect overlap{};
    int mb_cols = 0, mb_rows = 0;
    std::vector<std::int32_t> mb_sad; // luma SAD over MB intersect overlap

    std::int16_t& y_at(int x, int yy) { return y[static_cast<std::size_t>(yy) * width + x]; }
    std::int16_t y_at(int x, int yy) const { return y[static_cast<std::size_t>(yy) * width + x]; }
    std::int32_t sad_at(int bx, int by) const {
        return mb_sad[static_cast<std::size_t>(by) * mb_cols + bx];
    }
};

inline ResidualPlane frame_delta(const Yuv420& cur, const ShiftedReference& sref) {
    if (cur.width() != sref.image.width() || cur.height() != sref.image.height())
        throw InvalidArgument("frame_delta: dimension mismatch");
    const int w = cur.width(), h = cur.height();
    ResidualPlane d;
    d.width = w;
    d.height = h;
    d.overlap = sref.overlap;
    d.y.assign(static_cast<std::size_t>(w) * h, 0);
    d.cb.assign(static_cast<std::size_t>(w / 2) * (h / 2), 0);
    d.cr.assign(static_cast<std::size_t>(w / 2) * (h / 2), 0);

    const Rect& o = sref.overlap;
    for (int y = o.y0; y < o.y1(); ++y)
        for (int x = o.x0; x < o.x1(); ++x)
            d.y_at(x, y) = static_cast<std::int16_t>(cur.y.at(x, y) - sref.image.y.at(x, y));

    // Chroma overlap rounded inward; inter macroblocks lie fully inside it.
    const int cx0 = (o.x0 + 1) / 2, cx1 = o.x1() / 2;
    const int cy0 = (o.y0 + 1) / 2, cy1 = o.y1() / 2;
    for (int y = cy0; y < cy1; ++y)
        for (int x = cx0; x < cx1; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * (w / 2) + x;
            d.cb[i] = static_cast<std::int16_t>(cur.cb.at(x, y) - sref.image.cb.at(x, y));
            d.cr[i] = static_cast<std::int16_t>(cur.cr.at(x, y) - sref.image.cr.at(x, y));
        }

    d.mb_cols = blocks_for(w);
    d.mb_rows = blocks_for(h);
    d.mb_sad.assign(static_cast<std::size_t>(d.mb_cols) * d.mb_rows, 0);
    for (int by = 0; by < d.mb_rows; ++by)
        for (int bx = 0; bx < d.mb_cols; ++bx) {
            const int x0 = std::max(o.x0, bx * kMacroblockSize);
            const int y0 = std::max(o.y0, by * kMacroblockSize);
            const int x1 = std::min({o.x1(), (bx + 1) * kMacroblockSize, w});
            const int y1 = std::min({o.y1(), (by + 1) * kMacroblockSize, h});
            std::int32_t sad = 0;
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x) sad += std::abs(d.y_at(x, y));
            d.mb_sad[static_cast<std::size_t>(by) * d.mb_cols + bx] = sad;
        }
    return d;
}

enum class FrameKind : std::uint8_t { I = 0, P = 1 };

// P only when the mean absolute overlap residual is small and not too much
// of the frame lacks a reference.
inline FrameKind classify_frame(const ResidualPlane& delta, double uncovered_fraction,
                                double energy_threshold, double uncovered_threshold) {
    const std::int64_t overlap_px = delta.overlap.area();
    if (overlap_px == 0) return FrameKind::I;
    std::int64_t total = 0;
    for (std::int32_t s : delta.mb_sad) total += s;
    const double mean_abs = static_cast<double>(total) / static_cast<double>(overlap_px);
    if (mean_abs <= energy_threshold && uncovered_fraction <= uncovered_threshold)
        return FrameKind::P;
    return FrameKind::I;
}

// Macroblocks fully inside the overlap whose SAD falls at or below the
// threshold are zeroed and flagged skip; everything else is untouched.
struct DecimationResult {
    std::vector<std::uint8_t> skip; // mb_cols x mb_rows
    std::size_t skipped = 0;
};

inline DecimationResult decimate_residuals(ResidualPlane& delta, std::int64_t threshold) {
    DecimationResult res;
    res.skip.assign(delta.mb_sad.size(), 0);
    const int cw = delta.width / 2;
    for (int by = 0; by < delta.mb_rows; ++by)
        for (int bx = 0; bx < delta.mb_cols; ++bx) {
            const Rect mb{bx * kMacroblockSize, by * kMacroblockSize, kMacroblockSize,
                          kMacroblockSize};
            if (mb.x1() > delta.width || mb.y1() > delta.height) continue;
            if (!delta.overlap.contains(mb)) continue;
            if (delta.sad_at(bx, by) > threshold) continue;
            res.skip[static_cast<std::size_t>(by) * delta.mb_cols + bx] = 1;
            ++res.skipped;
            for (int y = mb.y0; y < mb.y1(); ++y)
                for (int x = mb.x0; x < mb.x1(); ++x) delta.y_at(x, y) = 0;
            for (int y = mb.y0 / 2; y < mb.y1() / 2; ++y)
                for (int x = mb.x0 / 2; x < mb.x1() / 2; ++x) {
                    delta.cb[static_cast<std::size_t>(y) * cw + x] = 0;
                    delta.cr[static_cast<std::size_t>(y) * cw + x] = 0;
                }
        }
    return res;
}

inline double uncovered_fraction_of(const ShiftedReference& sref) {
    std::int64_t unc = 0;
    for (const Rect& r : sref.uncovered) unc += r.area();
    const std::int64_t total =
        static_cast<std::int64_t>(sref.image.width()) * sref.image.height();
    return total == 0 ? 0.0 : static_cast<double>(unc) / static_cast<double>(total);
}

} // namespace dcc

#endif // DCC_MOTION_HPP
