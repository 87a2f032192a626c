#ifndef DCC_SEGMENTATION_HPP
#define DCC_SEGMENTATION_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "dcc/config.hpp"
#include "dcc/error.hpp"
#include "dcc/image.hpp"

namespace dcc {

inline constexpr int kMacroblockSize = 16;

inline int blocks_for(int pixels) { return (pixels + kMacroblockSize - 1) / kMacroblockSize; }

// One flag per 16x16 macroblock.
struct BlockMask {
    int width_mb = 0;
    int height_mb = 0;
    std::vector<std::uint8_t> bits;

    BlockMask() = default;
    BlockMask(int wmb, int hmb)
        : width_mb(wmb), height_mb(hmb),
          bits(static_cast<std::size_t>(wmb) * hmb, 0) {}

    static BlockMask for_frame(int width_px, int height_px) {
        return BlockMask(blocks_for(width_px), blocks_for(height_px));
    }

    bool get(int bx, int by) const {
        return bits[static_cast<std::size_t>(by) * width_mb + bx] != 0;
    }
    void set(int bx, int by, bool v = true) {
        bits[static_cast<std::size_t>(by) * width_mb + bx] = v ? 1 : 0;
    }
    std::size_t count() const {
        std::size_t n = 0;
        for (auto b : bits) n += b != 0;
        return n;
    }
    bool same_dims(const BlockMask& o) const {
        return width_mb == o.width_mb && height_mb == o.height_mb;
    }

    BlockMask united(const BlockMask& o) const {
        if (!same_dims(o)) throw InvalidArgument("BlockMask union: dimension mismatch");
        BlockMask r = *this;
        for (std::size_t i = 0; i < bits.size(); ++i) r.bits[i] = bits[i] || o.bits[i];
        return r;
    }
};

struct SkyResult {
    bool has_sky = false;
    int skyline_row = 0;             // valid iff has_sky
    std::vector<std::uint8_t> mask;  // per-pixel, 1 = sky
    int mask_width = 0;
    int mask_height = 0;
};

inline bool is_sky_pixel(std::uint8_t r, std::uint8_t g, std::uint8_t b,
                         const SkyFilterParams& p) {
    const int luma = luma_of_rgb(r, g, b);
    return b >= p.blue_ratio * r && b >= p.blue_ratio * g && luma >= p.min_luma;
}

// Color-filter sky detection. The skyline is the first row, scanning from the
// top, whose sky fraction falls below row_sky_min; detection requires the top
// region of the frame to be mostly sky.
inline SkyResult segment_sky(const ImageRgb& frame, const SkyFilterParams& p = {}) {
    SkyResult out;
    out.mask_width = frame.width;
    out.mask_height = frame.height;
    out.mask.assign(static_cast<std::size_t>(frame.width) * frame.height, 0);
    if (frame.width == 0 || frame.height == 0) return out;

    std::vector<int> row_sky(frame.height, 0);
    for (int y = 0; y < frame.height; ++y) {
        for (int x = 0; x < frame.width; ++x) {
            if (is_sky_pixel(frame.at(x, y, 0), frame.at(x, y, 1), frame.at(x, y, 2), p)) {
                out.mask[static_cast<std::size_t>(y) * frame.width + x] = 1;
                ++row_sky[y];
            }
        }
    }

    const int top_rows = std::max(1, static_cast<int>(frame.height * p.top_fraction));
    std::int64_t top_count = 0;
    for (int y = 0; y < top_rows; ++y) top_count += row_sky[y];
    const double top_fraction =
        static_cast<double>(top_count) / (static_cast<double>(top_rows) * frame.width);
    if (top_fraction < p.top_sky_min) {
        out.mask.assign(out.mask.size(), 0);
        return out;
    }

    int skyline = 0;
    while (skyline < frame.height &&
           row_sky[skyline] >= p.row_sky_min * frame.width)
        ++skyline;
    out.has_sky = skyline > 0;
    if (!out.has_sky) {
        out.mask.assign(out.mask.size(), 0);
        return out;
    }
    out.skyline_row = skyline;
    // Keep the mask within a small tolerance band below the skyline.
    const int band_end = std::min(frame.height, skyline + kMacroblockSize);
    for (int y = band_end; y < frame.height; ++y)
        for (int x = 0; x < frame.width; ++x)
            out.mask[static_cast<std::size_t>(y) * frame.width + x] = 0;
    return out;
}

struct SliceSpan {
    int row_start = 0; // inclusive, base-frame rows
    int row_end = 0;   // exclusive
    int rows() const { return row_end - row_start; }
};

struct SlicePlan {
    std::vector<SliceSpan> slices; // top to bottom, covering [sky_rows, height)
    int sky_rows = 0;              // rows cropped above the first slice
    std::optional<SkyResult> sky;
    double pitch_used = 90.0;
    int frame_height = 0;

    bool same_layout(const SlicePlan& o) const {
        if (slices.size() != o.slices.size() || sky_rows != o.sky_rows) return false;
        for (std::size_t i = 0; i < slices.size(); ++i)
            if (slices[i].row_start != o.slices[i].row_start ||
                slices[i].row_end != o.slices[i].row_end)
                return false;
        return true;
    }
};

// Slice count by pitch band. The printed bands leave 60 degrees unassigned;
// it joins the 3-slice band here.
inline int slice_count_for_pitch(double pitch_deg) {
    if (pitch_deg >= 75.0) return 1;
    if (pitch_deg >= 30.0 && pitch_deg <= 60.0) return 3;
    return 2;
}

// Equal-height horizontal bands over the non-sky region, boundaries snapped
// to multiples of 16 rows; the last band absorbs the remainder.
inline SlicePlan plan_slices(double pitch_deg, int frame_height,
                             const SkyResult* sky = nullptr) {
    if (!(pitch_deg >= 0.0 && pitch_deg <= 90.0))
        throw InvalidArgument("plan_slices: pitch must be in [0, 90] degrees");
    if (frame_height < kMacroblockSize)
        throw InvalidArgument("plan_slices: frame too short");

    SlicePlan plan;
    plan.pitch_used = pitch_deg;
    plan.frame_height = frame_height;
    if (sky && sky->has_sky) {
        plan.sky = *sky;
        int snapped = ((sky->skyline_row + kMacroblockSize / 2) / kMacroblockSize) *
                      kMacroblockSize;
        snapped = std::min(snapped, frame_height - kMacroblockSize);
        plan.sky_rows = std::max(0, snapped);
    }

    const int top = plan.sky_rows;
    const int usable = frame_height - top;
    int count = slice_count_for_pitch(pitch_deg);
    count = std::max(1, std::min(count, usable / kMacroblockSize));

    const int band = (usable / count) / kMacroblockSize * kMacroblockSize;
    int row = top;
    for (int i = 0; i < count; ++i) {
        SliceSpan s;
        s.row_start = row;
        s.row_end = i + 1 == count ? frame_height : row + band;
        plan.slices.push_back(s);
        row = s.row_end;
    }
    return plan;
}

inline bool is_road_pixel(std::uint8_t r, std::uint8_t g, std::uint8_t b,
                          const RoadFilterParams& p) {
    const int spread = std::max({std::abs(r - g), std::abs(g - b), std::abs(r - b)});
    const int luma = luma_of_rgb(r, g, b);
    return spread <= p.max_channel_spread && luma >= p.min_luma && luma <= p.max_luma;
}

// Low-saturation gray band filter at macroblock granularity: a block is road
// when the majority of its (in-frame) pixels pass.
inline BlockMask segment_road(const ImageRgb& frame, const RoadFilterParams& p = {}) {
    BlockMask mask = BlockMask::for_frame(frame.width, frame.height);
    for (int by = 0; by < mask.height_mb; ++by) {
        for (int bx = 0; bx < mask.width_mb; ++bx) {
            const int x0 = bx * kMacroblockSize, y0 = by * kMacroblockSize;
            const int x1 = std::min(frame.width, x0 + kMacroblockSize);
            const int y1 = std::min(frame.height, y0 + kMacroblockSize);
            int pass = 0;
            const int total = (x1 - x0) * (y1 - y0);
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x)
                    if (is_road_pixel(frame.at(x, y, 0), frame.at(x, y, 1), frame.at(x, y, 2), p))
                        ++pass;
            mask.set(bx, by, pass > p.block_majority * total);
        }
    }
    return mask;
}

} // namespace dcc

#endif // DCC_SEGMENTATION_HPP
