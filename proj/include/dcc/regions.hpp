#ifndef DCC_REGIONS_HPP
#define DCC_REGIONS_HPP

#include <cstdint>
#include <vector>

#include "dcc/bitstream.hpp"
#include "dcc/error.hpp"
#include "dcc/geometry.hpp"
#include "dcc/motion.hpp"
#include "dcc/segmentation.hpp"

namespace dcc {

struct DetectionBox {
    int x = 0, y = 0, w = 0, h = 0; // full-frame pixels
    std::uint8_t cls = 0;           // 0 = car, 1 = truck
    double confidence = 1.0;
    std::uint32_t source_frame = 0;

    bool operator==(const DetectionBox& o) const = default;
};

enum RoPISource : std::uint8_t {
    kRoPIFromRoad = 1,
    kRoPIFromResidual = 2,
    kRoPIFromDetection = 4,
};

// set = RoPI, clear = RoNI; tags keep per-block provenance.
struct RoPIMap {
    BlockMask mask;
    std::vector<std::uint8_t> tags;
};

// Non-skip macroblocks after decimation are possible moving objects.
inline BlockMask ropi_from_residuals(const ResidualPlane& delta,
                                     const std::vector<std::uint8_t>& skip_flags) {
    if (skip_flags.size() != delta.mb_sad.size())
        throw InvalidArgument("ropi_from_residuals: skip flag count mismatch");
    BlockMask m(delta.mb_cols, delta.mb_rows);
    for (std::size_t i = 0; i < skip_flags.size(); ++i) m.bits[i] = skip_flags[i] ? 0 : 1;
    return m;
}

// Boxes from an earlier frame, carried along by the cumulative global motion
// since their source frame, then dilated one block per side (one more when
// the drone is fast). Boxes fully off-frame after translation are dropped.
inline BlockMask ropi_from_detections(const std::vector<DetectionBox>& boxes,
                                      GlobalMotion cumulative_gm, int width_mb, int height_mb,
                                      int extra_dilate = 0) {
    BlockMask m(width_mb, height_mb);
    const int dilate = 1 + extra_dilate;
    for (const DetectionBox& b : boxes) {
        const int x0 = b.x - cumulative_gm.d_w;
        const int y0 = b.y - cumulative_gm.d_l;
        const int x1 = x0 + b.w, y1 = y0 + b.h;
        if (x1 <= 0 || y1 <= 0 || x0 >= width_mb * kMacroblockSize ||
            y0 >= height_mb * kMacroblockSize)
            continue;
        int bx0 = x0 / kMacroblockSize - dilate;
        int by0 = y0 / kMacroblockSize - dilate;
        int bx1 = (x1 - 1) / kMacroblockSize + dilate;
        int by1 = (y1 - 1) / kMacroblockSize + dilate;
        bx0 = std::max(0, bx0);
        by0 = std::max(0, by0);
        bx1 = std::min(width_mb - 1, bx1);
        by1 = std::min(height_mb - 1, by1);
        for (int by = by0; by <= by1; ++by)
            for (int bx = bx0; bx <= bx1; ++bx) m.set(bx, by);
    }
    return m;
}

// Union of the three sources; sky blocks are forced RoNI regardless.
// sky_rows_px counts image rows (local to this grid) known to be sky.
inline RoPIMap build_ropi_map(const BlockMask& road, const BlockMask& residual,
                              const BlockMask& detections, int sky_rows_px = 0) {
    if (!road.same_dims(residual) || !road.same_dims(detections))
        throw InvalidArgument("build_ropi_map: mask dimension mismatch");
    RoPIMap out;
    out.mask = BlockMask(road.width_mb, road.height_mb);
    out.tags.assign(out.mask.bits.size(), 0);
    const int sky_blocks = sky_rows_px / kMacroblockSize; // fully-sky block rows
    for (int by = 0; by < road.height_mb; ++by)
        for (int bx = 0; bx < road.width_mb; ++bx) {
            const std::size_t i = static_cast<std::size_t>(by) * road.width_mb + bx;
            if (by < sky_blocks) continue;
            std::uint8_t tag = 0;
            if (road.bits[i]) tag |= kRoPIFromRoad;
            if (residual.bits[i]) tag |= kRoPIFromResidual;
            if (detections.bits[i]) tag |= kRoPIFromDetection;
            out.tags[i] = tag;
            out.mask.bits[i] = tag != 0;
        }
    return out;
}

// Feedback-channel detection records (little-endian):
// frame_index u32, count u16, then per box x,y,w,h u16 each, class u8,
// confidence u8 (scaled /255).
inline void write_detection_records(BitWriter& bw, std::uint32_t frame_index,
                                    const std::vector<DetectionBox>& boxes) {
    bw.put_u32le(frame_index);
    if (boxes.size() > 0xffff) throw InvalidArgument("too many detections for one record");
    bw.put_u16le(static_cast<std::uint16_t>(boxes.size()));
    for (const DetectionBox& b : boxes) {
        auto u16 = [](int v) {
            return static_cast<std::uint16_t>(std::clamp(v, 0, 0xffff));
        };
        bw.put_u16le(u16(b.x));
        bw.put_u16le(u16(b.y));
        bw.put_u16le(u16(b.w));
        bw.put_u16le(u16(b.h));
        bw.put_u8(b.cls);
        bw.put_u8(static_cast<std::uint8_t>(
            std::clamp(static_cast<int>(b.confidence * 255.0 + 0.5), 0, 255)));
    }
}

struct DetectionRecord {
    std::uint32_t frame_index = 0;
    std::vector<DetectionBox> boxes;
};

inline DetectionRecord read_detection_records(BitReader& br) {
    DetectionRecord rec;
    rec.frame_index = br.get_u32le();
    const std::uint16_t count = br.get_u16le();
    rec.boxes.reserve(count);
    for (std::uint16_t i = 0; i < count; ++i) {
        DetectionBox b;
        b.x = br.get_u16le();
        b.y = br.get_u16le();
        b.w = br.get_u16le();
        b.h = br.get_u16le();
        b.cls = br.get_u8();
        b.confidence = br.get_u8() / 255.0;
        b.source_frame = rec.frame_index;
        rec.boxes.push_back(b);
    }
    return rec;
}

} // namespace dcc

#endif // DCC_REGIONS_HPP
