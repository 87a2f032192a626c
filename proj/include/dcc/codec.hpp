#ifndef DCC_CODEC_HPP
#define DCC_CODEC_HPP

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "dcc/bitstream.hpp"
#include "dcc/error.hpp"
#include "dcc/image.hpp"
#include "dcc/motion.hpp"
#include "dcc/regions.hpp"
#include "dcc/resolution.hpp"
#include "dcc/segmentation.hpp"
#include "dcc/transform.hpp"

namespace dcc {

// Wire limits; decoding validates against these so arbitrary inputs cannot
// drive allocations or loops unbounded.
inline constexpr int kMaxDim = 8192;
inline constexpr int kMaxSlices = 3;

struct BitstreamSegment {
    std::vector<std::uint8_t> bytes;
};

struct SliceCodeMeta {
    int row_start = 0;
    int row_end = 0;
    ResolutionClass res = ResolutionClass::r2160;
    int out_w = 0, out_h = 0; // coded dims before macroblock padding
    GlobalMotion gm{};        // slice-resolution pixel units (P frames)
    BlockMask ropi;           // padded macroblock grid; set = RoPI (QP ropi)

    bool operator==(const SliceCodeMeta& o) const {
        return row_start == o.row_start && row_end == o.row_end && res == o.res &&
               out_w == o.out_w && out_h == o.out_h && gm == o.gm &&
               ropi.bits == o.ropi.bits;
    }
};

struct FrameMetadata {
    FrameKind kind = FrameKind::I;
    int qp_ropi = 0;
    int qp_roni = 20;
    int sky_rows = 0;         // base rows cropped above the first slice
    bool sky_payload = false; // this frame refreshes the decoder's sky image
    std::vector<SliceCodeMeta> slices;
};

namespace detail {

inline int padded_dim(int v) { return blocks_for(v) * kMacroblockSize; }

inline Yuv420 pad_to_mb(const Yuv420& src) {
    const int pw = padded_dim(src.width()), ph = padded_dim(src.height());
    if (pw == src.width() && ph == src.height()) return src;
    Yuv420 out(pw, ph);
    for (int y = 0; y < ph; ++y)
        for (int x = 0; x < pw; ++x)
            out.y.at(x, y) = src.y.at_clamped(x, y);
    for (int y = 0; y < ph / 2; ++y)
        for (int x = 0; x < pw / 2; ++x) {
            out.cb.at(x, y) = src.cb.at_clamped(x, y);
            out.cr.at(x, y) = src.cr.at_clamped(x, y);
        }
    return out;
}

inline Yuv420 crop_yuv(const Yuv420& src, int w, int h) {
    if (w == src.width() && h == src.height()) return src;
    Yuv420 out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) out.y.at(x, y) = src.y.at(x, y);
    for (int y = 0; y < h / 2; ++y)
        for (int x = 0; x < w / 2; ++x) {
            out.cb.at(x, y) = src.cb.at(x, y);
            out.cr.at(x, y) = src.cr.at(x, y);
        }
    return out;
}

// Zigzagged (run, level) coding of one quantized 4x4 block:
// ue(nnz), then per nonzero coefficient ue(zero run) and se(level).
inline void write_coeffs(BitWriter& bw, const CoeffBlock& levels) {
    int nnz = 0;
    for (int i = 0; i < 16; ++i) nnz += levels[kZigzag[static_cast<std::size_t>(i)]] != 0;
    bw.put_ue(static_cast<std::uint64_t>(nnz));
    int last = -1;
    for (int i = 0; i < 16; ++i) {
        const std::int32_t v = levels[kZigzag[static_cast<std::size_t>(i)]];
        if (v == 0) continue;
        bw.put_ue(static_cast<std::uint64_t>(i - last - 1));
        bw.put_se(v);
        last = i;
    }
}

inline CoeffBlock read_coeffs(BitReader& br) {
    const std::uint64_t nnz = br.get_ue();
    if (nnz > 16) throw CorruptBitstream("coefficient count out of range", br.byte_offset());
    CoeffBlock levels{};
    int pos = -1;
    for (std::uint64_t i = 0; i < nnz; ++i) {
        const std::uint64_t run = br.get_ue();
        pos += static_cast<int>(run) + 1;
        if (run > 15 || pos > 15)
            throw CorruptBitstream("coefficient run past block end", br.byte_offset());
        const std::int64_t level = br.get_se();
        if (level == 0 || level > 32767 || level < -32767)
            throw CorruptBitstream("invalid coefficient level", br.byte_offset());
        levels[kZigzag[static_cast<std::size_t>(pos)]] = static_cast<std::int32_t>(level);
    }
    return levels;
}

// Transform-code one 4x4 at (x0, y0): residual against pred (or the flat 128
// intra predictor), reconstructing exactly what the decoder will.
inline void encode_block(BitWriter& bw, int qp, const Plane& src, const Plane* pred,
                         Plane& recon, int x0, int y0) {
    CoeffBlock r{};
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) {
            const int p = pred ? pred->at(x0 + x, y0 + y) : 128;
            r[static_cast<std::size_t>(y) * 4 + x] = src.at(x0 + x, y0 + y) - p;
        }
    const CoeffBlock levels = quantize(forward_transform(r), qp);
    write_coeffs(bw, levels);
    const CoeffBlock rr = inverse_transform(dequantize(levels, qp));
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) {
            const int p = pred ? pred->at(x0 + x, y0 + y) : 128;
            recon.at(x0 + x, y0 + y) = clamp_u8(p + rr[static_cast<std::size_t>(y) * 4 + x]);
        }
}

inline void decode_block(BitReader& br, int qp, const Plane* pred, Plane& recon, int x0,
                         int y0) {
    const CoeffBlock rr = inverse_transform(dequantize(read_coeffs(br), qp));
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) {
            const int p = pred ? pred->at(x0 + x, y0 + y) : 128;
            recon.at(x0 + x, y0 + y) = clamp_u8(p + rr[static_cast<std::size_t>(y) * 4 + x]);
        }
}

// Macroblock = 16 luma 4x4 blocks plus 4+4 chroma blocks, one QP for all.
template <typename BlockFn>
inline void for_each_mb_block(int bx, int by, BlockFn fn) {
    const int lx = bx * kMacroblockSize, ly = by * kMacroblockSize;
    for (int sb = 0; sb < 16; ++sb) fn(0, lx + (sb % 4) * 4, ly + (sb / 4) * 4);
    const int cx = bx * 8, cy = by * 8;
    for (int sb = 0; sb < 4; ++sb) fn(1, cx + (sb % 2) * 4, cy + (sb / 2) * 4);
    for (int sb = 0; sb < 4; ++sb) fn(2, cx + (sb % 2) * 4, cy + (sb / 2) * 4);
}

inline void encode_mb(BitWriter& bw, int qp, const Yuv420& src, const Yuv420* pred,
                      Yuv420& recon, int bx, int by) {
    for_each_mb_block(bx, by, [&](int plane, int x0, int y0) {
        const Plane& s = plane == 0 ? src.y : plane == 1 ? src.cb : src.cr;
        const Plane* p =
            pred ? (plane == 0 ? &pred->y : plane == 1 ? &pred->cb : &pred->cr) : nullptr;
        Plane& r = plane == 0 ? recon.y : plane == 1 ? recon.cb : recon.cr;
        encode_block(bw, qp, s, p, r, x0, y0);
    });
}

inline void decode_mb(BitReader& br, int qp, const Yuv420* pred, Yuv420& recon, int bx,
                      int by) {
    for_each_mb_block(bx, by, [&](int plane, int x0, int y0) {
        const Plane* p =
            pred ? (plane == 0 ? &pred->y : plane == 1 ? &pred->cb : &pred->cr) : nullptr;
        Plane& r = plane == 0 ? recon.y : plane == 1 ? recon.cb : recon.cr;
        decode_block(br, qp, p, r, x0, y0);
    });
}

inline void copy_mb(const Yuv420& from, Yuv420& to, int bx, int by) {
    const int lx = bx * kMacroblockSize, ly = by * kMacroblockSize;
    for (int y = 0; y < kMacroblockSize; ++y)
        for (int x = 0; x < kMacroblockSize; ++x)
            to.y.at(lx + x, ly + y) = from.y.at(lx + x, ly + y);
    const int cx = bx * 8, cy = by * 8;
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
            to.cb.at(cx + x, cy + y) = from.cb.at(cx + x, cy + y);
            to.cr.at(cx + x, cy + y) = from.cr.at(cx + x, cy + y);
        }
}

inline void write_mask_runs(BitWriter& bw, const BlockMask& m) {
    const std::size_t n = m.bits.size();
    if (n == 0) return;
    unsigned cur = m.bits[0] ? 1 : 0;
    bw.put_bit(cur);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && (m.bits[j] ? 1u : 0u) == cur) ++j;
        bw.put_ue(j - i - 1);
        cur ^= 1u;
        i = j;
    }
}

inline BlockMask read_mask_runs(BitReader& br, int wmb, int hmb) {
    BlockMask m(wmb, hmb);
    const std::size_t n = m.bits.size();
    if (n == 0) return m;
    unsigned cur = br.get_bit();
    std::size_t i = 0;
    while (i < n) {
        const std::uint64_t run = br.get_ue() + 1;
        if (run > n - i) throw CorruptBitstream("region bitmap run overflow", br.byte_offset());
        for (std::uint64_t k = 0; k < run; ++k) m.bits[i + k] = static_cast<std::uint8_t>(cur);
        cur ^= 1u;
        i += run;
    }
    return m;
}

struct SliceGeometry {
    int out_w = 0, out_h = 0;
    int pw = 0, ph = 0;
    int mb_cols = 0, mb_rows = 0;

    static SliceGeometry of(int w, int h) {
        SliceGeometry g;
        g.out_w = w;
        g.out_h = h;
        g.pw = padded_dim(w);
        g.ph = padded_dim(h);
        g.mb_cols = g.pw / kMacroblockSize;
        g.mb_rows = g.ph / kMacroblockSize;
        return g;
    }
    bool operator==(const SliceGeometry& o) const = default;
};

inline void validate_slice_dims(int w, int h, int max_w, int max_h, std::uint64_t at) {
    if (w < 4 || h < 4 || w > max_w || h > max_h || (w % 2) || (h % 2))
        throw CorruptBitstream("slice dimensions out of range", at);
}

} // namespace detail

// Decoder-side mode tally, recounted from the stream.
struct ModeStats {
    std::size_t mb_total = 0;
    std::size_t mb_overlap = 0;
    std::size_t mb_skip = 0;
    std::size_t mb_inter = 0;
    std::size_t mb_intra = 0;
};

struct SliceInput {
    Yuv420 image; // coded dims (even); padded internally
    int row_start = 0;
    int row_end = 0;
    ResolutionClass res = ResolutionClass::r2160;
    GlobalMotion gm{}; // slice-resolution units; ignored for I frames
    BlockMask ropi;    // padded grid; empty mask treated as all-RoNI
};

struct FrameInput {
    FrameKind kind = FrameKind::I;
    int qp_ropi = 0;
    int qp_roni = 20;
    std::int64_t decimate_sad = 512;
    int sky_rows = 0;
    const Yuv420* sky_image = nullptr; // set to refresh the decoder's sky cache
    std::vector<SliceInput> slices;
};

// Encoder session: owns the reconstructed reference per slice (identical to
// the decoder's), so prediction never drifts. Single-writer.
class Encoder {
public:
    Encoder(int base_width, int base_height) : base_w_(base_width), base_h_(base_height) {
        if (base_width < 16 || base_height < 16 || base_width > kMaxDim ||
            base_height > kMaxDim)
            throw InvalidArgument("Encoder: bad base dimensions");
    }

    BitstreamSegment encode_frame(const FrameInput& in) {
        using namespace detail;
        if (in.slices.empty() || in.slices.size() > kMaxSlices)
            throw InvalidArgument("encode_frame: slice count must be 1..3");
        if (in.qp_ropi < 0 || in.qp_ropi > kQpMax || in.qp_roni < 0 || in.qp_roni > kQpMax)
            throw InvalidArgument("encode_frame: qp out of range");

        std::vector<SliceGeometry> geom;
        for (const SliceInput& s : in.slices) {
            if (s.image.width() < 4 || s.image.height() < 4)
                throw InvalidArgument("encode_frame: slice too small");
            geom.push_back(SliceGeometry::of(s.image.width(), s.image.height()));
        }
        const bool is_p = in.kind == FrameKind::P;
        if (is_p && (refs_.size() != in.slices.size() ||
                     !std::equal(geom.begin(), geom.end(), ref_geom_.begin(),
                                 ref_geom_.end())))
            throw StateError("encode_frame: P frame without a matching reference");

        stats_ = ModeStats{};
        BitWriter bw;
        bw.put_bit(is_p ? 1 : 0);
        bw.put_bits(static_cast<std::uint64_t>(in.qp_ropi), 6);
        bw.put_bits(static_cast<std::uint64_t>(in.qp_roni), 6);
        bw.put_ue(static_cast<std::uint64_t>(in.sky_rows));
        bw.put_bit(in.sky_image ? 1 : 0);
        if (in.sky_image) encode_sky(bw, *in.sky_image, in.qp_roni);
        bw.put_bits(in.slices.size() - 1, 2);

        std::vector<Yuv420> new_refs(in.slices.size());
        for (std::size_t si = 0; si < in.slices.size(); ++si)
            encode_slice(bw, in, geom[si], si, new_refs[si]);
        refs_ = std::move(new_refs);
        ref_geom_ = std::move(geom);
        bw.align_byte();
        return BitstreamSegment{bw.take()};
    }

    const ModeStats& last_stats() const { return stats_; }
    void reset() {
        refs_.clear();
        ref_geom_.clear();
    }

private:
    void encode_sky(BitWriter& bw, const Yuv420& sky, int qp) {
        using namespace detail;
        bw.put_ue(static_cast<std::uint64_t>(sky.width()));
        bw.put_ue(static_cast<std::uint64_t>(sky.height()));
        const Yuv420 padded = pad_to_mb(sky);
        Yuv420 recon(padded.width(), padded.height());
        const SliceGeometry g = SliceGeometry::of(sky.width(), sky.height());
        for (int by = 0; by < g.mb_rows; ++by)
            for (int bx = 0; bx < g.mb_cols; ++bx)
                encode_mb(bw, qp, padded, nullptr, recon, bx, by);
    }

    void encode_slice(BitWriter& bw, const FrameInput& in, const detail::SliceGeometry& g,
                      std::size_t si, Yuv420& new_ref) {
        using namespace detail;
        const SliceInput& s = in.slices[si];
        const bool is_p = in.kind == FrameKind::P;
        bw.put_ue(static_cast<std::uint64_t>(s.row_start));
        bw.put_ue(static_cast<std::uint64_t>(s.row_end));
        bw.put_bits(static_cast<std::uint64_t>(s.res), 2);
        bw.put_ue(static_cast<std::uint64_t>(g.out_w));
        bw.put_ue(static_cast<std::uint64_t>(g.out_h));
        GlobalMotion gm = s.gm;
        if (is_p) {
            if (std::abs(gm.d_w) >= g.pw || std::abs(gm.d_l) >= g.ph)
                throw InvalidArgument("encode_frame: offset leaves no overlap");
            bw.put_se(gm.d_w);
            bw.put_se(gm.d_l);
        } else {
            gm = {};
        }

        BlockMask ropi = s.ropi;
        if (ropi.bits.empty()) ropi = BlockMask(g.mb_cols, g.mb_rows);
        if (ropi.width_mb != g.mb_cols || ropi.height_mb != g.mb_rows)
            throw InvalidArgument("encode_frame: region map does not match the slice grid");
        write_mask_runs(bw, ropi);

        const Yuv420 cur = pad_to_mb(s.image);
        new_ref = Yuv420(g.pw, g.ph);

        if (!is_p) {
            for (int by = 0; by < g.mb_rows; ++by)
                for (int bx = 0; bx < g.mb_cols; ++bx) {
                    const int qp = ropi.get(bx, by) ? in.qp_ropi : in.qp_roni;
                    encode_mb(bw, qp, cur, nullptr, new_ref, bx, by);
                    ++stats_.mb_intra;
                    ++stats_.mb_total;
                }
            return;
        }

        const ShiftedReference sref = shift_reference(refs_[si], gm);
        for (int by = 0; by < g.mb_rows; ++by)
            for (int bx = 0; bx < g.mb_cols; ++bx) {
                ++stats_.mb_total;
                const int qp = ropi.get(bx, by) ? in.qp_ropi : in.qp_roni;
                const Rect mb{bx * kMacroblockSize, by * kMacroblockSize, kMacroblockSize,
                              kMacroblockSize};
                if (!sref.overlap.contains(mb)) {
                    encode_mb(bw, qp, cur, nullptr, new_ref, bx, by);
                    ++stats_.mb_intra;
                    continue;
                }
                ++stats_.mb_overlap;
                std::int64_t sad = 0;
                for (int y = mb.y0; y < mb.y1(); ++y)
                    for (int x = mb.x0; x < mb.x1(); ++x)
                        sad += std::abs(cur.y.at(x, y) - sref.image.y.at(x, y));
                if (sad <= in.decimate_sad) {
                    bw.put_bit(1); // skip
                    copy_mb(sref.image, new_ref, bx, by);
                    ++stats_.mb_skip;
                } else {
                    bw.put_bit(0); // inter residual
                    encode_mb(bw, qp, cur, &sref.image, new_ref, bx, by);
                    ++stats_.mb_inter;
                }
            }
    }

    int base_w_, base_h_;
    std::vector<Yuv420> refs_;
    std::vector<detail::SliceGeometry> ref_geom_;
    ModeStats stats_{};
};

struct DecodedFrame {
    FrameMetadata meta;
    std::vector<Yuv420> slices; // cropped to coded dims
    bool has_sky_image = false;
    Yuv420 sky_image; // latest cached sky, cropped
    ModeStats stats;
};

// Decoder session; mirrors the encoder's reference state. Any byte input
// either yields a frame or throws CorruptBitstream.
class Decoder {
public:
    Decoder(int base_width, int base_height) : base_w_(base_width), base_h_(base_height) {
        if (base_width < 16 || base_height < 16 || base_width > kMaxDim ||
            base_height > kMaxDim)
            throw InvalidArgument("Decoder: bad base dimensions");
    }

    DecodedFrame decode_frame(std::span<const std::uint8_t> payload) {
        using namespace detail;
        BitReader br(payload);
        DecodedFrame out;
        out.meta.kind = br.get_bit() ? FrameKind::P : FrameKind::I;
        out.meta.qp_ropi = static_cast<int>(br.get_bits(6));
        out.meta.qp_roni = static_cast<int>(br.get_bits(6));
        if (out.meta.qp_ropi > kQpMax || out.meta.qp_roni > kQpMax)
            throw CorruptBitstream("qp out of range", br.byte_offset());
        const std::uint64_t sky_rows = br.get_ue();
        if (sky_rows > static_cast<std::uint64_t>(base_h_))
            throw CorruptBitstream("sky rows exceed frame", br.byte_offset());
        out.meta.sky_rows = static_cast<int>(sky_rows);
        out.meta.sky_payload = br.get_bit() != 0;
        if (out.meta.sky_payload) decode_sky(br, out.meta.qp_roni);
        const int slice_count = static_cast<int>(br.get_bits(2)) + 1;
        if (slice_count > kMaxSlices)
            throw CorruptBitstream("slice count out of range", br.byte_offset());

        const bool is_p = out.meta.kind == FrameKind::P;
        std::vector<Yuv420> new_refs(static_cast<std::size_t>(slice_count));
        std::vector<SliceGeometry> new_geom(static_cast<std::size_t>(slice_count));
        for (int si = 0; si < slice_count; ++si) {
            SliceCodeMeta meta;
            decode_slice(br, is_p, out.meta.qp_ropi, out.meta.qp_roni,
                         static_cast<std::size_t>(si), slice_count, meta,
                         new_refs[static_cast<std::size_t>(si)],
                         new_geom[static_cast<std::size_t>(si)], out.stats);
            out.meta.slices.push_back(std::move(meta));
        }
        refs_ = std::move(new_refs);
        ref_geom_ = std::move(new_geom);

        for (int si = 0; si < slice_count; ++si) {
            const auto& m = out.meta.slices[static_cast<std::size_t>(si)];
            out.slices.push_back(
                crop_yuv(refs_[static_cast<std::size_t>(si)], m.out_w, m.out_h));
        }
        if (out.meta.sky_rows > 0 && sky_cache_) {
            out.has_sky_image = true;
            out.sky_image = *sky_cache_;
        }
        return out;
    }

    void reset() {
        refs_.clear();
        ref_geom_.clear();
        sky_cache_.reset();
    }

private:
    void decode_sky(BitReader& br, int qp) {
        using namespace detail;
        const std::uint64_t w = br.get_ue(), h = br.get_ue();
        if (w > static_cast<std::uint64_t>(kMaxDim) || h > static_cast<std::uint64_t>(kMaxDim))
            throw CorruptBitstream("sky dimensions out of range", br.byte_offset());
        validate_slice_dims(static_cast<int>(w), static_cast<int>(h), padded_dim(base_w_),
                            padded_dim(base_h_), br.byte_offset());
        const SliceGeometry g = SliceGeometry::of(static_cast<int>(w), static_cast<int>(h));
        Yuv420 recon(g.pw, g.ph);
        for (int by = 0; by < g.mb_rows; ++by)
            for (int bx = 0; bx < g.mb_cols; ++bx) decode_mb(br, qp, nullptr, recon, bx, by);
        sky_cache_ = crop_yuv(recon, g.out_w, g.out_h);
    }

    void decode_slice(BitReader& br, bool is_p, int qp_ropi, int qp_roni, std::size_t si,
                      int slice_count, SliceCodeMeta& meta, Yuv420& new_ref,
                      detail::SliceGeometry& new_geom, ModeStats& stats) {
        using namespace detail;
        const std::uint64_t row_start = br.get_ue(), row_end = br.get_ue();
        if (row_end <= row_start || row_end > static_cast<std::uint64_t>(base_h_))
            throw CorruptBitstream("bad slice row range", br.byte_offset());
        meta.row_start = static_cast<int>(row_start);
        meta.row_end = static_cast<int>(row_end);
        meta.res = static_cast<ResolutionClass>(br.get_bits(2));
        const std::uint64_t w = br.get_ue(), h = br.get_ue();
        if (w > static_cast<std::uint64_t>(kMaxDim) || h > static_cast<std::uint64_t>(kMaxDim))
            throw CorruptBitstream("slice dimensions out of range", br.byte_offset());
        validate_slice_dims(static_cast<int>(w), static_cast<int>(h), padded_dim(base_w_),
                            padded_dim(base_h_), br.byte_offset());
        meta.out_w = static_cast<int>(w);
        meta.out_h = static_cast<int>(h);
        const SliceGeometry g = SliceGeometry::of(meta.out_w, meta.out_h);

        if (is_p) {
            if (refs_.size() != static_cast<std::size_t>(slice_count) ||
                ref_geom_.size() != static_cast<std::size_t>(slice_count) ||
                !(ref_geom_[si] == g))
                throw CorruptBitstream("P frame without a matching reference",
                                       br.byte_offset());
            const std::int64_t dw = br.get_se(), dl = br.get_se();
            if (std::abs(dw) >= g.pw || std::abs(dl) >= g.ph)
                throw CorruptBitstream("global motion offset out of range", br.byte_offset());
            meta.gm = {static_cast<int>(dw), static_cast<int>(dl)};
        }

        meta.ropi = read_mask_runs(br, g.mb_cols, g.mb_rows);
        new_ref = Yuv420(g.pw, g.ph);
        new_geom = g;

        if (!is_p) {
            for (int by = 0; by < g.mb_rows; ++by)
                for (int bx = 0; bx < g.mb_cols; ++bx) {
                    decode_mb(br, meta.ropi.get(bx, by) ? qp_ropi : qp_roni, nullptr, new_ref,
                              bx, by);
                    ++stats.mb_intra;
                    ++stats.mb_total;
                }
            return;
        }

        const ShiftedReference sref = shift_reference(refs_[si], meta.gm);
        for (int by = 0; by < g.mb_rows; ++by)
            for (int bx = 0; bx < g.mb_cols; ++bx) {
                ++stats.mb_total;
                const int qp = meta.ropi.get(bx, by) ? qp_ropi : qp_roni;
                const Rect mb{bx * kMacroblockSize, by * kMacroblockSize, kMacroblockSize,
                              kMacroblockSize};
                if (!sref.overlap.contains(mb)) {
                    decode_mb(br, qp, nullptr, new_ref, bx, by);
                    ++stats.mb_intra;
                    continue;
                }
                ++stats.mb_overlap;
                if (br.get_bit()) {
                    copy_mb(sref.image, new_ref, bx, by);
                    ++stats.mb_skip;
                } else {
                    decode_mb(br, qp, &sref.image, new_ref, bx, by);
                    ++stats.mb_inter;
                }
            }
    }

    int base_w_, base_h_;
    std::vector<Yuv420> refs_;
    std::vector<detail::SliceGeometry> ref_geom_;
    std::optional<Yuv420> sky_cache_;
};

// ---- .dcc stream container ----

inline constexpr char kStreamMagic[4] = {'D', 'C', 'C', '1'};

struct StreamHeader {
    std::uint8_t version = 1;
    std::uint8_t fps = 5;
    std::uint16_t width = 0;
    std::uint16_t height = 0;
    std::uint32_t frame_count = 0;
};

class StreamWriter {
public:
    StreamWriter(std::ostream& out, StreamHeader header) : out_(out), header_(header) {
        write_header();
    }

    void write_frame(const BitstreamSegment& seg) {
        std::uint8_t len[4];
        const std::uint32_t n = static_cast<std::uint32_t>(seg.bytes.size());
        for (int i = 0; i < 4; ++i) len[i] = static_cast<std::uint8_t>(n >> (8 * i));
        out_.write(reinterpret_cast<const char*>(len), 4);
        out_.write(reinterpret_cast<const char*>(seg.bytes.data()),
                   static_cast<std::streamsize>(seg.bytes.size()));
        ++frames_written_;
    }

    // Patches the header's frame count.
    void finalize() {
        header_.frame_count = frames_written_;
        out_.seekp(0);
        write_header();
        out_.seekp(0, std::ios::end);
        out_.flush();
    }

private:
    void write_header() {
        out_.write(kStreamMagic, 4);
        const std::uint8_t head[10] = {
            header_.version,
            header_.fps,
            static_cast<std::uint8_t>(header_.width & 0xff),
            static_cast<std::uint8_t>(header_.width >> 8),
            static_cast<std::uint8_t>(header_.height & 0xff),
            static_cast<std::uint8_t>(header_.height >> 8),
            static_cast<std::uint8_t>(header_.frame_count & 0xff),
            static_cast<std::uint8_t>((header_.frame_count >> 8) & 0xff),
            static_cast<std::uint8_t>((header_.frame_count >> 16) & 0xff),
            static_cast<std::uint8_t>((header_.frame_count >> 24) & 0xff)};
        out_.write(reinterpret_cast<const char*>(head), 10);
    }

    std::ostream& out_;
    StreamHeader header_;
    std::uint32_t frames_written_ = 0;
};

class StreamReader {
public:
    explicit StreamReader(std::istream& in) : in_(in) {
        char magic[4];
        in_.read(magic, 4);
        if (!in_ || !std::equal(magic, magic + 4, kStreamMagic))
            throw CorruptBitstream("bad stream magic", 0);
        std::uint8_t head[10];
        in_.read(reinterpret_cast<char*>(head), 10);
        if (!in_) throw CorruptBitstream("truncated stream header", 4);
        header_.version = head[0];
        header_.fps = head[1];
        header_.width = static_cast<std::uint16_t>(head[2] | (head[3] << 8));
        header_.height = static_cast<std::uint16_t>(head[4] | (head[5] << 8));
        header_.frame_count = static_cast<std::uint32_t>(head[6]) |
                              (static_cast<std::uint32_t>(head[7]) << 8) |
                              (static_cast<std::uint32_t>(head[8]) << 16) |
                              (static_cast<std::uint32_t>(head[9]) << 24);
        if (header_.version != 1) throw CorruptBitstream("unsupported stream version", 4);
    }

    const StreamHeader& header() const { return header_; }

    std::optional<BitstreamSegment> read_frame() {
        std::uint8_t len[4];
        in_.read(reinterpret_cast<char*>(len), 4);
        if (in_.gcount() == 0) return std::nullopt; // clean end of stream
        if (in_.gcount() != 4) throw CorruptBitstream("truncated frame length", offset_);
        const std::uint32_t n = static_cast<std::uint32_t>(len[0]) | (len[1] << 8) |
                                (static_cast<std::uint32_t>(len[2]) << 16) |
                                (static_cast<std::uint32_t>(len[3]) << 24);
        if (n > (1u << 27)) throw CorruptBitstream("frame payload too large", offset_);
        BitstreamSegment seg;
        seg.bytes.resize(n);
        in_.read(reinterpret_cast<char*>(seg.bytes.data()), n);
        if (in_.gcount() != static_cast<std::streamsize>(n))
            throw CorruptBitstream("truncated frame payload", offset_);
        offset_ += 4 + n;
        return seg;
    }

private:
    std::istream& in_;
    StreamHeader header_;
    std::uint64_t offset_ = 14;
};

} // namespace dcc

#endif // DCC_CODEC_HPP
