#ifndef DCC_EDGE_HPP
#define DCC_EDGE_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "dcc/codec.hpp"
#include "dcc/config.hpp"
#include "dcc/error.hpp"
#include "dcc/image.hpp"
#include "dcc/regions.hpp"
#include "dcc/resolution.hpp"

namespace dcc {

namespace detail {

// Two-level pyramid blend of a horizontal seam band. a/b are same-sized RGB
// bands (a valid above the seam, b below); the seam sits at band mid-height.
inline void blend_band(const ImageRgb& a, const ImageRgb& b, ImageRgb& out) {
    const int w = a.width, h = a.height; // h = 16, w even
    const int lw = w / 2, lh = h / 2;
    std::vector<double> ga(static_cast<std::size_t>(lw) * lh * 3);
    std::vector<double> gb(ga.size());
    auto down = [&](const ImageRgb& src, std::vector<double>& dst) {
        for (int y = 0; y < lh; ++y)
            for (int x = 0; x < lw; ++x)
                for (int c = 0; c < 3; ++c)
                    dst[(static_cast<std::size_t>(y) * lw + x) * 3 + c] =
                        (src.at(2 * x, 2 * y, c) + src.at(2 * x + 1, 2 * y, c) +
                         src.at(2 * x, 2 * y + 1, c) + src.at(2 * x + 1, 2 * y + 1, c)) /
                        4.0;
    };
    down(a, ga);
    down(b, gb);

    // low level: linear ramp across the band
    std::vector<double> g(ga.size());
    for (int y = 0; y < lh; ++y) {
        const double wgt = (y + 0.5) / lh;
        for (int x = 0; x < lw; ++x)
            for (int c = 0; c < 3; ++c) {
                const std::size_t i = (static_cast<std::size_t>(y) * lw + x) * 3 + c;
                g[i] = (1.0 - wgt) * ga[i] + wgt * gb[i];
            }
    }

    auto up = [&](const std::vector<double>& low, int x, int y, int c) {
        // bilinear expansion of the half-resolution level
        const double fx = (x + 0.5) / 2.0 - 0.5, fy = (y + 0.5) / 2.0 - 0.5;
        const int x0 = std::clamp(static_cast<int>(std::floor(fx)), 0, lw - 1);
        const int y0 = std::clamp(static_cast<int>(std::floor(fy)), 0, lh - 1);
        const int x1 = std::min(x0 + 1, lw - 1), y1 = std::min(y0 + 1, lh - 1);
        const double ax = std::clamp(fx - x0, 0.0, 1.0), ay = std::clamp(fy - y0, 0.0, 1.0);
        auto v = [&](int xx, int yy) {
            return low[(static_cast<std::size_t>(yy) * lw + xx) * 3 + c];
        };
        return (1 - ax) * (1 - ay) * v(x0, y0) + ax * (1 - ay) * v(x1, y0) +
               (1 - ax) * ay * v(x0, y1) + ax * ay * v(x1, y1);
    };

    for (int y = 0; y < h; ++y) {
        const ImageRgb& hi = y < h / 2 ? a : b; // detail switches at the seam
        const std::vector<double>& ghi = y < h / 2 ? ga : gb;
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c) {
                const double detail = hi.at(x, y, c) - up(ghi, x, y, c);
                const double blended = detail + up(g, x, y, c);
                out.at(x, y, c) = clamp_u8(static_cast<int>(std::floor(blended + 0.5)));
            }
    }
}

} // namespace detail

inline constexpr int kSeamBandRows = 16;

// Assembles the full-resolution frame from decoded slices: per-slice bicubic
// upsample to the native row span, seam bands smoothed with a two-level
// pyramid blend, sky rows filled from the cached sky image.
inline ImageRgb reconstruct(const DecodedFrame& frame, int base_width, int base_height) {
    if (frame.slices.empty()) throw ReconstructionError("no slices to reconstruct");
    if (frame.meta.slices.size() != frame.slices.size())
        throw ReconstructionError("metadata does not match slice payloads");

    ImageRgb out(base_width, base_height);
    // sky fill
    const int sky_rows = std::min(frame.meta.sky_rows, base_height);
    if (sky_rows > 0) {
        if (frame.has_sky_image) {
            const ImageRgb sky_small = yuv420_to_rgb(frame.sky_image);
            const ImageRgb sky = upsample_bicubic(sky_small, base_width, sky_rows);
            for (int y = 0; y < sky_rows; ++y)
                for (int x = 0; x < base_width; ++x)
                    for (int c = 0; c < 3; ++c) out.at(x, y, c) = sky.at(x, y, c);
        } else {
            for (int y = 0; y < sky_rows; ++y)
                for (int x = 0; x < base_width; ++x)
                    for (int c = 0; c < 3; ++c) out.at(x, y, c) = 128;
        }
    }

    std::vector<ImageRgb> ups;
    for (std::size_t i = 0; i < frame.slices.size(); ++i) {
        const SliceCodeMeta& m = frame.meta.slices[i];
        const int span = m.row_end - m.row_start;
        if (span <= 0 || m.row_end > base_height)
            throw ReconstructionError("slice rows outside the frame");
        const ImageRgb native = yuv420_to_rgb(frame.slices[i]);
        if (native.width > base_width || native.height > span)
            throw ReconstructionError("slice larger than its span");
        ups.push_back(native.width == base_width && native.height == span
                          ? native
                          : upsample_bicubic(native, base_width, span));
        for (int y = 0; y < span; ++y)
            for (int x = 0; x < base_width; ++x)
                for (int c = 0; c < 3; ++c)
                    out.at(x, m.row_start + y, c) = ups.back().at(x, y, c);
    }

    // seam smoothing between adjacent slices
    for (std::size_t i = 0; i + 1 < frame.slices.size(); ++i) {
        const int seam = frame.meta.slices[i].row_end;
        const int half = kSeamBandRows / 2;
        if (seam - half < frame.meta.slices[i].row_start || seam + half > base_height)
            continue;
        ImageRgb a(base_width, kSeamBandRows), b(base_width, kSeamBandRows);
        const ImageRgb& above = ups[i];
        const ImageRgb& below = ups[i + 1];
        const int a_h = above.height, a_start = frame.meta.slices[i].row_start;
        const int b_start = frame.meta.slices[i + 1].row_start;
        for (int y = 0; y < kSeamBandRows; ++y) {
            const int row = seam - half + y;
            const int ay = std::clamp(row - a_start, 0, a_h - 1); // extends below its span
            const int by = std::clamp(row - b_start, 0, below.height - 1);
            for (int x = 0; x < base_width; ++x)
                for (int c = 0; c < 3; ++c) {
                    a.at(x, y, c) = above.at(x, ay, c);
                    b.at(x, y, c) = below.at(x, by, c);
                }
        }
        ImageRgb blended(base_width, kSeamBandRows);
        detail::blend_band(a, b, blended);
        for (int y = 0; y < kSeamBandRows; ++y)
            for (int x = 0; x < base_width; ++x)
                for (int c = 0; c < 3; ++c)
                    out.at(x, seam - half + y, c) = blended.at(x, y, c);
    }
    return out;
}

// Ground-truth box as the harness generator reports it.
struct TruthBox {
    std::uint32_t frame = 0;
    int object_id = 0;
    std::uint8_t cls = 0; // 0 car, 1 truck
    double x = 0, y = 0, w = 0, h = 0;
    bool moving = false;

    double minor_extent() const { return std::min(w, h); }
};

inline double iou(double ax, double ay, double aw, double ah, double bx, double by,
                  double bw, double bh) {
    const double ix0 = std::max(ax, bx), iy0 = std::max(ay, by);
    const double ix1 = std::min(ax + aw, bx + bw), iy1 = std::min(ay + ah, by + bh);
    const double iw = std::max(0.0, ix1 - ix0), ih = std::max(0.0, iy1 - iy0);
    const double inter = iw * ih;
    const double uni = aw * ah + bw * bh - inter;
    return uni <= 0 ? 0.0 : inter / uni;
}

inline double iou(const DetectionBox& a, const DetectionBox& b) {
    return iou(a.x, a.y, a.w, a.h, b.x, b.y, b.w, b.h);
}

inline double iou(const DetectionBox& a, const TruthBox& b) {
    return iou(a.x, a.y, a.w, a.h, b.x, b.y, b.w, b.h);
}

// The detection seam: the CNN itself is out of scope, implementations are
// deterministic stand-ins.
class DetectorInterface {
public:
    virtual ~DetectorInterface() = default;
    virtual std::vector<DetectionBox> detect(const ImageRgb& frame,
                                             std::uint32_t frame_index) = 0;
};

class NullDetector : public DetectorInterface {
public:
    std::vector<DetectionBox> detect(const ImageRgb&, std::uint32_t) override { return {}; }
};

// Emits a scene-truth box iff it is large enough to resolve and the local
// reconstruction quality clears the gate. Frames smaller than the truth's
// base dimensions are treated as unregistered low-resolution input: truth is
// scaled down and compared against the downsampled pristine render.
class OracleDetector : public DetectorInterface {
public:
    using TruthFn = std::function<std::vector<TruthBox>(std::uint32_t)>;
    using PristineFn = std::function<const ImageRgb*(std::uint32_t)>;

    OracleDetector(TruthFn truth, PristineFn pristine, int base_width, int base_height,
                   OracleParams params = {})
        : truth_(std::move(truth)), pristine_(std::move(pristine)), base_w_(base_width),
          base_h_(base_height), params_(params) {}

    std::vector<DetectionBox> detect(const ImageRgb& frame, std::uint32_t frame_index) override {
        const ImageRgb* pristine = pristine_(frame_index);
        if (pristine == nullptr) throw StateError("oracle detector: pristine frame missing");
        const double sx = static_cast<double>(frame.width) / base_w_;
        const double sy = static_cast<double>(frame.height) / base_h_;
        const ImageRgb* reference = pristine;
        ImageRgb scaled;
        if (frame.width != base_w_ || frame.height != base_h_) {
            scaled = downsample_area(*pristine, frame.width, frame.height);
            reference = &scaled;
        }
        std::vector<DetectionBox> out;
        for (const TruthBox& t : truth_(frame_index)) {
            const double w = t.w * sx, h = t.h * sy;
            if (std::min(w, h) < params_.min_extent_px) continue;
            const int x0 = static_cast<int>(std::floor(t.x * sx));
            const int y0 = static_cast<int>(std::floor(t.y * sy));
            const int bw = std::max(1, static_cast<int>(std::lround(w)));
            const int bh = std::max(1, static_cast<int>(std::lround(h)));
            // quality is judged on the box interior; the silhouette boundary
            // measures background blur, not object fidelity
            const int shrink = 3;
            const int qx = x0 + std::min(shrink, bw / 4);
            const int qy = y0 + std::min(shrink, bh / 4);
            const int qw = std::max(4, bw - 2 * std::min(shrink, bw / 4));
            const int qh = std::max(4, bh - 2 * std::min(shrink, bh / 4));
            const double psnr = region_psnr_luma(frame, *reference, qx, qy, qw, qh);
            if (psnr < params_.psnr_gate_db) continue;
            DetectionBox d;
            d.x = x0;
            d.y = y0;
            d.w = bw;
            d.h = bh;
            d.cls = t.cls;
            d.confidence = 1.0;
            d.source_frame = frame_index;
            out.push_back(d);
        }
        return out;
    }

private:
    TruthFn truth_;
    PristineFn pristine_;
    int base_w_, base_h_;
    OracleParams params_;
};

// Greedy frame-to-frame IoU tracker with a detection window: a track counts
// as detected while it was matched in any of the last `window` frames, and
// its class is the majority vote over that window.
class DetectionAggregator {
public:
    // When frame bounds are given, a track that was not re-matched this frame
    // is only carried while its box stays clear of the frame edge; tracks at
    // the boundary are objects leaving the view, not detections to repeat.
    explicit DetectionAggregator(int window = 5, double iou_threshold = 0.5,
                                 int frame_width = -1, int frame_height = -1,
                                 int edge_margin = 16)
        : window_(window), iou_threshold_(iou_threshold), frame_w_(frame_width),
          frame_h_(frame_height), edge_margin_(edge_margin) {
        if (window < 1) throw InvalidArgument("DetectionAggregator: window must be >= 1");
    }

    // content_shift: this frame's decoded global motion (content moves by its
    // negation); carried tracks ride along so stale boxes stay registered.
    std::vector<DetectionBox> push(std::uint32_t frame_index,
                                   const std::vector<DetectionBox>& dets,
                                   GlobalMotion content_shift = {}) {
        for (Track& t : tracks_) {
            t.last.x -= content_shift.d_w;
            t.last.y -= content_shift.d_l;
        }
        // greedy association by descending IoU
        struct Cand {
            double score;
            std::size_t track, det;
        };
        std::vector<Cand> cands;
        for (std::size_t ti = 0; ti < tracks_.size(); ++ti)
            for (std::size_t di = 0; di < dets.size(); ++di) {
                const double s = iou(tracks_[ti].last, dets[di]);
                if (s >= iou_threshold_) cands.push_back({s, ti, di});
            }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.score != b.score) return a.score > b.score;
            if (a.track != b.track) return a.track < b.track;
            return a.det < b.det;
        });
        std::vector<bool> track_used(tracks_.size(), false), det_used(dets.size(), false);
        for (const Cand& c : cands) {
            if (track_used[c.track] || det_used[c.det]) continue;
            track_used[c.track] = true;
            det_used[c.det] = true;
            Track& t = tracks_[c.track];
            t.last = dets[c.det];
            t.last_seen = frame_index;
            ++t.hits;
            t.classes.push_back(dets[c.det].cls);
            if (t.classes.size() > static_cast<std::size_t>(window_))
                t.classes.pop_front();
        }
        for (std::size_t di = 0; di < dets.size(); ++di) {
            if (det_used[di]) continue;
            Track t;
            t.last = dets[di];
            t.last_seen = frame_index;
            t.classes.push_back(dets[di].cls);
            tracks_.push_back(std::move(t));
        }
        // drop tracks outside the window, emit the rest
        std::vector<DetectionBox> finals;
        std::vector<Track> alive;
        for (Track& t : tracks_) {
            if (frame_index - t.last_seen >= static_cast<std::uint32_t>(window_)) continue;
            const bool stale = t.last_seen != frame_index;
            // edge-adjacent tracks coast only once confirmed by a second
            // sighting; single-hit boxes at the boundary are entry fragments
            const bool unconfirmed_edge = near_any_edge(t.last) && t.hits < 2;
            if (!stale || (!leaving_frame(t) && !unconfirmed_edge)) {
                DetectionBox d = t.last;
                d.cls = majority(t.classes);
                finals.push_back(d);
            }
            t.prev_x = t.last.x;
            t.prev_y = t.last.y;
            t.has_prev = true;
            alive.push_back(std::move(t));
        }
        tracks_ = std::move(alive);
        return finals;
    }

private:
    struct Track {
        DetectionBox last;
        std::uint32_t last_seen = 0;
        int prev_x = 0, prev_y = 0;
        bool has_prev = false;
        int hits = 1;
        std::deque<std::uint8_t> classes;
    };

    bool near_any_edge(const DetectionBox& b) const {
        if (frame_w_ < 0 || frame_h_ < 0) return false;
        return b.x < edge_margin_ || b.y < edge_margin_ ||
               b.x + b.w > frame_w_ - edge_margin_ || b.y + b.h > frame_h_ - edge_margin_;
    }

    // A stale track near an edge and drifting toward it is an object leaving
    // the view; repeating its box would count phantom detections.
    bool leaving_frame(const Track& t) const {
        if (frame_w_ < 0 || frame_h_ < 0 || !t.has_prev) return false;
        const int vx = t.last.x - t.prev_x, vy = t.last.y - t.prev_y;
        const DetectionBox& b = t.last;
        if (b.x < edge_margin_ && vx < 0) return true;
        if (b.y < edge_margin_ && vy < 0) return true;
        if (b.x + b.w > frame_w_ - edge_margin_ && vx > 0) return true;
        if (b.y + b.h > frame_h_ - edge_margin_ && vy > 0) return true;
        return b.x + b.w <= 0 || b.y + b.h <= 0 || b.x >= frame_w_ || b.y >= frame_h_;
    }

    static std::uint8_t majority(const std::deque<std::uint8_t>& votes) {
        std::map<std::uint8_t, std::size_t> counts;
        for (auto v : votes) ++counts[v];
        std::uint8_t best = votes.front();
        std::size_t best_n = 0;
        for (const auto& [cls, n] : counts)
            if (n > best_n) {
                best = cls;
                best_n = n;
            }
        return best;
    }

    int window_;
    double iou_threshold_;
    int frame_w_;
    int frame_h_;
    int edge_margin_;
    std::vector<Track> tracks_;
};

// Batch form over a whole trace.
inline std::vector<std::vector<DetectionBox>> aggregate_detections(
    const std::vector<std::vector<DetectionBox>>& per_frame, int window) {
    DetectionAggregator agg(window);
    std::vector<std::vector<DetectionBox>> out;
    for (std::size_t i = 0; i < per_frame.size(); ++i)
        out.push_back(agg.push(static_cast<std::uint32_t>(i), per_frame[i]));
    return out;
}

struct EvalReport {
    double volume_bytes = 0;
    double precision = 1.0;
    double recall = 1.0;
    double f1 = 1.0;
    double gamma = 0.0;
    std::uint64_t tp = 0, fp = 0, fn = 0;
    bool degenerate = false; // no ground truth but detections present
};

inline double compression_gain(double baseline_bytes, double method_bytes) {
    if (method_bytes <= 0) throw InvalidArgument("compression_gain: empty method volume");
    return (baseline_bytes - method_bytes) / method_bytes;
}

// Greedy IoU matching per frame, then precision/recall/F1 over the whole
// trace.
inline EvalReport compute_metrics(const std::vector<std::vector<DetectionBox>>& detections,
                                  const std::vector<std::vector<TruthBox>>& truth,
                                  double iou_threshold = 0.5) {
    EvalReport r;
    const std::size_t frames = std::max(detections.size(), truth.size());
    for (std::size_t f = 0; f < frames; ++f) {
        static const std::vector<DetectionBox> no_dets;
        static const std::vector<TruthBox> no_truth;
        const auto& dets = f < detections.size() ? detections[f] : no_dets;
        const auto& gts = f < truth.size() ? truth[f] : no_truth;
        struct Cand {
            double score;
            std::size_t det, gt;
        };
        std::vector<Cand> cands;
        for (std::size_t di = 0; di < dets.size(); ++di)
            for (std::size_t gi = 0; gi < gts.size(); ++gi) {
                const double s = iou(dets[di], gts[gi]);
                if (s >= iou_threshold) cands.push_back({s, di, gi});
            }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.score != b.score) return a.score > b.score;
            if (a.det != b.det) return a.det < b.det;
            return a.gt < b.gt;
        });
        std::vector<bool> det_used(dets.size(), false), gt_used(gts.size(), false);
        std::uint64_t tp = 0;
        for (const Cand& c : cands) {
            if (det_used[c.det] || gt_used[c.gt]) continue;
            det_used[c.det] = true;
            gt_used[c.gt] = true;
            ++tp;
        }
        r.tp += tp;
        r.fp += dets.size() - tp;
        r.fn += gts.size() - tp;
    }
    const std::uint64_t truth_total = r.tp + r.fn;
    const std::uint64_t det_total = r.tp + r.fp;
    r.precision = det_total == 0 ? 1.0 : static_cast<double>(r.tp) / det_total;
    if (truth_total == 0) {
        r.recall = 1.0; // undefined; reported as 1 by convention
        r.degenerate = det_total > 0;
        if (r.degenerate) r.precision = 0.0;
    } else {
        r.recall = static_cast<double>(r.tp) / truth_total;
    }
    r.f1 = (r.precision + r.recall) == 0
               ? 0.0
               : 2.0 * r.precision * r.recall / (r.precision + r.recall);
    return r;
}

// ---- feedback channel ----

inline constexpr char kFeedbackMagic[4] = {'D', 'C', 'F', 'B'};

struct FeedbackMessage {
    std::uint32_t frame_index = 0;
    bool decrease_one = false;
    std::optional<ResolutionTable> table; // present on retrain
    std::vector<DetectionBox> boxes;

    bool operator==(const FeedbackMessage& o) const {
        const bool t_eq = table.has_value() == o.table.has_value() &&
                          (!table || table->thresholds == o.table->thresholds);
        return frame_index == o.frame_index && decrease_one == o.decrease_one && t_eq &&
               boxes == o.boxes;
    }
};

inline std::vector<std::uint8_t> serialize_feedback(const FeedbackMessage& msg) {
    BitWriter bw;
    for (char c : kFeedbackMagic) bw.put_u8(static_cast<std::uint8_t>(c));
    bw.put_u32le(msg.frame_index);
    std::uint8_t flags = 0;
    if (msg.table) flags |= 1;
    if (msg.decrease_one) flags |= 2;
    bw.put_u8(flags);
    if (msg.table) {
        for (char c : kTableMagic) bw.put_u8(static_cast<std::uint8_t>(c));
        for (std::uint16_t v : msg.table->thresholds) bw.put_u16le(v);
    }
    write_detection_records(bw, msg.frame_index, msg.boxes);
    return bw.take();
}

inline FeedbackMessage parse_feedback(std::span<const std::uint8_t> bytes) {
    BitReader br(bytes);
    for (char c : kFeedbackMagic)
        if (br.get_u8() != static_cast<std::uint8_t>(c))
            throw CorruptBitstream("bad feedback magic", br.byte_offset());
    FeedbackMessage msg;
    msg.frame_index = br.get_u32le();
    const std::uint8_t flags = br.get_u8();
    if (flags & 1) {
        for (char c : kTableMagic)
            if (br.get_u8() != static_cast<std::uint8_t>(c))
                throw CorruptBitstream("bad table magic in feedback", br.byte_offset());
        ResolutionTable t;
        for (auto& v : t.thresholds) v = br.get_u16le();
        t.validate();
        msg.table = t;
    }
    msg.decrease_one = (flags & 2) != 0;
    msg.boxes = read_detection_records(br).boxes;
    return msg;
}

// Builds the per-frame feedback: always the final detections; a retrained
// table when recall has been low for the window; a decrease-one directive
// when recall has been high throughout.
inline FeedbackMessage make_feedback(std::uint32_t frame_index,
                                     const std::vector<DetectionBox>& final_detections,
                                     const std::vector<double>& recall_history,
                                     ResolutionClass current,
                                     const std::function<ResolutionTable()>& retrain) {
    FeedbackMessage msg;
    msg.frame_index = frame_index;
    msg.boxes = final_detections;
    switch (adjust_assignment(recall_history, current)) {
        case Adjustment::retrain_request:
            if (retrain) msg.table = retrain();
            break;
        case Adjustment::decrease_one:
            msg.decrease_one = true;
            break;
        case Adjustment::hold:
            break;
    }
    return msg;
}

} // namespace dcc

#endif // DCC_EDGE_HPP
