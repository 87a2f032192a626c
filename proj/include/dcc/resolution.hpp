#ifndef DCC_RESOLUTION_HPP
#define DCC_RESOLUTION_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <vector>

#include "dcc/error.hpp"
#include "dcc/geometry.hpp"
#include "dcc/image.hpp"
#include "dcc/segmentation.hpp"

namespace dcc {

// Wire resolution classes (2 bits). The code names the target height for a
// full 2160-row frame; for partial slices and desk-scale bases the class acts
// as the exact scale ratio {1/3, 1/2, 2/3, 1}.
enum class ResolutionClass : std::uint8_t { r720 = 0, r1080 = 1, r1440 = 2, r2160 = 3 };

inline int class_height(ResolutionClass c) {
    static constexpr int h[4] = {720, 1080, 1440, 2160};
    return h[static_cast<int>(c)];
}

inline const char* class_name(ResolutionClass c) {
    static constexpr const char* n[4] = {"720p", "1080p", "1440p", "2160p"};
    return n[static_cast<int>(c)];
}

// Exact rational scale relative to the native frame.
inline void class_scale(ResolutionClass c, int& num, int& den) {
    switch (c) {
        case ResolutionClass::r720: num = 1; den = 3; break;
        case ResolutionClass::r1080: num = 1; den = 2; break;
        case ResolutionClass::r1440: num = 2; den = 3; break;
        case ResolutionClass::r2160: num = 1; den = 1; break;
    }
}

inline int scale_dim(int dim, ResolutionClass c) {
    int num, den;
    class_scale(c, num, den);
    return static_cast<int>((static_cast<std::int64_t>(dim) * num + den / 2) / den);
}

// Codec planes need even dimensions.
inline int scale_dim_even(int dim, ResolutionClass c) {
    const int v = scale_dim(dim, c);
    return std::max(4, v - (v % 2));
}

// Smaller estimated extent never maps to a lower resolution: three increasing
// extent thresholds split [0, inf) into 2160p | 1440p | 1080p | 720p.
struct ResolutionTable {
    std::array<std::uint16_t, 3> thresholds{11, 20, 104}; // desk-scale defaults

    void validate() const {
        if (!(thresholds[0] < thresholds[1] && thresholds[1] < thresholds[2]))
            throw InvalidArgument("ResolutionTable: thresholds must be strictly increasing");
    }

    ResolutionClass class_for(double extent_px) const {
        if (extent_px >= thresholds[2]) return ResolutionClass::r720;
        if (extent_px >= thresholds[1]) return ResolutionClass::r1080;
        if (extent_px >= thresholds[0]) return ResolutionClass::r1440;
        return ResolutionClass::r2160;
    }

    // Defaults are calibrated for a 1080-row base; scale for other bases.
    static ResolutionTable default_for_base(int base_height) {
        ResolutionTable t;
        for (auto& v : t.thresholds)
            v = static_cast<std::uint16_t>(std::lround(v * base_height / 1080.0));
        return t;
    }
};

inline constexpr char kTableMagic[8] = {'D', 'C', 'C', 'R', 'T', 'A', 'B', '1'};

inline void save_table(const ResolutionTable& t, std::ostream& out) {
    out.write(kTableMagic, 8);
    for (std::uint16_t v : t.thresholds) {
        const char bytes[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
        out.write(bytes, 2);
    }
}

inline ResolutionTable load_table(std::istream& in) {
    char magic[8];
    in.read(magic, 8);
    if (!in || !std::equal(magic, magic + 8, kTableMagic))
        throw ParseError("bad .rtab magic", 0);
    ResolutionTable t;
    for (auto& v : t.thresholds) {
        unsigned char bytes[2];
        in.read(reinterpret_cast<char*>(bytes), 2);
        if (!in) throw ParseError("truncated .rtab", 0);
        v = static_cast<std::uint16_t>(bytes[0] | (bytes[1] << 8));
    }
    t.validate();
    return t;
}

struct SliceAssignment {
    std::vector<ResolutionClass> classes; // one per slice, top to bottom
    std::vector<std::uint8_t> conservative; // 1 when geometry was unresolvable
};

// Per-slice class from the estimated worst-case (upper-center) object extent.
// k must describe the full frame the plan rows refer to.
inline SliceAssignment assign_resolutions(const SlicePlan& plan, const Pose& pose,
                                          const CameraIntrinsics& k,
                                          const ResolutionTable& table,
                                          double object_length_m = 3.0,
                                          double object_width_m = 1.8) {
    table.validate();
    SliceAssignment out;
    for (const SliceSpan& s : plan.slices) {
        ResolutionClass cls = ResolutionClass::r2160;
        std::uint8_t flagged = 1;
        try {
            const FramePoint top_center{k.frame_length / 2.0, static_cast<double>(s.row_start)};
            const Vec3 ground = unproject_to_ground(top_center, pose, k);
            Pose rel = pose;
            rel.position = pose.position - ground;
            rel.displacement = rel.position;
            const double extent =
                estimate_object_pixel_extent(object_length_m, object_width_m, rel, k);
            cls = table.class_for(extent);
            flagged = 0;
        } catch (const Error&) {
            // unresolvable geometry: assign full resolution and flag
        }
        out.classes.push_back(cls);
        out.conservative.push_back(flagged);
    }
    return out;
}

namespace detail {
// Coverage-weighted box filter; exact mean over the source span of each
// output pixel, rounded half away from zero.
inline std::vector<double> box_spans(int src, int dst) {
    std::vector<double> edges(static_cast<std::size_t>(dst) + 1);
    for (int i = 0; i <= dst; ++i)
        edges[static_cast<std::size_t>(i)] = static_cast<double>(i) * src / dst;
    return edges;
}
} // namespace detail

// Area-averaging downsampler; identity when dimensions match.
inline ImageRgb downsample_area(const ImageRgb& src, int out_w, int out_h) {
    if (out_w <= 0 || out_h <= 0) throw InvalidArgument("downsample: empty target");
    if (out_w > src.width || out_h > src.height)
        throw InvalidArgument("downsample: target exceeds source");
    if (out_w == src.width && out_h == src.height) return src;

    const auto ex = detail::box_spans(src.width, out_w);
    const auto ey = detail::box_spans(src.height, out_h);
    ImageRgb dst(out_w, out_h);
    for (int oy = 0; oy < out_h; ++oy) {
        const double y0 = ey[static_cast<std::size_t>(oy)], y1 = ey[static_cast<std::size_t>(oy) + 1];
        const int iy0 = static_cast<int>(std::floor(y0)),
                  iy1 = std::min(src.height, static_cast<int>(std::ceil(y1)));
        for (int ox = 0; ox < out_w; ++ox) {
            const double x0 = ex[static_cast<std::size_t>(ox)], x1 = ex[static_cast<std::size_t>(ox) + 1];
            const int ix0 = static_cast<int>(std::floor(x0)),
                      ix1 = std::min(src.width, static_cast<int>(std::ceil(x1)));
            double acc[3] = {0, 0, 0};
            double area = 0;
            for (int iy = iy0; iy < iy1; ++iy) {
                const double wy = std::min<double>(iy + 1, y1) - std::max<double>(iy, y0);
                for (int ix = ix0; ix < ix1; ++ix) {
                    const double wx = std::min<double>(ix + 1, x1) - std::max<double>(ix, x0);
                    const double w = wx * wy;
                    area += w;
                    for (int c = 0; c < 3; ++c) acc[c] += w * src.at(ix, iy, c);
                }
            }
            for (int c = 0; c < 3; ++c)
                dst.at(ox, oy, c) = clamp_u8(static_cast<int>(std::floor(acc[c] / area + 0.5)));
        }
    }
    return dst;
}

namespace detail {
// Catmull-Rom (bicubic, a = -0.5) kernel.
inline double cubic_weight(double t) {
    t = std::fabs(t);
    if (t < 1.0) return 1.5 * t * t * t - 2.5 * t * t + 1.0;
    if (t < 2.0) return -0.5 * t * t * t + 2.5 * t * t - 4.0 * t + 2.0;
    return 0.0;
}
} // namespace detail

// Fixed-kernel bicubic upsampler (deterministic for a given target).
inline ImageRgb upsample_bicubic(const ImageRgb& src, int out_w, int out_h) {
    if (out_w < src.width || out_h < src.height)
        throw InvalidArgument("upsample: target smaller than source");
    if (out_w == src.width && out_h == src.height) return src;

    ImageRgb dst(out_w, out_h);
    const double sx = static_cast<double>(src.width) / out_w;
    const double sy = static_cast<double>(src.height) / out_h;
    for (int oy = 0; oy < out_h; ++oy) {
        const double fy = (oy + 0.5) * sy - 0.5;
        const int iy = static_cast<int>(std::floor(fy));
        double wy[4];
        for (int k = 0; k < 4; ++k) wy[k] = detail::cubic_weight(fy - (iy - 1 + k));
        for (int ox = 0; ox < out_w; ++ox) {
            const double fx = (ox + 0.5) * sx - 0.5;
            const int ix = static_cast<int>(std::floor(fx));
            double wx[4];
            for (int k = 0; k < 4; ++k) wx[k] = detail::cubic_weight(fx - (ix - 1 + k));
            for (int c = 0; c < 3; ++c) {
                double acc = 0;
                for (int ky = 0; ky < 4; ++ky) {
                    const int yy = std::clamp(iy - 1 + ky, 0, src.height - 1);
                    double row = 0;
                    for (int kx = 0; kx < 4; ++kx) {
                        const int xx = std::clamp(ix - 1 + kx, 0, src.width - 1);
                        row += wx[kx] * src.at(xx, yy, c);
                    }
                    acc += wy[ky] * row;
                }
                dst.at(ox, oy, c) = clamp_u8(static_cast<int>(std::floor(acc + 0.5)));
            }
        }
    }
    return dst;
}

struct TrainingSample {
    double pixel_extent = 0;
    ResolutionClass min_acceptable_class = ResolutionClass::r2160;
};

struct TrainResult {
    ResolutionTable table;
    bool warning = false; // inseparable or degenerate data
};

// One-dimensional ordinal classifier over the extent feature: each boundary
// is the minimum-error cut between "needs at least class c" and the rest,
// placed at the midpoint of the optimal interval.
inline TrainResult train_resolution_table(const std::vector<TrainingSample>& samples) {
    if (samples.empty()) throw InvalidArgument("train_resolution_table: no samples");
    std::vector<TrainingSample> s = samples;
    std::sort(s.begin(), s.end(), [](const TrainingSample& a, const TrainingSample& b) {
        return a.pixel_extent < b.pixel_extent;
    });
    for (const auto& t : s)
        if (!(t.pixel_extent > 0)) throw InvalidArgument("training extent must be positive");

    TrainResult res;
    const std::uint16_t lo_cap = 1;
    const std::uint16_t hi_cap = std::numeric_limits<std::uint16_t>::max() - 4;

    double prev = 0.0;
    for (int b = 0; b < 3; ++b) {
        // Below the cut the label is "needs class > (2 - b)".
        auto below = [&](const TrainingSample& t) {
            return static_cast<int>(t.min_acceptable_class) >= 3 - b;
        };
        const std::size_t n = s.size();
        // err(cut before index i) = misfits with all of s[0..i) below, rest above.
        std::size_t total_below = 0;
        for (const auto& t : s) total_below += below(t) ? 1 : 0;
        std::size_t best_err = total_below; // cut at -inf: everything "above"
        std::size_t run_err = total_below;
        std::vector<std::size_t> best_cuts{0};
        for (std::size_t i = 0; i < n; ++i) {
            run_err += below(s[i]) ? -1 : +1;
            if (run_err < best_err) {
                best_err = run_err;
                best_cuts.assign(1, i + 1);
            } else if (run_err == best_err) {
                best_cuts.push_back(i + 1);
            }
        }
        if (best_err > 0) res.warning = true;

        // Midpoint of the widest optimal gap (extremes use caps).
        double best_lo = 0, best_hi = 0, best_gap = -1;
        for (std::size_t cut : best_cuts) {
            const double lo = cut == 0 ? lo_cap : s[cut - 1].pixel_extent;
            const double hi = cut == n ? hi_cap : s[cut].pixel_extent;
            if (hi - lo > best_gap) {
                best_gap = hi - lo;
                best_lo = lo;
                best_hi = hi;
            }
        }
        double cut = (best_lo + best_hi) / 2.0;
        if (cut <= prev) {
            cut = prev + 1;
            res.warning = true;
        }
        res.table.thresholds[static_cast<std::size_t>(b)] =
            static_cast<std::uint16_t>(std::clamp<double>(std::lround(cut), lo_cap + b,
                                                          hi_cap + b));
        prev = res.table.thresholds[static_cast<std::size_t>(b)];
    }
    res.table.validate();
    return res;
}

enum class Adjustment { retrain_request, decrease_one, hold };

inline constexpr int kRecallWindow = 6;     // "more than 5 frames"
inline constexpr double kRecallLow = 0.70;
inline constexpr double kRecallHigh = 0.90;

// history is ordered newest-last. Sustained low recall asks the edge to
// retrain; sustained high recall steps the assignment down one class.
inline Adjustment adjust_assignment(const std::vector<double>& recall_history,
                                    ResolutionClass current) {
    if (recall_history.size() < kRecallWindow) return Adjustment::hold;
    bool all_low = true, all_high = true;
    for (std::size_t i = recall_history.size() - kRecallWindow; i < recall_history.size(); ++i) {
        all_low = all_low && recall_history[i] < kRecallLow;
        all_high = all_high && recall_history[i] > kRecallHigh;
    }
    if (all_low) return Adjustment::retrain_request;
    if (all_high && current != ResolutionClass::r720) return Adjustment::decrease_one;
    return Adjustment::hold;
}

inline ResolutionClass decrease_class(ResolutionClass c) {
    return c == ResolutionClass::r720
               ? c
               : static_cast<ResolutionClass>(static_cast<int>(c) - 1);
}

} // namespace dcc

#endif // DCC_RESOLUTION_HPP
