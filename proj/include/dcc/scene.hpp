#ifndef DCC_SCENE_HPP
#define DCC_SCENE_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "dcc/edge.hpp"
#include "dcc/error.hpp"
#include "dcc/geometry.hpp"
#include "dcc/image.hpp"
#include "dcc/telemetry.hpp"

namespace dcc {

enum class AreaKind : std::uint8_t { residence = 0, local = 1, highway = 2 };

inline const char* area_name(AreaKind a) {
    static constexpr const char* n[3] = {"residence", "local", "highway"};
    return n[static_cast<int>(a)];
}

struct SceneConfig {
    AreaKind area = AreaKind::highway;
    double altitude_m = 50;
    double pitch_deg = 90;
    double speed_mps = 5;   // drone flies along +X
    int fps = 5;
    double duration_s = 10;
    int moving_vehicles = 6;
    int parked_vehicles = 4;
    double vehicle_speed_mps = 8;
    std::uint64_t seed = 1;
    double noise_sigma = 1.5;     // per-frame sensor noise, levels
    bool pavement_everywhere = false; // whole ground is road-gray (apron scenes)
    int base_width = 1920;
    int base_height = 1080;
    double yaw_deg = 0;
    CameraIntrinsics camera_ref{}; // defaults to 1750 px @ 1280x720

    int frame_count() const { return static_cast<int>(duration_s * fps + 0.5); }
    CameraIntrinsics camera() const {
        return camera_ref.scaled_to(base_width, base_height);
    }

    void validate() const {
        if (fps != 1 && fps != 2 && fps != 5)
            throw InvalidArgument("SceneConfig: fps must be one of {1, 2, 5}");
        if (altitude_m < 20 || altitude_m > 200)
            throw InvalidArgument("SceneConfig: altitude must be in [20, 200] m");
        if (!(pitch_deg >= 0 && pitch_deg <= 90))
            throw InvalidArgument("SceneConfig: pitch must be in [0, 90] degrees");
        if (duration_s <= 0 || frame_count() < 1)
            throw InvalidArgument("SceneConfig: empty scene");
        if (base_width % 2 || base_height % 2 || base_width < 64 || base_height < 64)
            throw InvalidArgument("SceneConfig: bad base dimensions");
    }
};

namespace detail {

inline std::uint64_t hash_mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t hash3(std::uint64_t seed, std::int64_t a, std::int64_t b) {
    return hash_mix(seed ^ hash_mix(static_cast<std::uint64_t>(a) ^
                                    hash_mix(static_cast<std::uint64_t>(b)) * 0x100000001b3ull));
}

inline double hash_unit(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b, r = a % b;
    return r != 0 && ((r < 0) != (b < 0)) ? q - 1 : q;
}

// Bilinear value noise over an integer texel lattice; smooth and stable, so
// equal texels always reproduce the same value.
inline double value_noise(std::uint64_t seed, std::int64_t tx, std::int64_t ty, int period) {
    const std::int64_t gx = floor_div(tx, period), gy = floor_div(ty, period);
    const double fx = static_cast<double>(tx - gx * period) / period;
    const double fy = static_cast<double>(ty - gy * period) / period;
    const double v00 = hash_unit(hash3(seed, gx, gy));
    const double v10 = hash_unit(hash3(seed, gx + 1, gy));
    const double v01 = hash_unit(hash3(seed, gx, gy + 1));
    const double v11 = hash_unit(hash3(seed, gx + 1, gy + 1));
    const double sx = fx * fx * (3 - 2 * fx), sy = fy * fy * (3 - 2 * fy);
    return (v00 * (1 - sx) + v10 * sx) * (1 - sy) + (v01 * (1 - sx) + v11 * sx) * sy;
}

} // namespace detail

struct Vehicle {
    int id = 0;
    std::uint8_t cls = 0;      // 0 car, 1 truck
    double length = 3.0;       // along the road (X)
    double width = 1.8;
    double x0 = 0;             // position at t = 0
    double y = 0;
    double speed = 0;          // signed, along +X
    std::array<std::uint8_t, 3> body{200, 200, 205};

    double x_at(double t) const { return x0 + speed * t; }
    bool moving() const { return speed != 0.0; }
};

// Deterministic synthetic world: a textured ground plane with gray roads,
// moving and parked vehicles, and a sky band when the pitch is low enough to
// see the horizon. One texel corresponds to one base pixel at nadir.
class SceneRenderer {
public:
    explicit SceneRenderer(SceneConfig cfg) : cfg_(cfg) {
        cfg_.validate();
        cam_ = cfg_.camera();
        texel_m_ = cfg_.altitude_m / cam_.focal_y;
        build_layout();
        build_vehicles();
        build_telemetry();
    }

    const SceneConfig& config() const { return cfg_; }
    const CameraIntrinsics& camera() const { return cam_; }
    int frame_count() const { return cfg_.frame_count(); }
    double frame_time(int i) const { return static_cast<double>(i) / cfg_.fps; }
    const TelemetryTrack& telemetry() const { return track_; }

    Pose pose_of_frame(int i) const {
        return Pose::at({cfg_.speed_mps * frame_time(i), 0, cfg_.altitude_m}, cfg_.yaw_deg,
                        cfg_.pitch_deg, 0);
    }

    // Lowest frame row that still sees sky, or -1 when the horizon is out of
    // view. Rows [0, horizon_row) are sky.
    int horizon_row() const {
        if (cfg_.pitch_deg >= 89.999) return -1;
        const double y_hor =
            cam_.frame_width / 2.0 - cam_.focal_y * std::tan(deg_to_rad(cfg_.pitch_deg));
        return y_hor <= 0 ? -1 : std::min(static_cast<int>(y_hor), cfg_.base_height);
    }

    ImageRgb render(int frame_index, bool with_noise = true) const {
        const bool nadir = cfg_.pitch_deg >= 89.999 && cfg_.yaw_deg == 0.0;
        ImageRgb img = nadir ? render_nadir(frame_index) : render_projective(frame_index);
        if (with_noise && cfg_.noise_sigma > 0) apply_noise(img, frame_index);
        return img;
    }

    std::vector<TruthBox> truth_boxes(int frame_index) const {
        const double t = frame_time(frame_index);
        const Pose pose = pose_of_frame(frame_index);
        std::vector<TruthBox> out;
        for (const Vehicle& v : vehicles_) {
            double x0, y0, x1, y1;
            if (!project_vehicle_bbox(v, t, pose, x0, y0, x1, y1)) continue;
            const double cxm = (x0 + x1) / 2, cym = (y0 + y1) / 2;
            if (cxm < 0 || cxm >= cfg_.base_width || cym < 0 || cym >= cfg_.base_height)
                continue;
            TruthBox tb;
            tb.frame = static_cast<std::uint32_t>(frame_index);
            tb.object_id = v.id;
            tb.cls = v.cls;
            tb.x = std::max(0.0, x0);
            tb.y = std::max(0.0, y0);
            tb.w = std::min<double>(cfg_.base_width, x1) - tb.x;
            tb.h = std::min<double>(cfg_.base_height, y1) - tb.y;
            tb.moving = v.moving();
            if (tb.w < 4 || tb.h < 4) continue;
            out.push_back(tb);
        }
        return out;
    }

    const std::vector<Vehicle>& vehicles() const { return vehicles_; }

private:
    struct RoadBand {
        int axis = 0; // 0: along X (test y), 1: along Y (test x)
        double center_m = 0;
        double halfwidth_m = 7.5;
    };

    void build_layout() {
        roads_.clear();
        switch (cfg_.area) {
            case AreaKind::highway:
                roads_.push_back({0, 0.0, 7.5});
                break;
            case AreaKind::local:
                roads_.push_back({0, 0.0, 5.0});
                roads_.push_back({1, 26.0, 4.0});
                break;
            case AreaKind::residence:
                roads_.push_back({0, 0.0, 3.5});
                break;
        }
    }

    void build_vehicles() {
        vehicles_.clear();
        std::uint64_t h = detail::hash_mix(cfg_.seed ^ 0xabcdef12345ull);
        auto next_unit = [&]() {
            h = detail::hash_mix(h);
            return detail::hash_unit(h);
        };
        const double view_half = cfg_.base_width * texel_m_ / 2.0;
        const double x_lo = -view_half - 30.0;
        const double x_hi = cfg_.speed_mps * cfg_.duration_s + view_half + 30.0;
        const double road_hw = roads_.empty() ? 7.5 : roads_[0].halfwidth_m;
        const std::array<double, 4> lanes = {-road_hw * 0.72, -road_hw * 0.26,
                                             road_hw * 0.26, road_hw * 0.72};
        static constexpr std::array<std::array<std::uint8_t, 3>, 5> kPalette = {{
            {232, 230, 228}, // white
            {52, 50, 58},    // dark
            {176, 58, 52},   // red
            {62, 84, 178},   // blue
            {206, 208, 214}, // silver
        }};
        int id = 0;
        auto add = [&](bool moving) {
            Vehicle v;
            v.id = id++;
            const bool truck = next_unit() < 0.25;
            v.cls = truck ? 1 : 0;
            v.length = truck ? 5.0 : 3.0;
            v.width = truck ? 2.2 : 1.8;
            const std::size_t lane = static_cast<std::size_t>(next_unit() * 4) % 4;
            if (moving) {
                v.y = lanes[lane];
                const double dir = v.y < 0 ? 1.0 : -1.0;
                v.speed = dir * cfg_.vehicle_speed_mps * (0.75 + 0.5 * next_unit());
            } else {
                v.y = (next_unit() < 0.5 ? -1 : 1) * (road_hw + 1.6);
                v.speed = 0;
            }
            v.x0 = x_lo + (x_hi - x_lo) * next_unit();
            v.body = kPalette[static_cast<std::size_t>(next_unit() * 5) % 5];
            vehicles_.push_back(v);
        };
        for (int i = 0; i < cfg_.moving_vehicles; ++i) add(true);
        for (int i = 0; i < cfg_.parked_vehicles; ++i) add(false);
    }

    void build_telemetry() {
        std::vector<TelemetrySample> samples;
        const double rate = 2.0 * cfg_.fps;
        const int n = static_cast<int>(cfg_.duration_s * rate) + 2;
        for (int i = 0; i <= n; ++i) {
            TelemetrySample s;
            s.timestamp = i / rate;
            s.position = {cfg_.speed_mps * s.timestamp, 0, cfg_.altitude_m};
            s.velocity = {cfg_.speed_mps, 0, 0};
            s.yaw_deg = cfg_.yaw_deg;
            s.pitch_deg = cfg_.pitch_deg;
            s.roll_deg = 0;
            samples.push_back(s);
        }
        track_ = TelemetryTrack(std::move(samples));
    }

    bool on_road_m(double mx, double my) const {
        if (cfg_.pavement_everywhere) return true;
        for (const RoadBand& r : roads_) {
            const double d = r.axis == 0 ? my - r.center_m : mx - r.center_m;
            if (std::fabs(d) <= r.halfwidth_m) return true;
        }
        return false;
    }

    // ground color at a texel, vehicles excluded
    void base_color(std::int64_t tx, std::int64_t ty, std::uint8_t rgb[3]) const {
        const double mx = tx * texel_m_, my = ty * texel_m_;
        const double n_lo = detail::value_noise(cfg_.seed * 3 + 1, tx, ty, 48);
        const double n_hi = detail::value_noise(cfg_.seed * 3 + 2, tx, ty, 7);
        if (on_road_m(mx, my)) {
            // asphalt: near-neutral gray with mild texture and lane marks
            int v = 117 + static_cast<int>(18.0 * (n_lo - 0.5) + 8.0 * (n_hi - 0.5));
            for (const RoadBand& r : roads_) {
                const double d = r.axis == 0 ? my - r.center_m : mx - r.center_m;
                if (std::fabs(d) > r.halfwidth_m) continue;
                const double lane_w = r.halfwidth_m / 2.0;
                const double offset = std::fabs(std::fmod(std::fabs(d) + lane_w / 2, lane_w) -
                                                lane_w / 2);
                if (offset < 0.12 && std::fabs(d) < r.halfwidth_m - 0.5) v += 48; // lane mark
                if (std::fabs(std::fabs(d) - r.halfwidth_m) < 0.25) v += 36;      // edge line
            }
            v = std::clamp(v, 60, 200);
            rgb[0] = static_cast<std::uint8_t>(std::clamp(v + 2, 0, 255));
            rgb[1] = static_cast<std::uint8_t>(v);
            rgb[2] = static_cast<std::uint8_t>(std::clamp(v - 2, 0, 255));
            return;
        }
        // house cells for built-up areas
        if (cfg_.area != AreaKind::highway) {
            const std::int64_t cell_px = static_cast<std::int64_t>(18.0 / texel_m_);
            const std::int64_t cxi = detail::floor_div(tx, cell_px);
            const std::int64_t cyi = detail::floor_div(ty, cell_px);
            const std::uint64_t hc = detail::hash3(cfg_.seed * 5 + 3, cxi, cyi);
            const double density = cfg_.area == AreaKind::residence ? 0.55 : 0.35;
            if (detail::hash_unit(hc) < density) {
                const double fx =
                    static_cast<double>(tx - cxi * cell_px) / static_cast<double>(cell_px);
                const double fy =
                    static_cast<double>(ty - cyi * cell_px) / static_cast<double>(cell_px);
                const double pad = 0.18 + 0.1 * detail::hash_unit(hc >> 7);
                if (fx > pad && fx < 1 - pad && fy > pad && fy < 1 - pad) {
                    static constexpr std::array<std::array<int, 3>, 4> kRoofs = {{
                        {150, 96, 80},  // terracotta
                        {96, 104, 118}, // slate
                        {142, 138, 126},// tan
                        {88, 78, 70},   // brown
                    }};
                    const auto& roof = kRoofs[(hc >> 17) % 4];
                    const int tex = static_cast<int>(12.0 * (n_hi - 0.5));
                    rgb[0] = clamp_u8(roof[0] + tex);
                    rgb[1] = clamp_u8(roof[1] + tex);
                    rgb[2] = clamp_u8(roof[2] + tex);
                    return;
                }
            }
        }
        // grass / fields
        const int g = 108 + static_cast<int>(34.0 * (n_lo - 0.5) + 10.0 * (n_hi - 0.5));
        rgb[0] = clamp_u8(g - 34);
        rgb[1] = clamp_u8(g + 12);
        rgb[2] = clamp_u8(g - 48);
    }

    bool vehicle_color_m(double mx, double my, double t, std::uint8_t rgb[3]) const {
        for (const Vehicle& v : vehicles_) {
            const double vx = v.x_at(t);
            const double dx = mx - vx, dy = my - v.y;
            if (std::fabs(dx) > v.length / 2 || std::fabs(dy) > v.width / 2) continue;
            const double edge = std::min(v.length / 2 - std::fabs(dx),
                                         v.width / 2 - std::fabs(dy));
            const double head = v.speed >= 0 ? dx : -dx; // toward travel direction
            double shade = 1.0;
            if (edge < 0.10) {
                shade = 0.68; // soft outline
            } else if (head > v.length * 0.12 && head < v.length * 0.34) {
                shade = 0.62; // windshield band
            }
            const std::int64_t tx = static_cast<std::int64_t>(std::floor(mx / texel_m_));
            const std::int64_t ty = static_cast<std::int64_t>(std::floor(my / texel_m_));
            const int tex = static_cast<int>(
                6.0 * (detail::value_noise(cfg_.seed * 7 + v.id, tx, ty, 6) - 0.5));
            rgb[0] = clamp_u8(static_cast<int>(v.body[0] * shade) + tex);
            rgb[1] = clamp_u8(static_cast<int>(v.body[1] * shade) + tex);
            rgb[2] = clamp_u8(static_cast<int>(v.body[2] * shade) + tex);
            return true;
        }
        return false;
    }

    ImageRgb render_nadir(int frame_index) const {
        const double t = frame_time(frame_index);
        const int w = cfg_.base_width, h = cfg_.base_height;
        ImageRgb img(w, h);
        // camera quantized to whole texels so integer-texel flight steps
        // translate frames bit-exactly
        const std::int64_t tx0 =
            static_cast<std::int64_t>(std::llround(cfg_.speed_mps * t / texel_m_)) - w / 2;
        const std::int64_t ty0 = h / 2; // drone stays on y = 0; frame y runs south
        const bool any_vehicles = !vehicles_.empty();
        for (int py = 0; py < h; ++py) {
            const std::int64_t ty = ty0 - py;
            const double my = ty * texel_m_;
            for (int px = 0; px < w; ++px) {
                const std::int64_t tx = tx0 + px;
                std::uint8_t rgb[3];
                if (!any_vehicles || !vehicle_color_m(tx * texel_m_, my, t, rgb))
                    base_color(tx, ty, rgb);
                img.at(px, py, 0) = rgb[0];
                img.at(px, py, 1) = rgb[1];
                img.at(px, py, 2) = rgb[2];
            }
        }
        return img;
    }

    void sky_color(double up, std::uint8_t rgb[3]) const {
        // up in [0, 1]: deeper blue higher above the horizon
        const int k = static_cast<int>(55.0 * std::min(1.0, up * 6.0));
        rgb[0] = static_cast<std::uint8_t>(150 - k / 2);
        rgb[1] = static_cast<std::uint8_t>(185 - k / 3);
        rgb[2] = static_cast<std::uint8_t>(240 - k / 6);
    }

    ImageRgb render_projective(int frame_index) const {
        const double t = frame_time(frame_index);
        const Pose pose = pose_of_frame(frame_index);
        const Mat3 cam_to_world = world_to_camera_rotation(pose).transposed();
        const int w = cfg_.base_width, h = cfg_.base_height;
        ImageRgb img(w, h);
        for (int py = 0; py < h; ++py) {
            for (int px = 0; px < w; ++px) {
                const Vec3 dir_cam{(px + 0.5 - cam_.frame_length / 2.0) / cam_.focal_x,
                                   (py + 0.5 - cam_.frame_width / 2.0) / cam_.focal_y, 1.0};
                const Vec3 dir = cam_to_world * dir_cam;
                std::uint8_t rgb[3];
                if (dir.z >= -1e-9) {
                    sky_color(dir.z / std::max(1e-9, dir.norm()), rgb);
                } else {
                    const double s = -pose.position.z / dir.z;
                    const double mx = pose.position.x + dir.x * s;
                    const double my = pose.position.y + dir.y * s;
                    if (!vehicle_color_m(mx, my, t, rgb)) {
                        const std::int64_t tx =
                            static_cast<std::int64_t>(std::floor(mx / texel_m_));
                        const std::int64_t ty =
                            static_cast<std::int64_t>(std::floor(my / texel_m_));
                        base_color(tx, ty, rgb);
                    }
                }
                img.at(px, py, 0) = rgb[0];
                img.at(px, py, 1) = rgb[1];
                img.at(px, py, 2) = rgb[2];
            }
        }
        return img;
    }

    void apply_noise(ImageRgb& img, int frame_index) const {
        const double scale = cfg_.noise_sigma / 0.5774; // 4-fold uniform sum
        const std::uint64_t fs = detail::hash_mix(cfg_.seed * 11 + 5) ^
                                 detail::hash_mix(static_cast<std::uint64_t>(frame_index));
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) {
                std::uint64_t hx = detail::hash3(fs, x, y);
                for (int c = 0; c < 3; ++c) {
                    hx = detail::hash_mix(hx);
                    const double u =
                        detail::hash_unit(hx) + detail::hash_unit(detail::hash_mix(hx ^ 0x5bull)) +
                        detail::hash_unit(detail::hash_mix(hx ^ 0x91ull)) +
                        detail::hash_unit(detail::hash_mix(hx ^ 0xe7ull)) - 2.0;
                    img.at(x, y, c) = clamp_u8(
                        static_cast<int>(std::lround(img.at(x, y, c) + u * scale)));
                }
            }
    }

    bool project_vehicle_bbox(const Vehicle& v, double t, const Pose& pose, double& x0,
                              double& y0, double& x1, double& y1) const {
        const double vx = v.x_at(t);
        const bool nadir = cfg_.pitch_deg >= 89.999 && cfg_.yaw_deg == 0.0;
        if (nadir) {
            // consistent with the texel-quantized nadir sampling
            const double cam_tx = std::llround(pose.position.x / texel_m_) * texel_m_;
            x0 = cfg_.base_width / 2.0 + (vx - v.length / 2 - cam_tx) / texel_m_;
            x1 = cfg_.base_width / 2.0 + (vx + v.length / 2 - cam_tx) / texel_m_;
            y0 = cfg_.base_height / 2.0 - (v.y + v.width / 2) / texel_m_;
            y1 = cfg_.base_height / 2.0 - (v.y - v.width / 2) / texel_m_;
            return x1 > 0 && y1 > 0 && x0 < cfg_.base_width && y0 < cfg_.base_height;
        }
        x0 = y0 = 1e18;
        x1 = y1 = -1e18;
        for (int cx = -1; cx <= 1; cx += 2)
            for (int cy = -1; cy <= 1; cy += 2) {
                const Vec3 corner{vx + cx * v.length / 2, v.y + cy * v.width / 2, 0};
                try {
                    const FramePoint fp = project_world_to_frame(corner, pose, cam_);
                    x0 = std::min(x0, fp.x);
                    x1 = std::max(x1, fp.x);
                    y0 = std::min(y0, fp.y);
                    y1 = std::max(y1, fp.y);
                } catch (const BehindCamera&) {
                    return false;
                }
            }
        return x1 > 0 && y1 > 0 && x0 < cfg_.base_width && y0 < cfg_.base_height;
    }

    SceneConfig cfg_;
    CameraIntrinsics cam_;
    double texel_m_ = 0.02;
    std::vector<RoadBand> roads_;
    std::vector<Vehicle> vehicles_;
    TelemetryTrack track_;
};

// ---- .dcv raw video container ----

inline constexpr char kDcvMagic[4] = {'D', 'C', 'V', '1'};

struct DcvHeader {
    std::uint16_t width = 0;
    std::uint16_t height = 0;
    std::uint8_t fps = 5;
    std::uint32_t frame_count = 0;
};

class DcvWriter {
public:
    DcvWriter(std::ostream& out, DcvHeader header) : out_(out), header_(header) {
        write_header();
    }

    void write_frame(const ImageRgb& img) {
        if (img.width != header_.width || img.height != header_.height)
            throw InvalidArgument("DcvWriter: frame dimensions differ from the header");
        out_.write(reinterpret_cast<const char*>(img.data.data()),
                   static_cast<std::streamsize>(img.data.size()));
        ++written_;
    }

    void finalize() {
        header_.frame_count = written_;
        out_.seekp(0);
        write_header();
        out_.seekp(0, std::ios::end);
        out_.flush();
    }

private:
    void write_header() {
        out_.write(kDcvMagic, 4);
        const std::uint8_t head[9] = {
            static_cast<std::uint8_t>(header_.width & 0xff),
            static_cast<std::uint8_t>(header_.width >> 8),
            static_cast<std::uint8_t>(header_.height & 0xff),
            static_cast<std::uint8_t>(header_.height >> 8),
            header_.fps,
            static_cast<std::uint8_t>(header_.frame_count & 0xff),
            static_cast<std::uint8_t>((header_.frame_count >> 8) & 0xff),
            static_cast<std::uint8_t>((header_.frame_count >> 16) & 0xff),
            static_cast<std::uint8_t>((header_.frame_count >> 24) & 0xff)};
        out_.write(reinterpret_cast<const char*>(head), 9);
    }

    std::ostream& out_;
    DcvHeader header_;
    std::uint32_t written_ = 0;
};

class DcvReader {
public:
    explicit DcvReader(std::istream& in) : in_(in) {
        char magic[4];
        in_.read(magic, 4);
        if (!in_ || !std::equal(magic, magic + 4, kDcvMagic))
            throw CorruptBitstream("bad raw video magic", 0);
        std::uint8_t head[9];
        in_.read(reinterpret_cast<char*>(head), 9);
        if (!in_) throw CorruptBitstream("truncated raw video header", 4);
        header_.width = static_cast<std::uint16_t>(head[0] | (head[1] << 8));
        header_.height = static_cast<std::uint16_t>(head[2] | (head[3] << 8));
        header_.fps = head[4];
        header_.frame_count = static_cast<std::uint32_t>(head[5]) |
                              (static_cast<std::uint32_t>(head[6]) << 8) |
                              (static_cast<std::uint32_t>(head[7]) << 16) |
                              (static_cast<std::uint32_t>(head[8]) << 24);
        if (header_.width == 0 || header_.height == 0)
            throw CorruptBitstream("empty raw video dimensions", 4);
    }

    const DcvHeader& header() const { return header_; }

    std::optional<ImageRgb> read_frame() {
        ImageRgb img(header_.width, header_.height);
        in_.read(reinterpret_cast<char*>(img.data.data()),
                 static_cast<std::streamsize>(img.data.size()));
        if (in_.gcount() == 0) return std::nullopt;
        if (in_.gcount() != static_cast<std::streamsize>(img.data.size()))
            throw CorruptBitstream("truncated raw video frame", 13);
        return img;
    }

private:
    std::istream& in_;
    DcvHeader header_;
};

// ---- ground-truth text format (.gt) ----

inline void write_truth(std::ostream& out,
                        const std::vector<std::vector<TruthBox>>& frames) {
    out << "# frame, object_id, class, x, y, w, h, moving\n";
    out.precision(10);
    for (const auto& frame : frames)
        for (const TruthBox& t : frame)
            out << t.frame << ", " << t.object_id << ", " << static_cast<int>(t.cls) << ", "
                << t.x << ", " << t.y << ", " << t.w << ", " << t.h << ", "
                << (t.moving ? 1 : 0) << "\n";
}

inline std::vector<std::vector<TruthBox>> read_truth(std::istream& in) {
    std::vector<std::vector<TruthBox>> frames;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        TruthBox t;
        int cls = 0, moving = 0;
        unsigned long frame = 0;
        if (std::sscanf(line.c_str(), "%lu , %d , %d , %lf , %lf , %lf , %lf , %d", &frame,
                        &t.object_id, &cls, &t.x, &t.y, &t.w, &t.h, &moving) != 8)
            throw ParseError("bad ground-truth record", line_no);
        t.frame = static_cast<std::uint32_t>(frame);
        t.cls = static_cast<std::uint8_t>(cls);
        t.moving = moving != 0;
        if (frames.size() <= t.frame) frames.resize(t.frame + 1);
        frames[t.frame].push_back(t);
    }
    return frames;
}

} // namespace dcc

#endif // DCC_SCENE_HPP
