#ifndef DCC_CONFIG_HPP
#define DCC_CONFIG_HPP

#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>

#include "dcc/error.hpp"
#include "dcc/geometry.hpp"

namespace dcc {

// Minimal INI-style key/value store: [section] headers, key = value lines,
// '#' or ';' comments. All values kept as strings; typed access on demand.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig parse(std::istream& in) {
        KeyValueConfig cfg;
        std::string line, section;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            std::string s = trim(line);
            if (s.empty() || s[0] == '#' || s[0] == ';') continue;
            if (s.front() == '[') {
                if (s.back() != ']') throw ParseError("unterminated section header", line_no);
                section = trim(s.substr(1, s.size() - 2));
                continue;
            }
            auto eq = s.find('=');
            if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
            std::string key = trim(s.substr(0, eq));
            std::string value = trim(s.substr(eq + 1));
            if (key.empty()) throw ParseError("empty key", line_no);
            cfg.values_[section + "." + key] = value;
        }
        return cfg;
    }

    static KeyValueConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open config file: " + path);
        return parse(in);
    }

    bool has(const std::string& section, const std::string& key) const {
        return values_.count(section + "." + key) > 0;
    }

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
        auto it = values_.find(section + "." + key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_double(const std::string& section, const std::string& key, double fallback) const {
        auto it = values_.find(section + "." + key);
        if (it == values_.end()) return fallback;
        try {
            return std::stod(it->second);
        } catch (const std::exception&) {
            throw InvalidArgument("config value " + section + "." + key + " is not a number");
        }
    }

    int get_int(const std::string& section, const std::string& key, int fallback) const {
        return static_cast<int>(get_double(section, key, static_cast<double>(fallback)));
    }

    void set(const std::string& section, const std::string& key, const std::string& value) {
        values_[section + "." + key] = value;
    }

private:
    static std::string trim(const std::string& s) {
        auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    std::map<std::string, std::string> values_;
};

// Sky color filter (see segment_sky).
struct SkyFilterParams {
    double blue_ratio = 1.1;   // blue must exceed ratio * max(red, green)
    int min_luma = 120;        // 0..255
    double top_fraction = 0.25;
    double top_sky_min = 0.30; // sky fraction over the top region to accept
    double row_sky_min = 0.50; // per-row sky fraction defining the skyline
};

// Road color filter (see segment_road).
struct RoadFilterParams {
    int max_channel_spread = 18; // max(|R-G|,|G-B|,|R-B|) <= spread
    int min_luma = 60;
    int max_luma = 180;
    double block_majority = 0.5; // fraction of pixels that must pass
};

struct MotionParams {
    double ip_energy = 6.0;     // mean abs residual per pixel for P eligibility
    double ip_uncovered = 0.25; // max uncovered area fraction for P
    int decimate_sad = 512;     // per-16x16-luma-block SAD skip threshold
    double attitude_tol_deg = 0.5;
};

struct CodecParams {
    int qp_ropi = 0;
    int qp_roni = 20;
    int qp_base = 12;      // uniform QP for the baseline coder
    int baseline_decimate_sad = 64;
    int max_i_interval = 50; // safety-valve GOP bound
    int sky_refresh_frames = 150;
};

struct OracleParams {
    double min_extent_px = 12.0; // minor-axis gate in base-frame pixels
    double psnr_gate_db = 28.0;  // box-region luma PSNR gate
};

// Everything tunable from the toolkit configuration file.
struct ToolkitConfig {
    CameraIntrinsics camera{};
    SkyFilterParams sky{};
    RoadFilterParams road{};
    MotionParams motion{};
    CodecParams codec{};
    OracleParams oracle{};
    double road_refresh_period_s = 2.0;
    double road_refresh_speed_kink = 5.0; // m/s; faster flight refreshes more often
    double detection_speed_dilate = 7.5;  // m/s; faster flight dilates boxes one more block
    double max_roll_deg = 3.0;            // frames rolled beyond this are discarded

    static ToolkitConfig from_config(const KeyValueConfig& c) {
        ToolkitConfig t;
        t.camera.focal_x = c.get_double("camera", "focal_x", t.camera.focal_x);
        t.camera.focal_y = c.get_double("camera", "focal_y", t.camera.focal_y);
        t.camera.frame_length = c.get_double("camera", "frame_length", t.camera.frame_length);
        t.camera.frame_width = c.get_double("camera", "frame_width", t.camera.frame_width);
        t.camera.validate();

        t.sky.blue_ratio = c.get_double("segmentation", "sky_blue_ratio", t.sky.blue_ratio);
        t.sky.min_luma = c.get_int("segmentation", "sky_min_luma", t.sky.min_luma);
        t.sky.top_fraction = c.get_double("segmentation", "sky_top_fraction", t.sky.top_fraction);
        t.sky.top_sky_min = c.get_double("segmentation", "sky_top_min", t.sky.top_sky_min);
        t.sky.row_sky_min = c.get_double("segmentation", "sky_row_min", t.sky.row_sky_min);
        t.road.max_channel_spread =
            c.get_int("segmentation", "road_channel_spread", t.road.max_channel_spread);
        t.road.min_luma = c.get_int("segmentation", "road_min_luma", t.road.min_luma);
        t.road.max_luma = c.get_int("segmentation", "road_max_luma", t.road.max_luma);

        t.motion.ip_energy = c.get_double("motion", "ip_energy", t.motion.ip_energy);
        t.motion.ip_uncovered = c.get_double("motion", "ip_uncovered", t.motion.ip_uncovered);
        t.motion.decimate_sad = c.get_int("motion", "decimate_sad", t.motion.decimate_sad);
        t.motion.attitude_tol_deg =
            c.get_double("motion", "attitude_tol_deg", t.motion.attitude_tol_deg);

        t.codec.qp_ropi = c.get_int("codec", "qp_ropi", t.codec.qp_ropi);
        t.codec.qp_roni = c.get_int("codec", "qp_roni", t.codec.qp_roni);
        t.codec.qp_base = c.get_int("codec", "qp_base", t.codec.qp_base);
        t.codec.baseline_decimate_sad =
            c.get_int("codec", "baseline_decimate_sad", t.codec.baseline_decimate_sad);
        t.codec.max_i_interval = c.get_int("codec", "max_i_interval", t.codec.max_i_interval);
        t.codec.sky_refresh_frames =
            c.get_int("codec", "sky_refresh_frames", t.codec.sky_refresh_frames);

        t.oracle.min_extent_px = c.get_double("oracle", "min_extent_px", t.oracle.min_extent_px);
        t.oracle.psnr_gate_db = c.get_double("oracle", "psnr_gate_db", t.oracle.psnr_gate_db);
        return t;
    }

    static ToolkitConfig load(const std::string& path) {
        return from_config(KeyValueConfig::load(path));
    }
};

// Standalone intrinsics file: focal_x, focal_y, frame_length, frame_width as
// bare key = value lines (no section).
inline CameraIntrinsics load_intrinsics(const std::string& path) {
    KeyValueConfig c = KeyValueConfig::load(path);
    CameraIntrinsics k;
    k.focal_x = c.get_double("", "focal_x", -1);
    k.focal_y = c.get_double("", "focal_y", -1);
    k.frame_length = c.get_double("", "frame_length", -1);
    k.frame_width = c.get_double("", "frame_width", -1);
    k.validate();
    return k;
}

} // namespace dcc

#endif // DCC_CONFIG_HPP
