#ifndef DCC_TELEMETRY_HPP
#define DCC_TELEMETRY_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dcc/error.hpp"
#include "dcc/geometry.hpp"

namespace dcc {

struct TelemetrySample {
    double timestamp = 0; // seconds
    Vec3 position{};      // meters, world frame
    Vec3 velocity{};      // meters/second
    double yaw_deg = 0;
    double pitch_deg = 90;
    double roll_deg = 0;
};

// Immutable after parsing; timestamps strictly increasing.
class TelemetryTrack {
public:
    TelemetryTrack() = default;
    explicit TelemetryTrack(std::vector<TelemetrySample> samples)
        : samples_(std::move(samples)) {
        for (std::size_t i = 1; i < samples_.size(); ++i)
            if (!(samples_[i].timestamp > samples_[i - 1].timestamp))
                throw InvalidArgument("TelemetryTrack: timestamps not strictly increasing");
    }

    const std::vector<TelemetrySample>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    double first_time() const { return samples_.front().timestamp; }
    double last_time() const { return samples_.back().timestamp; }

private:
    std::vector<TelemetrySample> samples_;
};

// .tlm line format: t, x, y, z, vx, vy, vz, yaw, pitch, roll
// '#' starts a comment line; blank lines are ignored.
inline TelemetryTrack parse_telemetry(std::istream& in) {
    std::vector<TelemetrySample> samples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;

        std::array<double, 10> f{};
        std::size_t n = 0;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (n >= f.size()) throw ParseError("telemetry record has too many fields", line_no);
            try {
                std::size_t used = 0;
                f[n] = std::stod(tok, &used);
                while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used])))
                    ++used;
                if (used != tok.size()) throw std::invalid_argument("trailing junk");
            } catch (const std::exception&) {
                throw ParseError("telemetry field " + std::to_string(n + 1) + " is not a number",
                                 line_no);
            }
            ++n;
        }
        if (n != 10)
            throw ParseError("telemetry record has " + std::to_string(n) + " fields, expected 10",
                             line_no);
        if (!std::isfinite(f[0])) throw ParseError("non-finite timestamp", line_no);
        TelemetrySample s;
        s.timestamp = f[0];
        s.position = {f[1], f[2], f[3]};
        s.velocity = {f[4], f[5], f[6]};
        s.yaw_deg = f[7];
        s.pitch_deg = f[8];
        s.roll_deg = f[9];
        if (!samples.empty() && !(s.timestamp > samples.back().timestamp))
            throw ParseError("timestamps must be strictly increasing", line_no);
        samples.push_back(s);
    }
    return TelemetryTrack(std::move(samples));
}

inline void serialize_telemetry(const TelemetryTrack& track, std::ostream& out) {
    out << "# t, x, y, z, vx, vy, vz, yaw, pitch, roll\n";
    out.precision(17);
    for (const auto& s : track.samples()) {
        out << s.timestamp << ", " << s.position.x << ", " << s.position.y << ", "
            << s.position.z << ", " << s.velocity.x << ", " << s.velocity.y << ", "
            << s.velocity.z << ", " << s.yaw_deg << ", " << s.pitch_deg << ", " << s.roll_deg
            << "\n";
    }
}

struct PoseVelocity {
    Pose pose;
    Vec3 velocity;
};

// Linear interpolation of position/velocity; nearest-sample attitude by
// default (the gimbal holds attitude between samples), linear when
// nearest_attitude is off. t must lie within the track.
inline PoseVelocity pose_at(const TelemetryTrack& track, double t,
                            bool nearest_attitude = true) {
    if (track.size() < 2) throw InvalidArgument("pose_at: track needs at least 2 samples");
    if (t < track.first_time() || t > track.last_time())
        throw OutOfRange("pose_at: t outside the track time span");
    const auto& ss = track.samples();
    auto it = std::lower_bound(ss.begin(), ss.end(), t,
                               [](const TelemetrySample& s, double v) { return s.timestamp < v; });
    if (it == ss.begin()) ++it;
    const TelemetrySample& hi = *it;
    const TelemetrySample& lo = *std::prev(it);
    const double span = hi.timestamp - lo.timestamp;
    const double a = span > 0 ? (t - lo.timestamp) / span : 0.0;

    PoseVelocity out;
    out.pose.position = lo.position + (hi.position - lo.position) * a;
    out.pose.displacement = out.pose.position;
    if (nearest_attitude) {
        const TelemetrySample& near = a < 0.5 ? lo : hi;
        out.pose.yaw_deg = near.yaw_deg;
        out.pose.pitch_deg = near.pitch_deg;
        out.pose.roll_deg = near.roll_deg;
    } else {
        out.pose.yaw_deg = lo.yaw_deg + (hi.yaw_deg - lo.yaw_deg) * a;
        out.pose.pitch_deg = lo.pitch_deg + (hi.pitch_deg - lo.pitch_deg) * a;
        out.pose.roll_deg = lo.roll_deg + (hi.roll_deg - lo.roll_deg) * a;
    }
    out.velocity = lo.velocity + (hi.velocity - lo.velocity) * a;
    return out;
}

} // namespace dcc

#endif // DCC_TELEMETRY_HPP
