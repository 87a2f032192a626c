#ifndef DCC_GEOMETRY_HPP
#define DCC_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <string>

#include "dcc/error.hpp"

namespace dcc {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

struct Mat3 {
    // row-major
    std::array<std::array<double, 3>, 3> m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

    static Mat3 identity() { return Mat3{}; }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0;
                for (int k = 0; k < 3; ++k) s += m[i][k] * o.m[k][j];
                r.m[i][j] = s;
            }
        return r;
    }

    Vec3 operator*(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }

    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
        return r;
    }
};

inline Mat3 rot_x(double rad) {
    const double c = std::cos(rad), s = std::sin(rad);
    Mat3 r;
    r.m = {{{1, 0, 0}, {0, c, -s}, {0, s, c}}};
    return r;
}

inline Mat3 rot_y(double rad) {
    const double c = std::cos(rad), s = std::sin(rad);
    Mat3 r;
    r.m = {{{c, 0, s}, {0, 1, 0}, {-s, 0, c}}};
    return r;
}

inline Mat3 rot_z(double rad) {
    const double c = std::cos(rad), s = std::sin(rad);
    Mat3 r;
    r.m = {{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}};
    return r;
}

// Combined attitude rotation Rz(yaw)*Ry(pitch)*Rx(roll), angles in degrees.
inline Mat3 rotation_matrix(double yaw_deg, double pitch_deg, double roll_deg) {
    if (!std::isfinite(yaw_deg) || !std::isfinite(pitch_deg) || !std::isfinite(roll_deg))
        throw InvalidArgument("rotation_matrix: non-finite angle");
    return rot_z(deg_to_rad(yaw_deg)) * rot_y(deg_to_rad(pitch_deg)) * rot_x(deg_to_rad(roll_deg));
}

// Pinhole intrinsics. focal_* in pixels, valid at (frame_length x frame_width);
// the principal point is the frame center.
struct CameraIntrinsics {
    double focal_x = 1750.0;
    double focal_y = 1750.0;
    double frame_length = 1280.0; // horizontal pixels (L)
    double frame_width = 720.0;   // vertical pixels (W)

    void validate() const {
        if (!(focal_x > 0) || !(focal_y > 0) || !(frame_length > 0) || !(frame_width > 0))
            throw InvalidArgument("CameraIntrinsics: all fields must be positive");
    }

    // Same lens expressed at another frame size (focal scales linearly).
    CameraIntrinsics scaled_to(double length, double width) const {
        CameraIntrinsics k;
        k.focal_x = focal_x * length / frame_length;
        k.focal_y = focal_y * width / frame_width;
        k.frame_length = length;
        k.frame_width = width;
        return k;
    }
};

// Camera pose: world position, attitude in degrees, and the displacement of
// the camera origin from the world origin in use (defaults to position).
struct Pose {
    Vec3 position{};
    double yaw_deg = 0;
    double pitch_deg = 90; // 90 = nadir, 0 = horizontal
    double roll_deg = 0;
    Vec3 displacement{};

    static Pose at(Vec3 pos, double yaw, double pitch, double roll) {
        Pose p;
        p.position = pos;
        p.yaw_deg = yaw;
        p.pitch_deg = pitch;
        p.roll_deg = roll;
        p.displacement = pos;
        return p;
    }
};

struct FramePoint {
    double x = 0;
    double y = 0;
};

// Integer frame-plane offset between two consecutive frames, in pixels of the
// frame the intrinsics describe. Positive d_w: the drone moved toward +X of
// the frame, so frame content shifts left by d_w.
struct GlobalMotion {
    int d_w = 0;
    int d_l = 0;

    GlobalMotion operator+(const GlobalMotion& o) const { return {d_w + o.d_w, d_l + o.d_l}; }
    GlobalMotion operator-() const { return {-d_w, -d_l}; }
    bool operator==(const GlobalMotion& o) const = default;
};

// World axes: X east, Y north, Z up. Camera axes: X right, Y image-down,
// Z optical axis. At yaw=0/pitch=90/roll=0 (nadir): world +X -> frame +X,
// world +Y -> frame -Y (north appears toward the top of the frame).
inline Mat3 world_to_camera_rotation(const Pose& pose) {
    return rot_z(-deg_to_rad(pose.roll_deg)) *
           rot_x(deg_to_rad(90.0 + pose.pitch_deg)) *
           rot_z(-deg_to_rad(pose.yaw_deg));
}

inline Vec3 world_to_camera(const Vec3& p_world, const Pose& pose) {
    return world_to_camera_rotation(pose) * (p_world - pose.position);
}

inline FramePoint project_world_to_frame(const Vec3& p_world, const Pose& pose,
                                         const CameraIntrinsics& k) {
    const Vec3 pc = world_to_camera(p_world, pose);
    if (!(pc.z > 1e-12)) throw BehindCamera("point at or behind the camera plane");
    return {k.focal_x * pc.x / pc.z + k.frame_length / 2.0,
            k.focal_y * pc.y / pc.z + k.frame_width / 2.0};
}

// Intersect the ray through frame point (xf, yf) with the ground plane z=0.
// Throws OutOfRange if the ray does not hit the ground in front of the camera.
inline Vec3 unproject_to_ground(const FramePoint& fp, const Pose& pose,
                                const CameraIntrinsics& k) {
    const Vec3 dir_cam{(fp.x - k.frame_length / 2.0) / k.focal_x,
                       (fp.y - k.frame_width / 2.0) / k.focal_y, 1.0};
    const Vec3 dir = world_to_camera_rotation(pose).transposed() * dir_cam;
    if (!(dir.z < -1e-9)) throw OutOfRange("ray does not descend to the ground plane");
    const double t = -pose.position.z / dir.z;
    if (!(t > 0)) throw OutOfRange("ground intersection behind camera");
    return pose.position + dir * t;
}

// Projected minor-axis extent, in pixels, of a ground rectangle of physical
// size (length_m x width_m) centered at the world origin of `pose` (i.e. the
// pose's position/displacement are relative to the object location). The short
// side is laid across the view and the long side along the depth direction,
// which is the smaller, conservative reading of the object.
inline double estimate_object_pixel_extent(double length_m, double width_m,
                                           const Pose& slice_top_center_pose,
                                           const CameraIntrinsics& k) {
    const Pose& pose = slice_top_center_pose;
    const double a = length_m / 2.0, b = width_m / 2.0;
    // Ground directions that map to frame X / frame Y at yaw.
    const double yaw = deg_to_rad(pose.yaw_deg);
    const Vec3 u{std::cos(yaw), std::sin(yaw), 0};  // across the view
    const Vec3 v{-std::sin(yaw), std::cos(yaw), 0}; // along the depth direction
    const Vec3 c00 = u * -b + v * -a, c10 = u * b + v * -a;
    const Vec3 c01 = u * -b + v * a, c11 = u * b + v * a;
    const FramePoint p00 = project_world_to_frame(c00, pose, k);
    const FramePoint p10 = project_world_to_frame(c10, pose, k);
    const FramePoint p01 = project_world_to_frame(c01, pose, k);
    const FramePoint p11 = project_world_to_frame(c11, pose, k);
    auto dist = [](const FramePoint& p, const FramePoint& q) {
        return std::hypot(p.x - q.x, p.y - q.y);
    };
    const double across = (dist(p00, p10) + dist(p01, p11)) / 2.0; // width_m sides
    const double along = (dist(p00, p01) + dist(p10, p11)) / 2.0;  // length_m sides
    return std::min(across, along);
}

enum class MotionStatus {
    ok,
    attitude_mismatch, // caller falls back to zero offset
    no_overlap,        // caller emits an I-frame
};

struct GlobalMotionResult {
    MotionStatus status = MotionStatus::ok;
    GlobalMotion offset{};
};

// Rounds to nearest integer, ties away from zero.
inline int round_ties_away(double v) { return static_cast<int>(std::llround(v)); }

// Frame-plane offset induced by the drone's displacement between two poses,
// assuming pure translation (shared attitude). The depth used is the distance
// along the optical axis to the ground plane.
inline GlobalMotionResult global_motion_offset(const Pose& pose_i, const Pose& pose_next,
                                               const CameraIntrinsics& k,
                                               double attitude_tol_deg = 0.5) {
    auto ang = [](double a, double b) {
        double d = std::fmod(std::fabs(a - b), 360.0);
        return d > 180.0 ? 360.0 - d : d;
    };
    if (ang(pose_i.yaw_deg, pose_next.yaw_deg) > attitude_tol_deg ||
        ang(pose_i.pitch_deg, pose_next.pitch_deg) > attitude_tol_deg ||
        ang(pose_i.roll_deg, pose_next.roll_deg) > attitude_tol_deg)
        return {MotionStatus::attitude_mismatch, {}};

    const Mat3 m = world_to_camera_rotation(pose_i);
    // Depth of the ground point on the optical axis.
    const Vec3 axis_world = m.transposed() * Vec3{0, 0, 1};
    if (!(axis_world.z < -1e-9) || !(pose_i.position.z > 0))
        return {MotionStatus::attitude_mismatch, {}};
    const double depth = -pose_i.position.z / axis_world.z;

    const Vec3 dc = m * (pose_next.position - pose_i.position);
    const double dw = k.focal_x * dc.x / depth;
    const double dl = k.focal_y * dc.y / depth;
    GlobalMotion gm{round_ties_away(dw), round_ties_away(dl)};
    if (std::abs(gm.d_w) >= k.frame_length || std::abs(gm.d_l) >= k.frame_width)
        return {MotionStatus::no_overlap, gm};
    return {MotionStatus::ok, gm};
}

} // namespace dcc

#endif // DCC_GEOMETRY_HPP
