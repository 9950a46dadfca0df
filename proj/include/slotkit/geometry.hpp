#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "slotkit/errors.hpp"

namespace slotkit {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Rigid body transform: x_out = rotation * x_in + translation.
// rotation must stay orthonormal with det +1; compose() re-projects onto
// the rotation manifold when accumulated drift exceeds kDriftTol.
struct RigidTransform {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    static constexpr double kDriftTol = 1e-9;

    static RigidTransform identity() { return {}; }

    static RigidTransform from_parts(const Mat3& r, const Vec3& t) { return {r, t}; }

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

    RigidTransform compose(const RigidTransform& rhs) const;

    RigidTransform inverse() const {
        RigidTransform out;
        out.rotation = rotation.transpose();
        out.translation = -(out.rotation * translation);
        return out;
    }

    // Max-norm of R^T R - I; 0 for a perfect rotation.
    double orthonormality_drift() const;

    bool is_orthonormal(double tol = kDriftTol) const;

    // Nearest rotation in the Frobenius sense (polar projection via SVD).
    RigidTransform orthonormalized() const;
};

enum class CameraId { Head, Wrist };

std::string to_string(CameraId id);
CameraId camera_id_from_string(const std::string& s);

// Pinhole intrinsics. fx, fy, cx, cy in pixels; width/height in pixels.
struct Intrinsics {
    double fx = 0, fy = 0, cx = 0, cy = 0;
    int width = 0, height = 0;

    bool valid() const {
        return fx > 0 && fy > 0 && width > 0 && height > 0 && cx >= 0 && cx < width &&
               cy >= 0 && cy < height;
    }
};

// One calibrated camera: intrinsics plus camera-to-world pose.
struct CameraModel {
    Intrinsics intrinsics;
    RigidTransform world_pose;  // camera frame -> world frame
    CameraId id = CameraId::Head;
};

// Continuous image coordinates. Pixel (ix, iy) of the discrete grid covers
// [ix, ix+1) x [iy, iy+1) with its sampling center at (ix+0.5, iy+0.5).
struct PixelPoint {
    double u = 0, v = 0;
};

struct WorldPoint {
    Vec3 p = Vec3::Zero();
};

struct CameraPoint {
    Vec3 p = Vec3::Zero();
    CameraId frame = CameraId::Head;
};

struct Projection {
    PixelPoint pixel;
    double depth = 0;  // Z in the camera frame, meters; reusable for radius scaling
};

// Lift a pixel with known depth to the camera frame: depth * K^-1 [u v 1]^T.
// Throws NonPositiveDepth for depth <= 0 and OutOfBounds for pixels outside
// [0,width) x [0,height).
CameraPoint back_project(PixelPoint pix, double depth, const Intrinsics& K,
                         CameraId frame = CameraId::Head);

// Camera frame -> world frame through the camera's world pose. Throws
// FrameMismatch when the point is tagged with a different camera.
WorldPoint to_world(const CameraPoint& p, const CameraModel& cam);

// End-effector pose composed with the hand-eye calibration gives the wrist
// camera's world pose.
RigidTransform wrist_pose(const RigidTransform& ee_pose, const RigidTransform& hand_eye);

// World point -> pixel, with the camera-frame depth returned alongside.
// Throws BehindCamera when the point maps to Z <= 0. Does not bounds-check
// the resulting pixel; visibility is the caller's decision.
Projection project(const WorldPoint& p, const CameraModel& cam);

// Non-throwing variant for overlay code that drops behind-camera views.
std::optional<Projection> try_project(const WorldPoint& p, const CameraModel& cam);

// Perspective scaling of a metric sphere radius to pixels: fx * r / Zc.
double pixel_radius(double r_meters, double z_cam, double fx);

bool pixel_in_bounds(PixelPoint pix, const Intrinsics& K);

}  // namespace slotkit
