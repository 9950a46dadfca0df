#include "slotkit/geometry.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <optional>

namespace slotkit {

RigidTransform RigidTransform::compose(const RigidTransform& rhs) const {
    RigidTransform out;
    out.rotation = rotation * rhs.rotation;
    out.translation = rotation * rhs.translation + translation;
    if (out.orthonormality_drift() > kDriftTol) out = out.orthonormalized();
    return out;
}

double RigidTransform::orthonormality_drift() const {
    const Mat3 gram = rotation.transpose() * rotation;
    return (gram - Mat3::Identity()).cwiseAbs().maxCoeff();
}

bool RigidTransform::is_orthonormal(double tol) const {
    return orthonormality_drift() <= tol && std::abs(rotation.determinant() - 1.0) <= tol;
}

RigidTransform RigidTransform::orthonormalized() const {
    Eigen::JacobiSVD<Mat3> svd(rotation, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 r = svd.matrixU() * svd.matrixV().transpose();
    if (r.determinant() < 0) {
        Mat3 flip = Mat3::Identity();
        flip(2, 2) = -1;
        r = svd.matrixU() * flip * svd.matrixV().transpose();
    }
    return {r, translation};
}

std::string to_string(CameraId id) {
    return id == CameraId::Head ? "head" : "wrist";
}

CameraId camera_id_from_string(const std::string& s) {
    if (s == "head") return CameraId::Head;
    if (s == "wrist") return CameraId::Wrist;
    throw Error("unknown camera id '" + s + "'");
}

bool pixel_in_bounds(PixelPoint pix, const Intrinsics& K) {
    return pix.u >= 0 && pix.u < K.width && pix.v >= 0 && pix.v < K.height;
}

CameraPoint back_project(PixelPoint pix, double depth, const Intrinsics& K, CameraId frame) {
    if (!(depth > 0)) {
        throw NonPositiveDepth("back_project: depth must be > 0, got " + std::to_string(depth));
    }
    if (!pixel_in_bounds(pix, K)) {
        throw OutOfBounds("back_project: pixel (" + std::to_string(pix.u) + ", " +
                          std::to_string(pix.v) + ") outside image " + std::to_string(K.width) +
                          "x" + std::to_string(K.height));
    }
    CameraPoint out;
    out.p = Vec3(depth * (pix.u - K.cx) / K.fx, depth * (pix.v - K.cy) / K.fy, depth);
    out.frame = frame;
    return out;
}

WorldPoint to_world(const CameraPoint& p, const CameraModel& cam) {
    if (p.frame != cam.id) {
        throw FrameMismatch("to_world: point tagged '" + to_string(p.frame) +
                            "' but camera is '" + to_string(cam.id) + "'");
    }
    return {cam.world_pose.apply(p.p)};
}

RigidTransform wrist_pose(const RigidTransform& ee_pose, const RigidTransform& hand_eye) {
    return ee_pose.compose(hand_eye);
}

Projection project(const WorldPoint& p, const CameraModel& cam) {
    const Vec3 pc = cam.world_pose.inverse().apply(p.p);
    if (!(pc.z() > 0)) {
        throw BehindCamera("project: point has camera-frame Z = " + std::to_string(pc.z()));
    }
    const Intrinsics& K = cam.intrinsics;
    Projection out;
    out.pixel.u = K.fx * pc.x() / pc.z() + K.cx;
    out.pixel.v = K.fy * pc.y() / pc.z() + K.cy;
    out.depth = pc.z();
    return out;
}

std::optional<Projection> try_project(const WorldPoint& p, const CameraModel& cam) {
    const Vec3 pc = cam.world_pose.inverse().apply(p.p);
    if (!(pc.z() > 0)) return std::nullopt;
    const Intrinsics& K = cam.intrinsics;
    Projection out;
    out.pixel.u = K.fx * pc.x() / pc.z() + K.cx;
    out.pixel.v = K.fy * pc.y() / pc.z() + K.cy;
    out.depth = pc.z();
    return out;
}

double pixel_radius(double r_meters, double z_cam, double fx) {
    if (!(z_cam > 0)) {
        throw NonPositiveDepth("pixel_radius: Zc must be > 0, got " + std::to_string(z_cam));
    }
    if (r_meters < 0) throw Error("pixel_radius: radius must be >= 0");
    return fx * r_meters / z_cam;
}

}  // namespace slotkit
