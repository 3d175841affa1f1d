#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace airship {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec7 = Eigen::Matrix<double, 7, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat7 = Eigen::Matrix<double, 7, 7>;
using Mat76 = Eigen::Matrix<double, 7, 6>;
using Mat67 = Eigen::Matrix<double, 6, 7>;
using Mat73 = Eigen::Matrix<double, 7, 3>;

// Quaternions are stored scalar-first, [q_w, q_x, q_y, q_z], Hamilton product.
// The quaternion rotates body-frame vectors into the inertial (NED) frame;
// S = rotation_from_quaternion(q) is its transpose (inertial -> body).
using Quat = Vec4;

inline Quat identity_quaternion() { return Quat(1.0, 0.0, 0.0, 0.0); }

/// Air-relative body velocity state x = [v_a; omega].
struct BodyState {
    Vec3 v_a = Vec3::Zero();    ///< m/s, body frame
    Vec3 omega = Vec3::Zero();  ///< rad/s, body frame

    Vec6 vector() const {
        Vec6 x;
        x << v_a, omega;
        return x;
    }
    static BodyState from_vector(const Vec6& x) { return {x.head<3>(), x.tail<3>()}; }
};

/// Inertial position (NED) and attitude quaternion, eta = [p; q].
struct Pose {
    Vec3 p = Vec3::Zero();
    Quat q = identity_quaternion();

    Vec7 vector() const {
        Vec7 eta;
        eta << p, q;
        return eta;
    }
    static Pose from_vector(const Vec7& eta) { return {eta.head<3>(), eta.tail<4>()}; }
};

/// Body-frame force/moment pair.
struct Wrench {
    Vec3 force = Vec3::Zero();
    Vec3 moment = Vec3::Zero();

    Vec6 vector() const {
        Vec6 f;
        f << force, moment;
        return f;
    }
    static Wrench from_vector(const Vec6& f) { return {f.head<3>(), f.tail<3>()}; }
};

struct NonUnitQuaternion : std::domain_error {
    explicit NonUnitQuaternion(double norm)
        : std::domain_error("quaternion norm " + std::to_string(norm) + " is not unit"), norm(norm) {}
    double norm;
};

struct RankDeficientT : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace airship
