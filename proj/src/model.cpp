#include "airship/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace airship {

void AirshipParams::validate() const {
    if (!M.allFinite() || (M - M.transpose()).cwiseAbs().maxCoeff() > 1e-9 * M.cwiseAbs().maxCoeff()) {
        throw std::invalid_argument("params.M: must be finite and symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat6> eig(M);
    if (eig.eigenvalues().minCoeff() <= 0.0) {
        throw std::invalid_argument("params.M: must be positive definite");
    }
    if ((sat.array() <= 0.0).any()) throw std::invalid_argument("params.sat: entries must be > 0");
    if (tau_act < 0.0) throw std::invalid_argument("params.tau_act: must be >= 0");
    if ((aero.linear.array() < 0.0).any() || (aero.quadratic.array() < 0.0).any()) {
        throw std::invalid_argument("params.aero: damping coefficients must be >= 0");
    }
    if (!(m > 0.0)) throw std::invalid_argument("params.m: must be > 0");
}

Mat6 mass_matrix(double m, const Vec3& c, const Mat3& inertia_cg, double added_ratio) {
    const Mat3 cx = skew(c);
    Mat6 M = Mat6::Zero();
    M.topLeftCorner<3, 3>() = m * Mat3::Identity();
    M.topRightCorner<3, 3>() = -m * cx;
    M.bottomLeftCorner<3, 3>() = m * cx;
    M.bottomRightCorner<3, 3>() = inertia_cg - m * cx * cx;
    for (int i = 0; i < 3; ++i) {
        M(i, i) += added_ratio * m;
        M(3 + i, 3 + i) += added_ratio * inertia_cg(i, i);
    }
    return M;
}

AirshipParams default_airship_params() {
    AirshipParams p;
    p.m = 50.0;
    p.m_w = 1.0;
    p.c = Vec3(0.0, 0.0, 0.2);
    // Solid ellipsoid, semi-axes 5.5 m (length) and 1.275 m (radius).
    const double a = 5.5, b = 1.275;
    const Mat3 inertia = Vec3(2.0 * b * b, a * a + b * b, a * a + b * b).asDiagonal() * (p.m / 5.0);
    p.M = mass_matrix(p.m, p.c, inertia, 0.2);
    p.aero.linear << 2.0, 6.0, 6.0, 5.0, 20.0, 20.0;
    p.aero.quadratic << 1.5, 8.0, 8.0, 2.0, 10.0, 10.0;
    p.sat << 150.0, 30.0, 35.0, 10.0, 90.0, 90.0;
    p.tau_act = 0.5;
    return p;
}

Mat3 skew(const Vec3& v) {
    Mat3 s;
    s << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
        -v.y(), v.x(), 0.0;
    return s;
}

void check_unit(const Quat& q, double tol) {
    const double n = q.norm();
    if (!(std::abs(n - 1.0) <= tol)) throw NonUnitQuaternion(n);
}

Mat3 rotation_from_quaternion(const Quat& q) {
    check_unit(q);
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    Mat3 R;  // body -> inertial
    R << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
         2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
         2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
    return R.transpose();
}

Mat4 quaternion_product_matrix(const Quat& q) {
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    Mat4 Q;
    Q << w, -x, -y, -z,
         x, w, -z, y,
         y, z, w, -x,
         z, -y, x, w;
    return Q;
}

Quat quaternion_multiply(const Quat& a, const Quat& b) { return quaternion_product_matrix(a) * b; }

Vec4 quaternion_rate(const Quat& q, const Vec3& omega) {
    check_unit(q);
    return 0.5 * quaternion_product_matrix(q) * Vec4(0.0, omega.x(), omega.y(), omega.z());
}

Quat quaternion_from_axis_angle(const Vec3& axis, double angle) {
    const Vec3 u = axis.normalized();
    const double h = 0.5 * angle;
    return Quat(std::cos(h), u.x() * std::sin(h), u.y() * std::sin(h), u.z() * std::sin(h));
}

Quat quaternion_from_euler(double roll, double pitch, double yaw) {
    const Quat qz = quaternion_from_axis_angle(Vec3::UnitZ(), yaw);
    const Quat qy = quaternion_from_axis_angle(Vec3::UnitY(), pitch);
    const Quat qx = quaternion_from_axis_angle(Vec3::UnitX(), roll);
    return quaternion_multiply(quaternion_multiply(qz, qy), qx);
}

Vec3 euler_from_quaternion(const Quat& q) {
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    const double roll = std::atan2(2 * (w * x + y * z), 1 - 2 * (x * x + y * y));
    const double pitch = std::asin(std::clamp(2 * (w * y - z * x), -1.0, 1.0));
    const double yaw = std::atan2(2 * (w * z + x * y), 1 - 2 * (y * y + z * z));
    return {roll, pitch, yaw};
}

Mat7 build_D(const Quat& q) {
    Mat7 D = Mat7::Zero();
    D.topLeftCorner<3, 3>() = rotation_from_quaternion(q).transpose();
    D.bottomRightCorner<4, 4>() = 0.5 * quaternion_product_matrix(q);
    return D;
}

Mat76 build_C() {
    Mat76 C = Mat76::Zero();
    C.topLeftCorner<3, 3>().setIdentity();
    C.bottomRightCorner<3, 3>().setIdentity();  // row 3 (quaternion scalar) stays zero
    return C;
}

Mat73 build_B() {
    Mat73 B = Mat73::Zero();
    B.topRows<3>().setIdentity();
    return B;
}

Mat76 build_T(const Quat& q) { return build_D(q) * build_C(); }

Mat7 build_Omega7(const Vec3& omega) {
    Mat7 O = Mat7::Zero();
    O.topLeftCorner<3, 3>() = skew(omega);
    Mat4 O4 = Mat4::Zero();
    O4.block<1, 3>(0, 1) = -omega.transpose();
    O4.block<3, 1>(1, 0) = omega;
    O4.bottomRightCorner<3, 3>() = -skew(omega);
    O.bottomRightCorner<4, 4>() = 0.5 * O4;
    return O;
}

Mat67 pseudo_inverse_T(const Mat76& T) {
    Eigen::JacobiSVD<Mat76> svd(T, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double tol = 1e-10 * s.maxCoeff();
    Mat67 sigma_plus = Mat67::Zero();
    for (int i = 0; i < 6; ++i) {
        if (!(s[i] > tol)) {
            throw RankDeficientT("T has rank < 6 (singular value " + std::to_string(s[i]) + ")");
        }
        sigma_plus(i, i) = 1.0 / s[i];
    }
    return svd.matrixV() * sigma_plus * svd.matrixU().transpose();
}

Vec6 aero_force(const BodyState& x, const AirshipParams& params) {
    const Vec6 v = x.vector();
    return -(params.aero.linear.array() + params.aero.quadratic.array() * v.array().abs()) * v.array();
}

Vec6 gravity_wrench(const Pose& pose, const AirshipParams& params) {
    const Vec3 g_body = rotation_from_quaternion(pose.q) * params.g;
    Vec6 w;
    w << params.m_w * g_body, params.m * params.c.cross(g_body);
    return w;
}

Vec6 coriolis_term(const BodyState& x, const AirshipParams& params) {
    const Vec6 Mx = params.M * x.vector();
    Vec6 omega6_Mx;
    omega6_Mx << x.omega.cross(Mx.head<3>()), x.omega.cross(Mx.tail<3>());
    return -params.M.llt().solve(omega6_Mx);
}

Vec6 dynamics(const BodyState& x, const Pose& pose, const Wrench& f, const AirshipParams& params) {
    const Vec6 rhs = gravity_wrench(pose, params) + aero_force(x, params) + f.vector();
    return coriolis_term(x, params) + params.M.llt().solve(rhs);
}

Vec7 pose_rate(const BodyState& x, const Pose& pose, const Vec3& v_w) {
    return build_T(pose.q) * x.vector() + build_B() * v_w;
}

Vec7 pose_accel_drift(const BodyState& x, const Pose& pose) {
    return build_D(pose.q) * build_Omega7(x.omega) * build_C() * x.vector();
}

Vec7 pose_accel(const BodyState& x, const Vec6& x_dot, const Pose& pose) {
    return build_T(pose.q) * x_dot + pose_accel_drift(x, pose);
}

}  // namespace airship
