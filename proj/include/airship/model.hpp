#pragma once

/**
 * Kino-dynamic model of a rigid airship with added mass.
 *
 * Dynamics in the body frame, written for the air-relative velocity x = [v_a; omega]:
 *
 *   M x' = -Omega6 M x + E_g S g + F_a1(x) + f
 *   eta' = T x + B v_w
 *   eta''= T x' + D Omega7 C x
 *
 * with T = D C, D = diag(S^T, Q/2), C = [I3 0; 0 0; 0 I3] (scalar-first quaternion),
 * B = [I3; 0] and E_g = [m_w I3; m [c]x].  The wind v_w is constant in the inertial frame.
 */

#include "airship/types.hpp"

namespace airship {

/// Diagonal linear-plus-quadratic damping, F_a1 = -(lin + quad .* |x|) .* x.
struct Fa1Coefficients {
    Vec6 linear = Vec6::Zero();
    Vec6 quadratic = Vec6::Zero();
};

struct AirshipParams {
    Mat6 M = Mat6::Identity();
    Vec3 c = Vec3::Zero();       ///< CG offset from the buoyancy centre, body frame, m
    double m = 1.0;              ///< kg
    double m_w = 0.0;            ///< weight minus buoyancy, kg
    Vec3 g = Vec3(0.0, 0.0, 9.81);
    Fa1Coefficients aero;
    Vec6 sat = Vec6::Constant(1e9);
    double tau_act = 0.0;

    /// Throws std::invalid_argument naming the broken invariant.
    void validate() const;
};

/// Stand-in parameters for an 11 m x 2.55 m hull (solid-ellipsoid inertia, 20% added mass).
AirshipParams default_airship_params();

/// Builds M from rigid mass, CG offset and inertia about the CG, with added-mass ratio on the
/// diagonal.  Off-diagonal blocks carry the CG coupling m [c]x.
Mat6 mass_matrix(double m, const Vec3& c, const Mat3& inertia_cg, double added_ratio);

Mat3 skew(const Vec3& v);

/// Throws NonUnitQuaternion when | |q| - 1 | > tol.
void check_unit(const Quat& q, double tol = 1e-6);

/// S, mapping inertial vectors into the body frame.
Mat3 rotation_from_quaternion(const Quat& q);

/// Left-multiplication matrix, Q(q) p = q (x) p.
Mat4 quaternion_product_matrix(const Quat& q);

/// q' = 1/2 Q(q) [0; omega].
Vec4 quaternion_rate(const Quat& q, const Vec3& omega);

Quat quaternion_from_euler(double roll, double pitch, double yaw);
Quat quaternion_from_axis_angle(const Vec3& axis, double angle);
Quat quaternion_multiply(const Quat& a, const Quat& b);
Vec3 euler_from_quaternion(const Quat& q);

Mat7 build_D(const Quat& q);
Mat76 build_C();
Mat73 build_B();
Mat76 build_T(const Quat& q);

/// Omega7 = diag(Omega3, Omega4 / 2), Omega4 being the right-multiplication matrix of [0; omega].
Mat7 build_Omega7(const Vec3& omega);

/// Moore-Penrose pseudo-inverse of T via SVD; throws RankDeficientT when rank < 6 at
/// singular-value tolerance 1e-10 * sigma_max.
Mat67 pseudo_inverse_T(const Mat76& T);

Vec6 aero_force(const BodyState& x, const AirshipParams& params);

/// E_g S g: net weight force and CG moment in the body frame.
Vec6 gravity_wrench(const Pose& pose, const AirshipParams& params);

/// K x = -M^-1 Omega6 M x.
Vec6 coriolis_term(const BodyState& x, const AirshipParams& params);

Vec6 dynamics(const BodyState& x, const Pose& pose, const Wrench& f, const AirshipParams& params);

Vec7 pose_rate(const BodyState& x, const Pose& pose, const Vec3& v_w);

/// D Omega7 C x, the part of eta'' that does not depend on x'.
Vec7 pose_accel_drift(const BodyState& x, const Pose& pose);

Vec7 pose_accel(const BodyState& x, const Vec6& x_dot, const Pose& pose);

}  // namespace airship
