#include "airship/mission.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace airship {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kArcNodes = 2048;

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 8> kGlX = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                        -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                        0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGlW = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                        0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                        0.2223810344533745, 0.1012285362903763};

double yaw_of(const Quat& q) { return euler_from_quaternion(q)[2]; }

}  // namespace

Quat heading_quaternion(double yaw) { return Quat(std::cos(0.5 * yaw), 0.0, 0.0, std::sin(0.5 * yaw)); }

Reference positioning_reference(const Vec3& target_p, double tolerance_radius, const Pose& current,
                                const Vec3& wind_estimate) {
    if (!(tolerance_radius >= 0.0)) throw std::invalid_argument("tolerance_radius must be >= 0");
    Reference ref;
    Vec3 p_d = target_p;
    const Eigen::Vector2d offset = current.p.head<2>() - target_p.head<2>();
    const double dist = offset.norm();
    if (dist <= tolerance_radius) {
        p_d.head<2>() = current.p.head<2>();
    } else {
        p_d.head<2>() = target_p.head<2>() + tolerance_radius * offset / dist;
    }

    const Eigen::Vector2d w = wind_estimate.head<2>();
    // Facing the direction the wind blows from.
    const double yaw = w.norm() > 1e-9 ? std::atan2(-w.y(), -w.x()) : yaw_of(current.q);
    Quat q_d = heading_quaternion(yaw);
    if (q_d.dot(current.q) < 0.0) q_d = -q_d;

    ref.eta_d << p_d, q_d;
    ref.eta_d_dot.setZero();
    return ref;
}

PathMission::PathMission(const PathMissionParams& params) : p_(params) {
    if (!(p_.semi_north > 0.0 && p_.semi_east > 0.0)) throw std::invalid_argument("path: semi-axes must be > 0");
    if (!(p_.climb_rate > 0.0 && p_.ground_speed > 0.0)) throw std::invalid_argument("path: speeds must be > 0");
    if (p_.laps < 1) throw std::invalid_argument("path: laps must be >= 1");
    if (!(p_.altitude > 0.0)) throw std::invalid_argument("path: altitude must be > 0");

    arc_table_.resize(kArcNodes + 1);
    arc_table_[0] = 0.0;
    const double h = kTwoPi / kArcNodes;
    for (int i = 0; i < kArcNodes; ++i) {
        double seg = 0.0;
        const double mid = (i + 0.5) * h;
        for (std::size_t j = 0; j < kGlX.size(); ++j) seg += kGlW[j] * speed_on_ellipse(mid + 0.5 * h * kGlX[j]);
        arc_table_[i + 1] = arc_table_[i] + 0.5 * h * seg;
    }
    lap_length_ = arc_table_.back();
    takeoff_end_ = p_.altitude / p_.climb_rate;
    cruise_end_ = takeoff_end_ + p_.laps * lap_length_ / p_.ground_speed;
    end_time_ = cruise_end_ + p_.altitude / p_.climb_rate;
    if (p_.shift_duration > 0.0 &&
        (p_.shift_start < takeoff_end_ || p_.shift_start + p_.shift_duration > cruise_end_)) {
        throw std::invalid_argument("path: altitude excursion must lie within the cruise segment");
    }
}

double PathMission::speed_on_ellipse(double theta) const {
    return std::hypot(p_.semi_north * std::cos(theta), p_.semi_east * std::sin(theta));
}

double PathMission::arc_length(double theta) const {
    const double h = kTwoPi / kArcNodes;
    const int i = std::clamp(static_cast<int>(theta / h), 0, kArcNodes - 1);
    const double a = i * h;
    const double half = 0.5 * (theta - a);
    double seg = 0.0;
    for (std::size_t j = 0; j < kGlX.size(); ++j) seg += kGlW[j] * speed_on_ellipse(a + half + half * kGlX[j]);
    return arc_table_[i] + half * seg;
}

double PathMission::theta_at(double s) const {
    const auto it = std::upper_bound(arc_table_.begin(), arc_table_.end(), s);
    const auto i = std::clamp<long>(static_cast<long>(it - arc_table_.begin()) - 1, 0, kArcNodes - 1);
    const double h = kTwoPi / kArcNodes;
    double theta = (static_cast<double>(i) + 0.5) * h;
    for (int iter = 0; iter < 20; ++iter) {
        const double step = (arc_length(theta) - s) / speed_on_ellipse(theta);
        theta -= step;
        if (std::abs(step) < 1e-15) break;
    }
    return theta;
}

std::vector<double> PathMission::joints() const {
    std::vector<double> j = {0.0, takeoff_end_, cruise_end_, end_time_};
    if (p_.shift_duration > 0.0) {
        j.push_back(p_.shift_start);
        j.push_back(p_.shift_start + p_.shift_duration);
    }
    std::sort(j.begin(), j.end());
    return j;
}

Reference PathMission::reference(double t) const {
    if (t < 0.0 || t > end_time_) {
        throw OutOfScheduleTime("path reference requested at t = " + std::to_string(t) + " outside [0, " +
                                std::to_string(end_time_) + "]");
    }
    const double a = p_.semi_north, b = p_.semi_east;
    Vec3 p = p_.launch, p_dot = Vec3::Zero();
    double yaw = 0.0, yaw_rate = 0.0;

    if (t <= takeoff_end_) {
        p.z() -= p_.climb_rate * t;
        p_dot.z() = -p_.climb_rate;
    } else if (t <= cruise_end_) {
        const double s_total = p_.ground_speed * (t - takeoff_end_);
        const double lap = std::min(std::floor(s_total / lap_length_), static_cast<double>(p_.laps - 1));
        const double theta = theta_at(s_total - lap * lap_length_);
        const double theta_dot = p_.ground_speed / speed_on_ellipse(theta);

        p.x() += a * std::sin(theta);
        p.y() += b * (1.0 - std::cos(theta));
        p_dot.x() = a * std::cos(theta) * theta_dot;
        p_dot.y() = b * std::sin(theta) * theta_dot;

        double h = p_.altitude, h_dot = 0.0;
        const double tau = t - p_.shift_start;
        if (p_.shift_duration > 0.0 && tau > 0.0 && tau < p_.shift_duration) {
            const double w = kTwoPi / p_.shift_duration;
            h += 0.5 * p_.shift_height * (1.0 - std::cos(w * tau));
            h_dot = 0.5 * p_.shift_height * w * std::sin(w * tau);
        }
        p.z() -= h;
        p_dot.z() = -h_dot;

        const double psi = std::atan2(b * std::sin(theta), a * std::cos(theta));
        yaw = lap * kTwoPi + theta + std::remainder(psi - theta, kTwoPi);
        const double denom = a * a * std::cos(theta) * std::cos(theta) + b * b * std::sin(theta) * std::sin(theta);
        yaw_rate = a * b / denom * theta_dot;
    } else {
        p.z() -= p_.altitude - p_.climb_rate * (t - cruise_end_);
        p_dot.z() = p_.climb_rate;
        yaw = p_.laps * kTwoPi;
    }

    Reference ref;
    ref.eta_d << p, heading_quaternion(yaw);
    ref.eta_d_dot << p_dot, 0.5 * yaw_rate * Vec4(-std::sin(0.5 * yaw), 0.0, 0.0, std::cos(0.5 * yaw));
    return ref;
}

VelocityMission::VelocityMission(const Vec3& v_d, const Pose& initial_pose) {
    if (!v_d.allFinite()) throw std::invalid_argument("v_d must be finite");
    const Quat q0 = initial_pose.q.normalized();
    eta0_ << initial_pose.p, q0;
    eta_dot_.setZero();
    eta_dot_.head<3>() = rotation_from_quaternion(q0).transpose() * v_d;
}

Reference VelocityMission::reference(double t) const { return {eta0_ + eta_dot_ * t, eta_dot_}; }

Reference mission_reference(const Mission& mission, double t, const Pose& current, const Vec3& wind_estimate) {
    return std::visit(
        [&](const auto& m) -> Reference {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, PositioningMission>) {
                return positioning_reference(m.target, m.tolerance_radius, current, wind_estimate);
            } else {
                return m.reference(t);
            }
        },
        mission);
}

}  // namespace airship
