#pragma once

#include "airship/control.hpp"

#include <variant>
#include <vector>

namespace airship {

struct OutOfScheduleTime : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// Level attitude with the given yaw (rad, clockwise from North).
Quat heading_quaternion(double yaw);

/// Hover over a target inside a horizontal tolerance circle.  Inside the circle the horizontal
/// reference follows the vehicle (radial error is zero); outside it is the nearest circle point.
/// The attitude reference is level, facing into the wind estimate; with no horizontal wind the
/// current heading is kept.  The reference quaternion is taken in the hemisphere of the current
/// attitude.
Reference positioning_reference(const Vec3& target_p, double tolerance_radius, const Pose& current,
                                const Vec3& wind_estimate);

/// Parameters of the take-off / ellipse / landing mission.  Positions in NED, altitude = -D.
struct PathMissionParams {
    Vec3 launch = Vec3::Zero();
    double semi_north = 120.0;   ///< m
    double semi_east = 60.0;     ///< m
    double altitude = 50.0;      ///< m above the launch point
    double climb_rate = 1.0;     ///< m/s, take-off and landing
    double ground_speed = 5.0;   ///< m/s along the ellipse
    int laps = 2;
    double shift_start = 150.0;  ///< s
    double shift_duration = 50.0;
    double shift_height = 15.0;  ///< m, peak of the altitude excursion
};

/// Vertical take-off, constant-speed laps of an ellipse through the launch point with a
/// raised-cosine altitude excursion, then vertical landing.  Yaw follows the path tangent.
class PathMission {
public:
    explicit PathMission(const PathMissionParams& params);

    Reference reference(double t) const;

    double takeoff_end() const { return takeoff_end_; }
    double cruise_end() const { return cruise_end_; }
    double end_time() const { return end_time_; }
    double lap_length() const { return lap_length_; }
    /// Segment joints where the reference rate is discontinuous.
    std::vector<double> joints() const;
    const PathMissionParams& params() const { return p_; }

private:
    double arc_length(double theta) const;   // 0 <= theta <= 2 pi
    double theta_at(double s) const;         // inverse on one lap
    double speed_on_ellipse(double theta) const;

    PathMissionParams p_;
    std::vector<double> arc_table_;  // cumulative arc at uniform theta nodes
    double lap_length_ = 0.0;
    double takeoff_end_ = 0.0;
    double cruise_end_ = 0.0;
    double end_time_ = 0.0;
};

/// Rectilinear flight at constant ground velocity v_d (expressed in the frame of the initial
/// attitude): p_d(t) = p_0 + S_d^T v_d t, q_d = q_0.
class VelocityMission {
public:
    VelocityMission(const Vec3& v_d, const Pose& initial_pose);
    Reference reference(double t) const;

private:
    Vec7 eta0_;
    Vec7 eta_dot_;
};

struct PositioningMission {
    Vec3 target = Vec3::Zero();
    double tolerance_radius = 0.0;
};

using Mission = std::variant<PositioningMission, PathMission, VelocityMission>;

/// Reference for any mission kind at time t.
Reference mission_reference(const Mission& mission, double t, const Pose& current, const Vec3& wind_estimate);

}  // namespace airship
