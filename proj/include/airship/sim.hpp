#pragma once

#include "airship/control.hpp"
#include "airship/mission.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace airship {

/// Identifier written into configs and log metadata.  Uniforms take the top 53 bits of a
/// std::mt19937_64 draw; normals come from the Box-Muller transform, consumed in pairs.
inline constexpr const char* kRngAlgorithm = "mt19937_64/box-muller";

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform();  ///< [0, 1)
    double normal();   ///< N(0, 1)

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

enum class ActuatorMode { Ideal, Actual };

std::string_view to_string(ActuatorMode m);
ActuatorMode parse_actuator_mode(std::string_view s);

struct WindShift {
    double time = 0.0;
    double speed = 0.0;
    double incidence_deg = 0.0;
};

/// Incidence is the direction the wind blows from, clockwise from North: incidence 90 deg and
/// speed 2 give v_w = (0, -2, 0).
struct WindConfig {
    double speed = 0.0;
    double incidence_deg = 0.0;
    double turbulence_std = 0.0;
    std::optional<WindShift> shift;
};

/// v_w_hat = v_w + bias + N(0, noise_std^2) per axis.  With include_turbulence false the
/// estimate starts from the mean wind, modelling an estimator too slow to follow per-step gusts.
struct WindEstimateConfig {
    Vec3 bias = Vec3::Zero();
    double noise_std = 0.0;
    bool include_turbulence = true;
};

struct MissionConfig {
    enum class Kind { Positioning, PathTracking, VelocityTracking } kind = Kind::Positioning;
    Vec3 target = Vec3::Zero();
    double tolerance_radius = 0.0;
    PathMissionParams path;
    Vec3 v_d = Vec3::Zero();
};

struct ScenarioConfig {
    std::string name = "scenario";
    double dt = 0.01;
    double t_end = 1.0;
    ActuatorMode mode = ActuatorMode::Ideal;
    WindConfig wind;
    WindEstimateConfig wind_estimate;
    std::uint64_t seed = 0;
    std::string rng = kRngAlgorithm;
    Pose initial_pose;
    BodyState initial_state;
    MissionConfig mission;
    GainSet gains;
    AirshipParams plant;  ///< simulated vehicle
    AirshipParams model;  ///< what the controller believes
    double blowup_bound = 1e6;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct NumericalBlowup : std::runtime_error {
    NumericalBlowup(long step, const std::string& what);
    long step;
};

/// Joint (x, eta) state.
struct StateBundle {
    BodyState x;
    Pose pose;
};

/// One classical RK4 step of y' = f(y).
template <typename Vec, typename F>
Vec rk4(const F& f, const Vec& y, double dt) {
    const Vec k1 = f(y);
    const Vec k2 = f(Vec(y + 0.5 * dt * k1));
    const Vec k3 = f(Vec(y + 0.5 * dt * k2));
    const Vec k4 = f(Vec(y + dt * k3));
    return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Integrates the airship over dt with wrench and wind held constant, then renormalizes the
/// quaternion.  Throws NumericalBlowup (step = -1) if any entry exceeds `bound` or is not finite.
StateBundle rk4_step(const StateBundle& s, const Wrench& f_applied, const Vec3& v_w, double dt,
                     const AirshipParams& params, double bound = 1e6);

/// Ideal: pass-through.  Actual: per-axis clamp to params.sat, then the first-order lag
/// f+ = f_prev + (dt / tau) (f_clamped - f_prev).
Wrench actuator_stage(const Wrench& f_cmd, const Wrench& f_prev_applied, double dt, const AirshipParams& params,
                      ActuatorMode mode);

/// Mean inertial wind at time t (after any configured shift).
Vec3 mean_wind(const WindConfig& cfg, double t);

/// Mean wind plus zero-mean Gaussian turbulence (per axis, held over the step).
Vec3 wind_sample(const WindConfig& cfg, double t, Rng& rng);

struct LogRecord {
    double t = 0.0;
    Pose pose;
    BodyState x;
    Vec3 v_w = Vec3::Zero();
    Vec3 v_w_hat = Vec3::Zero();
    ErrorState err;
    Wrench f_cmd;
    Wrench f_applied;
    Vec7 accel_cmd = Vec7::Zero();
    Vec7 accel_real = Vec7::Zero();  ///< pose_accel under the applied wrench, plant parameters
    double v2 = 0.0;
    double v2_dot = 0.0;
    double sigma_sigmadot = 0.0;
};

struct TimeSeriesLog {
    std::string scenario;
    Flavor flavor = Flavor::BSMC;
    double dt = 0.0;
    std::uint64_t seed = 0;
    std::vector<LogRecord> records;
};

/// Closed loop, one record per step taken before the step is integrated.  Bitwise deterministic
/// for a fixed config.  Throws NumericalBlowup carrying the offending step index.
TimeSeriesLog run_scenario(const ScenarioConfig& cfg);

Mission build_mission(const ScenarioConfig& cfg);

}  // namespace airship
