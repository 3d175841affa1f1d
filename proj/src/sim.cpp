#include "airship/sim.hpp"

#include <cmath>
#include <numbers>

namespace airship {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr std::uint64_t kEstimateStream = 0x9E3779B97F4A7C15ULL;

using Vec13 = Eigen::Matrix<double, 13, 1>;

Vec13 pack(const StateBundle& s) {
    Vec13 y;
    y << s.x.vector(), s.pose.vector();
    return y;
}

StateBundle unpack(const Vec13& y) {
    return {BodyState::from_vector(y.head<6>()), Pose::from_vector(y.tail<7>())};
}

void check_bounded(const Vec13& y, double bound, long step) {
    if (!y.allFinite() || y.cwiseAbs().maxCoeff() > bound) {
        throw NumericalBlowup(step, "state exceeds bound " + std::to_string(bound));
    }
}

}  // namespace

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

std::string_view to_string(ActuatorMode m) { return m == ActuatorMode::Ideal ? "ideal" : "actual"; }

ActuatorMode parse_actuator_mode(std::string_view s) {
    if (s == "ideal") return ActuatorMode::Ideal;
    if (s == "actual") return ActuatorMode::Actual;
    throw std::invalid_argument("unknown mode '" + std::string(s) + "' (expected ideal or actual)");
}

NumericalBlowup::NumericalBlowup(long step, const std::string& what)
    : std::runtime_error("numerical blow-up at step " + std::to_string(step) + ": " + what), step(step) {}

void ScenarioConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("dt: must be > 0");
    if (!(t_end >= dt)) throw std::invalid_argument("t_end: must be >= dt");
    if (!(wind.turbulence_std >= 0.0)) throw std::invalid_argument("wind.turbulence_std: must be >= 0");
    if (!(wind.speed >= 0.0)) throw std::invalid_argument("wind.speed: must be >= 0");
    if (!(wind_estimate.noise_std >= 0.0)) throw std::invalid_argument("wind_estimate.noise_std: must be >= 0");
    if (!(mission.tolerance_radius >= 0.0)) throw std::invalid_argument("mission.tolerance_radius: must be >= 0");
    if (rng != kRngAlgorithm) throw std::invalid_argument("rng: only '" + std::string(kRngAlgorithm) + "' is supported");
    if (std::abs(initial_pose.q.norm() - 1.0) > 1e-9) throw std::invalid_argument("initial: quaternion must be unit");
    if (!(blowup_bound > 0.0)) throw std::invalid_argument("blowup_bound: must be > 0");
    gains.validate();
    plant.validate();
    model.validate();
}

StateBundle rk4_step(const StateBundle& s, const Wrench& f_applied, const Vec3& v_w, double dt,
                     const AirshipParams& params, double bound) {
    if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be > 0");
    auto deriv = [&](const Vec13& y) -> Vec13 {
        const BodyState x = BodyState::from_vector(y.head<6>());
        // Intermediate stages leave the unit sphere by O(dt^2); evaluate on it.
        const Pose pose{y.segment<3>(6), y.tail<4>().normalized()};
        Vec13 d;
        d << dynamics(x, pose, f_applied, params), pose_rate(x, pose, v_w);
        return d;
    };
    Vec13 y = rk4(deriv, pack(s), dt);
    check_bounded(y, bound, -1);
    y.tail<4>().normalize();
    return unpack(y);
}

Wrench actuator_stage(const Wrench& f_cmd, const Wrench& f_prev_applied, double dt, const AirshipParams& params,
                      ActuatorMode mode) {
    if (mode == ActuatorMode::Ideal) return f_cmd;
    const Vec6 clamped = f_cmd.vector().cwiseMax(-params.sat).cwiseMin(params.sat);
    const double alpha = params.tau_act > 0.0 ? std::min(1.0, dt / params.tau_act) : 1.0;
    const Vec6 prev = f_prev_applied.vector();
    return Wrench::from_vector(prev + alpha * (clamped - prev));
}

Vec3 mean_wind(const WindConfig& cfg, double t) {
    double speed = cfg.speed, incidence = cfg.incidence_deg;
    if (cfg.shift && t >= cfg.shift->time) {
        speed = cfg.shift->speed;
        incidence = cfg.shift->incidence_deg;
    }
    const double chi = incidence * kDeg;
    return Vec3(-speed * std::cos(chi), -speed * std::sin(chi), 0.0);
}

Vec3 wind_sample(const WindConfig& cfg, double t, Rng& rng) {
    Vec3 v = mean_wind(cfg, t);
    if (cfg.turbulence_std > 0.0) {
        for (int i = 0; i < 3; ++i) v[i] += cfg.turbulence_std * rng.normal();
    }
    return v;
}

Mission build_mission(const ScenarioConfig& cfg) {
    switch (cfg.mission.kind) {
        case MissionConfig::Kind::Positioning:
            return PositioningMission{cfg.mission.target, cfg.mission.tolerance_radius};
        case MissionConfig::Kind::PathTracking:
            return PathMission(cfg.mission.path);
        case MissionConfig::Kind::VelocityTracking:
            return VelocityMission(cfg.mission.v_d, cfg.initial_pose);
    }
    throw std::logic_error("unhandled mission kind");
}

TimeSeriesLog run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    const Mission mission = build_mission(cfg);
    const auto steps = static_cast<long>(std::llround(cfg.t_end / cfg.dt));

    TimeSeriesLog log;
    log.scenario = cfg.name;
    log.flavor = cfg.gains.flavor;
    log.dt = cfg.dt;
    log.seed = cfg.seed;
    log.records.reserve(static_cast<std::size_t>(steps));

    Rng turbulence(cfg.seed);
    Rng estimate_noise(cfg.seed ^ kEstimateStream);

    StateBundle s{cfg.initial_state, cfg.initial_pose};
    // The actuators start at the trim wrench of the initial state.
    Wrench f_prev = actuator_stage(wrench_for_accel(s.x, s.pose, pose_accel_drift(s.x, s.pose), cfg.model), Wrench{},
                                   cfg.dt, cfg.model, ActuatorMode::Ideal);
    if (cfg.mode == ActuatorMode::Actual) {
        f_prev = Wrench::from_vector(f_prev.vector().cwiseMax(-cfg.plant.sat).cwiseMin(cfg.plant.sat));
    }

    for (long k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        const Vec3 v_w = wind_sample(cfg.wind, t, turbulence);
        Vec3 v_w_hat = (cfg.wind_estimate.include_turbulence ? v_w : mean_wind(cfg.wind, t)) + cfg.wind_estimate.bias;
        if (cfg.wind_estimate.noise_std > 0.0) {
            for (int i = 0; i < 3; ++i) v_w_hat[i] += cfg.wind_estimate.noise_std * estimate_noise.normal();
        }
        const Vec3 wind_for_heading = mean_wind(cfg.wind, t) + cfg.wind_estimate.bias;

        LogRecord rec;
        rec.t = t;
        rec.pose = s.pose;
        rec.x = s.x;
        rec.v_w = v_w;
        rec.v_w_hat = v_w_hat;
        try {
            const Reference ref = mission_reference(mission, t, s.pose, wind_for_heading);
            const ControlOutput ctrl = compute_control(s.x, s.pose, v_w_hat, ref, cfg.gains, cfg.model);
            rec.err = ctrl.err;
            rec.accel_cmd = ctrl.accel;
            rec.f_cmd = ctrl.wrench;
            rec.f_applied = actuator_stage(ctrl.wrench, f_prev, cfg.dt, cfg.plant, cfg.mode);
            rec.accel_real = pose_accel(s.x, dynamics(s.x, s.pose, rec.f_applied, cfg.plant), s.pose);
            rec.v2 = lyapunov(ctrl.err, cfg.gains);
            rec.v2_dot = lyapunov_rate(ctrl.err, cfg.gains);
            rec.sigma_sigmadot = sigma_sigmadot(ctrl.err, cfg.gains);
            if (!rec.f_applied.vector().allFinite()) throw NumericalBlowup(k, "non-finite wrench");
            s = rk4_step(s, rec.f_applied, v_w, cfg.dt, cfg.plant, cfg.blowup_bound);
        } catch (const NumericalBlowup& e) {
            throw NumericalBlowup(k, e.what());
        } catch (const RankDeficientT& e) {
            throw NumericalBlowup(k, e.what());
        } catch (const NonUnitQuaternion& e) {
            throw NumericalBlowup(k, e.what());
        }
        f_prev = rec.f_applied;
        log.records.push_back(rec);
    }
    return log;
}

}  // namespace airship
