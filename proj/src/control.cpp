#include "airship/control.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace airship {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

}  // namespace

std::string_view to_string(Flavor f) {
    switch (f) {
        case Flavor::BS: return "bs";
        case Flavor::SMC: return "smc";
        case Flavor::BSMC: return "bsmc";
    }
    return "?";
}

std::string_view to_string(SwitchMode m) { return m == SwitchMode::Fixed ? "fixed" : "timevarying"; }

Flavor parse_flavor(std::string_view s) {
    const auto v = lower(s);
    if (v == "bs") return Flavor::BS;
    if (v == "smc") return Flavor::SMC;
    if (v == "bsmc") return Flavor::BSMC;
    throw std::invalid_argument("unknown flavor '" + std::string(s) + "' (expected bs, smc or bsmc)");
}

SwitchMode parse_switch_mode(std::string_view s) {
    const auto v = lower(s);
    if (v == "fixed") return SwitchMode::Fixed;
    if (v == "timevarying" || v == "time_varying" || v == "time-varying") return SwitchMode::TimeVarying;
    throw std::invalid_argument("unknown switch mode '" + std::string(s) + "' (expected fixed or timevarying)");
}

void GainSet::validate() const {
    auto positive = [](const Vec7& v, const char* name) {
        if (!v.allFinite() || (v.array() <= 0.0).any()) {
            throw InvalidGains(std::string("gains.") + name + ": diagonal entries must be > 0");
        }
    };
    positive(K1, "K1");
    positive(L1, "L1");
    positive(L2, "L2");
    positive(Ls, "Ls");
    if (!(eps >= 0.0)) throw InvalidGains("gains.eps: must be >= 0");
    if (!(rho0 >= 0.0)) throw InvalidGains("gains.rho0: must be >= 0");
}

GainSet standard_gains(Flavor flavor) {
    GainSet g;
    g.flavor = flavor;
    return g;
}

TrackingErrors tracking_errors(const Pose& pose, const Vec7& pose_rate_meas, const Reference& ref) {
    return {pose.vector() - ref.eta_d, pose_rate_meas - ref.eta_d_dot};
}

Vec7 virtual_velocity(const Reference& ref, const Vec7& z1, const Vec7& K1) {
    return ref.eta_d_dot - K1.cwiseProduct(z1);
}

Vec7 z2_of(const Vec7& z1_dot, const Vec7& z1, const Vec7& K1) { return z1_dot + K1.cwiseProduct(z1); }

ErrorState make_error_state(const TrackingErrors& e, const Vec7& K1) {
    return {e.z1, e.z1_dot, z2_of(e.z1_dot, e.z1, K1)};
}

Vec7 smooth_sign(const Vec7& sigma, double eps) {
    Vec7 out;
    for (int i = 0; i < 7; ++i) {
        const double s = sigma[i];
        if (eps > 0.0) {
            out[i] = s / (std::abs(s) + eps);
        } else {
            out[i] = static_cast<double>((s > 0.0) - (s < 0.0));
        }
    }
    return out;
}

Vec7 switching_gain(SwitchMode mode, const Vec7& L1, const Vec7& z1, double rho0, const Vec7& Ls) {
    if (mode == SwitchMode::Fixed) return Ls;
    const double rho_bar = L1.cwiseProduct(z1).cwiseAbs().maxCoeff();
    return Vec7::Constant(rho_bar + rho0);
}

Vec7 switching_term(const ErrorState& err, const GainSet& gains) {
    if (gains.flavor == Flavor::BS) return Vec7::Zero();
    const Vec7 rho = switching_gain(gains.switch_mode, gains.L1, err.z1, gains.rho0, gains.Ls);
    return rho.cwiseProduct(smooth_sign(err.z2, gains.eps));
}

Vec7 control_accel(const ErrorState& err, const GainSet& gains) {
    Vec7 a = -gains.K1.cwiseProduct(err.z1_dot) - gains.L2.cwiseProduct(err.z2);
    if (gains.flavor != Flavor::SMC) a -= gains.L1.cwiseProduct(err.z1);
    a -= switching_term(err, gains);
    return a;
}

Wrench wrench_for_accel(const BodyState& x, const Pose& pose, const Vec7& accel, const AirshipParams& params) {
    const Mat67 T_plus = pseudo_inverse_T(build_T(pose.q));
    const Vec6 x_dot = T_plus * (accel - pose_accel_drift(x, pose));
    // f = M (x_dot - K x) - E_g S g - F_a1
    const Vec6 f = params.M * (x_dot - coriolis_term(x, params)) - gravity_wrench(pose, params) - aero_force(x, params);
    return Wrench::from_vector(f);
}

Wrench control_wrench(const BodyState& x, const Pose& pose, const ErrorState& err, const GainSet& gains,
                      const AirshipParams& params) {
    return wrench_for_accel(x, pose, control_accel(err, gains), params);
}

double lyapunov(const ErrorState& err, const GainSet& gains) {
    const double v_z2 = 0.5 * err.z2.squaredNorm();
    if (gains.flavor == Flavor::SMC) return v_z2;
    return 0.5 * err.z1.dot(gains.L1.cwiseProduct(err.z1)) + v_z2;
}

double lyapunov_rate(const ErrorState& err, const GainSet& gains) {
    double rate = -err.z2.dot(gains.L2.cwiseProduct(err.z2)) - err.z2.dot(switching_term(err, gains));
    if (gains.flavor != Flavor::SMC) rate -= err.z1.dot(gains.L1.cwiseProduct(gains.K1.cwiseProduct(err.z1)));
    return rate;
}

double sigma_sigmadot(const ErrorState& err, const GainSet& gains) {
    const Vec7& s = err.sigma();
    double r = -s.dot(gains.L2.cwiseProduct(s)) - s.dot(switching_term(err, gains));
    if (gains.flavor != Flavor::SMC) r -= s.dot(gains.L1.cwiseProduct(err.z1));
    return r;
}

ControlOutput compute_control(const BodyState& x, const Pose& pose, const Vec3& v_w_hat, const Reference& ref,
                              const GainSet& gains, const AirshipParams& model) {
    ControlOutput out;
    out.err = make_error_state(tracking_errors(pose, pose_rate(x, pose, v_w_hat), ref), gains.K1);
    out.accel = control_accel(out.err, gains);
    out.wrench = wrench_for_accel(x, pose, out.accel, model);
    return out;
}

}  // namespace airship
