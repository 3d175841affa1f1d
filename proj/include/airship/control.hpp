#pragma once

// Unified BS / SMC / BSMC vectorial control law for the two-block (pose / pose-rate) system.
//
// Error variables:  z1 = eta - eta_d,  z1' = eta' - eta_d',  z2 = sigma = z1' + K1 z1.
// Commanded pose acceleration:
//   BSMC: eta'' = -L1 z1 - K1 z1' - L2 z2 - Ls sw(z2)
//   BS  : drops the switching term
//   SMC : drops the L1 z1 term
// and the wrench realizing it:
//   f = M T+ (eta'' - D Omega7 C x) - M K x - E_g S g - F_a1.

#include "airship/model.hpp"

#include <string_view>

namespace airship {

enum class Flavor { BS, SMC, BSMC };
enum class SwitchMode { Fixed, TimeVarying };

std::string_view to_string(Flavor f);
std::string_view to_string(SwitchMode m);
Flavor parse_flavor(std::string_view s);        // "bs" | "smc" | "bsmc", case-insensitive
SwitchMode parse_switch_mode(std::string_view s);  // "fixed" | "timevarying"

struct InvalidGains : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Diagonal gains stored as 7-vectors: first three entries act on position, last four on the
/// quaternion channels.
struct GainSet {
    Vec7 K1 = Vec7::Constant(0.2);
    Vec7 L1 = (Vec7() << 0.05, 0.05, 0.05, 0.2, 0.2, 0.2, 0.2).finished();
    Vec7 L2 = Vec7::Constant(0.5);
    Vec7 Ls = (Vec7() << 0.1, 0.1, 0.1, 0.2, 0.2, 0.2, 0.2).finished();
    double eps = 0.1;  ///< boundary layer; 0 selects the hard sign function
    double rho0 = 0.1;
    SwitchMode switch_mode = SwitchMode::Fixed;
    Flavor flavor = Flavor::BSMC;

    void validate() const;
};

/// The gain block used throughout the hovering and mission experiments.
GainSet standard_gains(Flavor flavor = Flavor::BSMC);

struct ErrorState {
    Vec7 z1 = Vec7::Zero();
    Vec7 z1_dot = Vec7::Zero();
    Vec7 z2 = Vec7::Zero();

    const Vec7& sigma() const { return z2; }
};

/// Desired pose and pose rate at one instant.
struct Reference {
    Vec7 eta_d = Pose{}.vector();
    Vec7 eta_d_dot = Vec7::Zero();
};

struct TrackingErrors {
    Vec7 z1;
    Vec7 z1_dot;
};

/// Componentwise errors; the quaternion channels are subtracted like the position channels.
TrackingErrors tracking_errors(const Pose& pose, const Vec7& pose_rate_meas, const Reference& ref);

Vec7 virtual_velocity(const Reference& ref, const Vec7& z1, const Vec7& K1);

Vec7 z2_of(const Vec7& z1_dot, const Vec7& z1, const Vec7& K1);

ErrorState make_error_state(const TrackingErrors& e, const Vec7& K1);

/// sigma / (|sigma| + eps) elementwise; eps == 0 gives sign(sigma) with sign(0) = 0.
Vec7 smooth_sign(const Vec7& sigma, double eps);

/// Fixed: Ls.  TimeVarying: max_i |L1_i z1_i| + rho0 on every channel.
Vec7 switching_gain(SwitchMode mode, const Vec7& L1, const Vec7& z1, double rho0, const Vec7& Ls);

/// The switching term Ls .* sw(z2) actually injected (zero for BS).
Vec7 switching_term(const ErrorState& err, const GainSet& gains);

Vec7 control_accel(const ErrorState& err, const GainSet& gains);

/// Wrench realizing `accel` through the model: M T+ (accel - D Omega7 C x) - M K x - E_g S g - F_a1.
Wrench wrench_for_accel(const BodyState& x, const Pose& pose, const Vec7& accel, const AirshipParams& params);

Wrench control_wrench(const BodyState& x, const Pose& pose, const ErrorState& err, const GainSet& gains,
                      const AirshipParams& params);

/// v2 = 1/2 z1' L1 z1 + 1/2 z2' z2 (BS, BSMC); 1/2 z2' z2 for SMC.
double lyapunov(const ErrorState& err, const GainSet& gains);

/// Closed-form Lyapunov derivative of the active flavour under its own control law.
double lyapunov_rate(const ErrorState& err, const GainSet& gains);

/// sigma' sigma_dot = -sigma' L2 sigma - sigma' (L1 z1 + switching term), flavour-masked.
double sigma_sigmadot(const ErrorState& err, const GainSet& gains);

/// Everything one control step produces.
struct ControlOutput {
    ErrorState err;
    Vec7 accel;
    Wrench wrench;
};

/// Errors from the measured state (wind estimate in the pose rate), commanded acceleration,
/// and wrench.
ControlOutput compute_control(const BodyState& x, const Pose& pose, const Vec3& v_w_hat, const Reference& ref,
                              const GainSet& gains, const AirshipParams& model);

}  // namespace airship
