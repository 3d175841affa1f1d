#pragma once

// SISO chain-of-integrators testbed for the two classical backstepping sliding-mode designs.
//
//   x_i' = x_{i+1}  (i < n),   x_n' = f_n(x) + g_n(x) u,   regulation of y = x_1 to zero.
//
// Backstepping errors follow the unit-weight recursion z_{i}' = z_{i+1} - k_i z_i - z_{i-1}
// (z_0 = 0).  BSMC-1 slides on sigma = c_1 z_1 + ... + c_{n-1} z_{n-1} + z_n, BSMC-2 on sigma = z_n.
// Orders are capped at n = 3.

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <vector>

namespace airship::siso {

struct DegenerateInputGain : std::domain_error {
    using std::domain_error::domain_error;
};
struct UnsupportedOrder : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NonHurwitzSurface : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

using StateFn = std::function<double(const Eigen::VectorXd&)>;

struct ChainPlant {
    int n = 2;
    StateFn f = [](const Eigen::VectorXd&) { return 0.0; };
    StateFn g = [](const Eigen::VectorXd&) { return 1.0; };
    double g_min = 1e-6;
};

/// f = 0, g = 1.
ChainPlant double_integrator();

enum class RhoMode { Fixed, TimeVarying };

class SisoGains {
public:
    /// k: k_1..k_{n-1};  lambda: lambda_1..lambda_n;  c: c_1..c_{n-1} (BSMC-1 surface, may be
    /// empty when only BSMC-2 is used).  Throws NonHurwitzSurface / std::invalid_argument.
    SisoGains(std::vector<double> k, std::vector<double> lambda, std::vector<double> c, double rho,
              RhoMode rho_mode = RhoMode::Fixed, double rho0 = 0.0);

    int order() const { return static_cast<int>(k_.size()) + 1; }
    const std::vector<double>& k() const { return k_; }
    const std::vector<double>& lambda() const { return lambda_; }
    const std::vector<double>& c() const { return c_; }
    double rho() const { return rho_; }
    double rho0() const { return rho0_; }
    RhoMode rho_mode() const { return rho_mode_; }

private:
    std::vector<double> k_, lambda_, c_;
    double rho_;
    RhoMode rho_mode_;
    double rho0_;
};

/// True when c_1 + c_2 s + ... + c_{m} s^{m-1} + s^m has all roots in the open left half-plane.
bool is_hurwitz(const std::vector<double>& c);

/// Quantities the control boxes are written in, evaluated at one state.
struct SisoTerms {
    double f = 0.0;
    double g = 1.0;
    Eigen::VectorXd z;      ///< z_1..z_n
    Eigen::VectorXd z_dot;  ///< z_1'..z_{n-1}'
    double alpha_dot = 0.0; ///< derivative of the last stabilizing function alpha_{n-1}
};

SisoTerms siso_terms(const ChainPlant& plant, const SisoGains& gains, const Eigen::VectorXd& x);

enum class SisoLaw { BSMC1, BSMC2, SMC };

double bsmc1_sigma(const SisoTerms& t, const SisoGains& gains);

/// Effective switching gain: rho, or lambda_{n-1}|z_{n-1}| + rho0 in TimeVarying mode.
double effective_rho(const SisoTerms& t, const SisoGains& gains);

/// u = (1/g)[-f - sum c_i z_i' + alpha' - lambda_n sigma - rho sgn(sigma)].
double bsmc1_law(const SisoTerms& t, const SisoGains& gains);
/// u = (1/g)[-f - lambda_{n-1} z_{n-1} + alpha' - lambda_n sigma - rho sgn(sigma)],  sigma = z_n.
double bsmc2_law(const SisoTerms& t, const SisoGains& gains);
/// BSMC-2 without the lambda_{n-1} z_{n-1} term.
double smc_law(const SisoTerms& t, const SisoGains& gains);

double bsmc1_control(const ChainPlant& plant, const SisoGains& gains, const Eigen::VectorXd& x);
double bsmc2_control(const ChainPlant& plant, const SisoGains& gains, const Eigen::VectorXd& x);
double control(SisoLaw law, const ChainPlant& plant, const SisoGains& gains, const Eigen::VectorXd& x);

double sliding_variable(SisoLaw law, const SisoTerms& t, const SisoGains& gains);

/// Closed-form sigma * sigma_dot under the chosen law.
double sigma_sigmadot(SisoLaw law, const SisoTerms& t, const SisoGains& gains);

/// Lyapunov function of the chosen design.  BSMC-2 / SMC use
/// lambda_{n-1} * 1/2 sum_{i<n} z_i^2 + 1/2 z_n^2 so that the z_{n-1} z_n cross term cancels.
double lyapunov(SisoLaw law, const SisoTerms& t, const SisoGains& gains);
double lyapunov_rate(SisoLaw law, const SisoTerms& t, const SisoGains& gains);

/// Coefficients of sigma_B2 = z_n over (z_1, z_1', z_1''): n=2 -> (k1, 1), n=3 -> (1 + k1 k2, k1 + k2, 1).
std::vector<double> sigma_b2_coeffs(const SisoGains& gains, int n);
/// Same expansion from raw backstepping gains k_1..k_{n-1} (zero allowed).
std::vector<double> sigma_b2_coeffs(const std::vector<double>& k);

double rho_crit(double lambda_nm1, double z_nm1);

/// -(k_1 z_1^2 + ... + k_n z_n^2).
double backstepping_vdot(const Eigen::VectorXd& z, const Eigen::VectorXd& k);

struct SisoSample {
    double t;
    Eigen::VectorXd x;
    Eigen::VectorXd z;
    double sigma;
    double u;
    double sigma_sigmadot;  ///< sigma * sigma_dot from the plant response to u
    double v;
    double v_dot;
};

/// Fixed-step RK4 closed loop with the control held over each step.  One sample per step,
/// taken before the step.
std::vector<SisoSample> simulate(SisoLaw law, const ChainPlant& plant, const SisoGains& gains,
                                 const Eigen::VectorXd& x0, double dt, double t_end);

}  // namespace airship::siso
