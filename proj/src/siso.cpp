#include "airship/siso.hpp"

#include <cmath>
#include <string>

namespace airship::siso {

namespace {

double sgn(double v) { return static_cast<double>((v > 0.0) - (v < 0.0)); }

// Time derivative of a linear form a.x along the chain, valid while a_n = 0.
Eigen::RowVectorXd shift(const Eigen::RowVectorXd& a) {
    const auto n = a.size();
    Eigen::RowVectorXd d = Eigen::RowVectorXd::Zero(n);
    d.tail(n - 1) = a.head(n - 1);
    return d;
}

// Linear forms (over x) of z_1..z_n and of the last stabilizing function alpha_{n-1}.
struct Forms {
    Eigen::MatrixXd Z;
    Eigen::RowVectorXd alpha;
};

Forms build_forms(const std::vector<double>& k) {
    const int n = static_cast<int>(k.size()) + 1;
    Forms fm{Eigen::MatrixXd::Zero(n, n), Eigen::RowVectorXd::Zero(n)};
    fm.Z(0, 0) = 1.0;
    Eigen::RowVectorXd alpha = Eigen::RowVectorXd::Zero(n);
    for (int i = 1; i < n; ++i) {
        Eigen::RowVectorXd z_prev = i >= 2 ? Eigen::RowVectorXd(fm.Z.row(i - 2)) : Eigen::RowVectorXd::Zero(n);
        alpha = -z_prev - k[static_cast<std::size_t>(i - 1)] * fm.Z.row(i - 1) + shift(alpha);
        Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(n);
        e[i] = 1.0;
        fm.Z.row(i) = e - alpha;
    }
    fm.alpha = alpha;
    return fm;
}

Eigen::RowVectorXd sliding_form(SisoLaw law, const Forms& fm, const SisoGains& gains) {
    const int n = gains.order();
    Eigen::RowVectorXd s = fm.Z.row(n - 1);
    if (law == SisoLaw::BSMC1) {
        for (int i = 0; i < n - 1; ++i) s += gains.c()[i] * fm.Z.row(i);
    }
    return s;
}

}  // namespace

ChainPlant double_integrator() { return ChainPlant{}; }

bool is_hurwitz(const std::vector<double>& c) {
    const auto m = static_cast<int>(c.size());
    if (m == 0) return true;
    for (double ci : c) {
        if (!(ci > 0.0)) return false;
    }
    // Companion matrix of s^m + c_m s^{m-1} + ... + c_1.
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i + 1 < m; ++i) comp(i + 1, i) = 1.0;
    for (int i = 0; i < m; ++i) comp(i, m - 1) = -c[i];
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    return (es.eigenvalues().real().array() < 0.0).all();
}

SisoGains::SisoGains(std::vector<double> k, std::vector<double> lambda, std::vector<double> c, double rho,
                     RhoMode rho_mode, double rho0)
    : k_(std::move(k)), lambda_(std::move(lambda)), c_(std::move(c)), rho_(rho), rho_mode_(rho_mode), rho0_(rho0) {
    const int n = order();
    if (n < 2 || n > 3) throw UnsupportedOrder("SISO chain order must be 2 or 3, got " + std::to_string(n));
    if (static_cast<int>(lambda_.size()) != n) throw std::invalid_argument("lambda: expected n entries");
    for (double v : k_) {
        if (!(v > 0.0)) throw std::invalid_argument("k: gains must be > 0");
    }
    for (double v : lambda_) {
        if (!(v > 0.0)) throw std::invalid_argument("lambda: gains must be > 0");
    }
    if (!c_.empty()) {
        if (static_cast<int>(c_.size()) != n - 1) throw std::invalid_argument("c: expected n-1 entries");
        if (!is_hurwitz(c_)) throw NonHurwitzSurface("c: surface polynomial is not Hurwitz");
    }
    if (!(rho_ >= 0.0) || !(rho0_ >= 0.0)) throw std::invalid_argument("rho, rho0: must be >= 0");
}

SisoTerms siso_terms(const ChainPlant& plant, const SisoGains& gains, const Eigen::VectorXd& x) {
    const int n = gains.order();
    if (plant.n != n || x.size() != n) throw std::invalid_argument("plant order, gain order and state size differ");
    const Forms fm = build_forms(gains.k());
    SisoTerms t;
    t.f = plant.f(x);
    t.g = plant.g(x);
    if (!(std::abs(t.g) >= plant.g_min)) {
        throw DegenerateInputGain("|g_n| = " + std::to_string(std::abs(t.g)) + " below g_min");
    }
    t.z = fm.Z * x;
    t.z_dot.resize(n - 1);
    for (int i = 0; i < n - 1; ++i) t.z_dot[i] = shift(fm.Z.row(i)).dot(x);
    t.alpha_dot = shift(fm.alpha).dot(x);
    return t;
}

double bsmc1_sigma(const SisoTerms& t, const SisoGains& gains) {
    const int n = gains.order();
    double s = t.z[n - 1];
    for (int i = 0; i < n - 1; ++i) s += gains.c()[i] * t.z[i];
    return s;
}

double effective_rho(const SisoTerms& t, const SisoGains& gains) {
    const int n = gains.order();
    if (gains.rho_mode() == RhoMode::TimeVarying) return rho_crit(gains.lambda()[n - 2], t.z[n - 2]) + gains.rho0();
    return gains.rho();
}

double bsmc1_law(const SisoTerms& t, const SisoGains& gains) {
    if (gains.c().empty()) throw std::invalid_argument("BSMC-1 needs surface coefficients c");
    const int n = gains.order();
    const double sigma = bsmc1_sigma(t, gains);
    double c_zdot = 0.0;
    for (int i = 0; i < n - 1; ++i) c_zdot += gains.c()[i] * t.z_dot[i];
    return (-t.f - c_zdot + t.alpha_dot - gains.lambda()[n - 1] * sigma - effective_rho(t, gains) * sgn(sigma)) / t.g;
}

double bsmc2_law(const SisoTerms& t, const SisoGains& gains) {
    const int n = gains.order();
    const double sigma = t.z[n - 1];
    return (-t.f - gains.lambda()[n - 2] * t.z[n - 2] + t.alpha_dot - gains.lambda()[n - 1] * sigma -
            effective_rho(t, gains) * sgn(sigma)) /
           t.g;
}

double smc_law(const SisoTerms& t, const SisoGains& gains) {
    const int n = gains.order();
    const double sigma = t.z[n - 1];
    return (-t.f + t.alpha_dot - gains.lambda()[n - 1] * sigma - effective_rho(t, gains) * sgn(sigma)) / t.g;
}

double bsmc1_control(const ChainPlant& plant, const SisoGains& gains, const Eigen::VectorXd& x) {
    return bsmc1_law(siso_terms(plant, gains, x), gains);
}

double bsmc2_control(const ChainPlant& plant, const SisoGains& gains, const Eigen::VectorXd& x) {
    return bsmc2_law(siso_terms(plant, gains, x), gains);
}

double control(SisoLaw law, const ChainPlant& plant, const SisoGains& gains, const Eigen::VectorXd& x) {
    const SisoTerms t = siso_terms(plant, gains, x);
    switch (law) {
        case SisoLaw::BSMC1: return bsmc1_law(t, gains);
        case SisoLaw::BSMC2: return bsmc2_law(t, gains);
        case SisoLaw::SMC: return smc_law(t, gains);
    }
    return 0.0;
}

double sliding_variable(SisoLaw law, const SisoTerms& t, const SisoGains& gains) {
    return law == SisoLaw::BSMC1 ? bsmc1_sigma(t, gains) : t.z[gains.order() - 1];
}

double sigma_sigmadot(SisoLaw law, const SisoTerms& t, const SisoGains& gains) {
    const int n = gains.order();
    const double sigma = sliding_variable(law, t, gains);
    const double rho = effective_rho(t, gains);
    double r = -gains.lambda()[n - 1] * sigma * sigma - rho * std::abs(sigma);
    if (law == SisoLaw::BSMC2) r -= gains.lambda()[n - 2] * t.z[n - 2] * sigma;
    return r;
}

double lyapunov(SisoLaw law, const SisoTerms& t, const SisoGains& gains) {
    const int n = gains.order();
    const double sigma = sliding_variable(law, t, gains);
    const double head = 0.5 * t.z.head(n - 1).squaredNorm();
    switch (law) {
        case SisoLaw::BSMC1: return head + 0.5 * sigma * sigma;
        case SisoLaw::BSMC2: return gains.lambda()[n - 2] * head + 0.5 * sigma * sigma;
        case SisoLaw::SMC: return 0.5 * sigma * sigma;
    }
    return 0.0;
}

double lyapunov_rate(SisoLaw law, const SisoTerms& t, const SisoGains& gains) {
    const int n = gains.order();
    double k_sum = 0.0;
    for (int i = 0; i < n - 1; ++i) k_sum += gains.k()[i] * t.z[i] * t.z[i];
    const double sds = sigma_sigmadot(law, t, gains);
    switch (law) {
        case SisoLaw::BSMC1: return -k_sum + t.z[n - 2] * t.z[n - 1] + sds;
        case SisoLaw::BSMC2: {
            const double sigma = t.z[n - 1];
            return -gains.lambda()[n - 2] * k_sum - gains.lambda()[n - 1] * sigma * sigma -
                   effective_rho(t, gains) * std::abs(sigma);
        }
        case SisoLaw::SMC: return sds;
    }
    return 0.0;
}

std::vector<double> sigma_b2_coeffs(const SisoGains& gains, int n) {
    if (n < 2 || n > 3) throw UnsupportedOrder("sigma_B2 expansion available for n = 2, 3 only");
    if (gains.order() != n) throw std::invalid_argument("gain order does not match n");
    return sigma_b2_coeffs(gains.k());
}

std::vector<double> sigma_b2_coeffs(const std::vector<double>& k) {
    const int n = static_cast<int>(k.size()) + 1;
    if (n < 2 || n > 3) throw UnsupportedOrder("sigma_B2 expansion available for n = 2, 3 only");
    // For regulation x_i = z_1^{(i-1)}, so the z_n row over x is the expansion over z_1 derivatives.
    const Forms fm = build_forms(k);
    const Eigen::RowVectorXd row = fm.Z.row(n - 1);
    return {row.data(), row.data() + row.size()};
}

double rho_crit(double lambda_nm1, double z_nm1) {
    if (!(lambda_nm1 > 0.0)) throw std::invalid_argument("rho_crit: lambda must be > 0");
    return lambda_nm1 * std::abs(z_nm1);
}

double backstepping_vdot(const Eigen::VectorXd& z, const Eigen::VectorXd& k) {
    if (z.size() != k.size()) throw std::invalid_argument("backstepping_vdot: size mismatch");
    return -(k.array() * z.array().square()).sum();
}

std::vector<SisoSample> simulate(SisoLaw law, const ChainPlant& plant, const SisoGains& gains,
                                 const Eigen::VectorXd& x0, double dt, double t_end) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    const int n = gains.order();
    const Forms fm = build_forms(gains.k());
    const Eigen::RowVectorXd s_form = sliding_form(law, fm, gains);
    const auto steps = static_cast<long>(std::llround(t_end / dt));

    auto rhs = [&](const Eigen::VectorXd& x, double u) {
        Eigen::VectorXd d(n);
        d.head(n - 1) = x.tail(n - 1);
        d[n - 1] = plant.f(x) + plant.g(x) * u;
        return d;
    };

    std::vector<SisoSample> out;
    out.reserve(static_cast<std::size_t>(steps));
    Eigen::VectorXd x = x0;
    for (long k = 0; k < steps; ++k) {
        const SisoTerms t = siso_terms(plant, gains, x);
        double u = 0.0;
        switch (law) {
            case SisoLaw::BSMC1: u = bsmc1_law(t, gains); break;
            case SisoLaw::BSMC2: u = bsmc2_law(t, gains); break;
            case SisoLaw::SMC: u = smc_law(t, gains); break;
        }
        const double sigma = s_form.dot(x);
        const double sigma_dot = s_form.dot(rhs(x, u));
        out.push_back({static_cast<double>(k) * dt, x, t.z, sigma, u, sigma * sigma_dot, lyapunov(law, t, gains),
                       lyapunov_rate(law, t, gains)});

        const Eigen::VectorXd k1 = rhs(x, u);
        const Eigen::VectorXd k2 = rhs(x + 0.5 * dt * k1, u);
        const Eigen::VectorXd k3 = rhs(x + 0.5 * dt * k2, u);
        const Eigen::VectorXd k4 = rhs(x + dt * k3, u);
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return out;
}

}  // namespace airship::siso
