// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "airship/analysis.hpp"
#include "airship/bundled.hpp"
#include "airship/config.hpp"
#include "airship/log_io.hpp"
#include "airship/siso.hpp"

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace airship;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& check) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++g_failures;
    std::printf("[%s] criterion %2d: %s | %s | %.2f s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

ScenarioConfig bundled(const std::string& name) {
    return scenario_from_json(parse_json_text(std::string(*find_bundled(name))));
}

std::vector<TimeSeriesLog> run_all(const std::vector<ScenarioConfig>& cfgs) {
    std::vector<std::future<TimeSeriesLog>> jobs;
    for (const auto& c : cfgs) jobs.push_back(std::async(std::launch::async, [&c] { return run_scenario(c); }));
    std::vector<TimeSeriesLog> out;
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

template <int N>
Eigen::Matrix<double, N, 1> uniform_vec(std::mt19937_64& g, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    Eigen::Matrix<double, N, 1> v;
    for (int i = 0; i < N; ++i) v[i] = u(g);
    return v;
}

Quat random_quat(std::mt19937_64& g) {
    std::normal_distribution<double> n;
    return Quat(n(g), n(g), n(g), n(g)).normalized();
}

// ---------------------------------------------------------------------------------------------

Outcome flavor_algebra() {
    std::mt19937_64 gen(1);
    const AirshipParams p = default_airship_params();
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        GainSet g;
        g.K1 = uniform_vec<7>(gen, 0.01, 1.0);
        g.L1 = uniform_vec<7>(gen, 0.01, 1.0);
        g.L2 = uniform_vec<7>(gen, 0.01, 1.0);
        g.Ls = uniform_vec<7>(gen, 0.01, 1.0);
        g.eps = uniform_vec<1>(gen, 0.0, 1.0)[0];
        g.rho0 = uniform_vec<1>(gen, 0.0, 0.5)[0];
        g.switch_mode = i % 2 ? SwitchMode::Fixed : SwitchMode::TimeVarying;
        const Pose pose{uniform_vec<3>(gen, -50, 50), random_quat(gen)};
        const BodyState x{uniform_vec<3>(gen, -3, 3), uniform_vec<3>(gen, -0.5, 0.5)};
        Reference ref;
        ref.eta_d << uniform_vec<3>(gen, -50, 50), random_quat(gen);
        ref.eta_d_dot = uniform_vec<7>(gen, -1, 1);
        const Vec3 v_w = uniform_vec<3>(gen, -3, 3);

        auto wrench = [&](Flavor f) {
            GainSet gf = g;
            gf.flavor = f;
            return compute_control(x, pose, v_w, ref, gf, p);
        };
        const ControlOutput bsmc = wrench(Flavor::BSMC), bs = wrench(Flavor::BS), smc = wrench(Flavor::SMC);
        const Mat67 map = p.M * pseudo_inverse_T(build_T(pose.q));
        const ErrorState& e = bsmc.err;
        const Vec7 sw = switching_gain(g.switch_mode, g.L1, e.z1, g.rho0, g.Ls).cwiseProduct(smooth_sign(e.z2, g.eps));
        const Vec6 sw_mapped = map * (-sw);
        const Vec6 l1_mapped = map * (-g.L1.cwiseProduct(e.z1));
        worst = std::max(worst, (bsmc.wrench.vector() - bs.wrench.vector() - sw_mapped).cwiseAbs().maxCoeff());
        worst = std::max(worst, (bsmc.wrench.vector() - smc.wrench.vector() - l1_mapped).cwiseAbs().maxCoeff());
    }
    return {worst < 1e-10, fmt("max deviation %.3e over 1e4 cases (tol 1e-10)", worst)};
}

Outcome push_through() {
    ScenarioConfig c = bundled("ideal_hover");
    c.t_end = 60.0;
    c.model = c.plant;
    // Level and facing into the 0 deg wind, so the attitude starts on its reference.
    c.initial_pose.q = identity_quaternion();
    const TimeSeriesLog log = run_scenario(c);
    double worst = 0.0;
    for (const auto& r : log.records) worst = std::max(worst, (r.accel_real - r.accel_cmd).cwiseAbs().maxCoeff());

    // Off-reference attitude: the quaternion rows agree on the tangent space only.
    ScenarioConfig m = bundled("ideal_hover");
    m.t_end = 60.0;
    m.model = m.plant;
    const TimeSeriesLog ml = run_scenario(m);
    double tangent = 0.0, radial = 0.0;
    for (const auto& r : ml.records) {
        const Vec7 d = r.accel_real - r.accel_cmd;
        const Vec4 q = r.pose.q;
        const Vec4 dq = d.tail<4>() - q * q.dot(d.tail<4>());
        tangent = std::max({tangent, d.head<3>().cwiseAbs().maxCoeff(), dq.cwiseAbs().maxCoeff()});
        radial = std::max(radial, std::abs(q.dot(d.tail<4>())));
    }
    return {worst < 1e-6 && tangent < 1e-6,
            fmt("%zu steps, max |accel_real - accel_cmd| %.3e (tol 1e-6); off-reference start: tangent %.3e, "
                "radial %.3e",
                log.records.size(), worst, tangent, radial)};
}

Outcome cross_coupling() {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> uz(-10, 10), uk(0.01, 10), un(0, 1);
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const int n = un(gen) < 0.5 ? 2 : 3;
        Eigen::VectorXd z(n), k(n);
        for (int j = 0; j < n; ++j) {
            z[j] = uz(gen);
            k[j] = uk(gen);
        }
        double sum = 0.0, scale = 0.0;
        for (int j = 0; j < n; ++j) {
            const double next = j + 1 < n ? z[j + 1] : 0.0, prev = j > 0 ? z[j - 1] : 0.0;
            const double term = z[j] * (next - k[j] * z[j] - prev);
            sum += term;
            scale += std::abs(z[j] * next) + std::abs(k[j] * z[j] * z[j]) + std::abs(z[j] * prev);
        }
        worst = std::max(worst, std::abs(siso::backstepping_vdot(z, k) - sum) / scale);
    }
    const double tol = 8 * std::numeric_limits<double>::epsilon();
    return {worst <= tol, fmt("max relative deviation %.3e over 1e5 cases (tol %.1e)", worst, tol)};
}

Outcome reaching() {
    const siso::SisoGains g({1.0}, {1.0, 1.0}, {}, 0.0, siso::RhoMode::TimeVarying, 0.1);
    Eigen::VectorXd x0(2);
    x0 << 2.0, 0.0;
    const auto log = siso::simulate(siso::SisoLaw::BSMC2, siso::double_integrator(), g, x0, 1e-4, 20.0);
    std::vector<double> t, s;
    long bad = 0;
    for (const auto& smp : log) {
        t.push_back(smp.t);
        s.push_back(smp.sigma);
        if (smp.sigma != 0.0 && !(smp.sigma_sigmadot < 0.0)) ++bad;
    }
    const auto tr = settle_time(t, s, 1e-3);
    return {tr.has_value() && bad == 0,
            fmt("reaching time %s, samples with sigma*sigma_dot >= 0: %ld of %zu",
                tr ? fmt("%.4f s", *tr).c_str() : "none", bad, log.size())};
}

Outcome dual_behaviour() {
    const siso::SisoGains g({1.0}, {1.0, 1.0}, {}, 0.05);
    Eigen::VectorXd x0(2);
    x0 << 10.0, 0.0;
    const auto log = siso::simulate(siso::SisoLaw::BSMC2, siso::double_integrator(), g, x0, 1e-4, 60.0);
    std::vector<double> t, sds, vdot;
    for (const auto& smp : log) {
        t.push_back(smp.t);
        sds.push_back(smp.sigma_sigmadot);
        vdot.push_back(smp.v_dot);
    }
    const auto iv = dual_behavior_detector(t, sds, vdot);
    const double z_end = log.back().z.cwiseAbs().maxCoeff();
    return {!iv.empty() && z_end < 1e-3,
            fmt("%zu dual interval(s), first [%.4f, %.4f] s; |z| at 60 s = %.3e (tol 1e-3)", iv.size(),
                iv.empty() ? 0.0 : iv.front().t_begin, iv.empty() ? 0.0 : iv.front().t_end, z_end)};
}

Outcome rho_crit_bound() {
    std::mt19937_64 gen(6);
    std::uniform_real_distribution<double> ux(-10, 10), ug(0.05, 5), un(0, 1);
    long violations = 0, nonneg = 0;
    double worst_margin = -1e300;
    for (int i = 0; i < 100000; ++i) {
        const int n = un(gen) < 0.5 ? 2 : 3;
        std::vector<double> k(n - 1), lambda(n);
        for (auto& v : k) v = ug(gen);
        for (auto& v : lambda) v = ug(gen);
        Eigen::VectorXd x(n);
        for (int j = 0; j < n; ++j) x[j] = ux(gen);
        siso::ChainPlant plant = siso::double_integrator();
        plant.n = n;
        plant.f = [](const Eigen::VectorXd& s) { return std::sin(s[0]) + 0.3 * s[s.size() - 1]; };
        plant.g = [](const Eigen::VectorXd& s) { return 1.5 + 0.5 * std::cos(s[0]); };
        const siso::SisoGains probe(k, lambda, {}, 0.0);
        const double crit = siso::rho_crit(lambda[n - 2], siso::siso_terms(plant, probe, x).z[n - 2]);
        const siso::SisoGains gains(k, lambda, {}, crit + 0.01);
        const siso::SisoTerms t = siso::siso_terms(plant, gains, x);
        const double sigma = t.z[n - 1];
        if (sigma == 0.0) continue;
        const double sds = siso::sigma_sigmadot(siso::SisoLaw::BSMC2, t, gains);
        const double bound = -lambda[n - 1] * sigma * sigma - 0.01 * std::abs(sigma);
        const double margin = sds - bound;
        worst_margin = std::max(worst_margin, margin / std::max(1.0, std::abs(bound)));
        if (margin > 1e-12 * std::max(1.0, std::abs(bound))) ++violations;
        if (!(sds < 0.0)) ++nonneg;
    }
    return {violations == 0 && nonneg == 0,
            fmt("bound violations %ld, non-negative sigma*sigma_dot %ld over 1e5 states (worst relative margin %.2e)",
                violations, nonneg, worst_margin)};
}

Outcome ideal_hover_reproduction() {
    const ScenarioConfig base = bundled("ideal_hover");
    const std::vector<double> eps{0.1, 0.5, 1.0};
    std::vector<ScenarioConfig> cfgs;
    auto add = [&](Flavor f, double e) {
        ScenarioConfig c = base;
        c.gains.flavor = f;
        c.gains.eps = e;
        cfgs.push_back(c);
    };
    add(Flavor::BS, 0.1);
    for (double e : eps) {
        add(Flavor::SMC, e);
        add(Flavor::BSMC, e);
    }
    const auto logs = run_all(cfgs);
    const double bs = steady_state_error(logs[0], 2);
    std::vector<double> smc, bsmc;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        smc.push_back(steady_state_error(logs[1 + 2 * i], 2));
        bsmc.push_back(steady_state_error(logs[2 + 2 * i], 2));
    }
    const bool a = bs > bsmc[0];
    bool b = smc[1] > smc[0] && smc[2] > smc[1];
    for (std::size_t i = 0; i < eps.size(); ++i) {
        b = b && bsmc[i] < smc[i];
        if (i > 0) b = b && (bsmc[i] - bsmc[0]) < (smc[i] - smc[0]);
    }
    // (c) late-time SMC points against the sliding line, North channel.
    const PhaseSeries ps = phase_plane(logs[1], 0, base.gains.K1);
    const std::size_t from = ps.z1.size() - ps.z1.size() / 10;
    double band = 0.0;
    for (std::size_t i = from; i < ps.z1.size(); ++i) band = std::max(band, std::abs(ps.z1_dot[i] - ps.slope * ps.z1[i]));
    const bool c = band < 1e-2;
    return {a && b && c,
            fmt("(a) altitude error BS %.4f > BSMC %.4f: %s; (b) SMC %.4f/%.4f/%.4f vs BSMC %.4f/%.4f/%.4f at eps "
                "0.1/0.5/1.0: %s; (c) SMC late-time distance to z1' = -0.2 z1 is %.2e (tol 1e-2): %s",
                bs, bsmc[0], a ? "ok" : "no", smc[0], smc[1], smc[2], bsmc[0], bsmc[1], bsmc[2], b ? "ok" : "no", band,
                c ? "ok" : "no")};
}

struct SeedSet {
    std::vector<TimeSeriesLog> logs;  // one per seed
};

std::vector<double> mean_distance(const SeedSet& s, const Vec3& target) {
    std::vector<double> out(s.logs.front().records.size(), 0.0);
    for (const auto& log : s.logs) {
        const auto d = horizontal_distance(log, target);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += d[i] / static_cast<double>(s.logs.size());
    }
    return out;
}

// Index from which every remaining value stays within `limit`, or npos.
std::size_t settled_from(const std::vector<double>& v, double limit, std::size_t start = 0) {
    std::size_t k = v.size();
    while (k > start && v[k - 1] <= limit) --k;
    return k < v.size() ? k : std::string::npos;
}

std::vector<SeedSet> run_seeds(const ScenarioConfig& base, const std::vector<Flavor>& flavors, int seeds) {
    std::vector<ScenarioConfig> cfgs;
    for (Flavor f : flavors) {
        for (int s = 1; s <= seeds; ++s) {
            ScenarioConfig c = base;
            c.gains.flavor = f;
            c.seed = static_cast<std::uint64_t>(s);
            cfgs.push_back(c);
        }
    }
    auto logs = run_all(cfgs);
    std::vector<SeedSet> out(flavors.size());
    for (std::size_t i = 0; i < logs.size(); ++i) out[i / seeds].logs.push_back(std::move(logs[i]));
    return out;
}

constexpr double kCircle = 2.5;
constexpr double kActualBand = 0.05;  // sliding band of the lagged, saturated loop

Outcome actual_hover_reproduction() {
    const ScenarioConfig base = bundled("actual_hover");
    const std::vector<Flavor> flavors{Flavor::BS, Flavor::SMC, Flavor::BSMC};
    const auto sets = run_seeds(base, flavors, 5);
    const Vec3 target = base.mission.target;

    std::string detail;
    bool all_in = true;
    std::vector<double> overshoot, alt_err;
    for (std::size_t f = 0; f < flavors.size(); ++f) {
        const auto d = mean_distance(sets[f], target);
        const std::size_t k = settled_from(d, kCircle + kActualBand);
        const bool in = k != std::string::npos;
        all_in = all_in && in;

        const std::size_t n = d.size(), w = n / 10;
        std::vector<double> north(n, 0.0);
        double sse = 0.0;
        for (const auto& log : sets[f].logs) {
            for (std::size_t i = 0; i < n; ++i) north[i] += log.records[i].pose.p.x() / 5.0;
            sse += steady_state_error(log, 2) / 5.0;
        }
        const double final_north = std::accumulate(north.end() - static_cast<long>(w), north.end(), 0.0) / w;
        overshoot.push_back(*std::max_element(north.begin(), north.end()) - final_north);
        alt_err.push_back(sse);
        detail += fmt("%s settles %s, overshoot %.3f m, altitude error %.3f m; ", std::string(to_string(flavors[f])).c_str(),
                      in ? fmt("at %.2f s", sets[f].logs.front().records[k].t).c_str() : "never", overshoot.back(),
                      alt_err.back());
    }
    const bool ov = overshoot[0] >= overshoot[2];
    const bool alt = alt_err[1] >= alt_err[2];
    detail += fmt("circle %s, BS >= BSMC overshoot %s, SMC >= BSMC altitude error %s", all_in ? "ok" : "no",
                  ov ? "ok" : "no", alt ? "ok" : "no");
    return {all_in && ov && alt, detail};
}

Outcome windshift_reproduction() {
    const ScenarioConfig base = bundled("windshift");
    const std::vector<Flavor> flavors{Flavor::BS, Flavor::SMC, Flavor::BSMC};
    const auto sets = run_seeds(base, flavors, 5);
    const Vec3 target = base.mission.target;
    const double t_shift = base.wind.shift->time;

    std::string detail;
    bool all_back = true;
    std::vector<double> medians;
    for (std::size_t f = 0; f < flavors.size(); ++f) {
        const auto& recs = sets[f].logs.front().records;
        const std::size_t k0 = static_cast<std::size_t>(
            std::find_if(recs.begin(), recs.end(), [&](const LogRecord& r) { return r.t >= t_shift; }) - recs.begin());
        std::vector<double> peaks;
        for (const auto& log : sets[f].logs) {
            const auto d = horizontal_distance(log, target);
            peaks.push_back(*std::max_element(d.begin() + static_cast<long>(k0), d.end()));
        }
        std::sort(peaks.begin(), peaks.end());
        medians.push_back(peaks[peaks.size() / 2]);
        const auto d = mean_distance(sets[f], target);
        const std::size_t k = settled_from(d, kCircle + kActualBand, k0);
        const bool back = k != std::string::npos && *std::max_element(d.begin() + k0, d.end()) > kCircle;
        all_back = all_back && back;
        detail += fmt("%s median peak %.3f m, back in circle %s; ", std::string(to_string(flavors[f])).c_str(), medians.back(),
                      k != std::string::npos ? fmt("at %.2f s", recs[k].t).c_str() : "never");
    }
    const bool cmp = medians[1] >= medians[2];
    detail += fmt("SMC >= BSMC peak %s", cmp ? "ok" : "no");
    return {all_back && cmp, detail};
}

Outcome numerics() {
    // (i) RK4 order on a tumbling, drifting hull with a fixed wrench.
    const AirshipParams p = default_airship_params();
    const StateBundle s0{BodyState{Vec3(3.0, 0.5, -0.2), Vec3(0.2, -0.3, 0.4)},
                         Pose{Vec3(0, 0, -50), quaternion_from_euler(0.2, -0.1, 0.5)}};
    const Wrench f = Wrench::from_vector((Vec6() << 40, -10, 5, 2, -8, 6).finished());
    const Vec3 v_w(-1.0, 2.0, 0.0);
    auto integrate = [&](double dt) {
        StateBundle s = s0;
        const long n = std::lround(8.0 / dt);
        for (long i = 0; i < n; ++i) s = rk4_step(s, f, v_w, dt, p);
        Eigen::Matrix<double, 13, 1> y;
        y << s.x.vector(), s.pose.vector();
        return y;
    };
    const auto ref = integrate(0.05 / 64.0);
    const double e1 = (integrate(0.05) - ref).norm(), e2 = (integrate(0.025) - ref).norm();
    const double ratio = e1 / e2;
    const bool order = ratio >= 12.0 && ratio <= 20.0;

    // (ii) quaternion norm over 1000 steps.
    StateBundle s = s0;
    double drift = 0.0;
    for (int i = 0; i < 1000; ++i) {
        s = rk4_step(s, f, v_w, 0.01, p);
        drift = std::max(drift, std::abs(s.pose.q.norm() - 1.0));
    }
    const bool norm_ok = drift < 1e-9;

    // (iii) byte-identical CSV logs from two CLI runs of the same config and seed.
    nlohmann::json j = parse_json_text(std::string(*find_bundled("actual_hover")));
    j["t_end"] = 20.0;
    const fs::path dir = fs::temp_directory_path() / "airship_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "cfg.json") << j.dump();
    std::ostringstream sink;
    bool identical = true;
    std::vector<std::string> blobs;
    for (const char* sub : {"a", "b"}) {
        cli::RunManifest m;
        m.scenario = (dir / "cfg.json").string();
        m.out_dir = dir / sub;
        m.seed = 11;
        if (cli::run(m, sink, sink) != cli::kOk) return {false, "CLI run failed: " + sink.str()};
    }
    for (const char* fl : {"bs", "smc", "bsmc"}) {
        const std::string name = std::string(fl) + "_log.csv";
        std::ifstream a(dir / "a" / name, std::ios::binary), b(dir / "b" / name, std::ios::binary);
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        identical = identical && !sa.str().empty() && sa.str() == sb.str();
        blobs.push_back(git_blob_sha1(sa.str()).substr(0, 12));
    }
    return {order && norm_ok && identical,
            fmt("RK4 error ratio %.2f on dt halving (range [12, 20]); max | |q| - 1 | over 1000 steps %.2e (tol 1e-9); "
                "CSV logs %s (bs %s, smc %s, bsmc %s)",
                ratio, drift, identical ? "byte-identical" : "DIFFER", blobs[0].c_str(), blobs[1].c_str(),
                blobs[2].c_str())};
}

}  // namespace

int main(int argc, char** argv) {
    // With an argument, run only the criteria listed (e.g. `acceptance 3 7`).
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    auto wanted = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };

    struct Criterion {
        int id;
        const char* title;
        Outcome (*check)();
    };
    const Criterion all[] = {
        {1, "flavour algebra of the control wrench", flavor_algebra},
        {2, "push-through identity, 60 s ideal hover", push_through},
        {3, "backstepping cross-term cancellation", cross_coupling},
        {4, "reaching and invariance, time-varying switching gain", reaching},
        {5, "dual behaviour with a fixed switching gain", dual_behaviour},
        {6, "critical switching gain bound", rho_crit_bound},
        {7, "ideal-actuator hover: BS / SMC / BSMC ordering", ideal_hover_reproduction},
        {8, "saturated hover, 5 seeds", actual_hover_reproduction},
        {9, "wind-direction step while hovering, 5 seeds", windshift_reproduction},
        {10, "integrator order, quaternion norm, determinism", numerics},
    };
    const auto t0 = std::chrono::steady_clock::now();
    int ran = 0;
    for (const auto& c : all) {
        if (!wanted(c.id)) continue;
        report(c.id, c.title, c.check);
        ++ran;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d of %d criteria passed in %.1f s\n", ran - g_failures, ran, secs);
    return g_failures == 0 && ran > 0 ? 0 : 1;
}
