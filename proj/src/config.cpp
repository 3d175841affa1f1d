#include "airship/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

namespace airship {

using nlohmann::json;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct Hull {
    double semi_length = 5.5;
    double radius = 1.275;
    double added_mass_ratio = 0.2;
};

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path.empty() ? "<document>" : path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> known) {
    for (const auto& [key, _] : j.items()) {
        if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
            throw ConfigError(join(path, key), "unknown key");
        }
    }
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
    return v;
}

double number_or(const json& obj, const char* key, const std::string& path, double fallback) {
    return obj.contains(key) ? number(obj.at(key), join(path, key)) : fallback;
}

std::string string_or(const json& obj, const char* key, const std::string& path, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_string()) throw ConfigError(join(path, key), "expected a string");
    return obj.at(key).get<std::string>();
}

std::vector<double> number_list(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

template <int N>
Eigen::Matrix<double, N, 1> fixed_vec(const json& j, const std::string& path, bool allow_scalar = false) {
    Eigen::Matrix<double, N, 1> v;
    if (allow_scalar && j.is_number()) {
        v.setConstant(number(j, path));
        return v;
    }
    const auto list = number_list(j, path);
    if (static_cast<int>(list.size()) != N) {
        throw ConfigError(path, "expected " + std::to_string(N) + " entries, got " + std::to_string(list.size()));
    }
    for (int i = 0; i < N; ++i) v[i] = list[static_cast<std::size_t>(i)];
    return v;
}

template <int N>
Eigen::Matrix<double, N, 1> fixed_vec_or(const json& obj, const char* key, const std::string& path,
                                         const Eigen::Matrix<double, N, 1>& fallback, bool allow_scalar = false) {
    return obj.contains(key) ? fixed_vec<N>(obj.at(key), join(path, key), allow_scalar) : fallback;
}

template <typename Vec>
json to_array(const Vec& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

template <typename Fn>
auto wrap(const std::string& path, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        // Validators report "<block>.<key>: message"; re-root the key under `path`.
        const std::string msg = e.what();
        const auto colon = msg.find(": ");
        const auto dot = msg.find('.');
        if (colon != std::string::npos && dot != std::string::npos && dot < colon &&
            msg.find(' ') > colon) {
            throw ConfigError(join(path, msg.substr(dot + 1, colon - dot - 1)), msg.substr(colon + 2));
        }
        throw ConfigError(path, msg);
    }
}

Mat3 ellipsoid_inertia(double m, const Hull& h) {
    const double a = h.semi_length, b = h.radius;
    return Vec3(2.0 * b * b, a * a + b * b, a * a + b * b).asDiagonal() * (m / 5.0);
}

MissionConfig mission_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    MissionConfig m;
    const std::string kind = string_or(j, "kind", path, "positioning");
    if (kind == "positioning") {
        reject_unknown(j, path, {"kind", "target", "tolerance_radius"});
        m.kind = MissionConfig::Kind::Positioning;
        m.target = fixed_vec_or<3>(j, "target", path, Vec3::Zero());
        m.tolerance_radius = number_or(j, "tolerance_radius", path, 0.0);
        if (m.tolerance_radius < 0.0) throw ConfigError(join(path, "tolerance_radius"), "must be >= 0");
    } else if (kind == "path") {
        reject_unknown(j, path, {"kind", "launch", "semi_north", "semi_east", "altitude", "climb_rate", "ground_speed",
                                 "laps", "shift_start", "shift_duration", "shift_height"});
        m.kind = MissionConfig::Kind::PathTracking;
        auto& p = m.path;
        p.launch = fixed_vec_or<3>(j, "launch", path, p.launch);
        p.semi_north = number_or(j, "semi_north", path, p.semi_north);
        p.semi_east = number_or(j, "semi_east", path, p.semi_east);
        p.altitude = number_or(j, "altitude", path, p.altitude);
        p.climb_rate = number_or(j, "climb_rate", path, p.climb_rate);
        p.ground_speed = number_or(j, "ground_speed", path, p.ground_speed);
        if (j.contains("laps")) {
            if (!j.at("laps").is_number_integer()) throw ConfigError(join(path, "laps"), "expected an integer");
            p.laps = j.at("laps").get<int>();
        }
        p.shift_start = number_or(j, "shift_start", path, p.shift_start);
        p.shift_duration = number_or(j, "shift_duration", path, p.shift_duration);
        p.shift_height = number_or(j, "shift_height", path, p.shift_height);
        wrap(path, [&] { return PathMission(p), 0; });
    } else if (kind == "velocity") {
        reject_unknown(j, path, {"kind", "v_d"});
        m.kind = MissionConfig::Kind::VelocityTracking;
        m.v_d = fixed_vec_or<3>(j, "v_d", path, Vec3::Zero());
    } else {
        throw ConfigError(join(path, "kind"), "unknown mission kind '" + kind + "' (positioning, path, velocity)");
    }
    return m;
}

json mission_to_json(const MissionConfig& m) {
    switch (m.kind) {
        case MissionConfig::Kind::Positioning:
            return {{"kind", "positioning"}, {"target", to_array(m.target)}, {"tolerance_radius", m.tolerance_radius}};
        case MissionConfig::Kind::PathTracking: {
            const auto& p = m.path;
            return {{"kind", "path"},
                    {"launch", to_array(p.launch)},
                    {"semi_north", p.semi_north},
                    {"semi_east", p.semi_east},
                    {"altitude", p.altitude},
                    {"climb_rate", p.climb_rate},
                    {"ground_speed", p.ground_speed},
                    {"laps", p.laps},
                    {"shift_start", p.shift_start},
                    {"shift_duration", p.shift_duration},
                    {"shift_height", p.shift_height}};
        }
        case MissionConfig::Kind::VelocityTracking:
            return {{"kind", "velocity"}, {"v_d", to_array(m.v_d)}};
    }
    return {};
}

}  // namespace

ConfigError::ConfigError(std::string field_, const std::string& message)
    : std::runtime_error(field_ + ": " + message), field(std::move(field_)) {}

AirshipParams params_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"m", "m_w", "c", "g", "M", "hull", "aero", "sat", "tau_act"});
    AirshipParams p = default_airship_params();
    p.m = number_or(j, "m", path, p.m);
    p.m_w = number_or(j, "m_w", path, p.m_w);
    p.c = fixed_vec_or<3>(j, "c", path, p.c);
    p.g = fixed_vec_or<3>(j, "g", path, p.g);
    if (j.contains("M")) {
        const json& mj = j.at("M");
        const std::string mp = join(path, "M");
        if (!mj.is_array() || mj.size() != 6) throw ConfigError(mp, "expected a 6x6 array");
        for (int r = 0; r < 6; ++r) p.M.row(r) = fixed_vec<6>(mj[static_cast<std::size_t>(r)], mp + "[" + std::to_string(r) + "]");
    } else {
        Hull h;
        if (j.contains("hull")) {
            const json& hj = j.at("hull");
            const std::string hp = join(path, "hull");
            require_object(hj, hp);
            reject_unknown(hj, hp, {"semi_length", "radius", "added_mass_ratio"});
            h.semi_length = number_or(hj, "semi_length", hp, h.semi_length);
            h.radius = number_or(hj, "radius", hp, h.radius);
            h.added_mass_ratio = number_or(hj, "added_mass_ratio", hp, h.added_mass_ratio);
            if (!(h.semi_length > 0.0 && h.radius > 0.0)) throw ConfigError(hp, "dimensions must be > 0");
            if (!(h.added_mass_ratio >= 0.0)) throw ConfigError(join(hp, "added_mass_ratio"), "must be >= 0");
        }
        p.M = mass_matrix(p.m, p.c, ellipsoid_inertia(p.m, h), h.added_mass_ratio);
    }
    if (j.contains("aero")) {
        const json& aj = j.at("aero");
        const std::string ap = join(path, "aero");
        require_object(aj, ap);
        reject_unknown(aj, ap, {"linear", "quadratic"});
        p.aero.linear = fixed_vec_or<6>(aj, "linear", ap, p.aero.linear);
        p.aero.quadratic = fixed_vec_or<6>(aj, "quadratic", ap, p.aero.quadratic);
    }
    p.sat = fixed_vec_or<6>(j, "sat", path, p.sat, true);
    p.tau_act = number_or(j, "tau_act", path, p.tau_act);
    wrap(path, [&] { return p.validate(), 0; });
    return p;
}

json params_to_json(const AirshipParams& p) {
    json M = json::array();
    for (int r = 0; r < 6; ++r) M.push_back(to_array(Vec6(p.M.row(r).transpose())));
    return {{"m", p.m},
            {"m_w", p.m_w},
            {"c", to_array(p.c)},
            {"g", to_array(p.g)},
            {"M", M},
            {"aero", {{"linear", to_array(p.aero.linear)}, {"quadratic", to_array(p.aero.quadratic)}}},
            {"sat", to_array(p.sat)},
            {"tau_act", p.tau_act}};
}

GainSet gains_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"flavor", "K1", "L1", "L2", "Ls", "eps", "rho0", "switch_mode"});
    GainSet g;
    if (j.contains("flavor")) {
        const std::string fp = join(path, "flavor");
        g.flavor = wrap(fp, [&] { return parse_flavor(string_or(j, "flavor", path, "")); });
    }
    g.K1 = fixed_vec_or<7>(j, "K1", path, g.K1, true);
    g.L1 = fixed_vec_or<7>(j, "L1", path, g.L1, true);
    g.L2 = fixed_vec_or<7>(j, "L2", path, g.L2, true);
    g.Ls = fixed_vec_or<7>(j, "Ls", path, g.Ls, true);
    g.eps = number_or(j, "eps", path, g.eps);
    g.rho0 = number_or(j, "rho0", path, g.rho0);
    if (j.contains("switch_mode")) {
        const std::string sp = join(path, "switch_mode");
        g.switch_mode = wrap(sp, [&] { return parse_switch_mode(string_or(j, "switch_mode", path, "")); });
    }
    wrap(path, [&] { return g.validate(), 0; });
    return g;
}

json gains_to_json(const GainSet& g) {
    return {{"flavor", std::string(to_string(g.flavor))},
            {"K1", to_array(g.K1)},
            {"L1", to_array(g.L1)},
            {"L2", to_array(g.L2)},
            {"Ls", to_array(g.Ls)},
            {"eps", g.eps},
            {"rho0", g.rho0},
            {"switch_mode", std::string(to_string(g.switch_mode))}};
}

ScenarioKind scenario_kind(const json& j) {
    require_object(j, "");
    const std::string kind = string_or(j, "kind", "", "airship");
    if (kind == "airship") return ScenarioKind::Airship;
    if (kind == "siso") return ScenarioKind::Siso;
    throw ConfigError("kind", "unknown scenario kind '" + kind + "' (airship, siso)");
}

ScenarioConfig scenario_from_json(const json& j) {
    require_object(j, "");
    reject_unknown(j, "", {"kind", "name", "description", "dt", "t_end", "mode", "seed", "rng", "wind", "wind_estimate",
                           "initial", "mission", "gains", "params", "controller_model", "blowup_bound"});
    ScenarioConfig cfg;
    cfg.name = string_or(j, "name", "", cfg.name);
    cfg.dt = number_or(j, "dt", "", cfg.dt);
    if (!(cfg.dt > 0.0)) throw ConfigError("dt", "must be > 0");
    cfg.t_end = number_or(j, "t_end", "", cfg.t_end);
    if (!(cfg.t_end >= cfg.dt)) throw ConfigError("t_end", "must be >= dt");
    if (j.contains("mode")) cfg.mode = wrap("mode", [&] { return parse_actuator_mode(string_or(j, "mode", "", "")); });
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed", "expected a non-negative integer");
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    cfg.rng = string_or(j, "rng", "", cfg.rng);
    if (cfg.rng != kRngAlgorithm) throw ConfigError("rng", "only '" + std::string(kRngAlgorithm) + "' is supported");
    cfg.blowup_bound = number_or(j, "blowup_bound", "", cfg.blowup_bound);
    if (!(cfg.blowup_bound > 0.0)) throw ConfigError("blowup_bound", "must be > 0");

    if (j.contains("wind")) {
        const json& w = j.at("wind");
        require_object(w, "wind");
        reject_unknown(w, "wind", {"speed", "incidence_deg", "turbulence_std", "shift"});
        cfg.wind.speed = number_or(w, "speed", "wind", 0.0);
        if (cfg.wind.speed < 0.0) throw ConfigError("wind.speed", "must be >= 0");
        cfg.wind.incidence_deg = number_or(w, "incidence_deg", "wind", 0.0);
        cfg.wind.turbulence_std = number_or(w, "turbulence_std", "wind", 0.0);
        if (cfg.wind.turbulence_std < 0.0) throw ConfigError("wind.turbulence_std", "must be >= 0");
        if (w.contains("shift")) {
            const json& s = w.at("shift");
            require_object(s, "wind.shift");
            reject_unknown(s, "wind.shift", {"time", "speed", "incidence_deg"});
            WindShift shift;
            shift.time = number_or(s, "time", "wind.shift", 0.0);
            shift.speed = number_or(s, "speed", "wind.shift", cfg.wind.speed);
            if (shift.speed < 0.0) throw ConfigError("wind.shift.speed", "must be >= 0");
            shift.incidence_deg = number_or(s, "incidence_deg", "wind.shift", cfg.wind.incidence_deg);
            cfg.wind.shift = shift;
        }
    }
    if (j.contains("wind_estimate")) {
        const json& w = j.at("wind_estimate");
        require_object(w, "wind_estimate");
        reject_unknown(w, "wind_estimate", {"bias", "noise_std", "include_turbulence"});
        cfg.wind_estimate.bias = fixed_vec_or<3>(w, "bias", "wind_estimate", Vec3::Zero());
        cfg.wind_estimate.noise_std = number_or(w, "noise_std", "wind_estimate", 0.0);
        if (cfg.wind_estimate.noise_std < 0.0) throw ConfigError("wind_estimate.noise_std", "must be >= 0");
        if (w.contains("include_turbulence")) {
            if (!w.at("include_turbulence").is_boolean()) {
                throw ConfigError("wind_estimate.include_turbulence", "expected true or false");
            }
            cfg.wind_estimate.include_turbulence = w.at("include_turbulence").get<bool>();
        }
    }
    if (j.contains("initial")) {
        const json& ic = j.at("initial");
        require_object(ic, "initial");
        reject_unknown(ic, "initial", {"position", "euler_deg", "quaternion", "v_a", "omega"});
        if (ic.contains("euler_deg") && ic.contains("quaternion")) {
            throw ConfigError("initial.quaternion", "give either euler_deg or quaternion, not both");
        }
        cfg.initial_pose.p = fixed_vec_or<3>(ic, "position", "initial", Vec3::Zero());
        if (ic.contains("quaternion")) {
            const Vec4 q = fixed_vec<4>(ic.at("quaternion"), "initial.quaternion");
            if (std::abs(q.norm() - 1.0) > 1e-9) throw ConfigError("initial.quaternion", "must be a unit quaternion");
            cfg.initial_pose.q = q;
        } else {
            const Vec3 e = fixed_vec_or<3>(ic, "euler_deg", "initial", Vec3::Zero()) * kDeg;
            cfg.initial_pose.q = quaternion_from_euler(e[0], e[1], e[2]);
        }
        cfg.initial_state.v_a = fixed_vec_or<3>(ic, "v_a", "initial", Vec3::Zero());
        cfg.initial_state.omega = fixed_vec_or<3>(ic, "omega", "initial", Vec3::Zero());
    }
    if (j.contains("mission")) cfg.mission = mission_from_json(j.at("mission"), "mission");
    if (j.contains("gains")) cfg.gains = gains_from_json(j.at("gains"));

    const json plant_json = j.contains("params") ? j.at("params") : json::object();
    cfg.plant = params_from_json(plant_json, "params");
    if (j.contains("controller_model")) {
        require_object(j.at("controller_model"), "controller_model");
        json merged = plant_json;
        merged.merge_patch(j.at("controller_model"));
        cfg.model = params_from_json(merged, "controller_model");
    } else {
        cfg.model = cfg.plant;
    }
    return cfg;
}

json scenario_to_json(const ScenarioConfig& cfg) {
    json wind = {{"speed", cfg.wind.speed},
                 {"incidence_deg", cfg.wind.incidence_deg},
                 {"turbulence_std", cfg.wind.turbulence_std}};
    if (cfg.wind.shift) {
        wind["shift"] = {{"time", cfg.wind.shift->time},
                         {"speed", cfg.wind.shift->speed},
                         {"incidence_deg", cfg.wind.shift->incidence_deg}};
    }
    return {{"kind", "airship"},
            {"name", cfg.name},
            {"dt", cfg.dt},
            {"t_end", cfg.t_end},
            {"mode", std::string(to_string(cfg.mode))},
            {"seed", cfg.seed},
            {"rng", cfg.rng},
            {"blowup_bound", cfg.blowup_bound},
            {"wind", wind},
            {"wind_estimate",
             {{"bias", to_array(cfg.wind_estimate.bias)},
              {"noise_std", cfg.wind_estimate.noise_std},
              {"include_turbulence", cfg.wind_estimate.include_turbulence}}},
            {"initial",
             {{"position", to_array(cfg.initial_pose.p)},
              {"quaternion", to_array(cfg.initial_pose.q)},
              {"v_a", to_array(cfg.initial_state.v_a)},
              {"omega", to_array(cfg.initial_state.omega)}}},
            {"mission", mission_to_json(cfg.mission)},
            {"gains", gains_to_json(cfg.gains)},
            {"params", params_to_json(cfg.plant)},
            {"controller_model", params_to_json(cfg.model)}};
}

siso::SisoLaw parse_siso_law(std::string_view s) {
    if (s == "bsmc1") return siso::SisoLaw::BSMC1;
    if (s == "bsmc2") return siso::SisoLaw::BSMC2;
    if (s == "smc") return siso::SisoLaw::SMC;
    throw std::invalid_argument("unknown law '" + std::string(s) + "' (bsmc1, bsmc2, smc)");
}

std::string_view to_string(siso::SisoLaw law) {
    switch (law) {
        case siso::SisoLaw::BSMC1: return "bsmc1";
        case siso::SisoLaw::BSMC2: return "bsmc2";
        case siso::SisoLaw::SMC: return "smc";
    }
    return "?";
}

siso::SisoGains SisoScenario::gains() const {
    return siso::SisoGains(k, lambda, c, rho, rho_mode, rho0);
}

SisoScenario siso_scenario_from_json(const json& j) {
    require_object(j, "");
    reject_unknown(j, "", {"kind", "name", "description", "order", "k", "lambda", "c", "rho", "rho_mode", "rho0", "x0",
                           "dt", "t_end", "laws"});
    SisoScenario s;
    s.name = string_or(j, "name", "", s.name);
    if (j.contains("order")) {
        if (!j.at("order").is_number_integer()) throw ConfigError("order", "expected an integer");
        s.order = j.at("order").get<int>();
    }
    if (s.order < 2 || s.order > 3) throw ConfigError("order", "supported orders are 2 and 3");
    const auto n = static_cast<std::size_t>(s.order);
    auto sized = [&](const char* key, std::size_t want, std::vector<double> fallback) {
        if (!j.contains(key)) {
            fallback.resize(want, fallback.empty() ? 1.0 : fallback.back());
            return fallback;
        }
        auto v = number_list(j.at(key), key);
        if (v.size() != want) {
            throw ConfigError(key, "expected " + std::to_string(want) + " entries, got " + std::to_string(v.size()));
        }
        return v;
    };
    s.k = sized("k", n - 1, s.k);
    s.lambda = sized("lambda", n, s.lambda);
    s.c = sized("c", n - 1, s.c);
    s.x0 = sized("x0", n, {1.0, 0.0, 0.0});
    s.rho = number_or(j, "rho", "", s.rho);
    s.rho0 = number_or(j, "rho0", "", s.rho0);
    const std::string mode = string_or(j, "rho_mode", "", "fixed");
    if (mode == "fixed") {
        s.rho_mode = siso::RhoMode::Fixed;
    } else if (mode == "timevarying") {
        s.rho_mode = siso::RhoMode::TimeVarying;
    } else {
        throw ConfigError("rho_mode", "expected fixed or timevarying");
    }
    s.dt = number_or(j, "dt", "", s.dt);
    if (!(s.dt > 0.0)) throw ConfigError("dt", "must be > 0");
    s.t_end = number_or(j, "t_end", "", s.t_end);
    if (!(s.t_end >= s.dt)) throw ConfigError("t_end", "must be >= dt");
    if (j.contains("laws")) {
        if (!j.at("laws").is_array() || j.at("laws").empty()) throw ConfigError("laws", "expected a non-empty array");
        s.laws.clear();
        for (std::size_t i = 0; i < j.at("laws").size(); ++i) {
            const std::string lp = "laws[" + std::to_string(i) + "]";
            if (!j.at("laws")[i].is_string()) throw ConfigError(lp, "expected a string");
            s.laws.push_back(wrap(lp, [&] { return parse_siso_law(j.at("laws")[i].get<std::string>()); }));
        }
    }
    wrap("", [&] { return s.gains(), 0; });
    return s;
}

json siso_scenario_to_json(const SisoScenario& s) {
    json laws = json::array();
    for (auto l : s.laws) laws.push_back(std::string(to_string(l)));
    return {{"kind", "siso"},
            {"name", s.name},
            {"order", s.order},
            {"k", s.k},
            {"lambda", s.lambda},
            {"c", s.c},
            {"rho", s.rho},
            {"rho_mode", s.rho_mode == siso::RhoMode::Fixed ? "fixed" : "timevarying"},
            {"rho0", s.rho0},
            {"x0", s.x0},
            {"dt", s.dt},
            {"t_end", s.t_end},
            {"laws", laws}};
}

json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", e.what());
    }
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str());
}

}  // namespace airship
