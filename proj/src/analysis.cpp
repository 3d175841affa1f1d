#include "airship/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace airship {

namespace {

void check_channel(int channel) {
    if (channel < 0 || channel > 6) throw ChannelOutOfRange("channel " + std::to_string(channel) + " not in 0..6");
}

std::vector<double> times(const TimeSeriesLog& log) {
    std::vector<double> t;
    t.reserve(log.records.size());
    for (const auto& r : log.records) t.push_back(r.t);
    return t;
}

template <typename F>
std::vector<double> column(const TimeSeriesLog& log, F&& f) {
    std::vector<double> out;
    out.reserve(log.records.size());
    for (const auto& r : log.records) out.push_back(f(r));
    return out;
}

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

}  // namespace

PhaseSeries phase_plane(const TimeSeriesLog& log, int channel, const Vec7& K1) {
    check_channel(channel);
    PhaseSeries ps;
    ps.channel = channel;
    ps.slope = -K1[channel];
    ps.t = times(log);
    ps.z1 = column(log, [&](const LogRecord& r) { return r.err.z1[channel]; });
    ps.z1_dot = column(log, [&](const LogRecord& r) { return r.err.z1_dot[channel]; });
    return ps;
}

std::optional<double> settle_time(std::span<const double> t, std::span<const double> values, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    if (t.size() != values.size()) throw std::invalid_argument("time and value series differ in length");
    std::optional<double> result;
    for (std::size_t i = values.size(); i-- > 0;) {
        if (!(std::abs(values[i]) < tol)) break;
        result = t[i];
    }
    return result;
}

std::optional<double> reaching_time(const TimeSeriesLog& log, int channel, double tol) {
    check_channel(channel);
    const auto t = times(log);
    const auto s = column(log, [&](const LogRecord& r) { return r.err.z2[channel]; });
    return settle_time(t, s, tol);
}

double rms(std::span<const double> series) {
    if (series.empty()) throw EmptyWindow("rms of an empty series");
    double acc = 0.0;
    for (double v : series) acc += v * v;
    return std::sqrt(acc / static_cast<double>(series.size()));
}

double steady_state_error(const TimeSeriesLog& log, int channel, double fraction) {
    check_channel(channel);
    if (!(fraction > 0.0 && fraction <= 1.0)) throw EmptyWindow("window fraction must be in (0, 1]");
    const auto n = log.records.size();
    const auto count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
    if (n == 0 || count == 0) throw EmptyWindow("steady-state window holds no samples");
    double acc = 0.0;
    for (std::size_t i = n - count; i < n; ++i) acc += std::abs(log.records[i].err.z1[channel]);
    return acc / static_cast<double>(count);
}

std::vector<double> lyapunov_trace(const TimeSeriesLog& log) {
    return column(log, [](const LogRecord& r) { return r.v2; });
}

std::vector<Interval> dual_behavior_detector(std::span<const double> t, std::span<const double> sigma_sigmadot,
                                             std::span<const double> v_dot) {
    if (t.size() != sigma_sigmadot.size() || t.size() != v_dot.size()) {
        throw std::invalid_argument("series differ in length");
    }
    std::vector<Interval> out;
    bool open = false;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const bool dual = sigma_sigmadot[i] > 0.0 && v_dot[i] < 0.0;
        if (dual && !open) {
            out.push_back({t[i], t[i]});
            open = true;
        } else if (dual) {
            out.back().t_end = t[i];
        } else {
            open = false;
        }
    }
    return out;
}

std::vector<Interval> dual_behavior_detector(const TimeSeriesLog& log) {
    const auto t = times(log);
    const auto sds = column(log, [](const LogRecord& r) { return r.sigma_sigmadot; });
    const auto vd = column(log, [](const LogRecord& r) { return r.v2_dot; });
    return dual_behavior_detector(t, sds, vd);
}

std::vector<double> horizontal_distance(const TimeSeriesLog& log, const Vec3& target) {
    return column(log, [&](const LogRecord& r) { return (r.pose.p - target).head<2>().norm(); });
}

nlohmann::json metrics_report(const TimeSeriesLog& log, const ScenarioConfig& cfg) {
    using nlohmann::json;
    json m;
    m["scenario"] = log.scenario;
    m["flavor"] = std::string(to_string(log.flavor));
    m["seed"] = log.seed;
    m["dt"] = log.dt;
    m["samples"] = log.records.size();
    if (log.records.empty()) return m;

    static const char* kAxes[] = {"X", "Y", "Z", "L", "M", "N"};
    json rms_cmd, rms_app;
    for (int a = 0; a < 6; ++a) {
        rms_cmd[kAxes[a]] = rms(column(log, [&](const LogRecord& r) { return r.f_cmd.vector()[a]; }));
        rms_app[kAxes[a]] = rms(column(log, [&](const LogRecord& r) { return r.f_applied.vector()[a]; }));
    }
    m["rms_wrench_commanded"] = rms_cmd;
    m["rms_wrench_applied"] = rms_app;

    const double band = cfg.mode == ActuatorMode::Ideal ? 1e-3 : 0.05;
    json sse = json::array(), reach = json::array();
    for (int c = 0; c < 7; ++c) {
        sse.push_back(steady_state_error(log, c, 0.1));
        reach.push_back(optional_json(reaching_time(log, c, band)));
    }
    m["steady_state_error"] = sse;
    m["sliding_band"] = band;
    m["reaching_time"] = reach;

    const auto& last = log.records.back();
    m["final_position"] = {last.pose.p.x(), last.pose.p.y(), last.pose.p.z()};
    m["final_v2"] = last.v2;
    const auto v2 = lyapunov_trace(log);
    m["max_v2"] = *std::max_element(v2.begin(), v2.end());
    const auto dual = dual_behavior_detector(log);
    m["dual_behavior_intervals"] = dual.size();
    double dual_time = 0.0;
    for (const auto& iv : dual) dual_time += iv.t_end - iv.t_begin + log.dt;
    m["dual_behavior_duration"] = dual_time;

    if (cfg.mission.kind == MissionConfig::Kind::Positioning) {
        const auto d = horizontal_distance(log, cfg.mission.target);
        const auto t = times(log);
        const double radius = cfg.mission.tolerance_radius;
        m["max_horizontal_distance"] = *std::max_element(d.begin(), d.end());
        m["final_horizontal_distance"] = d.back();
        std::optional<double> entry;
        if (radius > 0.0) entry = settle_time(t, d, radius);
        m["circle_entry_time"] = optional_json(entry);
        double overshoot_n = 0.0;
        const double start_n = log.records.front().pose.p.x() - cfg.mission.target.x();
        for (const auto& r : log.records) {
            const double n = r.pose.p.x() - cfg.mission.target.x();
            if (start_n < 0.0) overshoot_n = std::max(overshoot_n, n);
            else overshoot_n = std::max(overshoot_n, -n);
        }
        m["north_overshoot"] = overshoot_n;
    }
    return m;
}

}  // namespace airship
