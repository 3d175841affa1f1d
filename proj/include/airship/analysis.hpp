#pragma once

// Post-run metrics over immutable logs.

#include "airship/sim.hpp"

#include <json.hpp>

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace airship {

struct ChannelOutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};
struct EmptyWindow : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Error pairs (z1_i, z1_i') of one channel, with the sliding line z1' = slope * z1.
struct PhaseSeries {
    int channel = 0;
    std::vector<double> t;
    std::vector<double> z1;
    std::vector<double> z1_dot;
    double slope = 0.0;  ///< -K1_ii
};

PhaseSeries phase_plane(const TimeSeriesLog& log, int channel, const Vec7& K1);

/// First time after which |values| < tol at every remaining sample; nullopt if the last sample
/// is not inside.
std::optional<double> settle_time(std::span<const double> t, std::span<const double> values, double tol);

/// settle_time of sigma_i = z2_i.
std::optional<double> reaching_time(const TimeSeriesLog& log, int channel, double tol);

double rms(std::span<const double> series);

/// Mean |z1_i| over the final `fraction` of the run.
double steady_state_error(const TimeSeriesLog& log, int channel, double fraction = 0.1);

std::vector<double> lyapunov_trace(const TimeSeriesLog& log);

struct Interval {
    double t_begin = 0.0;
    double t_end = 0.0;
};

/// Maximal runs of samples where sigma' sigma_dot > 0 while V' < 0.
std::vector<Interval> dual_behavior_detector(std::span<const double> t, std::span<const double> sigma_sigmadot,
                                             std::span<const double> v_dot);
std::vector<Interval> dual_behavior_detector(const TimeSeriesLog& log);

/// Horizontal distance of the vehicle from `target` at every sample.
std::vector<double> horizontal_distance(const TimeSeriesLog& log, const Vec3& target);

/// Summary written as <flavor>_metrics.json.
nlohmann::json metrics_report(const TimeSeriesLog& log, const ScenarioConfig& cfg);

}  // namespace airship
