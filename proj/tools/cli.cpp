#include "cli.hpp"

#include "airship/analysis.hpp"
#include "airship/bundled.hpp"
#include "airship/config.hpp"
#include "airship/log_io.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <map>
#include <sstream>

namespace airship::cli {

namespace {

using nlohmann::json;

constexpr const char* kToolVersion = "airship_ctl 1.0";

json load_scenario_json(const std::string& scenario) {
    const std::filesystem::path p(scenario);
    if (std::filesystem::exists(p)) return read_json_file(p);
    if (const auto text = find_bundled(scenario)) return parse_json_text(std::string(*text));
    throw ConfigError("--scenario", "'" + scenario + "' is neither a file nor a bundled scenario");
}

std::vector<std::string> split_flavors(const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    for (const auto& item : raw) {
        std::stringstream ss(item);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (!tok.empty()) out.push_back(tok);
        }
    }
    return out;
}

void write_csv_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns, const json& meta) {
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << format_number(columns[c][r]);
        os << '\n';
    }
    write_with_sidecar(path, os.str(), meta);
}

void write_comparisons(const std::filesystem::path& dir, const std::vector<TimeSeriesLog>& logs, const json& meta) {
    if (logs.empty()) return;
    std::vector<double> t;
    for (const auto& r : logs.front().records) t.push_back(r.t);

    auto table = [&](const std::string& file, const std::vector<std::string>& stems, auto&& get) {
        std::vector<std::string> header{"t"};
        std::vector<std::vector<double>> cols{t};
        for (const auto& log : logs) {
            for (std::size_t k = 0; k < stems.size(); ++k) {
                header.push_back(std::string(to_string(log.flavor)) + "_" + stems[k]);
                std::vector<double> c;
                c.reserve(log.records.size());
                for (const auto& r : log.records) c.push_back(get(r, k));
                cols.push_back(std::move(c));
            }
        }
        write_csv_table(dir / file, header, cols, meta);
    };

    table("compare_phase_plane.csv", {"z1_N", "z1dot_N", "z1_D", "z1dot_D"}, [](const LogRecord& r, std::size_t k) {
        const int ch = k < 2 ? 0 : 2;
        return k % 2 == 0 ? r.err.z1[ch] : r.err.z1_dot[ch];
    });
    table("compare_ned.csv", {"N", "E", "D"}, [](const LogRecord& r, std::size_t k) { return r.pose.p[static_cast<int>(k)]; });
    table("compare_wrench.csv", {"X", "Y", "Z", "L", "M", "N"},
          [](const LogRecord& r, std::size_t k) { return r.f_applied.vector()[static_cast<int>(k)]; });
}

int run_airship(const RunManifest& m, const json& doc, std::ostream& out) {
    ScenarioConfig base = scenario_from_json(doc);
    if (m.seed) base.seed = *m.seed;
    if (m.mode) {
        try {
            base.mode = parse_actuator_mode(*m.mode);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("--mode", e.what());
        }
    }
    if (m.eps) base.gains.eps = *m.eps;
    if (m.switch_mode) {
        try {
            base.gains.switch_mode = parse_switch_mode(*m.switch_mode);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("--switch", e.what());
        }
    }
    try {
        base.gains.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("--eps", e.what());
    }

    std::vector<Flavor> flavors;
    const auto names = m.flavors.empty() ? std::vector<std::string>{"bs", "smc", "bsmc"} : split_flavors(m.flavors);
    if (names.empty()) throw ConfigError("--flavors", "empty flavor list");
    for (const auto& n : names) {
        try {
            flavors.push_back(parse_flavor(n));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("--flavors", e.what());
        }
    }

    std::vector<std::future<TimeSeriesLog>> jobs;
    std::vector<ScenarioConfig> configs;
    for (Flavor f : flavors) {
        ScenarioConfig c = base;
        c.gains.flavor = f;
        configs.push_back(c);
    }
    for (const auto& c : configs) jobs.push_back(std::async(std::launch::async, [&c] { return run_scenario(c); }));
    std::vector<TimeSeriesLog> logs;
    for (auto& j : jobs) logs.push_back(j.get());

    std::filesystem::create_directories(m.out_dir);
    for (std::size_t i = 0; i < logs.size(); ++i) {
        const std::string flavor(to_string(configs[i].gains.flavor));
        json meta = {{"tool", kToolVersion}, {"flavor", flavor}, {"config", scenario_to_json(configs[i])}};
        if (m.emit_csv) {
            std::ostringstream os;
            write_log_csv(logs[i], os);
            write_with_sidecar(m.out_dir / (flavor + "_log.csv"), os.str(), meta);
        }
        if (m.emit_metrics) {
            write_text_file(m.out_dir / (flavor + "_metrics.json"), metrics_report(logs[i], configs[i]).dump(2) + "\n");
        }
        out << flavor << ": " << logs[i].records.size() << " steps\n";
    }
    if (m.emit_plots) {
        json meta = {{"tool", kToolVersion}, {"scenario", base.name}, {"seed", base.seed}};
        write_comparisons(m.out_dir, logs, meta);
    }
    return kOk;
}

int run_siso(const RunManifest& m, const json& doc, std::ostream& out) {
    SisoScenario s = siso_scenario_from_json(doc);
    if (!m.flavors.empty()) {
        s.laws.clear();
        for (const auto& n : split_flavors(m.flavors)) {
            try {
                s.laws.push_back(parse_siso_law(n));
            } catch (const std::invalid_argument& e) {
                throw ConfigError("--flavors", e.what());
            }
        }
        if (s.laws.empty()) throw ConfigError("--flavors", "empty law list");
    }
    const auto gains = s.gains();
    const auto plant = siso::double_integrator();
    const Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(s.x0.data(), static_cast<Eigen::Index>(s.x0.size()));

    std::filesystem::create_directories(m.out_dir);
    for (auto law : s.laws) {
        const auto samples = siso::simulate(law, plant, gains, x0, s.dt, s.t_end);
        const std::string name(to_string(law));
        json meta = {{"tool", kToolVersion}, {"law", name}, {"config", siso_scenario_to_json(s)}};
        if (m.emit_csv) {
            std::ostringstream os;
            write_siso_csv(samples, os);
            write_with_sidecar(m.out_dir / (name + "_log.csv"), os.str(), meta);
        }
        if (m.emit_metrics) {
            std::vector<double> t, sigma, sds, vdot;
            for (const auto& smp : samples) {
                t.push_back(smp.t);
                sigma.push_back(smp.sigma);
                sds.push_back(smp.sigma_sigmadot);
                vdot.push_back(smp.v_dot);
            }
            const auto reach = settle_time(t, sigma, 1e-3);
            const auto dual = dual_behavior_detector(t, sds, vdot);
            json metrics = {{"scenario", s.name},
                            {"law", name},
                            {"samples", samples.size()},
                            {"reaching_time", reach ? json(*reach) : json()},
                            {"dual_behavior_intervals", dual.size()},
                            {"final_abs_z", samples.back().z.cwiseAbs().maxCoeff()},
                            {"rms_u", rms([&] {
                                 std::vector<double> u;
                                 for (const auto& smp : samples) u.push_back(smp.u);
                                 return u;
                             }())}};
            write_text_file(m.out_dir / (name + "_metrics.json"), metrics.dump(2) + "\n");
        }
        out << name << ": " << samples.size() << " steps\n";
    }
    return kOk;
}

}  // namespace

int run(const RunManifest& manifest, std::ostream& out, std::ostream& err) {
    try {
        const json doc = load_scenario_json(manifest.scenario);
        int code = scenario_kind(doc) == ScenarioKind::Siso ? run_siso(manifest, doc, out)
                                                            : run_airship(manifest, doc, out);
        if (code == kOk && manifest.plot_cmd) {
            const std::string cmd = *manifest.plot_cmd + " \"" + manifest.out_dir.string() + "\"";
            if (std::system(cmd.c_str()) != 0) err << "warning: plot command failed: " << cmd << "\n";
        }
        return code;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const NumericalBlowup& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "io error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    }
}

int list_scenarios(std::ostream& out) {
    for (const auto& s : bundled_scenarios()) {
        std::string description;
        try {
            const json j = parse_json_text(std::string(s.json));
            description = j.value("description", "");
        } catch (const ConfigError&) {
        }
        out << s.name << "  " << description << "\n";
    }
    return kOk;
}

}  // namespace airship::cli
