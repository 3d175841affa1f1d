#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace airship::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kNumericalFailure = 2, kIoError = 3 };

struct RunManifest {
    std::string scenario;                   ///< path to a JSON file or a bundled name
    std::vector<std::string> flavors;       ///< empty: bs, smc, bsmc (or every configured SISO law)
    std::filesystem::path out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> mode;        ///< ideal | actual
    std::optional<double> eps;
    std::optional<std::string> switch_mode; ///< fixed | timevarying
    bool emit_csv = true;
    bool emit_metrics = true;
    bool emit_plots = true;                 ///< comparison data files
    std::optional<std::string> plot_cmd;    ///< run as `<plot_cmd> <out_dir>` after writing
};

/// Runs every requested flavor and writes its outputs.  Diagnostics go to `err`.
int run(const RunManifest& manifest, std::ostream& out, std::ostream& err);

/// Prints the bundled scenario names with their descriptions.
int list_scenarios(std::ostream& out);

}  // namespace airship::cli
