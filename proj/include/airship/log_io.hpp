#pragma once

#include "airship/sim.hpp"
#include "airship/siso.hpp"

#include <json.hpp>

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace airship {

/// Column names of the airship time-series CSV, in order.
std::vector<std::string> log_columns();

/// One row per record, numbers printed with %.17g so they round-trip exactly.
void write_log_csv(const TimeSeriesLog& log, std::ostream& out);

std::vector<std::string> siso_log_columns(int order);
void write_siso_csv(const std::vector<siso::SisoSample>& samples, std::ostream& out);

/// Hex SHA-1 of "blob <size>\0" + content (the git object id of the bytes).
std::string git_blob_sha1(const std::string& content);

/// Writes `text` to `path` and a sidecar `path.json` holding `metadata` plus the blob hash of
/// the written bytes.  Throws IoError.
void write_with_sidecar(const std::filesystem::path& path, const std::string& text, nlohmann::json metadata);

void write_text_file(const std::filesystem::path& path, const std::string& text);

/// %.17g.
std::string format_number(double v);

}  // namespace airship
