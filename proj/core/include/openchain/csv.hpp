#pragma once

#include <filesystem>
#include <string>

#include "openchain/dynamics.hpp"

namespace openchain {

/// Shortest round-trip decimal, independent of the global locale.
std::string format_double(double x);

/// Header row of kColumnNames, then one row per sample. Throws IoError.
void write_csv(const TrajectoryRecord& record, const std::filesystem::path& path);

/// Reads a file written by write_csv. Only the samples are restored.
TrajectoryRecord read_csv(const std::filesystem::path& path);

/// Writes `text` to `path`, creating parent directories. Throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace openchain
