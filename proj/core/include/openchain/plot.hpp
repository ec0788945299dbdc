#pragma once

// Standalone SVG line charts of one CSV column against t.

#include <filesystem>
#include <string>
#include <vector>

namespace openchain {

/// One polyline per CSV, legend from the file names, zero line drawn.
/// Throws ConfigError for an empty list or unknown column and ShapeError when
/// the files do not share a time grid.
void emit_plot(const std::vector<std::filesystem::path>& csvs, const std::filesystem::path& out,
               const std::string& quantity);

/// Legend label for a CSV path: "<axis>=<value>" suffixes become
/// gamma=2 -> "γ=2", gamma=inf -> "Markov"; otherwise the file stem.
std::string legend_label(const std::filesystem::path& csv);

}  // namespace openchain
