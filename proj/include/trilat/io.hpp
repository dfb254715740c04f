#pragma once

#include <string>
#include <vector>

#include "trilat/geometry.hpp"
#include "trilat/measurement.hpp"
#include "trilat/reconstruct.hpp"

namespace trilat {

// JSON text for the file formats. Floats use 17 significant digits.
std::string dataset_to_json(const DataSet& data);
std::string configuration_to_json(const Configuration& cfg);
std::string paths_to_json(const std::vector<Path>& paths);
/// Per-value explanation: [{"value_index", "value", "path"}].
std::string labeling_to_json(const std::vector<Explanation>& labeling, const DataSet& data);

// Parsers throw FormatError on malformed input.
DataSet dataset_from_json(const std::string& text);
Configuration configuration_from_json(const std::string& text);
std::vector<Path> paths_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

/// Scatter plot of a planar configuration with the given loops or paths as
/// polylines. Throws InvalidArgument unless cfg.dim() == 2.
std::string render_svg(const Configuration& cfg, const std::vector<Path>& paths);

}  // namespace trilat
