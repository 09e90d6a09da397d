// SPDX-License-Identifier: Apache-2.0
//
// Output helpers.  All numbers go through format_number so identical inputs
// give identical bytes.
#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "llwork/linalg.hpp"

namespace llwork::io {

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Shortest round-trip decimal form ("inf", "-inf", "nan" for non-finite).
std::string format_number(double x);

/// CSV with '#'-prefixed "key = value" header lines, a column-name row and
/// numeric rows.
void write_csv(const std::filesystem::path& path, const Metadata& metadata, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

/// Pretty JSON (2-space indent) with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// Grayscale heat map, one rect per cell, row 0 at the bottom.
void write_svg_heatmap(const std::filesystem::path& path, const linalg::Matrix& values, const std::string& title,
                       int cell_pixels = 2);

/// Creates the directory (and parents) if missing.
void ensure_directory(const std::filesystem::path& dir);

}  // namespace llwork::io
