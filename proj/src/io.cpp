// SPDX-License-Identifier: Apache-2.0
#include "llwork/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "llwork/errors.hpp"

namespace llwork::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) ensure_directory(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_csv(const std::filesystem::path& path, const Metadata& metadata, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out = open_out(path);
  for (const auto& [k, v] : metadata) out << "# " << k << " = " << v << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
    out << '\n';
  }
  if (!out) throw NumericError("write failed: " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out = open_out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw NumericError("write failed: " + path.string());
}

void write_svg_heatmap(const std::filesystem::path& path, const linalg::Matrix& values, const std::string& title,
                       int cell_pixels) {
  std::ofstream out = open_out(path);
  const long rows = values.rows(), cols = values.cols();
  const double hi = rows * cols > 0 ? values.maxCoeff() : 0.0;
  const double lo = rows * cols > 0 ? values.minCoeff() : 0.0;
  const double span = hi > lo ? hi - lo : 1.0;
  const long w = cols * cell_pixels, h = rows * cell_pixels;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h + 16
      << "\" shape-rendering=\"crispEdges\">\n";
  out << "<text x=\"2\" y=\"12\" font-family=\"monospace\" font-size=\"11\">" << title << "</text>\n";
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) {
      const int g = 255 - static_cast<int>(std::lround(255.0 * std::clamp((values(i, j) - lo) / span, 0.0, 1.0)));
      out << "<rect x=\"" << j * cell_pixels << "\" y=\"" << 16 + (rows - 1 - i) * cell_pixels << "\" width=\""
          << cell_pixels << "\" height=\"" << cell_pixels << "\" fill=\"rgb(" << g << ',' << g << ',' << g
          << ")\"/>\n";
    }
  out << "</svg>\n";
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create directory '" + dir.string() + "': " + ec.message());
}

}  // namespace llwork::io
