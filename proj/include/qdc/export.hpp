#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdc/sweep.hpp"
#include "qdc/system.hpp"

namespace qdc {

enum class ExportFormat { Csv, Json };

std::string to_string(ExportFormat f);
ExportFormat parse_format(const std::string& name);

std::string tool_version();

/// Reproducibility sidecar: tool version, full config, its hash and run diagnostics.
nlohmann::json spectrum_metadata(const SpectrumResult& spec, const SystemConfig& cfg);
nlohmann::json map_metadata(const SweepMap& map, const SystemConfig& cfg);

/// Writes `<stem>.csv` or `<stem>.json` plus `<stem>.meta.json`. Returns the data file path.
std::filesystem::path export_spectrum(const SpectrumResult& spec, const SystemConfig& cfg,
                                      const std::filesystem::path& stem, ExportFormat format);

/// CSV: `<stem>_matrix.csv`, `<stem>_axis1.csv`, `<stem>_axis2.csv`; JSON: `<stem>.json`.
/// Always adds `<stem>.meta.json`. Returns the written paths.
std::vector<std::filesystem::path> export_map(const SweepMap& map, const SystemConfig& cfg,
                                              const std::filesystem::path& stem, ExportFormat format);

/// Reads a spectrum written by export_spectrum in either format.
SpectrumResult import_spectrum(const std::filesystem::path& path);
/// Reads back the matrix of a CSV map export.
Eigen::MatrixXd import_matrix_csv(const std::filesystem::path& path);

/// Viridis colormap, t clamped to [0, 1]; returns 8-bit RGB.
std::array<int, 3> viridis(double t);

/// One cell per matrix entry (viewBox is cols x rows), runs of equal colour merged.
std::string render_heatmap_svg(const SweepMap& map);
std::filesystem::path write_heatmap_svg(const SweepMap& map, const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace qdc
