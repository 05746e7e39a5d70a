#include "qdc/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qdc/config_io.hpp"

#ifndef QDC_VERSION
#define QDC_VERSION "unknown"
#endif

namespace qdc {

using nlohmann::json;
namespace fs = std::filesystem;

std::string to_string(ExportFormat f) { return f == ExportFormat::Csv ? "csv" : "json"; }

ExportFormat parse_format(const std::string& name) {
  if (name == "csv") return ExportFormat::Csv;
  if (name == "json") return ExportFormat::Json;
  throw ConfigError("unknown format '" + name + "' (expected csv or json)");
}

std::string tool_version() { return QDC_VERSION; }

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json diagnostics_json(const SolveDiagnostics& d) {
  return {{"trace_preservation", d.trace_preservation},
          {"hamiltonian_hermiticity", d.hamiltonian_hermiticity},
          {"steady_state_residual", d.steady_state_residual},
          {"density_hermiticity", d.density_hermiticity},
          {"density_trace_error", d.density_trace_error},
          {"density_min_eigenvalue", d.density_min_eigenvalue}};
}

fs::path with_suffix(const fs::path& stem, const std::string& suffix) { return fs::path(stem.string() + suffix); }

std::vector<double> parse_csv_row(const std::string& line, const fs::path& path, std::size_t line_no) {
  std::vector<double> out;
  const char* p = line.data();
  const char* end = line.data() + line.size();
  while (p < end) {
    double v = 0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc{})
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": cannot parse number");
    out.push_back(v);
    p = next;
    if (p < end && *p == ',') ++p;
    else if (p < end && *p != '\r') throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected ','");
    else break;
  }
  return out;
}

std::vector<std::vector<double>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      double probe = 0;
      if (std::from_chars(line.data(), line.data() + line.size(), probe).ec != std::errc{}) continue;  // header
    }
    rows.push_back(parse_csv_row(line, path, line_no));
  }
  return rows;
}

}  // namespace

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
}

json spectrum_metadata(const SpectrumResult& spec, const SystemConfig& cfg) {
  return {{"tool", "qdcascade"},
          {"version", tool_version()},
          {"kind", "spectrum"},
          {"config_hash", config_hash(cfg)},
          {"config", to_json(cfg)},
          {"phonons", spec.phonons},
          {"source", to_string(spec.source)},
          {"normalization", spec.normalization},
          {"diagnostics", diagnostics_json(spec.diagnostics)}};
}

json map_metadata(const SweepMap& map, const SystemConfig& cfg) {
  json diags = json::array();
  for (const auto& d : map.diagnostics) diags.push_back(diagnostics_json(d));
  return {{"tool", "qdcascade"},
          {"version", tool_version()},
          {"kind", map.axis1_name == "omega" ? "power-sweep" : "detuning-sweep"},
          {"config_hash", config_hash(cfg)},
          {"config", to_json(cfg)},
          {"axis1", map.axis1_name},
          {"axis2_reference", map.axis2_reference},
          {"normalization", to_string(map.normalization)},
          {"row_scale", map.row_scale},
          {"most_negative", map.most_negative},
          {"diagnostics", diags}};
}

fs::path export_spectrum(const SpectrumResult& spec, const SystemConfig& cfg, const fs::path& stem,
                         ExportFormat format) {
  fs::path data;
  if (format == ExportFormat::Csv) {
    std::string text = "omega_ueV,intensity\n";
    for (std::size_t k = 0; k < spec.omega.size(); ++k)
      text += fmt17(spec.omega[k]) + "," + fmt17(spec.intensity[k]) + "\n";
    data = with_suffix(stem, ".csv");
    write_text_file(data, text);
  } else {
    json j{{"omega", spec.omega},
           {"intensity", spec.intensity},
           {"config_hash", spec.config_hash},
           {"phonons", spec.phonons},
           {"source", to_string(spec.source)},
           {"normalization", spec.normalization}};
    data = with_suffix(stem, ".json");
    write_text_file(data, j.dump(1) + "\n");
  }
  write_text_file(with_suffix(stem, ".meta.json"), spectrum_metadata(spec, cfg).dump(2) + "\n");
  return data;
}

std::vector<fs::path> export_map(const SweepMap& map, const SystemConfig& cfg, const fs::path& stem,
                                 ExportFormat format) {
  std::vector<fs::path> written;
  if (format == ExportFormat::Csv) {
    std::string matrix;
    for (Eigen::Index r = 0; r < map.values.rows(); ++r) {
      for (Eigen::Index c = 0; c < map.values.cols(); ++c) {
        if (c) matrix += ',';
        matrix += fmt17(map.values(r, c));
      }
      matrix += '\n';
    }
    auto axis_text = [](const std::string& name, const std::vector<double>& axis) {
      std::string text = name + "\n";
      for (double v : axis) text += fmt17(v) + "\n";
      return text;
    };
    written = {with_suffix(stem, "_matrix.csv"), with_suffix(stem, "_axis1.csv"), with_suffix(stem, "_axis2.csv")};
    write_text_file(written[0], matrix);
    write_text_file(written[1], axis_text(map.axis1_name + "_ueV", map.axis1));
    write_text_file(written[2], axis_text("energy_from_" + map.axis2_reference + "_ueV", map.axis2));
  } else {
    json rows = json::array();
    for (Eigen::Index r = 0; r < map.values.rows(); ++r) {
      std::vector<double> row(map.values.row(r).begin(), map.values.row(r).end());
      rows.push_back(row);
    }
    json j{{"axis1_name", map.axis1_name},
           {"axis1", map.axis1},
           {"axis2_reference", map.axis2_reference},
           {"axis2", map.axis2},
           {"normalization", to_string(map.normalization)},
           {"values", rows}};
    written = {with_suffix(stem, ".json")};
    write_text_file(written[0], j.dump() + "\n");
  }
  written.push_back(with_suffix(stem, ".meta.json"));
  write_text_file(written.back(), map_metadata(map, cfg).dump(2) + "\n");
  return written;
}

SpectrumResult import_spectrum(const fs::path& path) {
  SpectrumResult out;
  if (path.extension() == ".json") {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
      const json j = json::parse(in);
      out.omega = j.at("omega").get<std::vector<double>>();
      out.intensity = j.at("intensity").get<std::vector<double>>();
      out.config_hash = j.value("config_hash", "");
      out.phonons = j.value("phonons", false);
      out.source = parse_source(j.value("source", "y-dipole"));
      out.normalization = j.value("normalization", 1.0);
    } catch (const json::exception& e) {
      throw IoError(path.string() + ": " + e.what());
    }
  } else {
    for (const auto& row : read_csv(path)) {
      if (row.size() != 2) throw IoError(path.string() + ": expected two columns");
      out.omega.push_back(row[0]);
      out.intensity.push_back(row[1]);
    }
  }
  if (out.omega.size() != out.intensity.size()) throw IoError(path.string() + ": column lengths differ");
  return out;
}

Eigen::MatrixXd import_matrix_csv(const fs::path& path) {
  const auto rows = read_csv(path);
  if (rows.empty()) return {};
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size()) throw IoError(path.string() + ": ragged matrix");
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  }
  return m;
}

std::array<int, 3> viridis(double t) {
  // Polynomial fit to the matplotlib viridis table.
  static constexpr double c[7][3] = {
      {0.2777273272234177, 0.005407344544966578, 0.3340998053353061},
      {0.1050930431085774, 1.404613529898575, 1.384590162594685},
      {-0.3308618287255563, 0.214847559468213, 0.09509516302823659},
      {-4.634230498983486, -5.799100973351585, -19.33244095627987},
      {6.228269936347081, 14.17993336680509, 56.69055260068105},
      {4.776384997670288, -13.74514537774601, -65.35303263337234},
      {-5.435455855934631, 4.645852612178535, 26.3124352495832},
  };
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  std::array<int, 3> rgb{};
  for (int ch = 0; ch < 3; ++ch) {
    double v = c[6][ch];
    for (int k = 5; k >= 0; --k) v = v * t + c[k][ch];
    rgb[static_cast<std::size_t>(ch)] = static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255));
  }
  return rgb;
}

std::string render_heatmap_svg(const SweepMap& map) {
  const auto rows = map.values.rows();
  const auto cols = map.values.cols();
  const double top = map.values.size() > 0 ? map.values.maxCoeff() : 0.0;
  const double scale = top > 0 ? 1.0 / top : 0.0;
  constexpr int kWidth = 640, kHeight = 480, kLeft = 70, kBottom = 50, kTop = 10, kRight = 10;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth + kLeft + kRight << "\" height=\""
      << kHeight + kTop + kBottom << "\">\n";
  svg << "<svg id=\"heatmap\" x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << cols << " " << rows << "\" preserveAspectRatio=\"none\" data-rows=\""
      << rows << "\" data-cols=\"" << cols << "\" shape-rendering=\"crispEdges\">\n";
  char colour[8];
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index y = rows - 1 - r;  // first sweep value at the bottom
    Eigen::Index c = 0;
    while (c < cols) {
      const auto level = std::lround(map.values(r, c) * scale * 255);
      Eigen::Index end = c + 1;
      while (end < cols && std::lround(map.values(r, end) * scale * 255) == level) ++end;
      const auto rgb = viridis(static_cast<double>(level) / 255.0);
      std::snprintf(colour, sizeof colour, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
      svg << "<rect x=\"" << c << "\" y=\"" << y << "\" width=\"" << end - c << "\" height=\"1\" fill=\"" << colour
          << "\"/>\n";
      c = end;
    }
  }
  svg << "</svg>\n";

  auto label = [&](double x, double y, const std::string& text, const char* anchor) {
    svg << "<text x=\"" << x << "\" y=\"" << y << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\""
        << anchor << "\">" << text << "</text>\n";
  };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return std::string(buf);
  };
  if (!map.axis2.empty()) {
    label(kLeft, kTop + kHeight + 16, num(map.axis2.front()), "start");
    label(kLeft + kWidth, kTop + kHeight + 16, num(map.axis2.back()), "end");
  }
  label(kLeft + kWidth / 2.0, kTop + kHeight + 36, "energy from " + map.axis2_reference + " (ueV)", "middle");
  if (!map.axis1.empty()) {
    label(kLeft - 6, kTop + kHeight, num(map.axis1.front()), "end");
    label(kLeft - 6, kTop + 12, num(map.axis1.back()), "end");
  }
  label(kLeft - 6, kTop + kHeight / 2.0, map.axis1_name + " (ueV)", "end");
  svg << "</svg>\n";
  return svg.str();
}

fs::path write_heatmap_svg(const SweepMap& map, const fs::path& path) {
  write_text_file(path, render_heatmap_svg(map));
  return path;
}

}  // namespace qdc
