#include "qdc/config_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>

namespace qdc {

using nlohmann::json;

namespace {

json complex_to_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

std::complex<double> complex_from_json(const json& j, const std::string& key) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError(key + ": expected a number or [re, im]");
}

// Reads known keys of one JSON object; unknown keys are rejected, keys starting with '_' are
// free-form comments.
class Section {
 public:
  Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw ConfigError(name_ + ": expected an object");
  }
  ~Section() = default;

  template <typename T>
  Section& get(const char* key, T& target) {
    seen_.insert(key);
    if (auto it = j_.find(key); it != j_.end()) {
      try {
        target = it->template get<T>();
      } catch (const json::exception& e) {
        throw ConfigError(path(key) + ": " + e.what());
      }
    }
    return *this;
  }

  const json* child(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string path(const std::string& key) const { return name_.empty() ? key : name_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key()) && it.key().rfind('_', 0) != 0) throw ConfigError("unknown config key '" + path(it.key()) + "'");
  }

 private:
  const json& j_;
  std::string name_;
  std::set<std::string> seen_;
};

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
}

}  // namespace

std::string to_string(SweepSettings::Normalization n) {
  return n == SweepSettings::Normalization::PerRow ? "per-row" : "global";
}

SweepSettings::Normalization parse_normalization(const std::string& name) {
  if (name == "per-row") return SweepSettings::Normalization::PerRow;
  if (name == "global") return SweepSettings::Normalization::Global;
  throw ConfigError("unknown normalization '" + name + "' (expected per-row or global)");
}

json to_json(const SystemConfig& c) {
  json drive = json::object();
  if (c.drive.omega) drive["omega"] = *c.drive.omega;
  if (c.drive.eta1) drive["eta1"] = complex_to_json(*c.drive.eta1);
  if (c.drive.eta2) drive["eta2"] = complex_to_json(*c.drive.eta2);
  if (c.drive.splitting) drive["splitting"] = *c.drive.splitting;

  const auto& r = c.rates;
  const auto& p = c.phonon.params;
  return json{
      {"energies", {{"x_exciton", c.energies.x_exciton}, {"y_exciton", c.energies.y_exciton},
                    {"biexciton", c.energies.biexciton}}},
      {"cavity_split", c.cavity_split},
      {"laser_detuning", c.laser_detuning},
      {"couplings", {{"g1x", c.couplings.g1x}, {"g2x", c.couplings.g2x}, {"g1y", c.couplings.g1y},
                     {"g2y", c.couplings.g2y}}},
      {"rates", {{"gamma_x_g", r.gamma_x_g}, {"gamma_y_g", r.gamma_y_g}, {"gamma_xx_x", r.gamma_xx_x},
                 {"gamma_xx_y", r.gamma_xx_y}, {"dephasing_x_g", r.dephasing_x_g},
                 {"dephasing_y_g", r.dephasing_y_g}, {"dephasing_xx_x", r.dephasing_xx_x},
                 {"dephasing_xx_y", r.dephasing_xx_y}, {"kappa_x", r.kappa_x}, {"kappa_y", r.kappa_y}}},
      {"drive", drive},
      {"phonon", {{"enable", c.phonon.enable}, {"alpha_p", p.alpha_p}, {"omega_b", p.omega_b},
                  {"temperature", p.temperature}, {"xx_scaling", p.xx_scaling}}},
      {"numerics", {{"n_max_y", c.numerics.n_max_y}, {"grid_span", c.numerics.grid_span},
                    {"grid_points", c.numerics.grid_points},
                    {"kernel_threshold", c.numerics.steady_state.kernel_threshold}}},
      {"source", to_string(c.source)},
      {"normalize", c.normalize},
      {"include_coherent", c.include_coherent},
      {"dipole_weighted", c.dipole_weighted},
  };
}

SystemConfig config_from_json(const json& j) {
  SystemConfig c;
  Section top(j, "");
  if (const json* e = top.child("energies")) {
    Section s(*e, "energies");
    s.get("x_exciton", c.energies.x_exciton).get("y_exciton", c.energies.y_exciton).get("biexciton", c.energies.biexciton);
    s.finish();
  }
  top.get("cavity_split", c.cavity_split).get("laser_detuning", c.laser_detuning);
  if (const json* e = top.child("couplings")) {
    Section s(*e, "couplings");
    s.get("g1x", c.couplings.g1x).get("g2x", c.couplings.g2x).get("g1y", c.couplings.g1y).get("g2y", c.couplings.g2y);
    s.finish();
  }
  if (const json* e = top.child("rates")) {
    auto& r = c.rates;
    Section s(*e, "rates");
    s.get("gamma_x_g", r.gamma_x_g).get("gamma_y_g", r.gamma_y_g).get("gamma_xx_x", r.gamma_xx_x)
        .get("gamma_xx_y", r.gamma_xx_y).get("dephasing_x_g", r.dephasing_x_g).get("dephasing_y_g", r.dephasing_y_g)
        .get("dephasing_xx_x", r.dephasing_xx_x).get("dephasing_xx_y", r.dephasing_xx_y)
        .get("kappa_x", r.kappa_x).get("kappa_y", r.kappa_y);
    s.finish();
  }
  if (const json* e = top.child("drive")) {
    // An explicit drive section replaces the default drive entirely.
    c.drive = DriveConfig{};
    Section s(*e, "drive");
    double value = 0;
    if (e->contains("omega")) c.drive.omega = (s.get("omega", value), value);
    if (e->contains("splitting")) c.drive.splitting = (s.get("splitting", value), value);
    if (const json* z = s.child("eta1")) c.drive.eta1 = complex_from_json(*z, "drive.eta1");
    if (const json* z = s.child("eta2")) c.drive.eta2 = complex_from_json(*z, "drive.eta2");
    s.finish();
  }
  if (const json* e = top.child("phonon")) {
    auto& p = c.phonon.params;
    Section s(*e, "phonon");
    s.get("enable", c.phonon.enable).get("alpha_p", p.alpha_p).get("omega_b", p.omega_b)
        .get("temperature", p.temperature).get("xx_scaling", p.xx_scaling);
    s.finish();
  }
  if (const json* e = top.child("numerics")) {
    Section s(*e, "numerics");
    s.get("n_max_y", c.numerics.n_max_y).get("grid_span", c.numerics.grid_span)
        .get("grid_points", c.numerics.grid_points).get("kernel_threshold", c.numerics.steady_state.kernel_threshold);
    s.finish();
  }
  std::string source = to_string(c.source);
  top.get("source", source).get("normalize", c.normalize).get("include_coherent", c.include_coherent)
      .get("dipole_weighted", c.dipole_weighted);
  c.source = parse_source(source);
  top.child("sweep");  // read separately by sweep_settings_from_json
  top.finish();
  c.validate();
  return c;
}

json to_json(const SweepSettings& s) {
  return json{{"normalization", to_string(s.normalization)},
              {"power_points", s.power_points},
              {"max_splitting", s.max_splitting},
              {"detuning_points", s.detuning_points},
              {"detuning_span", s.detuning_span},
              {"zero_detuning_splitting", s.zero_detuning_splitting}};
}

SweepSettings sweep_settings_from_json(const json& j) {
  SweepSettings out;
  auto it = j.find("sweep");
  if (it == j.end()) return out;
  Section s(*it, "sweep");
  std::string norm = to_string(out.normalization);
  s.get("normalization", norm).get("power_points", out.power_points).get("max_splitting", out.max_splitting)
      .get("detuning_points", out.detuning_points).get("detuning_span", out.detuning_span)
      .get("zero_detuning_splitting", out.zero_detuning_splitting);
  s.finish();
  out.normalization = parse_normalization(norm);
  if (out.power_points < 2 || out.detuning_points < 2) throw ConfigError("sweep: need at least 2 points");
  return out;
}

SystemConfig load_config(const std::filesystem::path& path) { return config_from_json(read_json_file(path)); }

SweepSettings load_sweep_settings(const std::filesystem::path& path) {
  return sweep_settings_from_json(read_json_file(path));
}

std::string config_hash(const SystemConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_json(cfg).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qdc
