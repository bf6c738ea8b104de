#include "qlp/io.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qlp/units.hpp"
#include "qlp/version.hpp"

namespace qlp::io {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::vector<double> split_numbers(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    size_t pos = 0;
    out.push_back(std::stod(cell, &pos));
  }
  return out;
}

bool header_line(const std::string& line) {
  return !line.empty() && !(std::isdigit(static_cast<unsigned char>(line[0])) ||
                            line[0] == '-' || line[0] == '+' || line[0] == '.');
}

}  // namespace

std::string profile_to_csv(const LineProfile& profile) {
  std::string out = "detuning_mhz,probability\n";
  for (Eigen::Index i = 0; i < profile.detunings.size(); ++i) {
    out += fmt(units::rad_s_to_mhz(profile.detunings[i]));
    out += ',';
    out += fmt(profile.probabilities[i]);
    out += '\n';
  }
  return out;
}

LineProfile profile_from_csv(std::istream& in) {
  std::vector<double> d, p;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || header_line(line)) continue;
    const auto cells = split_numbers(line);
    if (cells.size() < 2) throw std::invalid_argument("profile csv: need two columns");
    d.push_back(units::mhz_to_rad_s(cells[0]));
    p.push_back(cells[1]);
  }
  LineProfile out;
  out.detunings = Eigen::Map<const Eigen::ArrayXd>(d.data(), d.size());
  out.probabilities = Eigen::Map<const Eigen::ArrayXd>(p.data(), p.size());
  out.provenance = "numeric";
  out.validate();
  return out;
}

std::string profiles_to_csv(const std::vector<LineProfile>& profiles,
                            const std::vector<std::string>& names) {
  if (profiles.empty() || profiles.size() != names.size())
    throw std::invalid_argument("profiles csv: need one name per profile");
  const Eigen::ArrayXd& grid = profiles.front().detunings;
  for (const auto& p : profiles)
    if (p.detunings.size() != grid.size() ||
        ((p.detunings - grid).abs() > 1e-9).any())
      throw std::invalid_argument("profiles csv: profiles must share the grid");
  std::string out = "detuning_mhz";
  for (const auto& n : names) out += "," + n;
  out += '\n';
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    out += fmt(units::rad_s_to_mhz(grid[i]));
    for (const auto& p : profiles) {
      out += ',';
      out += fmt(p.probabilities[i]);
    }
    out += '\n';
  }
  return out;
}

std::string dataset_to_csv(const DataSet& data) {
  std::string out = "detuning_mhz,probability,shots\n";
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    out += fmt(units::rad_s_to_mhz(data.detunings[i]));
    out += ',';
    out += fmt(data.probabilities[i]);
    out += ',';
    out += std::to_string(data.shots[i]);
    out += '\n';
  }
  return out;
}

DataSet dataset_from_csv(std::istream& in) {
  std::vector<double> d, p;
  std::vector<int> s;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || header_line(line)) continue;
    const auto cells = split_numbers(line);
    if (cells.size() < 2) throw std::invalid_argument("dataset csv: need at least two columns");
    d.push_back(units::mhz_to_rad_s(cells[0]));
    p.push_back(cells[1]);
    s.push_back(cells.size() >= 3 ? static_cast<int>(std::lround(cells[2])) : 1);
  }
  DataSet out;
  out.detunings = Eigen::Map<const Eigen::ArrayXd>(d.data(), d.size());
  out.probabilities = Eigen::Map<const Eigen::ArrayXd>(p.data(), p.size());
  out.shots = Eigen::Map<const Eigen::ArrayXi>(s.data(), s.size());
  out.validate();
  return out;
}

std::string sampled_pulse_to_csv(const SampledPulse& pulse) {
  std::string out = "t_ns,omega_mhz\n";
  for (Eigen::Index i = 0; i < pulse.samples.size(); ++i) {
    const double t = (static_cast<double>(i) + 0.5) * pulse.dt;
    out += fmt(units::s_to_ns(t));
    out += ',';
    out += fmt(units::rad_s_to_mhz(pulse.samples[i]));
    out += '\n';
  }
  return out;
}

json pulse_spec_to_json(const PulseSpec& spec) {
  return json{{"kind", to_string(spec.kind)},
              {"omega0_mhz", units::rad_s_to_mhz(spec.omega0)},
              {"tau_ns", units::s_to_ns(spec.tau)},
              {"duration_ns", units::s_to_ns(spec.duration)}};
}

PulseSpec pulse_spec_from_json(const json& j) {
  PulseSpec spec;
  spec.kind = pulse_kind_from_string(j.at("kind").get<std::string>());
  spec.omega0 = units::mhz_to_rad_s(j.at("omega0_mhz").get<double>());
  spec.tau = units::ns_to_s(j.at("tau_ns").get<double>());
  spec.duration = units::ns_to_s(j.at("duration_ns").get<double>());
  spec.validate();
  return spec;
}

json profile_to_json(const LineProfile& profile, const PulseSpec& spec) {
  json j;
  j["pulse"] = pulse_spec_to_json(spec);
  j["provenance"] = profile.provenance;
  auto& d = j["detuning_mhz"] = json::array();
  auto& p = j["probability"] = json::array();
  for (Eigen::Index i = 0; i < profile.detunings.size(); ++i) {
    d.push_back(units::rad_s_to_mhz(profile.detunings[i]));
    p.push_back(profile.probabilities[i]);
  }
  return j;
}

json experiment_config_to_json(const ExperimentConfig& config) {
  return json{{"pulse", pulse_spec_to_json(config.pulse)},
              {"grid_center_khz", units::rad_s_to_khz(config.grid_center)},
              {"grid_span_mhz", units::rad_s_to_mhz(config.grid_span)},
              {"grid_points", config.grid_points},
              {"shots", config.shots},
              {"eps0", config.eps0},
              {"eps1", config.eps1},
              {"delta0_khz", units::rad_s_to_khz(config.delta0)},
              {"seed", config.seed},
              {"dt_ns", units::s_to_ns(config.dt)}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig config;
  config.pulse = pulse_spec_from_json(j.at("pulse"));
  if (j.contains("grid_center_khz"))
    config.grid_center = units::khz_to_rad_s(j["grid_center_khz"].get<double>());
  if (j.contains("grid_span_mhz"))
    config.grid_span = units::mhz_to_rad_s(j["grid_span_mhz"].get<double>());
  if (j.contains("grid_points")) config.grid_points = j["grid_points"].get<int>();
  if (j.contains("shots")) config.shots = j["shots"].get<int>();
  if (j.contains("eps0")) config.eps0 = j["eps0"].get<double>();
  if (j.contains("eps1")) config.eps1 = j["eps1"].get<double>();
  if (j.contains("delta0_khz"))
    config.delta0 = units::khz_to_rad_s(j["delta0_khz"].get<double>());
  if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("dt_ns")) config.dt = units::ns_to_s(j["dt_ns"].get<double>());
  config.validate();
  return config;
}

json fit_result_to_json(const FitResult& result) {
  json params = json::object();
  for (size_t i = 0; i < result.param_names.size(); ++i) {
    const auto& name = result.param_names[i];
    double value = result.params[static_cast<Eigen::Index>(i)];
    if (name == "delta0") {
      params["delta0_khz"] = units::rad_s_to_khz(value);
    } else if (name == "k") {
      // curvature reported per MHz^2
      const double per_mhz2 = value * units::mhz_to_rad_s(1.0) *
                              units::mhz_to_rad_s(1.0);
      params["k_per_mhz2"] = per_mhz2;
    } else {
      params[name] = value;
    }
  }
  json cov = json::array();
  for (Eigen::Index r = 0; r < result.covariance.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < result.covariance.cols(); ++c)
      row.push_back(result.covariance(r, c));
    cov.push_back(row);
  }
  // covariance entries follow param_order in the params' native units
  // (delta0 in rad/s, the lorentzian curvature in (rad/s)^-2)
  return json{{"model", result.model},
              {"params", params},
              {"param_order", result.param_names},
              {"covariance", cov},
              {"mae", result.mae},
              {"ofi", result.ofi},
              {"sdrf_khz", result.sdrf_hz * 1e-3},
              {"cost", result.cost},
              {"converged", result.converged},
              {"iterations", result.iterations},
              {"restarts", result.restarts}};
}

json calibration_result_to_json(const CalibrationResult& result) {
  const double lo = result.grid.size() ? result.grid[0] : 0.0;
  const double hi =
      result.grid.size() ? result.grid[result.grid.size() - 1] : 0.0;
  return json{{"kind", to_string(result.kind)},
              {"form", to_string(result.form)},
              {"a", result.a},
              {"residual", result.residual},
              {"grid_spec",
               json{{"lo_mhz", units::rad_s_to_mhz(lo)},
                    {"hi_mhz", units::rad_s_to_mhz(hi)},
                    {"points", result.grid.size()}}}};
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string digest_hex(std::string_view bytes) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

RunManifest make_manifest(const std::string& subcommand,
                          const std::vector<std::string>& inputs,
                          const std::vector<std::string>& outputs,
                          std::string_view config_bytes) {
  RunManifest m;
  m.subcommand = subcommand;
  m.inputs = inputs;
  m.outputs = outputs;
  m.config_digest = digest_hex(config_bytes);
  m.tool_version = std::string(version);
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  m.timestamp_utc = buf;
  return m;
}

void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& output_path) {
  const json j{{"subcommand", manifest.subcommand},
               {"inputs", manifest.inputs},
               {"outputs", manifest.outputs},
               {"config_digest", manifest.config_digest},
               {"tool_version", manifest.tool_version},
               {"timestamp_utc", manifest.timestamp_utc}};
  std::filesystem::path p = output_path;
  p += ".manifest.json";
  write_text_file(p, j.dump(2) + "\n");
}

void write_text_file(const std::filesystem::path& path,
                     std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace qlp::io
