#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlp/calibration.hpp"
#include "qlp/dynamics.hpp"
#include "qlp/experiment.hpp"
#include "qlp/fit.hpp"
#include "qlp/pulse.hpp"

namespace qlp::io {

using json = nlohmann::json;

// ---- CSV ----
// Profiles: header "detuning_mhz,probability".
// Datasets: header "detuning_mhz,probability,shots" (a two-column file reads
// back with shots = 1 per point, for fitting noiseless simulated curves).
// Sampled pulses: header "t_ns,omega_mhz" at the sample midpoints.

std::string profile_to_csv(const LineProfile& profile);
LineProfile profile_from_csv(std::istream& in);

// One shared detuning column and one probability column per profile; all
// profiles must share the grid.
std::string profiles_to_csv(const std::vector<LineProfile>& profiles,
                            const std::vector<std::string>& names);

std::string dataset_to_csv(const DataSet& data);
DataSet dataset_from_csv(std::istream& in);

std::string sampled_pulse_to_csv(const SampledPulse& pulse);

// ---- JSON ----
json pulse_spec_to_json(const PulseSpec& spec);
PulseSpec pulse_spec_from_json(const json& j);

json profile_to_json(const LineProfile& profile, const PulseSpec& spec);

json experiment_config_to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const json& j);

json fit_result_to_json(const FitResult& result);
json calibration_result_to_json(const CalibrationResult& result);

// ---- provenance ----
std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_hex(std::string_view bytes);

struct RunManifest {
  std::string subcommand;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string config_digest;
  std::string tool_version;
  std::string timestamp_utc;
};

RunManifest make_manifest(const std::string& subcommand,
                          const std::vector<std::string>& inputs,
                          const std::vector<std::string>& outputs,
                          std::string_view config_bytes);

// Writes <path>.manifest.json next to an output file, keeping the payload
// itself byte-stable.
void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& output_path);

void write_text_file(const std::filesystem::path& path,
                     std::string_view contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace qlp::io
