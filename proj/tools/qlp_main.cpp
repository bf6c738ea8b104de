#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qlp/calibration.hpp"
#include "qlp/dynamics.hpp"
#include "qlp/experiment.hpp"
#include "qlp/fit.hpp"
#include "qlp/io.hpp"
#include "qlp/profiles.hpp"
#include "qlp/pulse.hpp"
#include "qlp/units.hpp"
#include "qlp/version.hpp"

namespace {

using namespace qlp;
using json = io::json;

// "pi", "0.5pi" or a plain value in radians.
double parse_area(const std::string& text) {
  if (text == "pi") return std::numbers::pi;
  if (text.size() > 2 && text.ends_with("pi"))
    return std::stod(text.substr(0, text.size() - 2)) * std::numbers::pi;
  return std::stod(text);
}

// "±40MHz:101", "+-40MHz:101" or "40MHz:101"; kHz also accepted.
void parse_grid(const std::string& text, double& span_rad_s, int& points) {
  std::string s = text;
  if (s.starts_with("\xC2\xB1")) s = s.substr(2);
  else if (s.starts_with("+-")) s = s.substr(2);
  const auto colon = s.rfind(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("grid spec '" + text + "' must look like ±40MHz:101");
  points = std::stoi(s.substr(colon + 1));
  std::string mag = s.substr(0, colon);
  double scale = units::mhz_to_rad_s(1.0);
  if (mag.size() > 3 && (mag.ends_with("MHz") || mag.ends_with("mhz"))) {
    mag = mag.substr(0, mag.size() - 3);
  } else if (mag.size() > 3 && (mag.ends_with("kHz") || mag.ends_with("khz"))) {
    scale = units::khz_to_rad_s(1.0);
    mag = mag.substr(0, mag.size() - 3);
  }
  span_rad_s = std::stod(mag) * scale;
  if (!(span_rad_s > 0.0) || points < 1)
    throw std::invalid_argument("grid spec '" + text + "' needs a positive span and point count");
}

struct PulseOptions {
  std::string shape;
  double tau_ns = 0.0;
  double duration_ns = 0.0;
  double omega0_mhz = 0.0;
  std::string area = "pi";
  double cutoff_fraction = 1e-3;
  double dt_ns = units::s_to_ns(units::default_dt);

  void attach(CLI::App* cmd, bool shape_required = true) {
    auto* opt = cmd->add_option("--shape", shape,
                                "pulse shape: rectangular, sech, exponential, gaussian, sech2");
    if (shape_required) opt->required();
    cmd->add_option("--tau-ns", tau_ns, "pulse width tau in ns (all shapes but rectangular)");
    cmd->add_option("--duration-ns", duration_ns,
                    "total duration T in ns (required for rectangular, otherwise from the cutoff)");
    cmd->add_option("--omega0-mhz", omega0_mhz,
                    "peak Rabi frequency Omega0/2pi in MHz (otherwise from --area)");
    cmd->add_option("--area", area, "temporal pulse area, e.g. 'pi', '0.5pi' or radians [pi]");
    cmd->add_option("--cutoff-fraction", cutoff_fraction,
                    "envelope fraction at the truncation points [1e-3]");
    cmd->add_option("--dt-ns", dt_ns, "backend sample spacing in ns [2/9]");
  }

  PulseSpec resolve() const {
    const PulseKind kind = pulse_kind_from_string(shape);
    PulseSpec spec;
    spec.kind = kind;
    if (kind == PulseKind::rectangular) {
      if (!(duration_ns > 0.0))
        throw std::invalid_argument("rectangular pulses need --duration-ns");
      spec.duration = units::ns_to_s(duration_ns);
      spec.tau = spec.duration;
    } else {
      if (!(tau_ns > 0.0))
        throw std::invalid_argument("shape '" + shape + "' needs --tau-ns");
      spec.tau = units::ns_to_s(tau_ns);
      spec.duration = duration_ns > 0.0
                          ? units::ns_to_s(duration_ns)
                          : duration_for_cutoff(kind, spec.tau, cutoff_fraction);
    }
    spec.omega0 = omega0_mhz > 0.0
                      ? units::mhz_to_rad_s(omega0_mhz)
                      : amplitude_for_area(kind, spec.tau, spec.duration,
                                           parse_area(area));
    spec.validate();
    return spec;
  }

  double dt() const { return units::ns_to_s(dt_ns); }
};

std::vector<std::string> split_csv_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

ProfileModel make_model(ProfileModelKind kind, const PulseSpec& spec,
                        std::optional<double> a, RzcForm form, double dt) {
  ProfileModel model;
  model.kind = kind;
  model.omega0 = spec.omega0;
  model.tau = spec.tau;
  model.duration = spec.duration;
  model.form = form;
  const bool needs_a = kind == ProfileModelKind::demkov_rzc ||
                       kind == ProfileModelKind::gaussian_rzc ||
                       kind == ProfileModelKind::sech2_rzc;
  if (needs_a) {
    if (a) {
      model.a = *a;
    } else {
      PulseSpec cal = spec;
      cal.kind = kind == ProfileModelKind::demkov_rzc ? PulseKind::exponential
                 : kind == ProfileModelKind::gaussian_rzc ? PulseKind::gaussian
                                                          : PulseKind::sech2;
      const auto res =
          calibrate_a(cal, default_calibration_grid(), form, dt);
      model.a = res.a;
      std::fprintf(stderr, "calibrated a = %.4f for %s (%s form)\n", res.a,
                   to_string(kind), to_string(form));
    }
  }
  model.validate();
  return model;
}

int cmd_simulate(const PulseOptions& pulse_opts, const std::string& grid_spec,
                 double grid_center_khz, const std::string& models_list,
                 const std::string& form_name, std::optional<double> a_opt,
                 const std::string& out_path, const std::string& pulse_csv,
                 const std::string& json_path) {
  const PulseSpec spec = pulse_opts.resolve();
  double span = 0.0;
  int points = 0;
  parse_grid(grid_spec, span, points);
  const double center = units::khz_to_rad_s(grid_center_khz);
  const Eigen::ArrayXd grid = uniform_grid(center - span, center + span, points);
  const RzcForm form =
      form_name == "as-printed" ? RzcForm::as_printed : RzcForm::strict;

  std::vector<LineProfile> profiles;
  std::vector<std::string> names;
  for (const auto& name : split_csv_list(models_list)) {
    if (name == "numeric") {
      profiles.push_back(profile_numeric(spec, grid, pulse_opts.dt()));
      names.push_back(name);
      continue;
    }
    const auto kind = profile_model_kind_from_string(name);
    if (kind == ProfileModelKind::lorentzian)
      throw std::invalid_argument(
          "the Lorentzian has no fixed parameters to simulate; it is a fit shape");
    const ProfileModel model =
        make_model(kind, spec, a_opt, form, pulse_opts.dt());
    profiles.push_back(evaluate_profile(model, grid));
    names.push_back(name);
  }
  if (profiles.empty()) throw std::invalid_argument("no models requested");

  const json config{{"pulse", io::pulse_spec_to_json(spec)},
                    {"grid", grid_spec},
                    {"models", models_list}};
  std::vector<std::string> outputs{out_path};

  io::write_text_file(out_path, io::profiles_to_csv(profiles, names));
  if (!pulse_csv.empty()) {
    io::write_text_file(pulse_csv,
                        io::sampled_pulse_to_csv(discretize(spec, pulse_opts.dt())));
    outputs.push_back(pulse_csv);
  }
  if (!json_path.empty()) {
    json j = json::array();
    for (size_t i = 0; i < profiles.size(); ++i) {
      json entry = io::profile_to_json(profiles[i], spec);
      entry["model"] = names[i];
      j.push_back(entry);
    }
    io::write_text_file(json_path, j.dump(2) + "\n");
    outputs.push_back(json_path);
  }
  io::write_manifest(io::make_manifest("simulate", {}, outputs, config.dump()),
                     out_path);
  return 0;
}

int cmd_synth(const PulseOptions& pulse_opts, const std::string& config_path,
              const std::string& grid_spec, double grid_center_khz, int shots,
              double eps0, double eps1, double delta0_khz,
              std::uint64_t seed, const std::string& out_path) {
  ExperimentConfig config;
  if (!config_path.empty()) {
    config = io::experiment_config_from_json(
        json::parse(io::read_text_file(config_path)));
  } else {
    config.pulse = pulse_opts.resolve();
    parse_grid(grid_spec, config.grid_span, config.grid_points);
    config.grid_center = units::khz_to_rad_s(grid_center_khz);
    config.shots = shots;
    config.eps0 = eps0;
    config.eps1 = eps1;
    config.delta0 = units::khz_to_rad_s(delta0_khz);
    config.seed = seed;
    config.dt = pulse_opts.dt();
  }
  const DataSet data = sample_profile(config);
  io::write_text_file(out_path, io::dataset_to_csv(data));
  const json config_json = io::experiment_config_to_json(config);
  io::write_manifest(
      io::make_manifest("synth",
                        config_path.empty() ? std::vector<std::string>{}
                                            : std::vector<std::string>{config_path},
                        {out_path}, config_json.dump()),
      out_path);
  return 0;
}

int cmd_calibrate(const PulseOptions& pulse_opts, const std::string& grid_spec,
                  const std::string& form_name, const std::string& out_path) {
  const PulseSpec spec = pulse_opts.resolve();
  double span = 0.0;
  int points = 0;
  parse_grid(grid_spec, span, points);
  const Eigen::ArrayXd grid = uniform_grid(-span, span, points);

  std::vector<RzcForm> forms;
  if (form_name == "strict") forms = {RzcForm::strict};
  else if (form_name == "as-printed") forms = {RzcForm::as_printed};
  else if (form_name == "both") forms = {RzcForm::strict, RzcForm::as_printed};
  else throw std::invalid_argument("--form must be strict, as-printed or both");

  json out = json::array();
  for (const RzcForm form : forms)
    out.push_back(io::calibration_result_to_json(
        calibrate_a(spec, grid, form, pulse_opts.dt())));
  const std::string payload =
      (out.size() == 1 ? out[0].dump(2) : out.dump(2)) + "\n";
  if (out_path.empty()) {
    std::cout << payload;
  } else {
    io::write_text_file(out_path, payload);
    const json config{{"pulse", io::pulse_spec_to_json(spec)},
                      {"grid", grid_spec},
                      {"form", form_name}};
    io::write_manifest(io::make_manifest("calibrate-a", {}, {out_path}, config.dump()),
                       out_path);
  }
  return 0;
}

int cmd_fit(const PulseOptions& pulse_opts, const std::string& data_path,
            const std::string& model_name, const std::string& form_name,
            std::optional<double> a_opt, const std::string& out_path,
            const std::string& residuals_path) {
  const std::string csv = io::read_text_file(data_path);
  std::istringstream csv_stream(csv);
  const DataSet data = io::dataset_from_csv(csv_stream);
  if (data.size() < 2)
    throw std::invalid_argument("insufficient data: need at least two points");

  const PulseSpec spec = pulse_opts.resolve();
  const RzcForm form =
      form_name == "as-printed" ? RzcForm::as_printed : RzcForm::strict;
  const auto kind = profile_model_kind_from_string(model_name);
  if (kind == ProfileModelKind::lorentzian)
    throw std::invalid_argument(
        "--model selects the analytic shape; the Lorentzian is always fitted "
        "alongside it");
  const ProfileModel analytic =
      make_model(kind, spec, a_opt, form, pulse_opts.dt());
  ProfileModel lorentzian;
  lorentzian.kind = ProfileModelKind::lorentzian;

  const FitResult fa = overfit_guard(analytic, data);
  const FitResult fl = overfit_guard(lorentzian, data);

  json out{{"model_label", analytic.label()},
           {"pulse", io::pulse_spec_to_json(spec)},
           {"dataset", data_path},
           {"dataset_digest", io::digest_hex(csv)},
           {"analytic", io::fit_result_to_json(fa)},
           {"lorentzian", io::fit_result_to_json(fl)},
           {"comparison",
            json{{"mae_ratio_lorentzian_over_analytic", fl.mae / fa.mae},
                 {"sdrf_ratio_lorentzian_over_analytic",
                  fa.sdrf_hz > 0.0 ? fl.sdrf_hz / fa.sdrf_hz : 0.0},
                 // a mismatched pulse model shows up as the analytic fit
                 // losing to the featureless baseline
                 {"analytic_mae_exceeds_lorentzian", fa.mae > fl.mae}}}};
  io::write_text_file(out_path, out.dump(2) + "\n");
  std::vector<std::string> outputs{out_path};

  if (!residuals_path.empty()) {
    const Eigen::VectorXd pa = fa.params;
    const Eigen::VectorXd pl = fl.params;
    std::string csv_out = "detuning_mhz,residual_analytic,residual_lorentzian\n";
    char buf[128];
    for (Eigen::Index i = 0; i < data.size(); ++i) {
      const double d = data.detunings[i];
      const double model_a =
          pa[1] + (1.0 - pa[1] - pa[2]) * analytic.evaluate(d - pa[0]);
      const double model_l =
          lorentzian_profile(pl[0], pl[1], pl[2], d - pl[3]);
      std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n",
                    units::rad_s_to_mhz(d), model_a - data.probabilities[i],
                    model_l - data.probabilities[i]);
      csv_out += buf;
    }
    io::write_text_file(residuals_path, csv_out);
    outputs.push_back(residuals_path);
  }
  io::write_manifest(
      io::make_manifest("fit", {data_path}, outputs, out["pulse"].dump()),
      out_path);
  return 0;
}

std::string display_name(const std::string& kind) {
  if (kind == "rabi") return "Rabi";
  if (kind == "rosen_zener") return "Rosen-Zener";
  if (kind == "demkov_bessel") return "Demkov Bessel";
  if (kind == "demkov_rzc") return "Demkov RZC";
  if (kind == "gaussian_ddp") return "Gauss. DDP";
  if (kind == "gaussian_rzc") return "Gauss. RZC";
  if (kind == "sech2_rzc") return "Sech2";
  return kind;
}

std::string render_report(const std::vector<json>& rows) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-14s %12s %14s %13s %15s\n", "Model",
                "Analytic MAE", "Lorentzian MAE", "Analytic SDRF",
                "Lorentzian SDRF");
  out += buf;
  std::snprintf(buf, sizeof buf, "%-14s %12s %14s %13s %15s\n", "",
                "(x1e-3)", "(x1e-3)", "(kHz)", "(kHz)");
  out += buf;
  const auto cell = [](const json& j, const char* key, double scale) {
    char b[32];
    if (!j.contains(key) || j[key].is_null())
      return std::string("\xE2\x80\x94");  // em dash for missing values
    std::snprintf(b, sizeof b, "%.2f", j[key].get<double>() * scale);
    return std::string(b);
  };
  for (const json& row : rows) {
    const std::string label =
        row.contains("label") ? row["label"].get<std::string>()
                              : display_name(row["analytic"]["model"]);
    const json& a = row["analytic"];
    const json& l = row["lorentzian"];
    std::snprintf(buf, sizeof buf, "%-14s %12s %14s %13s %15s\n", label.c_str(),
                  cell(a, "mae", 1e3).c_str(), cell(l, "mae", 1e3).c_str(),
                  cell(a, "sdrf_khz", 1.0).c_str(),
                  cell(l, "sdrf_khz", 1.0).c_str());
    out += buf;
  }
  return out;
}

int cmd_report(const std::vector<std::string>& inputs,
               const std::string& out_path) {
  std::vector<json> rows;
  for (const auto& path : inputs)
    rows.push_back(json::parse(io::read_text_file(path)));
  const std::string table = render_report(rows);
  if (out_path.empty()) {
    std::cout << table;
  } else {
    io::write_text_file(out_path, table);
    io::write_manifest(io::make_manifest("report", inputs, {out_path}, table),
                       out_path);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulse-shape transition line profiles: simulation, synthetic "
               "experiments, calibration, fitting and reports"};
  app.set_version_flag("--version", std::string(qlp::version));
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "evaluate oracle/analytic line profiles");
  PulseOptions sim_pulse;
  sim_pulse.attach(sim);
  std::string sim_grid = "\xC2\xB1" "40MHz:101";
  double sim_center_khz = 0.0;
  std::string sim_models = "numeric";
  std::string sim_form = "strict";
  double sim_a = -1.0;
  std::string sim_out = "profiles.csv", sim_pulse_csv, sim_json;
  sim->add_option("--grid", sim_grid, "detuning grid, e.g. ±40MHz:101");
  sim->add_option("--grid-center-khz", sim_center_khz, "grid centre offset in kHz [0]");
  sim->add_option("--models", sim_models,
                  "comma list: numeric, rabi, rosen_zener, demkov_bessel, "
                  "demkov_rzc, gaussian_ddp, gaussian_rzc, sech2_rzc");
  sim->add_option("--form", sim_form, "RZC form: strict or as-printed [strict]");
  sim->add_option("--a", sim_a, "RZC area-correction parameter (calibrated if omitted)");
  sim->add_option("-o,--output", sim_out, "output CSV [profiles.csv]");
  sim->add_option("--pulse-csv", sim_pulse_csv, "also export the sampled pulse (t_ns, omega_mhz)");
  sim->add_option("--json", sim_json, "also export profiles as JSON with pulse provenance");

  // synth
  auto* synth = app.add_subcommand("synth", "sample a synthetic shot-noise dataset");
  PulseOptions synth_pulse;
  synth_pulse.attach(synth, /*shape_required=*/false);
  std::string synth_config, synth_grid = "\xC2\xB1" "40MHz:101";
  double synth_center_khz = 0.0, synth_eps0 = 0.0, synth_eps1 = 0.0, synth_delta0_khz = 0.0;
  int synth_shots = 4096;
  std::uint64_t synth_seed = 0;
  std::string synth_out = "dataset.csv";
  synth->add_option("--config", synth_config, "experiment config JSON (overrides flags)");
  synth->add_option("--grid", synth_grid, "detuning grid, e.g. ±40MHz:101");
  synth->add_option("--grid-center-khz", synth_center_khz, "grid centre offset in kHz [0]");
  synth->add_option("--shots", synth_shots, "shots per point [4096]");
  synth->add_option("--eps0", synth_eps0, "truth lifted background [0]");
  synth->add_option("--eps1", synth_eps1, "truth degradation [0]");
  synth->add_option("--delta0-khz", synth_delta0_khz, "truth resonance offset in kHz [0]");
  synth->add_option("--seed", synth_seed, "RNG seed [0]");
  synth->add_option("-o,--output", synth_out, "output dataset CSV [dataset.csv]");

  // calibrate-a
  auto* cal = app.add_subcommand("calibrate-a", "fit the RZC area-correction parameter");
  PulseOptions cal_pulse;
  cal_pulse.attach(cal);
  std::string cal_grid = "\xC2\xB1" "40MHz:201";
  std::string cal_form = "both";
  std::string cal_out;
  cal->add_option("--grid", cal_grid, "calibration grid [±40MHz:201]");
  cal->add_option("--form", cal_form, "strict, as-printed or both [both]");
  cal->add_option("-o,--output", cal_out, "output JSON (stdout if omitted)");

  // fit
  auto* fitc = app.add_subcommand("fit", "fit a dataset with an analytic model and a Lorentzian");
  PulseOptions fit_pulse;
  fit_pulse.attach(fitc);
  std::string fit_data, fit_model, fit_form = "strict";
  double fit_a = -1.0;
  std::string fit_out = "fit.json", fit_residuals;
  fitc->add_option("--data", fit_data, "dataset CSV")->required();
  fitc->add_option("--model", fit_model, "analytic model kind")->required();
  fitc->add_option("--form", fit_form, "RZC form: strict or as-printed [strict]");
  fitc->add_option("--a", fit_a, "RZC area-correction parameter (calibrated if omitted)");
  fitc->add_option("-o,--output", fit_out, "output JSON [fit.json]");
  fitc->add_option("--residuals-csv", fit_residuals, "residuals CSV output");

  // report
  auto* rep = app.add_subcommand("report", "render a MAE/SDRF comparison table");
  std::vector<std::string> rep_inputs;
  std::string rep_out;
  rep->add_option("results", rep_inputs, "fit result JSON files")->required();
  rep->add_option("-o,--output", rep_out, "output text file (stdout if omitted)");

  try {
    app.parse(argc, argv);
    if (sim->parsed())
      return cmd_simulate(sim_pulse, sim_grid, sim_center_khz, sim_models,
                          sim_form, sim_a >= 0 ? std::optional(sim_a) : std::nullopt,
                          sim_out, sim_pulse_csv, sim_json);
    if (synth->parsed())
      return cmd_synth(synth_pulse, synth_config, synth_grid, synth_center_khz,
                       synth_shots, synth_eps0, synth_eps1, synth_delta0_khz,
                       synth_seed, synth_out);
    if (cal->parsed())
      return cmd_calibrate(cal_pulse, cal_grid, cal_form, cal_out);
    if (fitc->parsed())
      return cmd_fit(fit_pulse, fit_data, fit_model, fit_form,
                     fit_a >= 0 ? std::optional(fit_a) : std::nullopt, fit_out,
                     fit_residuals);
    if (rep->parsed()) return cmd_report(rep_inputs, rep_out);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
