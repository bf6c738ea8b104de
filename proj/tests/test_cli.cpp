#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "qlp/io.hpp"
#include "qlp/units.hpp"

namespace fs = std::filesystem;
using namespace qlp;
using qlp::io::json;

namespace {

const std::string cli = QLP_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("qlp_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

int run(const std::string& args, const std::string& capture = "") {
  std::string cmd = cli + " " + args;
  if (!capture.empty()) cmd += " >" + capture + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::vector<double>> read_csv_columns(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("simulate writes a multi-model csv with a manifest") {
  TempDir dir;
  const auto out = dir.file("two_curves.csv");
  const int rc = run("simulate --shape sech --tau-ns 21.3333 --area pi "
                     "--grid \xC2\xB1" "40MHz:101 --models numeric,rosen_zener -o " +
                     out, dir.file("log.txt"));
  CHECK(rc == 0);
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  CHECK(header == "detuning_mhz,numeric,rosen_zener");
  const auto rows = read_csv_columns(out);
  REQUIRE(rows.size() == 101);
  // the two curves agree to truncation accuracy
  for (const auto& row : rows) CHECK(std::abs(row[1] - row[2]) < 2e-3);
  CHECK(fs::exists(out + ".manifest.json"));
}

TEST_CASE("simulate shows the rectangular satellite structure") {
  TempDir dir;
  const auto out = dir.file("rabi.csv");
  const int rc = run("simulate --shape rectangular --duration-ns 21.3333 "
                     "--models rabi --grid \xC2\xB1" "90MHz:361 -o " + out,
                     dir.file("log.txt"));
  CHECK(rc == 0);
  const auto rows = read_csv_columns(out);
  // a local maximum beyond the first zero: nonmonotone tails
  bool satellite = false;
  for (size_t i = 1; i + 1 < rows.size(); ++i) {
    const double f = rows[i][0];
    if (f > 45.0 && rows[i][1] > rows[i - 1][1] && rows[i][1] > rows[i + 1][1] &&
        rows[i][1] > 0.05)
      satellite = true;
  }
  CHECK(satellite);
}

TEST_CASE("invalid shape names exit with a usage error naming the shapes") {
  TempDir dir;
  const auto log = dir.file("err.txt");
  const int rc = run("simulate --shape triangle --duration-ns 10 --models rabi "
                     "-o " + dir.file("x.csv"), log);
  CHECK(rc == 2);
  const std::string text = qlp::io::read_text_file(log);
  CHECK(text.find("rectangular, sech, exponential, gaussian, sech2") !=
        std::string::npos);
}

TEST_CASE("noiseless simulate output round-trips through fit") {
  TempDir dir;
  const auto curve = dir.file("rz.csv");
  REQUIRE(run("simulate --shape sech --tau-ns 21.3333 --area pi "
              "--grid \xC2\xB1" "15MHz:81 --models rosen_zener -o " + curve,
              dir.file("log1.txt")) == 0);
  const auto fitout = dir.file("fit.json");
  REQUIRE(run("fit --data " + curve +
              " --model rosen_zener --shape sech --tau-ns 21.3333 --area pi -o " +
              fitout, dir.file("log2.txt")) == 0);
  const auto j = json::parse(qlp::io::read_text_file(fitout));
  const auto& analytic = j.at("analytic");
  CHECK(std::abs(analytic.at("params").at("delta0_khz").get<double>()) < 1e-3);
  CHECK(analytic.at("params").at("eps0").get<double>() < 1e-6);
  CHECK(analytic.at("params").at("eps1").get<double>() < 1e-6);
  CHECK(analytic.at("mae").get<double>() < 1e-8);
  CHECK(j.at("comparison")
            .at("mae_ratio_lorentzian_over_analytic")
            .get<double>() > 1.0);
  CHECK(j.contains("dataset_digest"));
}

TEST_CASE("synth is reproducible for a fixed seed") {
  TempDir dir;
  const auto a = dir.file("a.csv"), b = dir.file("b.csv");
  const std::string args =
      "synth --shape gaussian --tau-ns 21.3333 --area pi --grid \xC2\xB1"
      "20MHz:41 --shots 1024 --eps0 0.03 --eps1 0.08 --delta0-khz 150 "
      "--seed 2024 -o ";
  REQUIRE(run(args + a, dir.file("log1.txt")) == 0);
  REQUIRE(run(args + b, dir.file("log2.txt")) == 0);
  CHECK(qlp::io::read_text_file(a) == qlp::io::read_text_file(b));

  // a one-point dataset is rejected by fit with a clear message
  const auto tiny = dir.file("tiny.csv");
  qlp::io::write_text_file(tiny, "detuning_mhz,probability,shots\n0,0.5,16\n");
  const auto log = dir.file("err2.txt");
  const int rc = run("fit --data " + tiny +
                     " --model rosen_zener --shape sech --tau-ns 21.3333 -o " +
                     dir.file("f.json"), log);
  CHECK(rc == 2);
  CHECK(qlp::io::read_text_file(log).find("insufficient data") !=
        std::string::npos);
}

TEST_CASE("a mismatched pulse model still runs and is flagged in the comparison") {
  TempDir dir;
  const auto data = dir.file("sech_data.csv");
  REQUIRE(run("synth --shape sech --tau-ns 21.3333 --area pi --grid \xC2\xB1"
              "15MHz:101 --shots 4096 --eps0 0.035 --eps1 0.07 --seed 5 -o " +
              data, dir.file("log1.txt")) == 0);
  const auto out = dir.file("mismatched.json");
  // gaussian line shape fitted onto hyperbolic-secant data
  const int rc = run("fit --data " + data +
                     " --model gaussian_rzc --a 0.7 --shape gaussian "
                     "--tau-ns 21.3333 --area pi -o " + out,
                     dir.file("log2.txt"));
  CHECK(rc == 0);
  const auto j = json::parse(qlp::io::read_text_file(out));
  CHECK(j.at("analytic").at("mae").get<double>() > 0.01);
  CHECK(j.at("comparison").at("analytic_mae_exceeds_lorentzian").get<bool>());
}

TEST_CASE("missing input files are runtime failures") {
  TempDir dir;
  const int rc = run("fit --data " + dir.file("nope.csv") +
                     " --model rosen_zener --shape sech --tau-ns 21.3333 -o " +
                     dir.file("f.json"), dir.file("log.txt"));
  CHECK(rc == 1);
}

TEST_CASE("synth accepts a config document and matches the flag spelling") {
  TempDir dir;
  const auto by_flags = dir.file("flags.csv");
  REQUIRE(run("synth --shape sech2 --tau-ns 21.3333 --area pi --grid \xC2\xB1"
              "20MHz:51 --shots 512 --eps0 0.02 --eps1 0.05 --delta0-khz 80 "
              "--seed 91 -o " + by_flags, dir.file("log1.txt")) == 0);

  // the same experiment spelled as a JSON config
  ExperimentConfig config;
  PulseSpec spec;
  spec.kind = PulseKind::sech2;
  spec.tau = qlp::units::ns_to_s(21.3333);
  spec.duration = duration_for_cutoff(PulseKind::sech2, spec.tau, 1e-3);
  spec.omega0 = amplitude_for_area(PulseKind::sech2, spec.tau, spec.duration,
                                   std::numbers::pi);
  config.pulse = spec;
  config.grid_span = qlp::units::mhz_to_rad_s(20.0);
  config.grid_points = 51;
  config.shots = 512;
  config.eps0 = 0.02;
  config.eps1 = 0.05;
  config.delta0 = qlp::units::khz_to_rad_s(80.0);
  config.seed = 91;
  const auto config_path = dir.file("config.json");
  qlp::io::write_text_file(config_path,
                           qlp::io::experiment_config_to_json(config).dump(2));
  const auto by_config = dir.file("config.csv");
  REQUIRE(run("synth --config " + config_path + " -o " + by_config,
              dir.file("log2.txt")) == 0);
  CHECK(qlp::io::read_text_file(by_flags) == qlp::io::read_text_file(by_config));
}

TEST_CASE("calibrate-a emits the sanity endpoint record") {
  TempDir dir;
  const auto out = dir.file("cal.json");
  REQUIRE(run("calibrate-a --shape sech --tau-ns 21.3333 --area pi "
              "--form strict -o " + out, dir.file("log.txt")) == 0);
  const auto j = json::parse(qlp::io::read_text_file(out));
  CHECK(j.at("kind") == "sech");
  CHECK(j.at("form") == "strict");
  CHECK(std::abs(j.at("a").get<double>()) < 1e-3);
  CHECK(j.at("grid_spec").at("points").get<int>() == 201);
}

TEST_CASE("report renders the comparison table byte-stably") {
  TempDir dir;
  // rows typed in from the published comparison, in its order
  struct Row {
    const char* kind;
    double a_mae, l_mae, a_sdrf, l_sdrf;
  };
  const Row rows[] = {
      {"rabi", 9.41, 36.21, 79.8, 315.2},
      {"rosen_zener", 4.15, 20.68, 11.39, 42.96},
      {"demkov_bessel", 4.72, 13.40, 14.70, 31.70},
      {"demkov_rzc", 9.59, 13.40, 24.71, 31.70},
      {"gaussian_ddp", 12.27, 33.43, 35.68, 87.92},
      {"gaussian_rzc", 4.21, 33.43, 13.54, 87.92},
      {"sech2_rzc", 4.47, 27.55, 13.12, 67.72},
  };
  std::string inputs;
  int idx = 0;
  for (const Row& row : rows) {
    json j{{"analytic",
            {{"model", row.kind}, {"mae", row.a_mae * 1e-3}, {"sdrf_khz", row.a_sdrf}}},
           {"lorentzian",
            {{"model", "lorentzian"}, {"mae", row.l_mae * 1e-3}, {"sdrf_khz", row.l_sdrf}}}};
    const auto path = dir.file("row" + std::to_string(idx++) + ".json");
    qlp::io::write_text_file(path, j.dump());
    inputs += " " + path;
  }
  const auto out1 = dir.file("table1.txt"), out2 = dir.file("table2.txt");
  REQUIRE(run("report" + inputs + " -o " + out1, dir.file("log1.txt")) == 0);
  REQUIRE(run("report" + inputs + " -o " + out2, dir.file("log2.txt")) == 0);
  const std::string t1 = qlp::io::read_text_file(out1);
  CHECK(t1 == qlp::io::read_text_file(out2));
  CHECK(t1.find("Rabi") != std::string::npos);
  CHECK(t1.find("9.41") != std::string::npos);
  CHECK(t1.find("315.20") != std::string::npos);
  CHECK(t1.find("Demkov Bessel") != std::string::npos);

  // missing SDRF renders as an em dash; a one-row input gives a one-row table
  json j{{"analytic", {{"model", "rabi"}, {"mae", 9.41e-3}}},
         {"lorentzian", {{"model", "lorentzian"}, {"mae", 36.21e-3}}}};
  const auto single = dir.file("single.json");
  qlp::io::write_text_file(single, j.dump());
  const auto out3 = dir.file("table3.txt");
  REQUIRE(run("report " + single + " -o " + out3, dir.file("log3.txt")) == 0);
  const std::string t3 = qlp::io::read_text_file(out3);
  CHECK(t3.find("\xE2\x80\x94") != std::string::npos);
  int lines = 0;
  for (char c : t3)
    if (c == '\n') ++lines;
  CHECK(lines == 3);  // two header lines + one row
}
