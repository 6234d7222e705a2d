#include "doctest.h"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Run {
  int status = -1;
  std::string output;
};

Run cli(const std::string& args) {
  Run r;
  FILE* p = popen((std::string(KERRNOISE_CLI_PATH) + " " + args + " 2>&1").c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 512> buf{};
  while (fgets(buf.data(), buf.size(), p)) r.output += buf.data();
  const int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

fs::path fresh(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("kerrnoise_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

Json read_json(const fs::path& p) {
  std::ifstream in(p);
  return Json::parse(in);
}

// Data rows of a CSV as numbers; the comment and header lines are skipped.
std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream s(line);
    for (std::string cell; std::getline(s, cell, ',');) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      row.push_back(end == cell.c_str() ? NAN : v);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("ness matches the golden summary") {
  const auto out = fresh("golden");
  REQUIRE(cli("ness --quiet --preset paper_fig1 --omega 5 --chi 3 --out " + out.string()).status == 0);
  const auto got = read_json(out / "ness.json");
  const auto want = read_json(fs::path(KERRNOISE_GOLDEN_DIR) / "ness_fig1_omega5_chi3.json");
  CHECK(got["n_max"] == want["n_max"]);
  CHECK(got["config_hash"] == want["config_hash"]);
  for (const char* key : {"mean_n", "g2_0", "I_cl", "I_q", "I_D", "chi_over_omega"})
    CHECK(got[key].get<double>() == doctest::Approx(want[key].get<double>()).epsilon(1e-12));
  CHECK(got["g2_0"].get<double>() < 1.0);
}

TEST_CASE("every output carries version and config hash") {
  const auto out = fresh("headers");
  REQUIRE(cli("ness --quiet --out " + out.string()).status == 0);
  const auto summary = read_json(out / "ness.json");
  std::ifstream csv(out / "ness_populations.csv");
  std::string first;
  std::getline(csv, first);
  CHECK(first == "# kerrnoise " + summary["version"].get<std::string>() +
                     " config=" + summary["config_hash"].get<std::string>());
}

TEST_CASE("linear oscillator gives g2 = 2") {
  const auto out = fresh("chi0");
  for (const char* omega : {"0.5", "5", "12"}) {
    REQUIRE(cli(std::string("ness --quiet --chi 0 --omega ") + omega + " --out " + out.string()).status == 0);
    CHECK(std::abs(read_json(out / "ness.json")["g2_0"].get<double>() - 2.0) < 1e-6);
  }
}

TEST_CASE("exit codes") {
  const auto out = fresh("codes");
  std::ofstream(out / "typo.ini") << "[oscillator]\nomgea = 2\n";
  const auto typo = cli("ness --config " + (out / "typo.ini").string() + " --out " + out.string());
  CHECK(typo.status == 2);
  CHECK(typo.output.find("omgea") != std::string::npos);
  CHECK(cli("oracle-check --n-max 40 --out " + out.string()).status == 2);
  CHECK(cli("frobnicate").status == 2);
  std::ofstream(out / "silent.ini") << "[noise.component]\nkind = flat_thermal\ngamma = 0\nbeta = 10\n";
  CHECK(cli("spectrum --config " + (out / "silent.ini").string() + " --out " + out.string()).status == 3);
  CHECK(cli("oracle-check --quiet --n-max 5 --out " + out.string()).status == 0);
  CHECK(read_json(out / "oracle_check.json")["report"]["all_passed"] == true);
}

TEST_CASE("noise-show") {
  const auto out = fresh("noise");
  const auto r = cli("noise-show --preset paper_fig1 --out " + out.string());
  REQUIRE(r.status == 0);
  const double tm = read_json(out / "noise_show.json")["memory_time"].get<double>();
  CHECK(tm >= 1.0);
  CHECK(tm <= 4.0);
  // W_A / W_S of the preset climbs through 0.9 between Omega = 5 and 10.
  const auto rows = read_csv(out / "noise_spectrum.csv");
  double crossing = NAN;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i - 1][3] < 0.9 && rows[i][3] >= 0.9) crossing = rows[i][0];
  CHECK(crossing >= 5.0);
  CHECK(crossing <= 10.0);

  std::ofstream(out / "cl.ini") << "[noise.component]\nkind = classical_1_over_f\ngamma = 1e-3\n"
                                   "[numerics]\nmemory_threshold = 1e-3\n";
  REQUIRE(cli("noise-show --quiet --config " + (out / "cl.ini").string() + " --out " + out.string()).status == 0);
  for (const auto& row : read_csv(out / "noise_spectrum.csv")) CHECK(row[2] == 0.0);
}

TEST_CASE("sweep along Omega at chi = 3") {
  const auto out = fresh("sweep");
  REQUIRE(cli("sweep --quiet --chi-range 3:3:1 --omega-range 1:40:40 --out " + out.string()).status == 0);
  const auto rows = read_csv(out / "sweep.csv");
  REQUIRE(rows.size() == 40);
  int changes = 0, iq_turns = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if ((rows[i][3] < 1.0) != (rows[i - 1][3] < 1.0)) ++changes;
    CHECK(rows[i][6] < rows[i - 1][6]);  // I_D
    if (i + 1 < rows.size() && (rows[i][5] - rows[i - 1][5]) * (rows[i + 1][5] - rows[i][5]) < 0) ++iq_turns;
  }
  CHECK(rows.front()[3] < 1.0);
  CHECK(rows.back()[3] > 1.0);
  CHECK(changes == 1);
  CHECK(iq_turns >= 1);
}

TEST_CASE("g2tau echoes the requested grid") {
  const auto out = fresh("g2tau");
  REQUIRE(cli("g2tau --quiet --tau-max 2000 --steps 101 --out " + out.string()).status == 0);
  const auto rows = read_csv(out / "g2tau.csv");
  REQUIRE(rows.size() == 101);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i][0] == doctest::Approx(20.0 * i).epsilon(1e-15));
  CHECK(rows[0][4] == 1.0);
  CHECK(rows[1][4] == 0.0);
  const auto j = read_json(out / "g2tau.json");
  CHECK(j["monotone_nondecreasing"] == true);

  REQUIRE(cli("g2tau --quiet --out " + out.string()).status == 0);
  CHECK(std::abs(read_json(out / "g2tau.json")["g2_last"].get<double>() - 1.0) < 1e-3);
}

TEST_CASE("spectrum report") {
  const auto out = fresh("spectrum");
  REQUIRE(cli("spectrum --quiet --plot --out " + out.string()).status == 0);
  const auto j = read_json(out / "spectrum.json");
  CHECK(std::abs(j["sum_rule_integral"].get<double>() / j["mean_n"].get<double>() - 1.0) < 0.01);
  REQUIRE(j["peak_list"].size() >= 3);
  CHECK(j["peak_list"][0]["position"].get<double>() == doctest::Approx(5.0).epsilon(0.01));
  CHECK(fs::exists(out / "spectrum.svg"));
  REQUIRE(cli("spectrum --quiet --force-resolvent --omega-window 4:6 --points 11 --out " + out.string()).status == 0);
  CHECK(read_json(out / "spectrum.json")["method"] == "resolvent");
  CHECK(read_csv(out / "spectrum.csv").size() == 11);
}
