#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "config.hpp"

using namespace kncli;

namespace {

std::string error_of(std::string_view text) {
  try {
    parse_config(text, ".", RunConfig{}, "test.ini");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("unknown keys and sections are named") {
  CHECK(error_of("[oscillator]\nomgea = 3\n").find("omgea") != std::string::npos);
  CHECK(error_of("[oscillator]\nomgea = 3\n").find("test.ini:2") != std::string::npos);
  CHECK(error_of("[noise.component]\nkind = flat_thermal\ntemperature = 3\n").find("temperature") != std::string::npos);
  CHECK(error_of("[plots]\n").find("plots") != std::string::npos);
  CHECK(error_of("omega = 3\n").find("outside any section") != std::string::npos);
  CHECK(error_of("[noise.component]\nkind = white\n").find("white") != std::string::npos);
}

TEST_CASE("numbers parse exactly and reject junk") {
  const auto cfg = parse_config("[oscillator]\nomega = 0.1\nchi = 3e-1\n[noise.component]\nkind = flat_thermal\nbeta = inf\n",
                                ".", RunConfig{}, "t");
  CHECK(cfg.omega == 0.1);
  CHECK(cfg.chi == 0.3);
  CHECK(std::isinf(cfg.components.at(0).beta));
  CHECK_FALSE(error_of("[oscillator]\nomega = 3.0x\n").empty());
  CHECK_FALSE(error_of("[oscillator]\nomega = 3,5\n").empty());
  CHECK_FALSE(error_of("[oscillator]\nn_max = 2.5\n").empty());
  CHECK(parse_config("[oscillator]\nn_max = auto\n", ".", RunConfig{}, "t").n_max == std::nullopt);
}

TEST_CASE("ranges") {
  const auto r = Range::parse("0.1:10:20");
  const auto v = r.values();
  CHECK(v.size() == 20);
  CHECK(v.front() == 0.1);
  CHECK(v.back() == 10.0);
  CHECK(Range::parse("2:2:1").values() == std::vector<double>{2.0});
  CHECK_THROWS_AS(Range::parse("1:2"), ConfigError);
  CHECK_THROWS_AS(Range::parse("3:1:4"), ConfigError);
  CHECK_THROWS_AS(Range::parse("1:2:0"), ConfigError);
}

TEST_CASE("presets and component replacement") {
  const auto fig1 = preset("paper_fig1");
  CHECK(fig1.components.size() == 3);
  CHECK(preset("paper_fig3").components.size() == 2);
  CHECK_THROWS_AS(preset("fig9"), ConfigError);

  const auto replaced = parse_config("[noise.component]\nkind = flat_thermal\ngamma = 1e-3\nbeta = 5\n", ".", fig1, "t");
  CHECK(replaced.components.size() == 1);
  const auto kept = parse_config("[oscillator]\nchi = 1\n", ".", fig1, "t");
  CHECK(kept.components.size() == 3);
}

TEST_CASE("file paths resolve against the config directory") {
  const auto dir = std::filesystem::temp_directory_path() / "kerrnoise_cfg_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "w.dat") << "1 1 0.5\n2 1 0.5\n";
    std::ofstream(dir / "run.ini") << "[noise.component]\nkind = tabulated\nfile = w.dat\n";
  }
  const auto cfg = load_config(dir / "run.ini", RunConfig{});
  CHECK(cfg.components.at(0).file == dir / "w.dat");
  std::ofstream(dir / "bad.ini") << "[noise.component]\nkind = tabulated\nfile = missing.dat\n";
  CHECK_THROWS_AS(load_config(dir / "bad.ini", RunConfig{}), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("config hash tracks every setting") {
  const auto a = preset("paper_fig1");
  CHECK(a.hash() == preset("paper_fig1").hash());
  CHECK(a.hash().size() == 16);
  auto b = a;
  b.omega = std::nextafter(b.omega, 10.0);
  CHECK(a.hash() != b.hash());
  auto c = a;
  c.components[1].beta = 11.0;
  CHECK(a.hash() != c.hash());
  CHECK(a.hash() != preset("paper_fig3").hash());
}
