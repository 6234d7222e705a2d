#include "config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace kncli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool parse_bool(std::string_view text, std::string_view what) {
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  throw ConfigError(std::string(what) + ": expected true or false, got '" + std::string(text) + "'");
}

constexpr std::string_view kFig1 = R"(
[noise]
omega_min = 0.01
omega_max = 50

[noise.component]
kind = classical_1_over_f
gamma = 1e-3

[noise.component]
kind = super_ohmic_thermal
gamma = 1e-6
s = 3
beta = 10

[noise.component]
kind = flat_thermal
gamma = 1e-3
beta = 10

[oscillator]
omega = 5
chi = 3
)";

constexpr std::string_view kFig3 = R"(
[noise]
omega_min = 0.01
omega_max = 50

[noise.component]
kind = classical_1_over_f
gamma = 1e-3

[noise.component]
kind = flat_thermal
gamma = 1e-3
beta = 10

[oscillator]
omega = 5
chi = 3
)";

}  // namespace

double parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  std::string_view body = text;
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);
  if (body == "inf" || body == "infinity") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
  if (body.empty() || ec != std::errc() || ptr != body.data() + body.size())
    throw ConfigError(std::string(what) + ": not a number: '" + std::string(text) + "'");
  return v;
}

int parse_int(std::string_view text, std::string_view what) {
  text = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError(std::string(what) + ": not an integer: '" + std::string(text) + "'");
  return v;
}

std::vector<double> Range::values() const {
  std::vector<double> v;
  if (count == 1) return {lo};
  for (int i = 0; i < count; ++i) v.push_back(lo + (hi - lo) * i / (count - 1));
  return v;
}

Range Range::parse(std::string_view text) {
  const auto a = text.find(':');
  const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
  if (b == std::string_view::npos) throw ConfigError("range must look like lo:hi:count, got '" + std::string(text) + "'");
  Range r{parse_number(text.substr(0, a), "range start"), parse_number(text.substr(a + 1, b - a - 1), "range end"),
          parse_int(text.substr(b + 1), "range count")};
  if (r.count < 1) throw ConfigError("range count must be >= 1");
  if (r.count > 1 && !(r.hi > r.lo)) throw ConfigError("range end must exceed its start");
  return r;
}

std::string RunConfig::canonical() const {
  std::ostringstream s;
  s << "noise.omega_min=" << exact(omega_min) << "\nnoise.omega_max=" << exact(omega_max) << '\n';
  for (const auto& c : components)
    s << "component=" << c.kind << ',' << exact(c.gamma) << ',' << exact(c.s) << ',' << exact(c.beta) << ','
      << c.file.string() << '\n';
  s << "oscillator=" << exact(omega) << ',' << exact(chi) << ',' << nonlinearity << ',' << u_table.string() << ','
    << (n_max ? std::to_string(*n_max) : "auto") << '\n';
  s << "numerics=" << exact(tail_tol) << ',' << truncation_cap << ',' << exact(memory_step) << ','
    << exact(memory_horizon) << ',' << (memory_threshold ? exact(*memory_threshold) : "auto") << '\n';
  s << "sweep=" << exact(sweep_chi.lo) << ':' << exact(sweep_chi.hi) << ':' << sweep_chi.count << ','
    << exact(sweep_omega.lo) << ':' << exact(sweep_omega.hi) << ':' << sweep_omega.count << '\n';
  s << "g2tau=" << (tau_max ? exact(*tau_max) : "auto") << ',' << tau_steps << '\n';
  s << "spectrum=" << (spectrum_lo ? exact(*spectrum_lo) : "auto") << ','
    << (spectrum_hi ? exact(*spectrum_hi) : "auto") << ',' << spectrum_points << '\n';
  s << "oracle=" << oracle_n_max << '\n';
  return s.str();
}

std::string RunConfig::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& origin_dir, RunConfig cfg,
                       std::string_view source_name) {
  std::string section;
  bool replaced_components = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = std::string(source_name) + ":" + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section == "noise.component") {
        if (!replaced_components) cfg.components.clear();
        replaced_components = true;
        cfg.components.emplace_back();
      } else if (section != "noise" && section != "oscillator" && section != "numerics" && section != "sweep" &&
                 section != "g2tau" && section != "spectrum" && section != "oracle" && section != "output") {
        throw ConfigError(where + ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const std::string what = where + ": " + section + "." + key;
    const auto unknown = [&] { return ConfigError(where + ": unknown key '" + key + "' in [" + section + "]"); };
    const auto path_of = [&] { return origin_dir / std::filesystem::path(std::string(value)); };

    if (section.empty()) throw ConfigError(where + ": key '" + key + "' outside any section");
    if (section == "noise") {
      if (key == "omega_min") cfg.omega_min = parse_number(value, what);
      else if (key == "omega_max") cfg.omega_max = parse_number(value, what);
      else throw unknown();
    } else if (section == "noise.component") {
      auto& c = cfg.components.back();
      if (key == "kind") c.kind = value;
      else if (key == "gamma") c.gamma = parse_number(value, what);
      else if (key == "s") c.s = parse_number(value, what);
      else if (key == "beta") c.beta = parse_number(value, what);
      else if (key == "file") c.file = path_of();
      else throw unknown();
    } else if (section == "oscillator") {
      if (key == "omega") cfg.omega = parse_number(value, what);
      else if (key == "chi") cfg.chi = parse_number(value, what);
      else if (key == "nonlinearity") cfg.nonlinearity = value;
      else if (key == "u_table") cfg.u_table = path_of();
      else if (key == "n_max") {
        if (value == "auto") cfg.n_max.reset();
        else cfg.n_max = parse_int(value, what);
      } else throw unknown();
    } else if (section == "numerics") {
      if (key == "tail_tol") cfg.tail_tol = parse_number(value, what);
      else if (key == "truncation_cap") cfg.truncation_cap = parse_int(value, what);
      else if (key == "memory_step") cfg.memory_step = parse_number(value, what);
      else if (key == "memory_horizon") cfg.memory_horizon = parse_number(value, what);
      else if (key == "memory_threshold") {
        if (value == "auto") cfg.memory_threshold.reset();
        else cfg.memory_threshold = parse_number(value, what);
      } else throw unknown();
    } else if (section == "sweep") {
      if (key == "chi") cfg.sweep_chi = Range::parse(value);
      else if (key == "omega") cfg.sweep_omega = Range::parse(value);
      else throw unknown();
    } else if (section == "g2tau") {
      if (key == "tau_max") {
        if (value == "auto") cfg.tau_max.reset();
        else cfg.tau_max = parse_number(value, what);
      } else if (key == "steps") cfg.tau_steps = parse_int(value, what);
      else throw unknown();
    } else if (section == "spectrum") {
      if (key == "omega_lo") cfg.spectrum_lo = parse_number(value, what);
      else if (key == "omega_hi") cfg.spectrum_hi = parse_number(value, what);
      else if (key == "points") cfg.spectrum_points = parse_int(value, what);
      else throw unknown();
    } else if (section == "oracle") {
      if (key == "n_max") cfg.oracle_n_max = parse_int(value, what);
      else throw unknown();
    } else if (section == "output") {
      if (key == "plot") cfg.plot = parse_bool(value, what);
      else throw unknown();
    }
  }
  for (const auto& c : cfg.components) {
    if (c.kind != "classical_1_over_f" && c.kind != "super_ohmic_thermal" && c.kind != "flat_thermal" &&
        c.kind != "tabulated")
      throw ConfigError(std::string(source_name) + ": unknown noise component kind '" + c.kind + "'");
    if (c.kind == "tabulated" && !std::filesystem::exists(c.file))
      throw ConfigError(std::string(source_name) + ": noise table '" + c.file.string() + "' does not exist");
  }
  if (cfg.nonlinearity != "kerr" && cfg.nonlinearity != "table")
    throw ConfigError(std::string(source_name) + ": nonlinearity must be kerr or table");
  if (cfg.nonlinearity == "table" && !std::filesystem::exists(cfg.u_table))
    throw ConfigError(std::string(source_name) + ": U table '" + cfg.u_table.string() + "' does not exist");
  if (cfg.tau_steps < 2) throw ConfigError("g2tau.steps must be >= 2");
  if (cfg.spectrum_points < 2) throw ConfigError("spectrum.points must be >= 2");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path(), std::move(base), path.string());
}

RunConfig preset(std::string_view name) {
  if (name == "paper_fig1") return parse_config(kFig1, {}, RunConfig{}, "preset paper_fig1");
  if (name == "paper_fig3") return parse_config(kFig3, {}, RunConfig{}, "preset paper_fig3");
  throw ConfigError("unknown preset '" + std::string(name) + "' (expected paper_fig1 or paper_fig3)");
}

}  // namespace kncli
