#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include "api.hpp"
#include "output.hpp"
#include "svg.hpp"

namespace kncli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void say(const RunContext& ctx, const std::string& line) {
  if (ctx.log) *ctx.log << line << '\n';
}

std::filesystem::path out_file(const RunContext& ctx, const char* name) { return ctx.out_dir / name; }

const char* status_name(kn_status s) {
  switch (s) {
    case KN_OK: return "ok";
    case KN_ERR_ARGUMENT: return "argument_error";
    case KN_ERR_CONFIG: return "config_error";
    case KN_ERR_PHYSICS: return "physics_error";
    case KN_ERR_NUMERICS: return "numerics_error";
    default: return "internal_error";
  }
}

// Memory time, or NaN with a warning when the correlation never settles.
double try_memory_time(const RunContext& ctx, const kn_noise* noise, Json& warnings) {
  try {
    double tm = 0.0;
    check(kn_noise_memory_time(noise, memory_threshold(ctx.config, noise), ctx.config.memory_step,
                               ctx.config.memory_horizon, &tm));
    return tm;
  } catch (const ApiError& e) {
    if (e.status != KN_ERR_NUMERICS && e.status != KN_ERR_CONFIG) throw;
    warnings.push_back(std::string("memory time unavailable: ") + e.what());
    return kNaN;
  }
}

}  // namespace

int cmd_noise_show(const RunContext& ctx) {
  const auto& cfg = ctx.config;
  const auto noise = make_noise(cfg);
  const std::string hash = cfg.hash();

  constexpr int kPoints = 400;
  CsvWriter spec(out_file(ctx, "noise_spectrum.csv"), hash, {"omega", "w_s", "w_a", "ratio"});
  svg::Series ws{"W_S", {}, {}, "#1f77b4"}, wa{"W_A", {}, {}, "#d62728"};
  const double l0 = std::log(cfg.omega_min), l1 = std::log(cfg.omega_max);
  for (int i = 0; i < kPoints; ++i) {
    const double w = i == 0 ? cfg.omega_min : i == kPoints - 1 ? cfg.omega_max : std::exp(l0 + (l1 - l0) * i / (kPoints - 1));
    double s = 0.0, a = 0.0;
    check(kn_noise_eval(noise.get(), w, &s, &a));
    spec << w << s << a << (s > 0.0 ? a / s : kNaN);
    spec.end_row();
    ws.x.push_back(w), ws.y.push_back(s), wa.x.push_back(w), wa.y.push_back(a);
  }

  const auto count = static_cast<std::size_t>(std::floor(cfg.memory_horizon / cfg.memory_step + 1e-9)) + 1;
  std::vector<double> re(count), im(count);
  check(kn_noise_correlation_series(noise.get(), cfg.memory_step, count, re.data(), im.data()));
  CsvWriter corr(out_file(ctx, "noise_correlation.csv"), hash, {"t", "re", "im", "abs"});
  svg::Series mag{"|C(t)|", {}, {}, "#1f77b4"};
  for (std::size_t j = 0; j < count; ++j) {
    const double t = cfg.memory_step * static_cast<double>(j);
    const double a = std::hypot(re[j], im[j]);
    corr << t << re[j] << im[j] << a;
    corr.end_row();
    mag.x.push_back(t), mag.y.push_back(a);
  }

  Json warnings = warning_list(take_string([&] {
    char* w = nullptr;
    check(kn_noise_warnings(noise.get(), &w));
    return w;
  }()));
  double threshold = kNaN;
  try {
    threshold = memory_threshold(cfg, noise.get());
  } catch (const ApiError& e) {
    if (e.status != KN_ERR_CONFIG) throw;
    warnings.push_back(std::string("no memory threshold: ") + e.what());
  }
  const double tm = std::isnan(threshold) ? kNaN : try_memory_time(ctx, noise.get(), warnings);

  Json j = json_header(hash);
  j["omega_min"] = cfg.omega_min;
  j["omega_max"] = cfg.omega_max;
  j["components"] = Json::array();
  std::size_t n = 0;
  check(kn_noise_component_count(noise.get(), &n));
  for (std::size_t i = 0; i < n; ++i) j["components"].push_back(cfg.components[i].kind);
  j["memory_threshold"] = threshold;
  j["memory_time"] = tm;
  j["warnings"] = warnings;
  write_json(out_file(ctx, "noise_show.json"), j);

  if (cfg.plot) {
    svg::write(out_file(ctx, "noise_spectrum.svg"),
               svg::LinePlot{"noise spectrum", "omega", "W", true, true, {ws, wa}, {}});
    svg::write(out_file(ctx, "noise_correlation.svg"),
               svg::LinePlot{"bath correlation", "t", "|C(t)|", false, true, {mag},
                             std::isnan(threshold) ? std::vector<double>{} : std::vector<double>{threshold}});
  }
  say(ctx, "memory threshold " + fmt(threshold));
  say(ctx, "memory time " + fmt(tm));
  return 0;
}

int cmd_ness(const RunContext& ctx) {
  const auto& cfg = ctx.config;
  const auto noise = make_noise(cfg);
  const auto osc = make_oscillator(cfg, noise.get(), cfg.omega, cfg.chi);
  const auto state = make_state(osc.get(), noise.get());
  kn_state_summary sum;
  check(kn_state_summary_get(state.get(), &sum));
  std::vector<double> rho(static_cast<std::size_t>(sum.n_max) + 1);
  check(kn_state_populations(state.get(), rho.data(), rho.size()));
  char* w = nullptr;
  check(kn_state_warnings(state.get(), &w));
  const Json warnings = warning_list(take_string(w));

  const std::string hash = cfg.hash();
  CsvWriter csv(out_file(ctx, "ness_populations.csv"), hash, {"n", "rho"});
  svg::Series pop{"", {}, {}, "#1f77b4"};
  for (std::size_t n = 0; n < rho.size(); ++n) {
    csv << static_cast<int>(n) << rho[n];
    csv.end_row();
    pop.x.push_back(static_cast<double>(n)), pop.y.push_back(rho[n]);
  }

  Json j = json_header(hash);
  j["omega"] = cfg.omega;
  j["chi"] = cfg.chi;
  j["chi_over_omega"] = cfg.chi / cfg.omega;
  j["n_max"] = sum.n_max;
  j["requested_n_max"] = sum.requested_n_max;
  j["mean_n"] = sum.mean_n;
  j["g2_0"] = sum.g2_zero;
  j["I_cl"] = sum.i_cl;
  j["I_q"] = sum.i_q;
  j["I_D"] = sum.i_d;
  j["I_other"] = sum.i_other;
  j["I_D_closed_form"] = sum.i_d_closed_form;
  j["tail_ratio"] = sum.tail_ratio;
  j["warnings"] = warnings;
  write_json(out_file(ctx, "ness.json"), j);
  if (cfg.plot)
    svg::write(out_file(ctx, "ness_populations.svg"), svg::LinePlot{"steady-state populations", "n", "rho_n", false, true, {pop}, {}});

  say(ctx, "n_max " + std::to_string(sum.n_max) + "  <n> " + fmt(sum.mean_n) + "  g2(0) " + fmt(sum.g2_zero));
  return 0;
}

namespace {

struct Cell {
  double chi = 0.0, omega = 0.0;
  double mean_n = kNaN, g2 = kNaN, i_cl = kNaN, i_q = kNaN, i_d = kNaN;
  int n_max = 0;
  std::string status = "ok";
  std::string message;
  Json warnings = Json::array();
};

void evaluate(const RunConfig& cfg, const kn_noise* noise, Cell& cell) {
  try {
    const auto osc = make_oscillator(cfg, noise, cell.omega, cell.chi);
    const auto state = make_state(osc.get(), noise);
    kn_state_summary s;
    check(kn_state_summary_get(state.get(), &s));
    cell.mean_n = s.mean_n, cell.g2 = s.g2_zero, cell.i_cl = s.i_cl, cell.i_q = s.i_q, cell.i_d = s.i_d;
    cell.n_max = s.n_max;
    char* w = nullptr;
    check(kn_state_warnings(state.get(), &w));
    cell.warnings = warning_list(take_string(w));
  } catch (const ApiError& e) {
    cell.status = status_name(e.status);
    cell.message = e.what();
  } catch (const std::exception& e) {
    cell.status = "internal_error";
    cell.message = e.what();
  }
}

}  // namespace

int cmd_sweep(const RunContext& ctx) {
  const auto& cfg = ctx.config;
  const auto noise = make_noise(cfg);
  auto chis = cfg.sweep_chi.values(), omegas = cfg.sweep_omega.values();
  std::sort(chis.begin(), chis.end());
  std::sort(omegas.begin(), omegas.end());

  std::vector<Cell> cells(chis.size() * omegas.size());
  for (std::size_t r = 0; r < chis.size(); ++r)
    for (std::size_t c = 0; c < omegas.size(); ++c) {
      cells[r * omegas.size() + c].chi = chis[r];
      cells[r * omegas.size() + c].omega = omegas[c];
    }

  // Worker w owns cells w, w + T, w + 2T, ...; each writes only its own slots.
  const auto workers = static_cast<std::size_t>(std::max(1, ctx.threads));
  const auto run = [&](std::size_t w) {
    for (std::size_t i = w; i < cells.size(); i += workers) evaluate(cfg, noise.get(), cells[i]);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }

  const std::string hash = cfg.hash();
  CsvWriter csv(out_file(ctx, "sweep.csv"), hash,
                {"chi", "omega", "mean_n", "g2_0", "I_cl", "I_q", "I_D", "n_max", "status"});
  Json jcells = Json::array();
  std::size_t failed = 0;
  for (const auto& cell : cells) {
    csv << cell.chi << cell.omega << cell.mean_n << cell.g2 << cell.i_cl << cell.i_q << cell.i_d << cell.n_max
        << cell.status;
    csv.end_row();
    if (cell.status != "ok") ++failed;
    Json jc;
    jc["chi"] = cell.chi;
    jc["omega"] = cell.omega;
    jc["status"] = cell.status;
    if (!cell.message.empty()) jc["message"] = cell.message;
    if (!cell.warnings.empty()) jc["warnings"] = cell.warnings;
    jcells.push_back(jc);
  }

  // g2(0) = 1 crossings along each chi row, linearly interpolated in omega.
  Json contour = Json::array();
  for (std::size_t r = 0; r < chis.size(); ++r) {
    Json row;
    row["chi"] = chis[r];
    row["omega_crossings"] = Json::array();
    for (std::size_t c = 0; c + 1 < omegas.size(); ++c) {
      const double a = cells[r * omegas.size() + c].g2 - 1.0, b = cells[r * omegas.size() + c + 1].g2 - 1.0;
      if (std::isfinite(a) && std::isfinite(b) && (a < 0.0) != (b < 0.0))
        row["omega_crossings"].push_back(omegas[c] + (omegas[c + 1] - omegas[c]) * a / (a - b));
    }
    contour.push_back(row);
  }

  Json j = json_header(hash);
  j["chi"] = chis;
  j["omega"] = omegas;
  j["cells_total"] = cells.size();
  j["cells_failed"] = failed;
  j["g2_contour"] = contour;
  j["cells"] = jcells;
  write_json(out_file(ctx, "sweep.json"), j);

  if (cfg.plot) {
    svg::HeatMap map{"g2(0) over (chi, Omega)", "Omega", "chi", omegas, chis, {}, 1.0};
    for (const auto& cell : cells) map.values.push_back(cell.g2);
    svg::write(out_file(ctx, "sweep_g2.svg"), map);
  }
  say(ctx, std::to_string(cells.size()) + " cells, " + std::to_string(failed) + " failed");
  return 0;
}

int cmd_g2tau(const RunContext& ctx) {
  const auto& cfg = ctx.config;
  const auto noise = make_noise(cfg);
  const auto osc = make_oscillator(cfg, noise.get(), cfg.omega, cfg.chi);
  const auto state = make_state(osc.get(), noise.get());

  Json warnings = Json::array();
  double gap = 0.0;
  check(kn_relaxation_gap(osc.get(), noise.get(), state.get(), &gap));
  double tau_max = 0.0;
  if (cfg.tau_max) {
    tau_max = *cfg.tau_max;
  } else {
    if (!(gap > 0.0)) throw ConfigError("no relaxation rate available; set g2tau.tau_max explicitly");
    tau_max = 10.0 / gap;
  }
  if (!(tau_max > 0.0)) throw ConfigError("g2tau.tau_max must be > 0");
  const double tm = try_memory_time(ctx, noise.get(), warnings);

  const auto steps = static_cast<std::size_t>(cfg.tau_steps);
  std::vector<double> tau(steps);
  for (std::size_t i = 0; i < steps; ++i) tau[i] = tau_max * static_cast<double>(i) / static_cast<double>(steps - 1);
  std::vector<double> g2(steps), g1re(steps), g1im(steps);
  std::vector<unsigned char> flag(steps);
  check(kn_g2_tau(osc.get(), noise.get(), state.get(), tau.data(), steps, tm, g2.data(), flag.data()));
  check(kn_g1_tau(osc.get(), noise.get(), state.get(), tau.data(), steps, tm, g1re.data(), g1im.data(), nullptr));

  const std::string hash = cfg.hash();
  CsvWriter csv(out_file(ctx, "g2tau.csv"), hash, {"tau", "g2", "g1_re", "g1_im", "outside_validity"});
  double max_drop = 0.0;
  for (std::size_t i = 0; i < steps; ++i) {
    csv << tau[i] << g2[i] << g1re[i] << g1im[i] << static_cast<int>(flag[i]);
    csv.end_row();
    if (i) max_drop = std::max(max_drop, g2[i - 1] - g2[i]);
  }

  Json j = json_header(hash);
  j["omega"] = cfg.omega;
  j["chi"] = cfg.chi;
  j["tau_max"] = tau_max;
  j["steps"] = steps;
  j["relaxation_gap"] = gap;
  j["memory_time"] = tm;
  j["g2_0"] = g2.front();
  j["g2_last"] = g2.back();
  j["monotone_nondecreasing"] = max_drop <= 0.0;
  j["max_decrease"] = max_drop;
  j["warnings"] = warnings;
  write_json(out_file(ctx, "g2tau.json"), j);
  if (cfg.plot)
    svg::write(out_file(ctx, "g2tau.svg"), svg::LinePlot{"g2(tau)", "tau", "g2", false, false, {{"", tau, g2}}, {1.0}});

  say(ctx, "g2(0) " + fmt(g2.front()) + "  g2(tau_max) " + fmt(g2.back()) + "  tau_max " + fmt(tau_max));
  return 0;
}

int cmd_spectrum(const RunContext& ctx) {
  const auto& cfg = ctx.config;
  const auto noise = make_noise(cfg);
  const auto osc = make_oscillator(cfg, noise.get(), cfg.omega, cfg.chi);
  const auto state = make_state(osc.get(), noise.get());
  kn_state_summary sum;
  check(kn_state_summary_get(state.get(), &sum));

  double top = 0.0, bottom = 0.0;
  check(kn_oscillator_ladder_frequency(osc.get(), 0, &bottom));
  check(kn_oscillator_ladder_frequency(osc.get(), std::max(0, sum.n_max - 1), &top));
  const double lo = cfg.spectrum_lo.value_or(std::max(0.0, std::min(bottom, top) - 5.0));
  const double hi = cfg.spectrum_hi.value_or(std::max(bottom, top) + 5.0);
  if (!(hi > lo)) throw ConfigError("spectrum window must have omega_hi > omega_lo");
  const auto points = static_cast<std::size_t>(cfg.spectrum_points);
  std::vector<double> omega(points);
  for (std::size_t i = 0; i < points; ++i) omega[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);

  kn_spectrum_options opts{ctx.force_resolvent ? 1 : 0, 0.0, ctx.without_shifts ? 1 : 0};
  kn_spectrum* raw = nullptr;
  check(kn_spectrum_compute(osc.get(), noise.get(), state.get(), omega.data(), points, &opts, &raw));
  const Spectrum spec(raw);
  kn_spectrum_info info;
  check(kn_spectrum_info_get(raw, &info));
  std::vector<double> s(points);
  check(kn_spectrum_values(raw, s.data(), s.size()));
  char* w = nullptr;
  check(kn_spectrum_warnings(raw, &w));

  const std::string hash = cfg.hash();
  CsvWriter csv(out_file(ctx, "spectrum.csv"), hash, {"omega", "S"});
  for (std::size_t i = 0; i < points; ++i) {
    csv << omega[i] << s[i];
    csv.end_row();
  }

  Json peaks = Json::array();
  for (std::size_t i = 0; i < info.peaks; ++i) {
    kn_peak p;
    check(kn_spectrum_peak(raw, i, &p));
    peaks.push_back({{"position", p.position}, {"height", p.height}, {"fwhm", p.fwhm}});
  }
  Json modes = Json::array();
  for (std::size_t i = 0; i < info.modes; ++i) {
    double re = 0.0, im = 0.0;
    check(kn_spectrum_mode(raw, i, &re, &im));
    modes.push_back({re, im});
  }
  Json j = json_header(hash);
  j["omega"] = cfg.omega;
  j["chi"] = cfg.chi;
  j["n_max"] = sum.n_max;
  j["mean_n"] = info.mean_n;
  j["sum_rule_integral"] = info.sum_rule_integral;
  j["sum_rule_ratio"] = info.sum_rule_integral / info.mean_n;
  j["method"] = info.method == 0 ? "eigenmodes" : "resolvent";
  j["condition"] = info.condition;
  j["shifts"] = !ctx.without_shifts;
  j["peak_list"] = peaks;
  j["modes"] = modes;
  j["warnings"] = warning_list(take_string(w));
  write_json(out_file(ctx, "spectrum.json"), j);
  if (cfg.plot)
    svg::write(out_file(ctx, "spectrum.svg"), svg::LinePlot{"emission spectrum", "omega", "S", false, true, {{"", omega, s}}, {}});

  say(ctx, "sum rule " + fmt(info.sum_rule_integral) + " vs <n> " + fmt(info.mean_n) + ", " +
               std::to_string(info.peaks) + " peaks");
  for (const auto& p : peaks)
    say(ctx, "  peak " + fmt(p["position"].get<double>()) + "  height " + fmt(p["height"].get<double>()) +
                 "  fwhm " + fmt(p["fwhm"].get<double>()));
  return 0;
}

int cmd_oracle_check(const RunContext& ctx) {
  const auto& cfg = ctx.config;
  const auto noise = make_noise(cfg);
  kn_oscillator* raw = nullptr;
  const int n = cfg.oracle_n_max;
  if (cfg.nonlinearity == "table") check(kn_oscillator_create_table_file(cfg.omega, cfg.chi, cfg.u_table.c_str(), std::max(n, 1), &raw));
  else check(kn_oscillator_create_kerr(cfg.omega, cfg.chi, std::max(n, 1), &raw));
  const Oscillator osc(raw);

  char* report = nullptr;
  int passed = 0;
  check(kn_oracle_check(osc.get(), noise.get(), n, &report, &passed));
  Json j = json_header(cfg.hash());
  j["report"] = Json::parse(take_string(report));
  write_json(out_file(ctx, "oracle_check.json"), j);
  for (const auto& c : j["report"]["checks"])
    say(ctx, std::string(c["passed"].get<bool>() ? "pass " : "FAIL ") + c["name"].get<std::string>() + "  " +
                 (c["value"].is_number() ? fmt(c["value"].get<double>()) : "nan") + " (tol " + fmt(c["tolerance"].get<double>()) + ")");
  return passed ? 0 : 1;
}

}  // namespace kncli
