// kerrnoise command-line front end.

#include <kerrnoise/kerrnoise.h>

#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "api.hpp"
#include "commands.hpp"
#include "config.hpp"

namespace {

int exit_code(kn_status s) {
  switch (s) {
    case KN_ERR_ARGUMENT:
    case KN_ERR_CONFIG: return 2;
    case KN_ERR_PHYSICS: return 3;
    case KN_ERR_NUMERICS: return 4;
    default: return 5;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kerr oscillator under classical 1/f noise and quantum baths"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kn_version()));

  std::string config_path, preset_name, out_dir = ".";
  std::optional<double> omega, chi, tau_max;
  std::optional<int> n_max, steps, points;
  std::string chi_range, omega_range, omega_window;
  int threads = 1;
  bool plot = false, seedless = false, force_resolvent = false, without_shifts = false, quiet = false;

  app.add_option("--config", config_path, "configuration file")->check(CLI::ExistingFile);
  app.add_option("--preset", preset_name, "bundled parameter set")->check(CLI::IsMember({"paper_fig1", "paper_fig3"}));
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--plot", plot, "also write SVG figures");
  app.add_option("--threads", threads, "sweep workers (0: all cores)")->check(CLI::NonNegativeNumber);
  app.add_flag("--seedless", seedless, "assert that no random numbers are used");
  app.add_flag("--quiet", quiet, "no progress text on stdout");
  app.add_option("--omega", omega, "oscillator frequency");
  app.add_option("--chi", chi, "Kerr nonlinearity");
  app.add_option("--n-max", n_max, "fixed ladder truncation (oracle-check: oracle size)");

  auto* noise_show = app.add_subcommand("noise-show", "noise spectra, bath correlation and memory time");
  auto* ness = app.add_subcommand("ness", "steady-state populations and photon currents");
  auto* sweep = app.add_subcommand("sweep", "steady state over a (chi, Omega) grid");
  sweep->add_option("--chi-range", chi_range, "lo:hi:count");
  sweep->add_option("--omega-range", omega_range, "lo:hi:count");
  auto* g2tau = app.add_subcommand("g2tau", "intensity and field correlations in time");
  g2tau->add_option("--tau-max", tau_max, "largest delay");
  g2tau->add_option("--steps", steps, "number of delays, including zero");
  auto* spectrum = app.add_subcommand("spectrum", "emission spectrum, sum rule and peaks");
  spectrum->add_option("--omega-window", omega_window, "lo:hi");
  spectrum->add_option("--points", points, "grid size");
  spectrum->add_flag("--force-resolvent", force_resolvent, "evaluate through the resolvent");
  spectrum->add_flag("--without-shifts", without_shifts, "drop principal-value shifts");
  auto* oracle = app.add_subcommand("oracle-check", "compare reduced equations with the full Liouvillian");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  (void)seedless;  // nothing in this program draws random numbers

  try {
    using namespace kncli;
    RunContext ctx;
    RunConfig base = !preset_name.empty() || config_path.empty() ? preset(preset_name.empty() ? "paper_fig1" : preset_name)
                                                                 : RunConfig{};
    ctx.config = config_path.empty() ? base : load_config(config_path, base);
    auto& cfg = ctx.config;
    if (plot) cfg.plot = true;
    if (omega) cfg.omega = *omega;
    if (chi) cfg.chi = *chi;
    if (n_max) (oracle->parsed() ? cfg.oracle_n_max : cfg.n_max.emplace()) = *n_max;
    if (!chi_range.empty()) cfg.sweep_chi = Range::parse(chi_range);
    if (!omega_range.empty()) cfg.sweep_omega = Range::parse(omega_range);
    if (tau_max) cfg.tau_max = *tau_max;
    if (steps) cfg.tau_steps = *steps;
    if (points) cfg.spectrum_points = *points;
    if (!omega_window.empty()) {
      const auto colon = omega_window.find(':');
      if (colon == std::string::npos) throw ConfigError("--omega-window must look like lo:hi");
      cfg.spectrum_lo = parse_number(omega_window.substr(0, colon), "--omega-window");
      cfg.spectrum_hi = parse_number(omega_window.substr(colon + 1), "--omega-window");
    }
    if (cfg.tau_steps < 2) throw ConfigError("--steps must be >= 2");
    if (cfg.spectrum_points < 2) throw ConfigError("--points must be >= 2");

    ctx.out_dir = out_dir;
    std::filesystem::create_directories(ctx.out_dir);
    ctx.threads = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    ctx.force_resolvent = force_resolvent;
    ctx.without_shifts = without_shifts;
    ctx.log = quiet ? nullptr : &std::cout;

    if (noise_show->parsed()) return cmd_noise_show(ctx);
    if (ness->parsed()) return cmd_ness(ctx);
    if (sweep->parsed()) return cmd_sweep(ctx);
    if (g2tau->parsed()) return cmd_g2tau(ctx);
    if (spectrum->parsed()) return cmd_spectrum(ctx);
    return cmd_oracle_check(ctx);
  } catch (const kncli::ApiError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.status);
  } catch (const kncli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 5;
  }
}
