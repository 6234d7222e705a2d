#include "noise_spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "errors.hpp"
#include "numeric_text.hpp"
#include "quadrature.hpp"

namespace kerrnoise {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void check_beta(double beta) {
  require(beta > 0.0 && !std::isnan(beta), "thermal component needs beta > 0");
}

// W_S - W_A and W_S + W_A of a thermal bath with antisymmetric part `wa`.
RatePair thermal_rates(double wa, double beta, double omega) {
  const double x = beta * omega;
  if (std::isinf(x)) return {0.0, 2.0 * wa};
  return {2.0 * wa / std::expm1(x), 2.0 * wa / -std::expm1(-x)};
}

double interpolate(double log_w, double log_w0, double log_w1, double v0, double v1) {
  const double t = (log_w - log_w0) / (log_w1 - log_w0);
  if (v0 > 0.0 && v1 > 0.0) return std::exp((1.0 - t) * std::log(v0) + t * std::log(v1));
  if (v0 < 0.0 && v1 < 0.0) return -std::exp((1.0 - t) * std::log(-v0) + t * std::log(-v1));
  return (1.0 - t) * v0 + t * v1;
}

}  // namespace

const char* to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::Classical1OverF: return "classical_1_over_f";
    case NoiseKind::SuperOhmicThermal: return "super_ohmic_thermal";
    case NoiseKind::FlatThermal: return "flat_thermal";
    case NoiseKind::Tabulated: return "tabulated";
  }
  return "unknown";
}

NoiseComponent NoiseComponent::classical_one_over_f(double gamma) {
  require(gamma >= 0.0 && std::isfinite(gamma), "noise amplitude gamma must be finite and >= 0");
  NoiseComponent c;
  c.kind_ = NoiseKind::Classical1OverF;
  c.gamma_ = gamma;
  return c;
}

NoiseComponent NoiseComponent::super_ohmic_thermal(double gamma, double exponent, double beta) {
  require(gamma >= 0.0 && std::isfinite(gamma), "noise amplitude gamma must be finite and >= 0");
  require(exponent > 0.0 && std::isfinite(exponent), "super-Ohmic exponent s must be > 0");
  check_beta(beta);
  NoiseComponent c;
  c.kind_ = NoiseKind::SuperOhmicThermal;
  c.gamma_ = gamma;
  c.exponent_ = exponent;
  c.beta_ = beta;
  if (exponent <= 1.0) {
    std::ostringstream msg;
    msg << "super-Ohmic component with s = " << exponent << " <= 1 is not super-Ohmic";
    c.warnings_.push_back(msg.str());
  }
  return c;
}

NoiseComponent NoiseComponent::flat_thermal(double gamma, double beta) {
  require(gamma >= 0.0 && std::isfinite(gamma), "noise amplitude gamma must be finite and >= 0");
  check_beta(beta);
  NoiseComponent c;
  c.kind_ = NoiseKind::FlatThermal;
  c.gamma_ = gamma;
  c.beta_ = beta;
  return c;
}

NoiseComponent NoiseComponent::tabulated(std::vector<TablePoint> table) {
  require(table.size() >= 2, "tabulated noise needs at least two rows");
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& p = table[i];
    require(std::isfinite(p.omega) && std::isfinite(p.symmetric) && std::isfinite(p.antisymmetric),
            "tabulated noise values must be finite");
    require(p.omega > 0.0, "tabulated noise frequencies must be positive");
    require(i == 0 || p.omega > table[i - 1].omega,
            "tabulated noise frequencies must be strictly increasing");
    require(p.symmetric >= std::abs(p.antisymmetric),
            "tabulated noise must satisfy W_S >= |W_A| at omega = " + std::to_string(p.omega));
  }
  NoiseComponent c;
  c.kind_ = NoiseKind::Tabulated;
  c.table_ = std::move(table);
  return c;
}

NoiseComponent NoiseComponent::load_table(const std::filesystem::path& path) {
  const auto rows = detail::read_numeric_columns(path, 3);
  std::vector<TablePoint> table;
  table.reserve(rows.size());
  for (const auto& r : rows) table.push_back({r[0], r[1], r[2]});
  try {
    return tabulated(std::move(table));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

bool NoiseComponent::is_classical() const noexcept {
  switch (kind_) {
    case NoiseKind::Classical1OverF: return true;
    case NoiseKind::SuperOhmicThermal:
    case NoiseKind::FlatThermal: return gamma_ == 0.0;
    case NoiseKind::Tabulated:
      return std::all_of(table_.begin(), table_.end(),
                         [](const TablePoint& p) { return p.antisymmetric == 0.0; });
  }
  return false;
}

SpectralPair NoiseComponent::evaluate(double omega) const {
  switch (kind_) {
    case NoiseKind::Classical1OverF: return {gamma_ / omega, 0.0};
    case NoiseKind::SuperOhmicThermal:
    case NoiseKind::FlatThermal: {
      const double wa =
          kind_ == NoiseKind::FlatThermal ? gamma_ : gamma_ * std::pow(omega, exponent_);
      return {wa / std::tanh(0.5 * beta_ * omega), wa};
    }
    case NoiseKind::Tabulated: {
      if (omega < table_.front().omega || omega > table_.back().omega) return {};
      const auto hi = std::upper_bound(table_.begin(), table_.end(), omega,
                                       [](double w, const TablePoint& p) { return w < p.omega; });
      if (hi == table_.end()) return {table_.back().symmetric, table_.back().antisymmetric};
      const auto lo = hi - 1;
      if (omega == lo->omega) return {lo->symmetric, lo->antisymmetric};
      const double lw = std::log(omega);
      const double l0 = std::log(lo->omega);
      const double l1 = std::log(hi->omega);
      const double ws = interpolate(lw, l0, l1, lo->symmetric, hi->symmetric);
      const double wa = interpolate(lw, l0, l1, lo->antisymmetric, hi->antisymmetric);
      return {ws, std::clamp(wa, -ws, ws)};
    }
  }
  return {};
}

RatePair NoiseComponent::rates(double omega) const {
  switch (kind_) {
    case NoiseKind::Classical1OverF: {
      const double ws = gamma_ / omega;
      return {ws, ws};
    }
    case NoiseKind::SuperOhmicThermal:
      return thermal_rates(gamma_ * std::pow(omega, exponent_), beta_, omega);
    case NoiseKind::FlatThermal: return thermal_rates(gamma_, beta_, omega);
    case NoiseKind::Tabulated: {
      const auto v = evaluate(omega);
      return {v.symmetric - v.antisymmetric, v.symmetric + v.antisymmetric};
    }
  }
  return {};
}

NoiseModel::NoiseModel(std::vector<NoiseComponent> components, double omega_min, double omega_max)
    : components_(std::move(components)), omega_min_(omega_min), omega_max_(omega_max) {
  require(std::isfinite(omega_min) && std::isfinite(omega_max) && omega_min > 0.0 &&
              omega_min < omega_max,
          "noise cutoffs must satisfy 0 < omega_min < omega_max");
  // W_A^tot >= 0 can only fail through tabulated components; probe their nodes
  // and midpoints.
  for (const auto& c : components_) {
    if (c.kind() != NoiseKind::Tabulated) continue;
    const auto& t = c.table();
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (double w : {t[i].omega, i + 1 < t.size() ? std::sqrt(t[i].omega * t[i + 1].omega) : t[i].omega}) {
        if (!in_support(w)) continue;
        const auto v = eval_total(w);
        require(v.antisymmetric >= 0.0,
                "total antisymmetric noise W_A^tot must be >= 0 (violated at omega = " +
                    std::to_string(w) + ")");
      }
    }
  }
}

std::vector<double> NoiseModel::breakpoints() const {
  std::vector<double> b{omega_min_, omega_max_};
  for (const auto& c : components_) {
    for (const auto& p : c.table())
      if (p.omega > omega_min_ && p.omega < omega_max_) b.push_back(p.omega);
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

SpectralPair NoiseModel::eval_total(double omega) const {
  SpectralPair total;
  if (!in_support(omega)) return total;
  for (const auto& c : components_) {
    const auto v = c.evaluate(omega);
    total.symmetric += v.symmetric;
    total.antisymmetric += v.antisymmetric;
  }
  return total;
}

RatePair NoiseModel::rates_total(double omega) const {
  RatePair total;
  if (!in_support(omega)) return total;
  for (const auto& c : components_) {
    const auto r = c.rates(omega);
    total.raise += r.raise;
    total.lower += r.lower;
  }
  return total;
}

SpectralPair NoiseModel::eval_component(std::size_t index, double omega) const {
  if (!in_support(omega)) return {};
  return components_.at(index).evaluate(omega);
}

RatePair NoiseModel::rates_component(std::size_t index, double omega) const {
  if (!in_support(omega)) return {};
  return components_.at(index).rates(omega);
}

double kms_check(const NoiseComponent& component, double omega) {
  if (!component.is_thermal())
    throw ConfigError(std::string("KMS check needs a thermal component, got ") +
                      to_string(component.kind()));
  const auto v = component.evaluate(omega);
  return v.antisymmetric / v.symmetric;
}

CorrelationValue correlation_function(const NoiseModel& model, double t, double abs_tol) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("correlation_function needs finite t >= 0");
  // quarter of the oscillation period of cos(omega t)
  const double max_width = kPi / (2.0 * std::max(t, 1.0));
  const auto breaks = detail::refine_breakpoints(model.breakpoints(), max_width);
  const auto integrand = [&](double w) {
    const auto v = model.eval_total(w);
    return std::complex<double>(v.symmetric * std::cos(w * t), -v.antisymmetric * std::sin(w * t));
  };
  const auto sum = detail::integrate_panels(integrand, breaks);
  CorrelationValue out{sum.value / kPi, sum.error / kPi};
  if (!(out.error_estimate <= abs_tol)) {
    std::ostringstream msg;
    msg << "correlation quadrature at t = " << t << " did not converge: error estimate "
        << out.error_estimate << " > tolerance " << abs_tol;
    throw NumericsError(msg.str());
  }
  return out;
}

CorrelationSampler::CorrelationSampler(const NoiseModel& model, double horizon) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  // quarter of the shortest oscillation period in omega
  const double max_width = kPi / (2.0 * std::max(horizon, 1.0));
  const auto breaks = detail::refine_breakpoints(model.breakpoints(), max_width);
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double mid = 0.5 * (breaks[i] + breaks[i + 1]);
    const double half = 0.5 * (breaks[i + 1] - breaks[i]);
    // 20-point rule: the stored abscissae are the positive half, none at zero
    for (std::size_t k = 0; k < x.size(); ++k) {
      for (double sign : {-1.0, 1.0}) {
        const double omega = mid + sign * half * x[k];
        const auto v = model.eval_total(omega);
        const double weight = half * w[k] / kPi;
        nodes_.push_back({omega, weight * v.symmetric, weight * v.antisymmetric});
      }
    }
  }
}

std::complex<double> CorrelationSampler::operator()(double t) const {
  double re = 0.0;
  double im = 0.0;
  for (const auto& n : nodes_) {
    re += n.weighted_symmetric * std::cos(n.omega * t);
    im -= n.weighted_antisymmetric * std::sin(n.omega * t);
  }
  return {re, im};
}

std::vector<std::complex<double>> CorrelationSampler::uniform(double step, std::size_t count) const {
  constexpr std::size_t kReseed = 256;
  std::vector<std::complex<double>> out(count);
  std::vector<std::complex<double>> phase(nodes_.size());
  std::vector<std::complex<double>> rotation(nodes_.size());
  for (std::size_t k = 0; k < nodes_.size(); ++k) rotation[k] = std::polar(1.0, nodes_[k].omega * step);
  for (std::size_t j = 0; j < count; ++j) {
    const double t = static_cast<double>(j) * step;
    if (j % kReseed == 0) {
      for (std::size_t k = 0; k < nodes_.size(); ++k) phase[k] = std::polar(1.0, nodes_[k].omega * t);
    }
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      re += nodes_[k].weighted_symmetric * phase[k].real();
      im -= nodes_[k].weighted_antisymmetric * phase[k].imag();
      phase[k] *= rotation[k];
    }
    out[j] = {re, im};
  }
  return out;
}

double memory_time(const NoiseModel& model, double threshold, const MemoryTimeOptions& options) {
  if (!(threshold > 0.0)) throw ConfigError("memory-time threshold must be > 0");
  if (!(options.step > 0.0) || !(options.horizon > 0.0) || options.step > options.horizon)
    throw ConfigError("memory-time grid needs 0 < step <= horizon");
  const auto count = static_cast<std::size_t>(std::floor(options.horizon / options.step + 1e-9)) + 1;
  const CorrelationSampler sampler(model, options.horizon);
  const auto values = sampler.uniform(options.step, count);
  std::size_t first_quiet = count;
  for (std::size_t j = count; j-- > 0;) {
    if (std::abs(values[j]) >= threshold) break;
    first_quiet = j;
  }
  if (first_quiet == count) {
    std::ostringstream msg;
    msg << "no memory time found: |C(t)| >= " << threshold << " at the horizon t = "
        << static_cast<double>(count - 1) * options.step;
    throw NumericsError(msg.str());
  }
  return static_cast<double>(first_quiet) * options.step;
}

double default_memory_threshold(const NoiseModel& model) {
  double flat = std::numeric_limits<double>::infinity();
  double quantum = std::numeric_limits<double>::infinity();
  for (const auto& c : model.components()) {
    if (c.is_classical()) continue;
    if (c.kind() == NoiseKind::FlatThermal) flat = std::min(flat, c.gamma());
    if (c.is_thermal()) {
      quantum = std::min(quantum, c.gamma());
    } else {
      double peak = 0.0;
      for (const auto& p : c.table()) peak = std::max(peak, std::abs(p.antisymmetric));
      quantum = std::min(quantum, peak);
    }
  }
  if (std::isfinite(flat)) return std::sqrt(flat);
  if (std::isfinite(quantum)) return std::sqrt(quantum);
  throw ConfigError("memory-time threshold undefined for a model without quantum components");
}

}  // namespace kerrnoise
