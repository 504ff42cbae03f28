#include "spinfreeze/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>

#include "spinfreeze/error.hpp"

namespace spinfreeze {

const char* to_string(ModelKind m) {
  switch (m) {
    case ModelKind::two_spin:
      return "two_spin";
    case ModelKind::nv_reduced:
      return "nv_reduced";
    case ModelKind::nv_full:
      return "nv_full";
  }
  return "?";
}

const char* to_string(InitialKind k) {
  switch (k) {
    case InitialKind::basis:
      return "basis";
    case InitialKind::nuclear_superposition:
      return "nuclear_superposition";
    case InitialKind::equal_superposition:
      return "equal_superposition";
    case InitialKind::amplitudes:
      return "amplitudes";
  }
  return "?";
}

const char* to_string(MetricMode m) { return m == MetricMode::ground ? "ground" : "superposition"; }

namespace {

constexpr double kWindowShort = 10.0;  // us
constexpr double kWindowLong = 150.0;  // us
constexpr double kRotatingDt = 1e-3;
constexpr std::size_t kRotatingStride = 10;
constexpr double kLabRecordInterval = 0.01;
constexpr double kLabStepsPerPeriod = 40.0;

bool finite(double x) { return std::isfinite(x); }

void check_drive(const DriveConfig& d, const std::string& field) {
  if (!(d.rabi >= 0.0) || !finite(d.rabi)) throw ConfigError(field + ".rabi", "must be finite and >= 0");
  if (d.carrier && (!(*d.carrier > 0.0) || !finite(*d.carrier)))
    throw ConfigError(field + ".carrier", "must be positive or auto");
  if (!finite(d.phase)) throw ConfigError(field + ".phase", "must be finite");
}

ScenarioConfig two_spin_preset(std::string name, std::string description, double omega_1, double omega_2,
                               double v0) {
  ScenarioConfig c;
  c.name = std::move(name);
  c.description = std::move(description);
  c.model = ModelKind::two_spin;
  c.two_spin = {0.0, 0.0, omega_1, omega_2, v0};
  c.t2_us = 0.0;
  c.grid.t_end = kWindowShort;
  c.grid.dt = 0.0;
  return c;
}

ScenarioConfig nv_preset(std::string name, std::string description, double mw_rabi, double t_end) {
  ScenarioConfig c;
  c.name = std::move(name);
  c.description = std::move(description);
  c.model = ModelKind::nv_reduced;
  c.mw.rabi = mw_rabi;
  c.grid.t_end = t_end;
  c.grid.dt = 0.0;
  return c;
}

ScenarioConfig with_single_tone(ScenarioConfig c, double rabi) {
  c.noise.profile = NoiseProfile::single_tone;
  c.noise.amplitude = rabi;
  c.outputs.nuclear_marginal = true;
  return c;
}

std::map<std::string, ScenarioConfig> build_registry() {
  std::map<std::string, ScenarioConfig> r;
  auto add = [&](ScenarioConfig c) { r.emplace(c.name, std::move(c)); };

  add(two_spin_preset("fig2a", "two spins far apart, equal drives (Omega1 = Omega2 = 2 MHz, V0 = 0)", 2.0, 2.0, 0.0));
  add(two_spin_preset("fig2b", "two spins close, equal drives (Omega1 = Omega2 = 2 MHz, V0 = 2 MHz)", 2.0, 2.0, 2.0));
  add(two_spin_preset("fig2c", "two spins far apart, biased drives (Omega1 = 2 MHz, Omega2 = 100 kHz, V0 = 0)", 2.0,
                      0.1, 0.0));
  add(two_spin_preset("fig2d", "interaction-induced freezing (Omega1 = 2 MHz, Omega2 = 100 kHz, V0 = 2 MHz)", 2.0, 0.1,
                      2.0));

  {
    auto c = nv_preset("fig3a", "NV, equal drives (Omega_MW = Omega_RF = 4 MHz)", 4.0, kWindowShort);
    c.rf.rabi = 4.0;
    add(c);
  }
  {
    auto c = nv_preset("fig3b_caption", "NV nuclear freezing, caption RF value (Omega_MW = 4 MHz, Omega_RF = 40 kHz)",
                       4.0, kWindowShort);
    c.rf.rabi = 0.04;
    add(c);
  }
  {
    auto c = nv_preset("fig3b_text", "NV nuclear freezing, text RF value (Omega_MW = 4 MHz, Omega_RF = 100 kHz)", 4.0,
                       kWindowShort);
    c.rf.rabi = 0.1;
    add(c);
  }
  {
    auto c = nv_preset("fig3c", "NV nuclear freezing, long window (Omega_MW = 4 MHz, Omega_RF = 40 kHz)", 4.0,
                       kWindowLong);
    c.rf.rabi = 0.04;
    add(c);
  }

  add(with_single_tone(nv_preset("fig4a", "resonant RF noise tone (40 kHz), no MW", 0.0, kWindowLong), 0.04));
  add(with_single_tone(nv_preset("fig4b", "resonant RF noise tone (40 kHz) with MW decoupling (4 MHz)", 4.0, kWindowLong),
                       0.04));
  {
    auto c = with_single_tone(
        nv_preset("fig4c", "nuclear superposition under resonant RF noise (40 kHz), no MW", 0.0, kWindowLong), 0.04);
    c.initial.kind = InitialKind::nuclear_superposition;
    c.metric = MetricMode::superposition;
    add(c);
  }
  {
    auto c = with_single_tone(nv_preset("fig4d", "nuclear superposition under resonant RF noise (40 kHz) with MW (4 MHz)",
                                        4.0, kWindowLong),
                              0.04);
    c.initial.kind = InitialKind::nuclear_superposition;
    c.metric = MetricMode::superposition;
    add(c);
  }

  auto gaussian = [](ScenarioConfig c, double a0, double sigma) {
    c.noise.profile = NoiseProfile::gaussian;
    c.noise.amplitude = a0;
    c.noise.sigma = sigma;
    return c;
  };
  auto band = [](ScenarioConfig c, double k) {
    c.noise.profile = NoiseProfile::uniform_band;
    c.noise.amplitude = k;
    c.noise.half_width = 0.5;
    return c;
  };
  add(gaussian(nv_preset("fig5a", "Gaussian RF noise (A0 = 30 kHz, sigma = 10 kHz) with MW (4 MHz)", 4.0, kWindowLong),
               0.03, 0.01));
  add(gaussian(nv_preset("fig5b", "Gaussian RF noise (A0 = 30 kHz, sigma = 100 kHz) with MW (4 MHz)", 4.0, kWindowLong),
               0.03, 0.1));
  add(band(nv_preset("fig5c", "uniform-band RF noise (K = 10 kHz, +-0.5 MHz) with MW (4 MHz)", 4.0, kWindowLong), 0.01));
  add(band(nv_preset("fig5d", "uniform-band RF noise (K = 20 kHz, +-0.5 MHz) with MW (4 MHz)", 4.0, kWindowLong), 0.02));

  for (const auto& [name, desc, mw] :
       {std::tuple{"fig6a", "discord under resonant RF noise (40 kHz), no MW", 0.0},
        std::tuple{"fig6b", "discord under resonant RF noise (40 kHz) with MW (4 MHz)", 4.0}}) {
    auto c = with_single_tone(nv_preset(name, desc, mw, kWindowLong), 0.04);
    c.initial.kind = InitialKind::equal_superposition;
    c.outputs.discord = true;
    add(c);
  }
  return r;
}

const std::map<std::string, ScenarioConfig>& registry() {
  static const auto r = build_registry();
  return r;
}

std::vector<cplx> initial_amplitudes(const InitialState& s) {
  switch (s.kind) {
    case InitialKind::basis: {
      static const std::map<std::string, std::size_t> index = {{"gg", 0}, {"ge", 1}, {"eg", 2}, {"ee", 3}};
      const auto it = index.find(s.label);
      if (it == index.end()) throw ConfigError("initial.label", "expected one of gg, ge, eg, ee");
      std::vector<cplx> psi(4);
      psi[it->second] = 1.0;
      return psi;
    }
    case InitialKind::nuclear_superposition: {
      const double h = 1.0 / std::sqrt(2.0);
      return {h, h, 0.0, 0.0};
    }
    case InitialKind::equal_superposition:
      return {0.5, 0.5, 0.5, 0.5};
    case InitialKind::amplitudes: {
      double norm2 = 0.0;
      for (const auto& a : s.amplitudes) {
        if (!finite(a.real()) || !finite(a.imag())) throw ConfigError("initial.amplitude", "must be finite");
        norm2 += std::norm(a);
      }
      if (!(norm2 > 1e-24)) throw ConfigError("initial.amplitude", "state vector is zero");
      std::vector<cplx> psi(s.amplitudes.begin(), s.amplitudes.end());
      for (auto& a : psi) a /= std::sqrt(norm2);
      return psi;
    }
  }
  throw ConfigError("initial.kind", "unknown");
}

std::vector<DriveSpec> nv_drives(const ScenarioConfig& cfg, std::size_t realization, DriveSpec& mw, DriveSpec& rf) {
  const NVTransitions tr = nv_transitions(cfg.nv);
  mw = {DriveTarget::electron, cfg.mw.rabi, cfg.mw.carrier.value_or(tr.mw_midway()), cfg.mw.phase};
  rf = {DriveTarget::nuclear, cfg.rf.rabi, cfg.rf.carrier.value_or(tr.gg_ge), cfg.rf.phase};
  if (!cfg.noise.profile) return {};

  const NoiseConfig& n = cfg.noise;
  const double center = n.center.value_or(tr.gg_ge);
  const std::uint64_t seed = cfg.seed + realization;
  NoiseModel model;
  switch (*n.profile) {
    case NoiseProfile::single_tone:
      model = single_tone_noise(n.amplitude, center, n.phase);
      break;
    case NoiseProfile::gaussian:
      model = gaussian_noise(n.amplitude, n.sigma, center, n.n_tones, seed, n.normalization);
      break;
    case NoiseProfile::uniform_band:
      model = uniform_band_noise(n.amplitude, center - n.half_width, center + n.half_width, n.n_tones, seed,
                                 n.normalization);
      break;
  }
  return noise_drive_terms(model, DriveTarget::nuclear);
}

void accumulate(TimeSeries& sum, const TimeSeries& s, std::size_t r) {
  if (r == 0) {
    sum = s;
    return;
  }
  if (s.size() != sum.size()) throw ContractViolation("realizations recorded different time grids");
  for (std::size_t k = 0; k < s.size(); ++k) {
    for (std::size_t i = 0; i < s.populations[k].size(); ++i) sum.populations[k][i] += s.populations[k][i];
    sum.trace_error[k] = std::max(sum.trace_error[k], s.trace_error[k]);
    sum.min_eigenvalue[k] = std::min(sum.min_eigenvalue[k], s.min_eigenvalue[k]);
    sum.hermiticity_error[k] = std::max(sum.hermiticity_error[k], s.hermiticity_error[k]);
    if (!sum.states.empty()) sum.states[k] += s.states[k];
  }
  sum.worst_trace_error = std::max(sum.worst_trace_error, s.worst_trace_error);
  sum.worst_min_eigenvalue = std::min(sum.worst_min_eigenvalue, s.worst_min_eigenvalue);
  sum.steps_taken += s.steps_taken;
}

void finish_average(TimeSeries& sum, std::size_t n) {
  if (n <= 1) return;
  const double w = 1.0 / static_cast<double>(n);
  for (auto& row : sum.populations)
    for (auto& p : row) p *= w;
  for (auto& st : sum.states) {
    st *= cplx(w);
    st.symmetrize();
  }
}

}  // namespace

void ScenarioConfig::validate() const {
  if (name.empty() || !std::all_of(name.begin(), name.end(), [](char ch) {
        return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.';
      }))
    throw ConfigError("name", "must be non-empty and use only letters, digits, '_', '-', '.'");

  if (model == ModelKind::two_spin) {
    two_spin.validate();
    if (frame != Frame::rotating) throw ConfigError("frame", "the two_spin model is defined in the rotating frame only");
    if (mw.rabi != 0.0 || rf.rabi != 0.0)
      throw ConfigError("mw.rabi", "the two_spin model takes its drives from two_spin.omega_1/omega_2");
    if (noise.profile) throw ConfigError("noise.profile", "noise applies to the NV models only");
  } else {
    nv.validate();
    if (model == ModelKind::nv_full && frame != Frame::lab)
      throw ConfigError("frame", "the nv_full model runs in the lab frame only");
  }
  check_drive(mw, "mw");
  check_drive(rf, "rf");

  if (noise.profile) {
    const NoiseConfig& n = noise;
    if (!(n.amplitude >= 0.0) || !finite(n.amplitude)) throw ConfigError("noise.amplitude", "must be finite and >= 0");
    if (*n.profile == NoiseProfile::gaussian && !(n.sigma > 0.0)) throw ConfigError("noise.sigma", "must be > 0");
    if (*n.profile == NoiseProfile::uniform_band && !(n.half_width > 0.0))
      throw ConfigError("noise.half_width", "must be > 0");
    if (n.center && !(*n.center > 0.0)) throw ConfigError("noise.center", "must be positive or auto");
    if (n.n_tones == 0) throw ConfigError("noise.n_tones", "must be >= 1");
    if (n.realizations == 0) throw ConfigError("noise.realizations", "must be >= 1");
    if (!finite(n.phase)) throw ConfigError("noise.phase", "must be finite");
  }

  initial_amplitudes(initial);

  if (!(t2_us >= 0.0) || !finite(t2_us)) throw ConfigError("dephasing.t2_us", "must be finite and >= 0 (0 disables)");
  if (!(grid.t_end > 0.0) || !finite(grid.t_end)) throw ConfigError("grid.t_end", "must be positive");
  if (!(grid.dt >= 0.0) || grid.dt > grid.t_end) throw ConfigError("grid.dt", "must satisfy 0 <= dt <= t_end (0 = auto)");
  if (grid.record_stride == 0) throw ConfigError("grid.record_stride", "must be positive");
  if (!(grid.rtol > 0.0)) throw ConfigError("grid.rtol", "must be > 0");
  if (!(grid.atol > 0.0)) throw ConfigError("grid.atol", "must be > 0");

  if (outputs.discord) {
    if (model == ModelKind::nv_full) throw ConfigError("outputs.discord", "requires a two-qubit model");
    if (!(outputs.discord_stride > 0.0)) throw ConfigError("outputs.discord_stride", "must be > 0");
    if (outputs.discord_options.n_theta < 8) throw ConfigError("discord.n_theta", "must be >= 8");
    if (outputs.discord_options.n_phi < 8) throw ConfigError("discord.n_phi", "must be >= 8");
  }
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : registry()) v.push_back(k);
    return v;
  }();
  return names;
}

ScenarioConfig preset(const std::string& name) {
  const auto it = registry().find(name);
  if (it == registry().end()) {
    std::string valid;
    for (const auto& n : preset_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw ConfigError("preset", "unknown preset '" + name + "'; valid presets: " + valid);
  }
  return it->second;
}

ScenarioConfig with_frame(ScenarioConfig cfg, Frame frame) {
  cfg.frame = frame;
  return cfg;
}

ComplexMatrix initial_density_matrix(const ScenarioConfig& cfg) {
  const std::vector<cplx> psi = initial_amplitudes(cfg.initial);
  if (cfg.model != ModelKind::nv_full) return ComplexMatrix::projector(psi);
  std::vector<cplx> full(9);
  for (std::size_t k = 0; k < 4; ++k) full[kReducedSubspaceIndices[k]] = psi[k];
  return ComplexMatrix::projector(full);
}

HamiltonianModel build_model(const ScenarioConfig& cfg, std::size_t realization) {
  if (cfg.model == ModelKind::two_spin) return two_spin_hamiltonian(cfg.two_spin);

  DriveSpec mw, rf;
  const std::vector<DriveSpec> noise = nv_drives(cfg, realization, mw, rf);
  if (cfg.frame == Frame::rotating) return rotating_frame_model(cfg.nv, mw, rf, noise);

  std::vector<DriveSpec> drives;
  if (mw.rabi > 0.0) drives.push_back(mw);
  if (rf.rabi > 0.0) drives.push_back(rf);
  drives.insert(drives.end(), noise.begin(), noise.end());
  return nv_lab_model(cfg.nv, cfg.model == ModelKind::nv_full ? 9 : 4, drives);
}

SimulationGrid resolved_grid(const ScenarioConfig& cfg, const HamiltonianModel& model) {
  SimulationGrid g = cfg.grid;
  g.keep_states = cfg.outputs.discord;
  if (g.dt > 0.0) return g;
  if (model.frame() == Frame::rotating || model.max_frequency() == 0.0) {
    g.dt = kRotatingDt;
    g.record_stride = kRotatingStride;
  } else {
    const auto k =
        static_cast<std::size_t>(std::ceil(kLabRecordInterval * kLabStepsPerPeriod * model.max_frequency()));
    g.dt = kLabRecordInterval / static_cast<double>(k);
    g.record_stride = k;
  }
  return g;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, unsigned threads) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  ScenarioResult res;
  res.config = cfg;
  const ComplexMatrix rho0 = initial_density_matrix(cfg);
  const std::size_t n_real = cfg.noise.profile && *cfg.noise.profile != NoiseProfile::single_tone
                                 ? cfg.noise.realizations
                                 : 1;
  std::set<std::string> seen;
  for (std::size_t r = 0; r < n_real; ++r) {
    const HamiltonianModel model = build_model(cfg, r);
    for (const auto& w : model.warnings())
      if (seen.insert(w).second) res.warnings.push_back(w);

    std::vector<LindbladChannel> channels;
    if (cfg.t2_us > 0.0) channels.push_back(electron_dephasing(cfg.t2_us, model.dim()));

    const SimulationGrid grid = resolved_grid(cfg, model);
    grid.validate(model);
    try {
      accumulate(res.series, propagate(rho0, model, channels, grid), r);
    } catch (const IntegrationFailure& e) {
      throw IntegrationFailure("scenario " + cfg.name + ": " + e.what(), e.time_us());
    }
  }
  finish_average(res.series, n_real);

  res.metrics = freezing_metrics(res.series, cfg.metric);
  if (cfg.outputs.discord)
    res.discord = discord_trace(res.series, cfg.outputs.discord_stride, cfg.outputs.discord_options, threads);
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

std::vector<std::array<double, 4>> reduced_populations(const TimeSeries& series) {
  std::vector<std::array<double, 4>> out;
  out.reserve(series.size());
  for (const auto& p : series.populations) out.push_back(subspace_populations(p));
  return out;
}

std::vector<std::array<double, 2>> nuclear_populations(const TimeSeries& series) {
  std::vector<std::array<double, 2>> out;
  out.reserve(series.size());
  for (const auto& p : series.populations) {
    if (p.size() == 4) {
      out.push_back({p[0] + p[2], p[1] + p[3]});
    } else if (p.size() == 9) {
      // index 3 * i_S + i_I; nuclear g, e are m_I = +1, 0 (i_I = 0, 1)
      out.push_back({p[0] + p[3] + p[6], p[1] + p[4] + p[7]});
    } else {
      throw DimensionError("nuclear_populations: expected 4 or 9 populations");
    }
  }
  return out;
}

std::vector<double> leakage_trace(const TimeSeries& series, MetricMode mode) {
  std::vector<double> out;
  out.reserve(series.size());
  if (mode == MetricMode::ground) {
    for (const auto& p : reduced_populations(series)) out.push_back(p[1] + p[3]);
  } else {
    const auto nuc = nuclear_populations(series);
    for (const auto& n : nuc) out.push_back(std::abs(n[0] - nuc.front()[0]));
  }
  return out;
}

FreezingMetrics freezing_metrics(const TimeSeries& series, MetricMode mode) {
  if (series.size() == 0) throw ConfigError("populations", "time series has no records");
  const auto trace = leakage_trace(series, mode);
  FreezingMetrics m;
  m.mode = mode;
  double sum = 0.0;
  for (double x : trace) {
    m.max_leakage = std::max(m.max_leakage, x);
    sum += x;
  }
  m.mean_leakage = sum / static_cast<double>(trace.size());
  m.time_window = series.times.back() - series.times.front();
  return m;
}

double window_mean_leakage(const TimeSeries& series, MetricMode mode, double t0, double t1) {
  const auto trace = leakage_trace(series, mode);
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (series.times[k] < t0 - 1e-9 || series.times[k] > t1 + 1e-9) continue;
    sum += trace[k];
    ++n;
  }
  if (n == 0) throw ConfigError("window", "no records inside the requested window");
  return sum / static_cast<double>(n);
}

}  // namespace spinfreeze
