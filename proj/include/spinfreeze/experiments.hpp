#pragma once

// Declarative scenarios for the two-spin and NV freezing experiments, the
// preset registry and the freezing metrics.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinfreeze/discord.hpp"
#include "spinfreeze/dynamics.hpp"
#include "spinfreeze/hamiltonians.hpp"
#include "spinfreeze/noise.hpp"

namespace spinfreeze {

enum class ModelKind { two_spin, nv_reduced, nv_full };

/// basis: one of gg, ge, eg, ee.
/// nuclear_superposition: electron |g>, nucleus (|g> + |e>)/sqrt(2).
/// equal_superposition: (|g> + |e>)(|g> + |e>)/2.
/// amplitudes: the four amplitudes as given (normalised to 1e-12).
enum class InitialKind { basis, nuclear_superposition, equal_superposition, amplitudes };

enum class MetricMode { ground, superposition };

const char* to_string(ModelKind m);
const char* to_string(InitialKind k);
const char* to_string(MetricMode m);

struct InitialState {
  InitialKind kind = InitialKind::basis;
  std::string label = "gg";
  std::array<cplx, 4> amplitudes{cplx(1.0), cplx(0.0), cplx(0.0), cplx(0.0)};

  bool operator==(const InitialState&) const = default;
};

/// A carrier of nullopt means "auto": the MW carrier sits midway between the
/// two electron transitions and the RF carrier is resonant with |gg> -> |ge>.
struct DriveConfig {
  double rabi = 0.0;
  std::optional<double> carrier;
  double phase = 0.0;

  bool operator==(const DriveConfig&) const = default;
};

/// RF noise on the nucleus. The center defaults to the |gg> -> |ge> frequency.
/// Each realization r draws its tone phases from seed + r and the recorded
/// populations and states are the realization average.
struct NoiseConfig {
  std::optional<NoiseProfile> profile;  // nullopt: no noise
  double amplitude = 0.0;               // single-tone Rabi, Gaussian A0 or band K (MHz)
  double sigma = 0.0;                   // Gaussian width (MHz)
  double half_width = 0.5;              // uniform band half width (MHz)
  std::optional<double> center;
  std::size_t n_tones = 101;
  NoiseNormalization normalization = NoiseNormalization::sqrt_n;
  std::size_t realizations = 1;
  double phase = 0.0;  // single tone only

  bool operator==(const NoiseConfig&) const = default;
};

struct OutputConfig {
  bool nuclear_marginal = false;
  bool discord = false;
  double discord_stride = 0.5;  // us
  DiscordOptions discord_options;

  bool operator==(const OutputConfig&) const = default;
};

/// grid.dt == 0 selects the default step for the frame: 1e-3 us with a record
/// every 10 steps in the rotating frame; in the lab frame the largest step of
/// the form 0.01/k us not exceeding 1/(40 f_max) (f_max from
/// HamiltonianModel::max_frequency), recording every 0.01 us.
struct ScenarioConfig {
  std::string name = "custom";
  std::string description;
  ModelKind model = ModelKind::nv_reduced;
  TwoSpinParams two_spin;
  NVParams nv;
  InitialState initial;
  DriveConfig mw;
  DriveConfig rf;
  NoiseConfig noise;
  double t2_us = 150.0;  // 0 disables electron dephasing
  SimulationGrid grid;
  Frame frame = Frame::rotating;
  OutputConfig outputs;
  std::uint64_t seed = 0;
  MetricMode metric = MetricMode::ground;

  bool operator==(const ScenarioConfig&) const = default;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

struct FreezingMetrics {
  MetricMode mode = MetricMode::ground;
  double max_leakage = 0.0;
  double mean_leakage = 0.0;
  double time_window = 0.0;  // us
};

struct ScenarioResult {
  ScenarioConfig config;
  TimeSeries series;  // populations in the model basis (4 or 9 levels)
  FreezingMetrics metrics;
  std::optional<DiscordTrace> discord;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;
};

/// Sorted preset names.
const std::vector<std::string>& preset_names();

/// Throws ConfigError (field "preset") listing the valid names.
ScenarioConfig preset(const std::string& name);

/// Sets the frame and, for an automatic grid, nothing else; the step is
/// resolved when the scenario runs.
ScenarioConfig with_frame(ScenarioConfig cfg, Frame frame);

/// Normalised initial state of the configured model (4 or 9 levels).
ComplexMatrix initial_density_matrix(const ScenarioConfig& cfg);

/// Hamiltonian model for one noise realization.
HamiltonianModel build_model(const ScenarioConfig& cfg, std::size_t realization = 0);

/// Grid with the automatic step resolved for the given model.
SimulationGrid resolved_grid(const ScenarioConfig& cfg, const HamiltonianModel& model);

/// Runs all realizations, averages them, computes metrics and (if enabled)
/// the discord trace. Propagation failures are rethrown as IntegrationFailure
/// naming the scenario.
ScenarioResult run_scenario(const ScenarioConfig& cfg, unsigned threads = 1);

/// (P_gg, P_ge, P_eg, P_ee) for every record.
std::vector<std::array<double, 4>> reduced_populations(const TimeSeries& series);

/// (P_g, P_e) of the nucleus for every record.
std::vector<std::array<double, 2>> nuclear_populations(const TimeSeries& series);

/// Per-record leakage: P_ge + P_ee (ground) or |P_g^N(t) - P_g^N(0)| (superposition).
std::vector<double> leakage_trace(const TimeSeries& series, MetricMode mode);

/// Max and mean of leakage_trace over the whole series. Throws ConfigError for
/// an empty series.
FreezingMetrics freezing_metrics(const TimeSeries& series, MetricMode mode);

/// Mean leakage over records with t in [t0, t1].
double window_mean_leakage(const TimeSeries& series, MetricMode mode, double t0, double t1);

}  // namespace spinfreeze
