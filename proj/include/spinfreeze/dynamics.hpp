#pragma once

// Density-matrix propagation under the Lindblad master equation
//   d rho/dt = -i[H(t), rho] + sum_k (L_k rho L_k^dagger - {L_k^dagger L_k, rho}/2)
// with H in rad/us and t in us.

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "spinfreeze/hamiltonians.hpp"
#include "spinfreeze/linalg.hpp"

namespace spinfreeze {

struct LindbladChannel {
  ComplexMatrix op;
  std::string label;
};

/// sqrt(1/T2) * S_z on the electron, embedded in a 4- or 9-level model.
LindbladChannel electron_dephasing(double t2_us, std::size_t model_dim);

enum class Method { rk4_fixed, rk45_adaptive, expm_piecewise_oracle };

const char* to_string(Method m);

/// Time grid. For rk45_adaptive, `dt` is the initial step and the recording
/// interval is still dt * record_stride.
struct SimulationGrid {
  double t_end = 1.0;
  double dt = 1e-3;
  std::size_t record_stride = 1;
  Method method = Method::rk4_fixed;
  bool keep_states = false;
  double rtol = 1e-10;
  double atol = 1e-12;

  /// Checks 0 < dt <= t_end, and dt <= 1/(20 f_max) for lab-frame fixed-step runs.
  void validate(const HamiltonianModel& model) const;
  bool operator==(const SimulationGrid&) const = default;
};

/// Recorded trajectory. Vectors indexed by record are all the same length.
struct TimeSeries {
  std::vector<double> times;
  std::vector<std::vector<double>> populations;
  std::vector<double> trace_error;
  std::vector<double> min_eigenvalue;
  std::vector<double> hermiticity_error;
  std::vector<ComplexMatrix> states;  // only with SimulationGrid::keep_states

  // Extremes over every integration step, not only recorded ones.
  double worst_trace_error = 0.0;
  double worst_min_eigenvalue = 1.0;
  std::size_t steps_taken = 0;

  std::size_t size() const noexcept { return times.size(); }
};

/// -i[H, rho] + sum (L rho L^dagger - {L^dagger L, rho}/2).
ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& h,
                           const std::vector<LindbladChannel>& channels);

/// Integrates from rho0 over [0, t_end]. Throws IntegrationFailure if an
/// eigenvalue drops below -1e-6 or the trace drifts by more than 1e-9.
TimeSeries propagate(const ComplexMatrix& rho0, const HamiltonianModel& model,
                     const std::vector<LindbladChannel>& channels, const SimulationGrid& grid);

/// Real parts of the diagonal.
std::vector<double> populations(const ComplexMatrix& rho);

/// (P_g, P_e) of the nucleus after tracing out the electron. Accepts the
/// two-qubit state or the nine-level state (where g, e are m_I = +1, 0).
std::array<double, 2> nuclear_marginal(const ComplexMatrix& rho);

/// Reduced populations (|gg>, |ge>, |eg>, |ee>) of a 4- or 9-level population vector.
std::array<double, 4> subspace_populations(const std::vector<double>& pops);

/// Checks a density matrix: Hermitian, unit trace (1e-9), eigenvalues >= -1e-9.
void validate_density_matrix(const ComplexMatrix& rho);

}  // namespace spinfreeze
