#pragma once

// Quantum discord of a two-qubit state with projective measurements on one
// qubit, maximised over the measurement basis by grid search plus a local
// Nelder-Mead polish.

#include <cstddef>
#include <vector>

#include "spinfreeze/dynamics.hpp"
#include "spinfreeze/linalg.hpp"

namespace spinfreeze {

/// Orthonormal pair |u> = cos(theta)|0> + e^{i phi} sin(theta)|1>,
///                  |v> = sin(theta)|0> - e^{i phi} cos(theta)|1>.
struct MeasurementBasis {
  double theta = 0.0;
  double phi = 0.0;

  std::vector<cplx> u() const;
  std::vector<cplx> v() const;
};

struct DiscordOptions {
  std::size_t n_theta = 64;  // grid over [0, pi/2], endpoints included
  std::size_t n_phi = 128;   // grid over [0, 2 pi)
  bool refine = true;
  LogBase log_base = LogBase::natural;
  Subsystem measured = Subsystem::first;

  bool operator==(const DiscordOptions&) const = default;
};

struct DiscordResult {
  double discord = 0.0;
  double mutual_info = 0.0;
  double classical_corr = 0.0;
  MeasurementBasis argmax_basis;
  std::size_t n_theta = 0;
  std::size_t n_phi = 0;
  bool refined = false;
};

/// S(rho_A) + S(rho_B) - S(rho).
double mutual_information(const ComplexMatrix& rho, LogBase base = LogBase::natural);

/// S(rho_B) - sum_k p_k S(rho_{B|k}) for a projective measurement on the
/// `measured` qubit. Outcomes with p_k < 1e-12 contribute nothing.
double conditional_information(const ComplexMatrix& rho, const MeasurementBasis& basis,
                               Subsystem measured = Subsystem::first, LogBase base = LogBase::natural);

/// I(rho) - max_basis conditional_information; floored at zero when it dips
/// below it by no more than 1e-9.
DiscordResult quantum_discord(const ComplexMatrix& rho, const DiscordOptions& opts = {});

struct DiscordTrace {
  std::vector<double> times;
  std::vector<DiscordResult> values;
};

/// Discord at every stored state whose time is a multiple of `stride_us`
/// (all stored states when stride_us <= 0). Requires a series recorded with
/// keep_states; evaluations run on up to `threads` worker threads and the
/// result does not depend on the thread count.
DiscordTrace discord_trace(const TimeSeries& series, double stride_us, const DiscordOptions& opts = {},
                           unsigned threads = 1);

/// Exchanges the two qubits: SWAP rho SWAP.
ComplexMatrix swap_qubits(const ComplexMatrix& rho);

}  // namespace spinfreeze
