#pragma once

// Spin Hamiltonians for the driven two-spin model and the NV electron/14N
// nuclear pair.
//
// Units: frequencies in MHz, times in microseconds. Every matrix returned here
// is an angular frequency in rad/us, i.e. the 2*pi factors are already applied.
//
// Two-qubit basis ordering is |gg>, |ge>, |eg>, |ee> with the electron (or
// first spin) as the left tensor factor and |g> = (1, 0). For the NV centre the
// electron |g>,|e> are m_S = 0, -1 and the nuclear |g>,|e> are m_I = +1, 0.
// The nine-level model orders states (m_S, m_I) with m = +1, 0, -1 for both.

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "spinfreeze/linalg.hpp"

namespace spinfreeze {

/// Driven two-level pair: detunings, Rabi frequencies and interaction, all MHz.
struct TwoSpinParams {
  double delta_1 = 0.0;
  double delta_2 = 0.0;
  double omega_1 = 0.0;
  double omega_2 = 0.0;
  double v0 = 0.0;

  void validate() const;
  bool operator==(const TwoSpinParams&) const = default;
};

/// NV ground-state constants. `gn_mun` is in kHz/G, everything else in MHz
/// (or MHz/G); `b_z` is the axial field in gauss.
struct NVParams {
  double d = 2870.0;
  double ge_mub = 2.802;
  double gn_mun = 0.308;
  double a_par = -2.16;
  double a_perp = -2.70;
  double q = -4.962;
  double b_z = 500.0;

  void validate() const;
  double nuclear_zeeman_mhz() const { return gn_mun * 1e-3 * b_z; }
  double electron_zeeman_mhz() const { return ge_mub * b_z; }
  bool operator==(const NVParams&) const = default;
};

enum class DriveTarget { electron, nuclear };
enum class Frame { lab, rotating };

const char* to_string(DriveTarget t);
const char* to_string(Frame f);

/// A sinusoidal drive 2*pi*rabi*sin(2*pi*carrier*t + phase) * C. `rabi` is the
/// resonant population flopping frequency (flop period 1/rabi).
struct DriveSpec {
  DriveTarget target = DriveTarget::electron;
  double rabi = 0.0;
  double carrier = 0.0;
  double phase = 0.0;

  void validate() const;
  bool operator==(const DriveSpec&) const = default;
};

/// Signed transition frequencies E_final - E_initial of the reduced NV model
/// (MHz), read off the nine-level Hamiltonian's diagonal.
struct NVTransitions {
  double gg_eg = 0.0;  // electron flip, nucleus in |g>
  double ge_ee = 0.0;  // electron flip, nucleus in |e>
  double gg_ge = 0.0;  // nuclear flip, electron in |g>
  double eg_ee = 0.0;  // nuclear flip, electron in |e>

  /// Microwave carrier half-way between the two electron transitions.
  double mw_midway() const { return 0.5 * (gg_eg + ge_ee); }
};

/// Indices of |gg>, |ge>, |eg>, |ee> inside the nine-level basis.
inline constexpr std::array<std::size_t, 4> kReducedSubspaceIndices = {3, 4, 6, 7};

/// Off-resonant phasor: adds 2*pi*(e^{i 2 pi detuning t} value |row><col| + h.c.).
struct RotatingTerm {
  struct Entry {
    std::size_t row;
    std::size_t col;
    cplx value;
  };
  double detuning = 0.0;
  std::vector<Entry> entries;
};

/// Lab-frame sinusoidal drive with its Hermitian coupling operator.
struct LabDrive {
  DriveSpec spec;
  ComplexMatrix coupling;
};

/// Static Hamiltonian plus time-dependent drive terms.
class HamiltonianModel {
 public:
  HamiltonianModel() = default;
  HamiltonianModel(ComplexMatrix static_part, Frame frame);

  void add_lab_drive(const DriveSpec& spec, ComplexMatrix coupling);
  void add_rotating_term(RotatingTerm term);
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

  ComplexMatrix evaluate(double t_us) const;
  /// Allocation-free variant; `out` must already have the model dimension.
  void evaluate_into(double t_us, ComplexMatrix& out) const;

  std::size_t dim() const noexcept { return static_part_.dim(); }
  Frame frame() const noexcept { return frame_; }
  bool is_time_dependent() const noexcept { return !lab_drives_.empty() || !rotating_.empty(); }
  /// Largest of the static spectral width, the lab carriers and the
  /// rotating-term detuning magnitudes (MHz).
  double max_frequency() const;

  const ComplexMatrix& static_part() const noexcept { return static_part_; }
  const std::vector<LabDrive>& lab_drives() const noexcept { return lab_drives_; }
  const std::vector<RotatingTerm>& rotating_terms() const noexcept { return rotating_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  struct SparseCoupling {
    std::vector<RotatingTerm::Entry> entries;  // full (not just upper) support
  };

  ComplexMatrix static_part_;
  Frame frame_ = Frame::rotating;
  std::vector<LabDrive> lab_drives_;
  std::vector<SparseCoupling> lab_sparse_;
  std::vector<RotatingTerm> rotating_;
  std::vector<std::string> warnings_;
};

/// Resonant-frame two-spin Hamiltonian
/// 2*pi*[-sum_i delta_i s_ee^i + sum_i (omega_i/2) s_x^i + v0 s_ee^1 s_ee^2].
HamiltonianModel two_spin_hamiltonian(const TwoSpinParams& p);

/// Nine-level NV ground manifold (electron (x) nucleus, both spin-1).
ComplexMatrix nv_ground_hamiltonian_full(const NVParams& p);

/// Two-qubit NV Hamiltonian on {|0>,|-1>}_e (x) {|+1>,|0>}_N.
ComplexMatrix nv_reduced_hamiltonian(const NVParams& p);

NVTransitions nv_transitions(const NVParams& p);

/// Coupling operator C of a drive in a 4- or 9-dimensional model, scaled so
/// that `rabi` is the flop frequency of each two-level transition it drives.
ComplexMatrix drive_coupling(DriveTarget target, std::size_t model_dim);

/// 2*pi*rabi*sin(2*pi*carrier*t + phase) * drive_coupling(target, model_dim).
ComplexMatrix drive_term(const DriveSpec& d, std::size_t model_dim, double t_us);

/// Electron S_z embedded in the model space: diag(0, -1) (x) I_2 for the
/// two-qubit models, S_z (x) I_3 for the nine-level one.
ComplexMatrix electron_sz(std::size_t model_dim);

/// Lab-frame NV model (4 or 9 levels) with exact sinusoidal carriers.
HamiltonianModel nv_lab_model(const NVParams& p, std::size_t model_dim,
                              const std::vector<DriveSpec>& drives);

/// Rotating-wave transform of a lab model with diagonal static part into the
/// frame rotating at `frame_mhz[k]` on level k. Each drive element keeps the
/// co-rotating exponential closest to resonance; static off-diagonals are
/// carried exactly.
HamiltonianModel rotate_to_frame(const HamiltonianModel& lab, const std::vector<double>& frame_mhz);

/// Reduced NV model in the frame rotating with the MW carrier on the electron
/// and the RF carrier on the nucleus. `extra` drives (e.g. noise tones) are
/// transformed into the same frame. Drives whose Rabi frequency exceeds a
/// tenth of their carrier leave a warning on the returned model.
HamiltonianModel rotating_frame_model(const NVParams& p, const DriveSpec& mw, const DriveSpec& rf,
                                      const std::vector<DriveSpec>& extra = {});

}  // namespace spinfreeze
