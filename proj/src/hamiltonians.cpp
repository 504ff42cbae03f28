#include "spinfreeze/hamiltonians.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>

#include "spinfreeze/error.hpp"

namespace spinfreeze {

namespace {

bool finite(double x) { return std::isfinite(x); }

std::vector<RotatingTerm::Entry> nonzero_entries(const ComplexMatrix& m) {
  std::vector<RotatingTerm::Entry> out;
  for (std::size_t r = 0; r < m.dim(); ++r)
    for (std::size_t c = 0; c < m.dim(); ++c)
      if (m(r, c) != cplx(0.0)) out.push_back({r, c, m(r, c)});
  return out;
}

std::string fmt_mhz(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g MHz", x);
  return buf;
}

}  // namespace

const char* to_string(DriveTarget t) { return t == DriveTarget::electron ? "electron" : "nuclear"; }
const char* to_string(Frame f) { return f == Frame::lab ? "lab" : "rotating"; }

void TwoSpinParams::validate() const {
  for (double x : {delta_1, delta_2, omega_1, omega_2, v0})
    if (!finite(x)) throw ConfigError("two_spin", "parameters must be finite");
  if (omega_1 < 0.0) throw ConfigError("two_spin.omega_1", "must be >= 0");
  if (omega_2 < 0.0) throw ConfigError("two_spin.omega_2", "must be >= 0");
}

void NVParams::validate() const {
  for (double x : {d, ge_mub, gn_mun, a_par, a_perp, q, b_z})
    if (!finite(x)) throw ConfigError("nv", "parameters must be finite");
  if (d <= 0.0) throw ConfigError("nv.d", "must be > 0");
  if (b_z < 0.0) throw ConfigError("nv.b_z", "must be >= 0");
}

void DriveSpec::validate() const {
  if (!finite(rabi) || rabi < 0.0) throw ConfigError("drive.rabi", "must be finite and >= 0");
  if (!finite(carrier) || carrier < 0.0) throw ConfigError("drive.carrier", "must be finite and >= 0");
  if (!finite(phase)) throw ConfigError("drive.phase", "must be finite");
}

HamiltonianModel::HamiltonianModel(ComplexMatrix static_part, Frame frame)
    : static_part_(std::move(static_part)), frame_(frame) {
  if (!is_hermitian(static_part_)) throw ContractViolation("HamiltonianModel: static part is not Hermitian");
}

void HamiltonianModel::add_lab_drive(const DriveSpec& spec, ComplexMatrix coupling) {
  spec.validate();
  if (coupling.dim() != dim()) throw DimensionError("HamiltonianModel: drive coupling has wrong dimension");
  if (!is_hermitian(coupling)) throw ContractViolation("HamiltonianModel: drive coupling is not Hermitian");
  lab_sparse_.push_back({nonzero_entries(coupling)});
  lab_drives_.push_back({spec, std::move(coupling)});
}

void HamiltonianModel::add_rotating_term(RotatingTerm term) {
  for (const auto& e : term.entries) {
    if (e.row >= dim() || e.col >= dim() || e.row == e.col)
      throw DimensionError("HamiltonianModel: rotating term entry must be off-diagonal and in range");
  }
  rotating_.push_back(std::move(term));
}

void HamiltonianModel::evaluate_into(double t, ComplexMatrix& out) const {
  out.data() = static_part_.data();
  for (std::size_t k = 0; k < lab_drives_.size(); ++k) {
    const DriveSpec& s = lab_drives_[k].spec;
    const double amp = kTwoPi * s.rabi * std::sin(kTwoPi * s.carrier * t + s.phase);
    if (amp == 0.0) continue;
    for (const auto& e : lab_sparse_[k].entries) out(e.row, e.col) += amp * e.value;
  }
  for (const auto& term : rotating_) {
    const double arg = kTwoPi * term.detuning * t;
    const cplx phasor = kTwoPi * cplx(std::cos(arg), std::sin(arg));
    for (const auto& e : term.entries) {
      const cplx z = phasor * e.value;
      out(e.row, e.col) += z;
      out(e.col, e.row) += std::conj(z);
    }
  }
}

ComplexMatrix HamiltonianModel::evaluate(double t) const {
  ComplexMatrix out(dim());
  evaluate_into(t, out);
  return out;
}

double HamiltonianModel::max_frequency() const {
  const auto ev = hermitian_eigenvalues(static_part_);
  double f = ev.empty() ? 0.0 : (ev.back() - ev.front()) / kTwoPi;
  for (const auto& d : lab_drives_) f = std::max(f, d.spec.carrier);
  for (const auto& r : rotating_) f = std::max(f, std::abs(r.detuning));
  return f;
}

HamiltonianModel two_spin_hamiltonian(const TwoSpinParams& p) {
  p.validate();
  const ComplexMatrix id = ComplexMatrix::identity(2);
  const ComplexMatrix see = sigma_ee();
  const ComplexMatrix sx = pauli_x();
  ComplexMatrix h = -p.delta_1 * kron(see, id) - p.delta_2 * kron(id, see);
  h += 0.5 * p.omega_1 * kron(sx, id);
  h += 0.5 * p.omega_2 * kron(id, sx);
  h += p.v0 * kron(see, see);
  h *= kTwoPi;
  return HamiltonianModel(std::move(h), Frame::rotating);
}

ComplexMatrix nv_ground_hamiltonian_full(const NVParams& p) {
  p.validate();
  const ComplexMatrix id = ComplexMatrix::identity(3);
  const ComplexMatrix sx = spin1_x();
  const ComplexMatrix sy = spin1_y();
  const ComplexMatrix sz = spin1_z();
  const ComplexMatrix sz_e = kron(sz, id);
  const ComplexMatrix iz_n = kron(id, sz);

  ComplexMatrix h = p.d * (sz_e * sz_e);
  h += p.electron_zeeman_mhz() * sz_e;
  h += p.a_perp * (kron(sx, sx) + kron(sy, sy));
  h += p.a_par * kron(sz, sz);
  h += p.q * (iz_n * iz_n);
  h -= p.nuclear_zeeman_mhz() * iz_n;
  h *= kTwoPi;
  h.symmetrize();
  return h;
}

// The nuclear Zeeman term enters with the sign of the nine-level model, so
// every transition frequency matches the corresponding gap there exactly.
ComplexMatrix nv_reduced_hamiltonian(const NVParams& p) {
  p.validate();
  const ComplexMatrix id = ComplexMatrix::identity(2);
  const ComplexMatrix sz = pauli_z();
  const double a = p.a_par;
  const double electron = -(p.d - p.electron_zeeman_mhz() - 0.5 * a);
  const double nuclear = p.q - p.nuclear_zeeman_mhz() - 0.5 * a;
  ComplexMatrix h = electron * kron(sz, id);
  h += nuclear * kron(id, sz);
  h += 0.5 * a * kron(sz, sz);
  h *= kPi;
  return h;
}

NVTransitions nv_transitions(const NVParams& p) {
  const ComplexMatrix h = nv_ground_hamiltonian_full(p);
  auto e = [&](std::size_t k) {
    const std::size_t i = kReducedSubspaceIndices[k];
    return h(i, i).real() / kTwoPi;
  };
  return {e(2) - e(0), e(3) - e(1), e(1) - e(0), e(3) - e(2)};
}

ComplexMatrix drive_coupling(DriveTarget target, std::size_t model_dim) {
  if (model_dim == 4) {
    const ComplexMatrix id = ComplexMatrix::identity(2);
    return target == DriveTarget::electron ? kron(pauli_x(), id) : kron(id, pauli_x());
  }
  if (model_dim == 9) {
    // Spin-1 matrix elements between adjacent levels are 1/sqrt(2).
    const ComplexMatrix id = ComplexMatrix::identity(3);
    const ComplexMatrix c = target == DriveTarget::electron ? kron(spin1_x(), id) : kron(id, spin1_x());
    return std::sqrt(2.0) * c;
  }
  throw DimensionError("drive_coupling: model dimension must be 4 or 9, got " + std::to_string(model_dim));
}

ComplexMatrix drive_term(const DriveSpec& d, std::size_t model_dim, double t) {
  d.validate();
  if (t < 0.0) throw ContractViolation("drive_term: time must be >= 0");
  return (kTwoPi * d.rabi * std::sin(kTwoPi * d.carrier * t + d.phase)) * drive_coupling(d.target, model_dim);
}

ComplexMatrix electron_sz(std::size_t model_dim) {
  if (model_dim == 4)
    return kron(ComplexMatrix::diagonal(std::vector<double>{0.0, -1.0}), ComplexMatrix::identity(2));
  if (model_dim == 9) return kron(spin1_z(), ComplexMatrix::identity(3));
  throw DimensionError("electron_sz: model dimension must be 4 or 9, got " + std::to_string(model_dim));
}

HamiltonianModel nv_lab_model(const NVParams& p, std::size_t model_dim, const std::vector<DriveSpec>& drives) {
  ComplexMatrix h0;
  if (model_dim == 4)
    h0 = nv_reduced_hamiltonian(p);
  else if (model_dim == 9)
    h0 = nv_ground_hamiltonian_full(p);
  else
    throw DimensionError("nv_lab_model: model dimension must be 4 or 9");
  HamiltonianModel model(std::move(h0), Frame::lab);
  for (const auto& d : drives) model.add_lab_drive(d, drive_coupling(d.target, model_dim));
  return model;
}

namespace {
constexpr double kResonanceSnapMhz = 1e-9;
}  // namespace

HamiltonianModel rotate_to_frame(const HamiltonianModel& lab, const std::vector<double>& frame_mhz) {
  const std::size_t n = lab.dim();
  if (frame_mhz.size() != n) throw DimensionError("rotate_to_frame: need one frame frequency per level");
  if (!lab.rotating_terms().empty())
    throw ContractViolation("rotate_to_frame: input model already carries rotating terms");

  const ComplexMatrix& h0 = lab.static_part();
  ComplexMatrix stat(n);
  const double offset = h0(0, 0).real() - kTwoPi * frame_mhz[0];
  for (std::size_t k = 0; k < n; ++k) stat(k, k) = h0(k, k).real() - kTwoPi * frame_mhz[k] - offset;

  // Phasors grouped by rotation rate (MHz); entries are in units of MHz and
  // get the 2*pi at evaluation time.
  std::map<double, std::vector<RotatingTerm::Entry>> by_rate;
  auto push = [&](double rate, std::size_t r, std::size_t c, cplx v) {
    // Resonant terms come out of differences of GHz-scale frequencies; snap
    // round-off to exact resonance so they land in the static part.
    if (std::abs(rate) < kResonanceSnapMhz) {
      stat(r, c) += kTwoPi * v;
      stat(c, r) += kTwoPi * std::conj(v);
      return;
    }
    auto& list = by_rate[rate];
    for (auto& e : list) {
      if (e.row == r && e.col == c) {
        e.value += v;
        return;
      }
    }
    list.push_back({r, c, v});
  };

  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r + 1; c < n; ++c)
      if (h0(r, c) != cplx(0.0)) push(frame_mhz[r] - frame_mhz[c], r, c, h0(r, c) / kTwoPi);

  // sin(x) = (e^{ix} - e^{-ix}) / 2i; in the frame the (r,c) element picks up
  // e^{i 2 pi (F_r - F_c) t}.
  const cplx inv_2i(0.0, -0.5);
  for (const auto& drive : lab.lab_drives()) {
    const DriveSpec& s = drive.spec;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = r + 1; c < n; ++c) {
        const cplx coupling = drive.coupling(r, c);
        if (coupling == cplx(0.0)) continue;
        const double nu = frame_mhz[r] - frame_mhz[c];
        const double rate_plus = s.carrier + nu;
        const double rate_minus = nu - s.carrier;
        if (std::abs(rate_plus) <= std::abs(rate_minus)) {
          push(rate_plus, r, c, s.rabi * coupling * std::polar(1.0, s.phase) * inv_2i);
        } else {
          push(rate_minus, r, c, -s.rabi * coupling * std::polar(1.0, -s.phase) * inv_2i);
        }
      }
  }

  HamiltonianModel out(std::move(stat), Frame::rotating);
  for (auto& [rate, entries] : by_rate) out.add_rotating_term({rate, std::move(entries)});
  for (const auto& w : lab.warnings()) out.add_warning(w);
  return out;
}

HamiltonianModel rotating_frame_model(const NVParams& p, const DriveSpec& mw, const DriveSpec& rf,
                                      const std::vector<DriveSpec>& extra) {
  if (mw.target != DriveTarget::electron) throw ConfigError("mw.target", "microwave drive must target the electron");
  if (rf.target != DriveTarget::nuclear) throw ConfigError("rf.target", "RF drive must target the nucleus");

  std::vector<DriveSpec> drives;
  if (mw.rabi > 0.0) drives.push_back(mw);
  if (rf.rabi > 0.0) drives.push_back(rf);
  drives.insert(drives.end(), extra.begin(), extra.end());

  HamiltonianModel lab = nv_lab_model(p, 4, drives);
  for (const auto& d : drives) {
    if (d.rabi > 0.1 * d.carrier) {
      lab.add_warning(std::string("rotating-wave approximation questionable: ") + to_string(d.target) +
                      " drive Rabi " + fmt_mhz(d.rabi) + " exceeds 0.1 x carrier " + fmt_mhz(d.carrier));
    }
  }
  const double f_mw = mw.carrier;
  const double f_rf = rf.carrier;
  return rotate_to_frame(lab, {0.0, f_rf, f_mw, f_mw + f_rf});
}

}  // namespace spinfreeze
