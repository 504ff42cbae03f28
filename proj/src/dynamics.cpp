#include "spinfreeze/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "spinfreeze/error.hpp"

namespace spinfreeze {

namespace {

constexpr double kPositivityFloor = -1e-6;
constexpr double kTraceDriftLimit = 1e-9;

std::string at_time(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, " at t = %.6g us", t);
  return buf;
}

// Right-hand side for Hermitian rho:
//   M = G rho + (1/2) sum_k L_k rho L_k^dagger,  G = -iH - (1/2) sum_k L_k^dagger L_k,
//   drho/dt = M + M^dagger.
// Output is Hermitian by construction.
class MasterEquation {
 public:
  MasterEquation(std::size_t n, const std::vector<LindbladChannel>& channels) : n_(n), half_k_(n) {
    for (const auto& ch : channels) {
      if (ch.op.dim() != n) throw DimensionError("Lindblad channel '" + ch.label + "' has wrong dimension");
      for (const auto& z : ch.op.data())
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
          throw ContractViolation("Lindblad channel '" + ch.label + "' is not finite");
      ops_.push_back(ch.op);
      adj_.push_back(ch.op.adjoint());
      half_k_ += 0.5 * (adj_.back() * ch.op);
    }
    g_.resize(n * n);
    m_.resize(n * n);
    tmp_.resize(n * n);
  }

  std::size_t dim() const noexcept { return n_; }

  void rhs(const ComplexMatrix& h, const std::vector<cplx>& rho, std::vector<cplx>& out) {
    const std::size_t n = n_;
    const cplx minus_i(0.0, -1.0);
    for (std::size_t i = 0; i < n * n; ++i) g_[i] = minus_i * h.data()[i] - half_k_.data()[i];
    matmul(g_.data(), rho.data(), m_.data());
    for (std::size_t k = 0; k < ops_.size(); ++k) {
      matmul(ops_[k].data().data(), rho.data(), tmp_.data());
      // m += 0.5 * tmp * L^dagger
      const cplx* ld = adj_[k].data().data();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < n; ++l) {
          const cplx a = 0.5 * tmp_[i * n + l];
          if (a == cplx(0.0)) continue;
          for (std::size_t j = 0; j < n; ++j) m_[i * n + j] += a * ld[l * n + j];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
      out[i * n + i] = 2.0 * m_[i * n + i].real();
      for (std::size_t j = i + 1; j < n; ++j) {
        const cplx v = m_[i * n + j] + std::conj(m_[j * n + i]);
        out[i * n + j] = v;
        out[j * n + i] = std::conj(v);
      }
    }
  }

  /// Row-major Liouvillian acting on vec(rho)[i*n + j] = rho(i, j).
  ComplexMatrix liouvillian(const ComplexMatrix& h) const {
    const std::size_t n = n_;
    ComplexMatrix g(n);
    const cplx minus_i(0.0, -1.0);
    for (std::size_t i = 0; i < n * n; ++i) g.data()[i] = minus_i * h.data()[i] - half_k_.data()[i];
    ComplexMatrix sup(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          sup(i * n + j, k * n + j) += g(i, k);
          sup(i * n + j, i * n + k) += std::conj(g(j, k));
        }
    for (const auto& l : ops_)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
          if (l(i, k) == cplx(0.0)) continue;
          for (std::size_t j = 0; j < n; ++j)
            for (std::size_t q = 0; q < n; ++q) sup(i * n + j, k * n + q) += l(i, k) * std::conj(l(j, q));
        }
    return sup;
  }

 private:
  void matmul(const cplx* a, const cplx* b, cplx* c) const {
    const std::size_t n = n_;
    std::fill(c, c + n * n, cplx(0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const cplx aik = a[i * n + k];
        if (aik == cplx(0.0)) continue;
        for (std::size_t j = 0; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
      }
  }

  std::size_t n_;
  std::vector<ComplexMatrix> ops_;
  std::vector<ComplexMatrix> adj_;
  ComplexMatrix half_k_;
  std::vector<cplx> g_, m_, tmp_;
};

// Symmetrizes the state, checks trace and positivity, and records it when asked.
class Recorder {
 public:
  Recorder(TimeSeries& series, bool keep_states) : series_(series), keep_(keep_states) {}

  void check(ComplexMatrix& rho, double t, bool record) {
    rho.symmetrize();
    const double trace_err = std::abs(rho.trace().real() - 1.0);
    const double min_eig = hermitian_eigenvalues(rho).front();
    series_.worst_trace_error = std::max(series_.worst_trace_error, trace_err);
    series_.worst_min_eigenvalue = std::min(series_.worst_min_eigenvalue, min_eig);
    if (trace_err > kTraceDriftLimit)
      throw IntegrationFailure("trace drifted by " + std::to_string(trace_err) + at_time(t), t);
    if (min_eig < kPositivityFloor)
      throw IntegrationFailure("density matrix lost positivity (min eigenvalue " + std::to_string(min_eig) + ")" +
                                   at_time(t),
                               t);
    if (!record) return;
    series_.times.push_back(t);
    series_.populations.push_back(populations(rho));
    series_.trace_error.push_back(trace_err);
    series_.min_eigenvalue.push_back(min_eig);
    series_.hermiticity_error.push_back(rho.hermiticity_error());
    if (keep_) series_.states.push_back(rho);
  }

 private:
  TimeSeries& series_;
  bool keep_;
};

std::size_t step_count(const SimulationGrid& grid) {
  const double ratio = grid.t_end / grid.dt;
  const auto n = static_cast<std::size_t>(std::llround(ratio));
  if (n == 0 || std::abs(static_cast<double>(n) - ratio) > 1e-6 * std::max(1.0, ratio))
    throw ConfigError("grid.dt", "t_end must be an integer multiple of dt");
  return n;
}

void axpy(std::vector<cplx>& out, const std::vector<cplx>& y, double a, const std::vector<cplx>& x) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = y[i] + a * x[i];
}

TimeSeries run_rk4(ComplexMatrix rho, const HamiltonianModel& model, MasterEquation& eq, const SimulationGrid& grid) {
  TimeSeries series;
  Recorder rec(series, grid.keep_states);
  const std::size_t steps = step_count(grid);
  const std::size_t n2 = rho.data().size();
  const double dt = grid.dt;

  ComplexMatrix h0(model.dim()), hm(model.dim()), h1(model.dim());
  std::vector<cplx> k1(n2), k2(n2), k3(n2), k4(n2), stage(n2);

  rec.check(rho, 0.0, true);
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = static_cast<double>(s) * dt;
    model.evaluate_into(t, h0);
    model.evaluate_into(t + 0.5 * dt, hm);
    model.evaluate_into(t + dt, h1);
    auto& y = rho.data();
    eq.rhs(h0, y, k1);
    axpy(stage, y, 0.5 * dt, k1);
    eq.rhs(hm, stage, k2);
    axpy(stage, y, 0.5 * dt, k2);
    eq.rhs(hm, stage, k3);
    axpy(stage, y, dt, k3);
    eq.rhs(h1, stage, k4);
    for (std::size_t i = 0; i < n2; ++i) y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    const std::size_t done = s + 1;
    rec.check(rho, static_cast<double>(done) * dt, done % grid.record_stride == 0 || done == steps);
  }
  series.steps_taken = steps;
  return series;
}

TimeSeries run_expm(ComplexMatrix rho, const HamiltonianModel& model, MasterEquation& eq, const SimulationGrid& grid) {
  TimeSeries series;
  Recorder rec(series, grid.keep_states);
  const std::size_t steps = step_count(grid);
  const double dt = grid.dt;
  const std::size_t n = model.dim();

  ComplexMatrix propagator;
  if (!model.is_time_dependent()) propagator = matrix_exp(eq.liouvillian(model.static_part()), dt);

  rec.check(rho, 0.0, true);
  std::vector<cplx> next(n * n);
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = static_cast<double>(s) * dt;
    if (model.is_time_dependent()) propagator = matrix_exp(eq.liouvillian(model.evaluate(t + 0.5 * dt)), dt);
    next = spinfreeze::apply(propagator, rho.data());
    rho.data() = next;
    const std::size_t done = s + 1;
    rec.check(rho, static_cast<double>(done) * dt, done % grid.record_stride == 0 || done == steps);
  }
  series.steps_taken = steps;
  return series;
}

// Dormand-Prince 5(4) with steps clipped to land on every record time.
TimeSeries run_rk45(ComplexMatrix rho, const HamiltonianModel& model, MasterEquation& eq, const SimulationGrid& grid) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  TimeSeries series;
  Recorder rec(series, grid.keep_states);
  const std::size_t n2 = rho.data().size();
  const double interval = grid.dt * static_cast<double>(grid.record_stride);
  const auto records = static_cast<std::size_t>(std::ceil(grid.t_end / interval - 1e-9));

  ComplexMatrix h(model.dim());
  std::vector<cplx> k1(n2), k2(n2), k3(n2), k4(n2), k5(n2), k6(n2), k7(n2), y5(n2), stage(n2);
  auto rhs_at = [&](double t, const std::vector<cplx>& y, std::vector<cplx>& k) {
    model.evaluate_into(t, h);
    eq.rhs(h, y, k);
  };

  rec.check(rho, 0.0, true);
  double t = 0.0;
  double step = grid.dt;
  std::size_t taken = 0;
  auto& y = rho.data();
  rhs_at(t, y, k1);
  for (std::size_t r = 1; r <= records; ++r) {
    const double target = std::min(grid.t_end, static_cast<double>(r) * interval);
    while (t < target - 1e-14 * std::max(1.0, target)) {
      const bool clipped = t + step >= target;
      const double hstep = clipped ? target - t : step;
      for (std::size_t i = 0; i < n2; ++i) stage[i] = y[i] + hstep * a21 * k1[i];
      rhs_at(t + c2 * hstep, stage, k2);
      for (std::size_t i = 0; i < n2; ++i) stage[i] = y[i] + hstep * (a31 * k1[i] + a32 * k2[i]);
      rhs_at(t + c3 * hstep, stage, k3);
      for (std::size_t i = 0; i < n2; ++i) stage[i] = y[i] + hstep * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      rhs_at(t + c4 * hstep, stage, k4);
      for (std::size_t i = 0; i < n2; ++i)
        stage[i] = y[i] + hstep * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      rhs_at(t + c5 * hstep, stage, k5);
      for (std::size_t i = 0; i < n2; ++i)
        stage[i] = y[i] + hstep * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      rhs_at(t + hstep, stage, k6);
      for (std::size_t i = 0; i < n2; ++i)
        y5[i] = y[i] + hstep * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      rhs_at(t + hstep, y5, k7);

      double err = 0.0;
      for (std::size_t i = 0; i < n2; ++i) {
        const cplx e = hstep * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc = grid.atol + grid.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
        err = std::max(err, std::abs(e) / sc);
      }
      if (err <= 1.0) {
        t = clipped ? target : t + hstep;
        y = y5;
        k1 = k7;  // first-same-as-last
        ++taken;
        rec.check(rho, t, clipped);
        if (y != y5) rhs_at(t, y, k1);  // symmetrization touched the state
      }
      const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      const double proposal = hstep * factor;
      if (!clipped || err > 1.0) step = proposal;
      if (step < 1e-14 * std::max(1.0, grid.t_end))
        throw IntegrationFailure("adaptive step size underflow" + at_time(t), t);
    }
  }
  series.steps_taken = taken;
  return series;
}

}  // namespace

LindbladChannel electron_dephasing(double t2_us, std::size_t model_dim) {
  if (!(t2_us > 0.0) || !std::isfinite(t2_us)) throw ConfigError("dephasing.t2_us", "T2 must be positive and finite");
  return {std::sqrt(1.0 / t2_us) * electron_sz(model_dim), "electron_dephasing"};
}

const char* to_string(Method m) {
  switch (m) {
    case Method::rk4_fixed:
      return "rk4_fixed";
    case Method::rk45_adaptive:
      return "rk45_adaptive";
    case Method::expm_piecewise_oracle:
      return "expm_piecewise_oracle";
  }
  return "?";
}

void SimulationGrid::validate(const HamiltonianModel& model) const {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("grid.t_end", "must be positive");
  if (!(dt > 0.0) || dt > t_end) throw ConfigError("grid.dt", "must satisfy 0 < dt <= t_end");
  if (record_stride == 0) throw ConfigError("grid.record_stride", "must be positive");
  if (method != Method::rk45_adaptive && model.frame() == Frame::lab && model.max_frequency() > 0.0 &&
      dt > 1.0 / (20.0 * model.max_frequency())) {
    throw ConfigError("grid.dt", "lab-frame step must resolve the fastest carrier (dt <= 1/(20 f_max))");
  }
}

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& h,
                           const std::vector<LindbladChannel>& channels) {
  if (rho.dim() != h.dim()) throw DimensionError("lindblad_rhs: rho and H dimensions differ");
  const cplx minus_i(0.0, -1.0);
  ComplexMatrix out = minus_i * (h * rho - rho * h);
  for (const auto& ch : channels) {
    if (ch.op.dim() != rho.dim()) throw DimensionError("lindblad_rhs: channel '" + ch.label + "' has wrong dimension");
    const ComplexMatrix ld = ch.op.adjoint();
    const ComplexMatrix ldl = ld * ch.op;
    out += ch.op * rho * ld;
    out -= 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

void validate_density_matrix(const ComplexMatrix& rho) {
  if (rho.empty()) throw DimensionError("density matrix is empty");
  if (!is_hermitian(rho, 1e-9)) throw ContractViolation("density matrix is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > 1e-9) throw ContractViolation("density matrix trace is not 1");
  if (hermitian_eigenvalues(rho).front() < -1e-9) throw ContractViolation("density matrix is not positive");
}

TimeSeries propagate(const ComplexMatrix& rho0, const HamiltonianModel& model,
                     const std::vector<LindbladChannel>& channels, const SimulationGrid& grid) {
  if (rho0.dim() != model.dim()) throw DimensionError("propagate: initial state and model dimensions differ");
  validate_density_matrix(rho0);
  grid.validate(model);
  MasterEquation eq(model.dim(), channels);
  switch (grid.method) {
    case Method::rk4_fixed:
      return run_rk4(rho0, model, eq, grid);
    case Method::rk45_adaptive:
      return run_rk45(rho0, model, eq, grid);
    case Method::expm_piecewise_oracle:
      return run_expm(rho0, model, eq, grid);
  }
  throw ConfigError("grid.method", "unknown integration method");
}

std::vector<double> populations(const ComplexMatrix& rho) {
  std::vector<double> p(rho.dim());
  for (std::size_t i = 0; i < rho.dim(); ++i) p[i] = rho(i, i).real();
  return p;
}

std::array<double, 2> nuclear_marginal(const ComplexMatrix& rho) {
  if (rho.dim() == 4) {
    const ComplexMatrix nuc = partial_trace(rho, 2, 2, Subsystem::second);
    return {nuc(0, 0).real(), nuc(1, 1).real()};
  }
  if (rho.dim() == 9) {
    const ComplexMatrix nuc = partial_trace(rho, 3, 3, Subsystem::second);
    return {nuc(0, 0).real(), nuc(1, 1).real()};
  }
  throw DimensionError("nuclear_marginal: expected a 4- or 9-level state");
}

std::array<double, 4> subspace_populations(const std::vector<double>& pops) {
  if (pops.size() == 4) return {pops[0], pops[1], pops[2], pops[3]};
  if (pops.size() == 9) {
    std::array<double, 4> out{};
    for (std::size_t k = 0; k < 4; ++k) out[k] = pops[kReducedSubspaceIndices[k]];
    return out;
  }
  throw DimensionError("subspace_populations: expected 4 or 9 populations");
}

}  // namespace spinfreeze
