#include "spinfreeze/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spinfreeze/error.hpp"

namespace spinfreeze {

namespace {

constexpr double kTraceTolerance = 1e-9;
constexpr double kNegativeEigenvalueClip = -1e-9;
constexpr double kZeroEigenvalue = 1e-12;

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(op) + ": dimension mismatch (" + std::to_string(a.dim()) +
                         " vs " + std::to_string(b.dim()) + ")");
  }
}

double one_norm(const ComplexMatrix& m) {
  double best = 0.0;
  for (std::size_t c = 0; c < m.dim(); ++c) {
    double col = 0.0;
    for (std::size_t r = 0; r < m.dim(); ++r) col += std::abs(m(r, c));
    best = std::max(best, col);
  }
  return best;
}

// Scaling and squaring: shrink the argument to one-norm <= 0.5, sum 20 Taylor
// terms (truncation error below 1e-20 relative), square back up.
ComplexMatrix taylor_exp(ComplexMatrix a) {
  const std::size_t n = a.dim();
  const double norm = one_norm(a);
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  a *= cplx(std::ldexp(1.0, -squarings));

  ComplexMatrix result = ComplexMatrix::identity(n);
  ComplexMatrix term = ComplexMatrix::identity(n);
  for (int k = 1; k <= 20; ++k) {
    term = term * a;
    term *= cplx(1.0 / k);
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : dim_(rows.size()), data_() {
  data_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw DimensionError("ComplexMatrix: rows must be square");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<cplx>& diag) {
  ComplexMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<double>& diag) {
  ComplexMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::projector(const std::vector<cplx>& psi) {
  ComplexMatrix m(psi.size());
  for (std::size_t r = 0; r < psi.size(); ++r)
    for (std::size_t c = 0; c < psi.size(); ++c) m(r, c) = psi[r] * std::conj(psi[c]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::hermiticity_error() const {
  double err = 0.0;
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = r; c < dim_; ++c)
      err = std::max(err, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return err;
}

void ComplexMatrix::symmetrize() {
  for (std::size_t r = 0; r < dim_; ++r) {
    (*this)(r, r) = cplx((*this)(r, r).real(), 0.0);
    for (std::size_t c = r + 1; c < dim_; ++c) {
      const cplx avg = 0.5 * ((*this)(r, c) + std::conj((*this)(c, r)));
      (*this)(r, c) = avg;
      (*this)(c, r) = std::conj(avg);
    }
  }
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_same_dim(*this, o, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_same_dim(*this, o, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "operator*");
  const std::size_t n = a.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx(0.0)) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

std::vector<cplx> apply(const ComplexMatrix& m, const std::vector<cplx>& v) {
  if (v.size() != m.dim()) throw DimensionError("apply: vector length does not match matrix");
  std::vector<cplx> out(m.dim());
  for (std::size_t r = 0; r < m.dim(); ++r) {
    cplx acc = 0.0;
    for (std::size_t c = 0; c < m.dim(); ++c) acc += m(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "max_abs_diff");
  double d = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

bool is_hermitian(const ComplexMatrix& m, double rel_tol) {
  return m.hermiticity_error() <= rel_tol * std::max(1.0, m.max_abs());
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t da = a.dim();
  const std::size_t db = b.dim();
  ComplexMatrix out(da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      const cplx aij = a(i, j);
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) out(i * db + k, j * db + l) = aij * b(k, l);
    }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, std::size_t dim_first,
                            std::size_t dim_second, Subsystem keep) {
  if (dim_first == 0 || dim_second == 0 || rho.dim() != dim_first * dim_second) {
    throw DimensionError("partial_trace: operator of dim " + std::to_string(rho.dim()) +
                         " is not " + std::to_string(dim_first) + "x" + std::to_string(dim_second));
  }
  if (keep == Subsystem::first) {
    ComplexMatrix out(dim_first);
    for (std::size_t i = 0; i < dim_first; ++i)
      for (std::size_t j = 0; j < dim_first; ++j) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < dim_second; ++k) acc += rho(i * dim_second + k, j * dim_second + k);
        out(i, j) = acc;
      }
    return out;
  }
  ComplexMatrix out(dim_second);
  for (std::size_t k = 0; k < dim_second; ++k)
    for (std::size_t l = 0; l < dim_second; ++l) {
      cplx acc = 0.0;
      for (std::size_t i = 0; i < dim_first; ++i) acc += rho(i * dim_second + k, i * dim_second + l);
      out(k, l) = acc;
    }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, Subsystem keep) {
  if (rho.dim() != 4) throw DimensionError("partial_trace: expected a 4x4 two-qubit operator");
  if (!is_hermitian(rho, 1e-9)) throw ContractViolation("partial_trace: input is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > kTraceTolerance)
    throw ContractViolation("partial_trace: input trace is not 1");
  return partial_trace(rho, 2, 2, keep);
}

Spectrum hermitian_eig(const ComplexMatrix& m) {
  if (!is_hermitian(m)) throw ContractViolation("hermitian_eig: input is not Hermitian");
  const std::size_t n = m.dim();
  ComplexMatrix a = m;
  a.symmetrize();
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(a.max_abs(), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-15 * scale) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag <= 1e-30 * scale) continue;
        // Phase out a_pq, then a real symmetric rotation zeroes it:
        // J = diag(1, e^{-i alpha}) * [[c, s], [-s, c]].
        const cplx phase = a(p, q) / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx jpp = c;
        const cplx jpq = s;
        const cplx jqp = -s * std::conj(phase);
        const cplx jqq = c * std::conj(phase);

        // A <- A J
        for (std::size_t r = 0; r < n; ++r) {
          const cplx arp = a(r, p);
          const cplx arq = a(r, q);
          a(r, p) = arp * jpp + arq * jqp;
          a(r, q) = arp * jpq + arq * jqq;
        }
        // A <- J^dagger A
        for (std::size_t col = 0; col < n; ++col) {
          const cplx apc = a(p, col);
          const cplx aqc = a(q, col);
          a(p, col) = std::conj(jpp) * apc + std::conj(jqp) * aqc;
          a(q, col) = std::conj(jpq) * apc + std::conj(jqq) * aqc;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        // V <- V J
        for (std::size_t r = 0; r < n; ++r) {
          const cplx vrp = v(r, p);
          const cplx vrq = v(r, q);
          v(r, p) = vrp * jpp + vrq * jqp;
          v(r, q) = vrp * jpq + vrq * jqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  Spectrum out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) { return hermitian_eig(m).values; }

ComplexMatrix matrix_exp(const ComplexMatrix& m, cplx scale) {
  const std::size_t n = m.dim();
  if (scale == cplx(0.0) || m.max_abs() == 0.0) return ComplexMatrix::identity(n);
  if (!is_hermitian(m)) return taylor_exp(m * scale);

  const Spectrum spec = hermitian_eig(m);
  ComplexMatrix out(n);
  std::vector<cplx> phases(n);
  for (std::size_t k = 0; k < n; ++k) phases[k] = std::exp(scale * spec.values[k]);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        acc += spec.vectors(r, k) * phases[k] * std::conj(spec.vectors(c, k));
      out(r, c) = acc;
    }
  return out;
}

double entropy_of_spectrum(const std::vector<double>& eigenvalues, LogBase base) {
  double total = 0.0;
  double s = 0.0;
  for (double lambda : eigenvalues) {
    if (lambda < kNegativeEigenvalueClip)
      throw ContractViolation("vn_entropy: eigenvalue " + std::to_string(lambda) + " below -1e-9");
    total += lambda;
    if (lambda > kZeroEigenvalue) s -= lambda * std::log(lambda);
  }
  if (std::abs(total - 1.0) > kTraceTolerance)
    throw ContractViolation("vn_entropy: trace " + std::to_string(total) + " is not 1");
  return base == LogBase::two ? s / std::log(2.0) : s;
}

double vn_entropy(const ComplexMatrix& rho, LogBase base) {
  if (std::abs(rho.trace() - 1.0) > kTraceTolerance)
    throw ContractViolation("vn_entropy: trace is not 1");
  return entropy_of_spectrum(hermitian_eigenvalues(rho), base);
}

ComplexMatrix pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix pauli_y() { return {{0.0, cplx(0.0, -1.0)}, {cplx(0.0, 1.0), 0.0}}; }
ComplexMatrix pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
ComplexMatrix sigma_ee() { return {{0.0, 0.0}, {0.0, 1.0}}; }

ComplexMatrix spin1_x() {
  const double r = 1.0 / std::sqrt(2.0);
  return {{0.0, r, 0.0}, {r, 0.0, r}, {0.0, r, 0.0}};
}

ComplexMatrix spin1_y() {
  const cplx r(0.0, 1.0 / std::sqrt(2.0));
  return {{0.0, -r, 0.0}, {r, 0.0, -r}, {0.0, r, 0.0}};
}

ComplexMatrix spin1_z() { return ComplexMatrix::diagonal(std::vector<double>{1.0, 0.0, -1.0}); }

}  // namespace spinfreeze
