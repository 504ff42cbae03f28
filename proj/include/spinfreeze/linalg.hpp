#pragma once

// Dense complex linear algebra for the small matrices used by the spin
// models: 2x2, 4x4 and 9x9 operators and their Liouville-space lifts.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace spinfreeze {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Square complex matrix stored row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
  /// Row-major nested initializer; every row must have as many entries as rows.
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(const std::vector<cplx>& diag);
  static ComplexMatrix diagonal(const std::vector<double>& diag);
  /// |psi><psi|
  static ComplexMatrix projector(const std::vector<cplx>& psi);

  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return dim_ == 0; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

  const std::vector<cplx>& data() const noexcept { return data_; }
  std::vector<cplx>& data() noexcept { return data_; }

  ComplexMatrix adjoint() const;
  cplx trace() const;
  /// Largest entry modulus.
  double max_abs() const;
  /// max |M - M^dagger|
  double hermiticity_error() const;
  /// (M + M^dagger) / 2, in place.
  void symmetrize();

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= cplx(s); }
  friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= cplx(s); }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

/// Matrix-vector product.
std::vector<cplx> apply(const ComplexMatrix& m, const std::vector<cplx>& v);

/// max |a - b| entrywise; throws DimensionError on mismatch.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Relative Hermiticity test: max|M - M^dagger| <= tol * max(1, max|M|).
bool is_hermitian(const ComplexMatrix& m, double rel_tol = 1e-12);

/// Kronecker product; (a (x) b)(i*db + k, j*db + l) = a(i,j) * b(k,l).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Subsystem { first, second };

/// Partial trace of a bipartite operator on C^dim_first (x) C^dim_second.
ComplexMatrix partial_trace(const ComplexMatrix& rho, std::size_t dim_first,
                            std::size_t dim_second, Subsystem keep);

/// Two-qubit convenience overload; requires a 4x4 unit-trace Hermitian input.
ComplexMatrix partial_trace(const ComplexMatrix& rho, Subsystem keep);

/// Eigen-decomposition of a Hermitian matrix. Eigenvalues ascend; column k of
/// `vectors` is the eigenvector for `values[k]`.
struct Spectrum {
  std::vector<double> values;
  ComplexMatrix vectors;
};

/// Cyclic complex Jacobi. Throws ContractViolation for non-Hermitian input.
Spectrum hermitian_eig(const ComplexMatrix& m);

/// Ascending eigenvalues only.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

/// exp(scale * m). Hermitian inputs go through the spectral decomposition,
/// anything else through scaling-and-squaring of a truncated Taylor series.
ComplexMatrix matrix_exp(const ComplexMatrix& m, cplx scale);

enum class LogBase { natural, two };

/// Eigenvalues in [-1e-9, 0) are treated as zero; anything more negative, or a
/// trace off by more than 1e-9, is a ContractViolation.
double vn_entropy(const ComplexMatrix& rho, LogBase base = LogBase::natural);

/// Entropy of an already-known spectrum, same clipping rules as vn_entropy.
double entropy_of_spectrum(const std::vector<double>& eigenvalues, LogBase base);

// Spin-1/2 operators in the basis (|g>, |e>) = ((1,0), (0,1)).
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
/// |e><e| = (I - sigma_z) / 2
ComplexMatrix sigma_ee();

// Spin-1 operators in the basis (m = +1, 0, -1).
ComplexMatrix spin1_x();
ComplexMatrix spin1_y();
ComplexMatrix spin1_z();

}  // namespace spinfreeze
