#pragma once

// Shared fixtures for the unit tests: seeded random states and operators.

#include <cmath>
#include <random>

#include "spinfreeze/linalg.hpp"

namespace testutil {

using spinfreeze::ComplexMatrix;
using spinfreeze::cplx;

inline ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n);
  for (auto& z : m.data()) z = {g(rng), g(rng)};
  return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
  ComplexMatrix m = random_matrix(rng, n);
  return 0.5 * (m + m.adjoint());
}

/// G G^dagger / Tr, full rank with probability one.
inline ComplexMatrix random_density(std::mt19937_64& rng, std::size_t n) {
  ComplexMatrix g = random_matrix(rng, n);
  ComplexMatrix rho = g * g.adjoint();
  rho *= cplx(1.0 / rho.trace().real());
  rho.symmetrize();
  return rho;
}

inline ComplexMatrix random_unitary(std::mt19937_64& rng, std::size_t n) {
  return spinfreeze::matrix_exp(random_hermitian(rng, n), cplx(0.0, -1.0));
}

inline double frob(const ComplexMatrix& m) {
  double s = 0.0;
  for (const auto& z : m.data()) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace testutil
